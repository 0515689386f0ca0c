"""Batch command-line interface.

Subcommands: ``fit`` (cluster a CSV, write labels + model), ``predict``
(out-of-sample labels from a saved model), ``gen`` (synthetic benchmarks),
``eval`` (score predictions against ground truth), ``plot`` (scatter
figure of a labeled point set).

Exit codes: 0 success, 1 data or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .auto_threshold import DEFAULT_ALPHA, DEFAULT_F_MIN, DEFAULT_GRID_STEP
from .core import DEFAULT_EPS, RESEMBLANCE_KINDS, ResemblanceConfig
from .datasets import (
    GENERATOR_FAMILIES,
    GeneratorSpec,
    generate,
    read_labels_csv,
    read_points_csv,
    write_labels_csv,
    write_points_csv,
)
from .evaluation import adjusted_rand_index, summarize
from .family_graph import OUTLIER_MODES, OutlierPolicy
from .model_io import load_model, save_model
from .neighbors import KNN_BACKENDS
from .out_of_sample import predict
from .pipeline import DEFAULT_K, fit
from .plotting import scatter_labels


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {text}")
    return value


def _open_unit_interval(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _count_at_least_two(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"must be at least 2, got {text}")
    return value


def _positive_real(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _non_negative_real(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _at_least_one(text: str) -> float:
    value = float(text)
    if not value >= 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="famcluster",
        description="Family-resemblance clustering over thresholded kNN resemblance graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="cluster a points CSV and save labels + model")
    p_fit.add_argument("--input", required=True, help="points CSV")
    p_fit.add_argument(
        "--resemblance", required=True, choices=RESEMBLANCE_KINDS,
        help="resemblance function",
    )
    p_fit.add_argument("--eps", type=_positive_real, default=DEFAULT_EPS,
                       help="log-resemblance stability constant (default %(default)s)")
    p_fit.add_argument("--gamma", type=_positive_real, default=None,
                       help="rbf/sigmoid scale (default 1/d)")
    p_fit.add_argument("--coef0", type=float, default=0.0,
                       help="sigmoid offset (default %(default)s)")
    p_fit.add_argument("--k", type=_positive_int, default=DEFAULT_K,
                       help="neighbors per point (default %(default)s)")
    mode = p_fit.add_mutually_exclusive_group(required=True)
    mode.add_argument("--threshold", type=_unit_interval, default=None,
                      help="fixed resemblance threshold in [0, 1]")
    mode.add_argument("--auto-threshold", action="store_true",
                      help="select the threshold by grid search")
    p_fit.add_argument("--grid-step", type=_open_unit_interval, default=None,
                       help=f"grid step for --auto-threshold (default {DEFAULT_GRID_STEP})")
    p_fit.add_argument("--outliers", choices=OUTLIER_MODES, default="ratio",
                       help="tiny-cluster marking rule (default %(default)s)")
    p_fit.add_argument("--outlier-ratio", type=_open_unit_interval, default=0.05,
                       help="size cutoff as a fraction of the largest cluster (default %(default)s)")
    p_fit.add_argument("--outlier-std", type=_positive_real, default=2.0,
                       help="std multiplier for statistical marking (default %(default)s)")
    p_fit.add_argument("--f-min", type=_open_unit_interval, default=DEFAULT_F_MIN,
                       help="minimum acceptable cluster fraction in the size score (default %(default)s)")
    p_fit.add_argument("--alpha", type=_at_least_one, default=DEFAULT_ALPHA,
                       help="imbalance penalty strength in the size score (default %(default)s)")
    p_fit.add_argument("--knn-backend", choices=KNN_BACKENDS, default="kdtree",
                       help="neighbor search backend (default %(default)s)")
    p_fit.add_argument("--labels-out", required=True, help="labels CSV to write")
    p_fit.add_argument("--model-out", required=True, help="model file to write")
    p_fit.add_argument("--diagnostics-out", default=None,
                       help="grid-search diagnostics CSV (requires --auto-threshold)")
    p_fit.set_defaults(handler=_cmd_fit)

    p_predict = sub.add_parser("predict", help="label a points CSV with a saved model")
    p_predict.add_argument("--model", required=True, help="model file from fit")
    p_predict.add_argument("--input", required=True, help="points CSV")
    p_predict.add_argument("--output", required=True, help="labels CSV to write")
    p_predict.set_defaults(handler=_cmd_predict)

    p_gen = sub.add_parser("gen", help="generate a synthetic benchmark CSV")
    p_gen.add_argument("--family", required=True, choices=GENERATOR_FAMILIES)
    p_gen.add_argument("--n", required=True, type=_count_at_least_two, help="number of points")
    p_gen.add_argument("--noise", type=_non_negative_real, default=0.0,
                       help="coordinatewise Gaussian noise sigma (default %(default)s)")
    p_gen.add_argument("--seed", type=int, default=0, help="stream seed (default %(default)s)")
    p_gen.add_argument("--out", required=True, help="points+label CSV to write")
    p_gen.set_defaults(handler=_cmd_gen)

    p_eval = sub.add_parser("eval", help="score predicted labels against ground truth")
    p_eval.add_argument("--pred", required=True, help="predicted labels CSV")
    p_eval.add_argument("--truth", required=True, help="ground-truth labels CSV")
    p_eval.set_defaults(handler=_cmd_eval)

    p_plot = sub.add_parser("plot", help="scatter a labeled point set to an SVG file")
    p_plot.add_argument("--input", required=True, help="points CSV")
    p_plot.add_argument("--labels", required=True, help="labels CSV")
    p_plot.add_argument("--out", required=True, help="figure file (SVG)")
    p_plot.set_defaults(handler=_cmd_plot)

    return parser


def _cmd_fit(args, parser) -> int:
    if not args.auto_threshold:
        if args.grid_step is not None:
            parser.error("--grid-step requires --auto-threshold")
        if args.diagnostics_out is not None:
            parser.error("--diagnostics-out requires --auto-threshold")

    data = read_points_csv(args.input)
    config = ResemblanceConfig(args.resemblance, eps=args.eps, gamma=args.gamma,
                               coef0=args.coef0)
    policy = OutlierPolicy(args.outliers, ratio=args.outlier_ratio, num_std=args.outlier_std)
    result = fit(
        data,
        config,
        k=args.k,
        tau=None if args.auto_threshold else args.threshold,
        grid_step=DEFAULT_GRID_STEP if args.grid_step is None else args.grid_step,
        outliers=policy,
        f_min=args.f_min,
        alpha=args.alpha,
        backend=args.knn_backend,
    )
    write_labels_csv(args.labels_out, result.labels)
    save_model(result.model, args.model_out)
    if args.diagnostics_out is not None:
        result.diagnostics.write_csv(args.diagnostics_out)

    stats = summarize(result.labels)
    print(f"tau {result.tau!r}")
    print(f"clusters {stats.num_clusters}")
    print(f"outliers {stats.outliers}")
    return 0


def _cmd_predict(args, parser) -> int:
    model = load_model(args.model)
    data = read_points_csv(args.input)
    if data.d != model.train.d:
        raise ValueError(
            f"input dimension {data.d} does not match model dimension {model.train.d}"
        )
    labels = predict(model, data)
    write_labels_csv(args.output, labels)
    return 0


def _cmd_gen(args, parser) -> int:
    spec = GeneratorSpec(family=args.family, n=args.n, noise=args.noise, seed=args.seed)
    data, truth = generate(spec)
    write_points_csv(args.out, data, truth)
    return 0


def _cmd_eval(args, parser) -> int:
    pred = read_labels_csv(args.pred)
    truth = read_labels_csv(args.truth)
    if len(pred) != len(truth):
        raise ValueError(
            f"label lengths differ: {len(pred)} predicted vs {len(truth)} truth"
        )
    stats = summarize(pred)
    print(f"ari {adjusted_rand_index(pred, truth)!r}")
    print(f"clusters {stats.num_clusters}")
    print(f"sizes {','.join(str(s) for s in stats.sizes)}")
    print(f"outliers {stats.outliers}")
    return 0


def _cmd_plot(args, parser) -> int:
    data = read_points_csv(args.input)
    labels = read_labels_csv(args.labels)
    if len(labels) != data.n:
        raise ValueError(f"labels length {len(labels)} does not match {data.n} points")
    scatter_labels(data, labels, args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # data/runtime problems -> exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
