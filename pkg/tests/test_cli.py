import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from famcluster import (
    Dataset,
    OutlierPolicy,
    ResemblanceConfig,
    fit,
    load_model,
    predict,
    read_labels_csv,
    save_model,
    write_points_csv,
)
from famcluster.cli import main


def run(*argv):
    return main(list(argv))


def usage_error(*argv):
    with pytest.raises(SystemExit) as excinfo:
        run(*argv)
    assert excinfo.value.code == 2


# -------------------------------------------------- gen

def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("gen", "--family", "two_moons", "--n", "100", "--seed", "7", "--out", str(a)) == 0
    assert run("gen", "--family", "two_moons", "--n", "100", "--seed", "7", "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_blobs_have_three_truth_labels(tmp_path):
    out = tmp_path / "blobs.csv"
    assert run("gen", "--family", "gaussian_blobs", "--n", "60", "--out", str(out)) == 0
    labels = read_labels_csv(out)
    assert sorted(np.unique(labels.values).tolist()) == [0, 1, 2]


def test_gen_rejects_zero_points(tmp_path):
    usage_error("gen", "--family", "two_spirals", "--n", "0", "--out", str(tmp_path / "x.csv"))


def test_gen_rejects_unknown_family(tmp_path):
    usage_error("gen", "--family", "hexagons", "--n", "10", "--out", str(tmp_path / "x.csv"))


# -------------------------------------------------- fit

def _gen(tmp_path, family="two_spirals", n=240, noise=0.01, seed=3):
    path = tmp_path / f"{family}.csv"
    assert run("gen", "--family", family, "--n", str(n), "--noise", str(noise),
               "--seed", str(seed), "--out", str(path)) == 0
    return path


def _fit(tmp_path, data_path, *extra):
    labels = tmp_path / "labels.csv"
    model = tmp_path / "model.json"
    code = run("fit", "--input", str(data_path), "--resemblance", "log",
               "--k", "10", "--labels-out", str(labels), "--model-out", str(model),
               *extra)
    return code, labels, model


def test_fit_auto_threshold_two_spirals(tmp_path):
    data = _gen(tmp_path)
    code, labels_path, model_path = _fit(tmp_path, data, "--auto-threshold")
    assert code == 0
    labels = read_labels_csv(labels_path)
    assert np.unique(labels.values[labels.values >= 0]).size == 2
    assert model_path.exists()


def test_fit_rejects_out_of_range_threshold(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=40)
    usage_error("fit", "--input", str(data), "--resemblance", "log",
                "--threshold", "1.01", "--labels-out", "l.csv", "--model-out", "m.json")


def test_fit_requires_threshold_choice(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=40)
    usage_error("fit", "--input", str(data), "--resemblance", "log",
                "--labels-out", "l.csv", "--model-out", "m.json")


def test_fit_threshold_zero_on_connected_pattern(tmp_path):
    rng = np.random.default_rng(1)
    path = tmp_path / "blob.csv"
    write_points_csv(path, Dataset(rng.normal(size=(50, 2))))
    code, labels_path, _ = _fit(tmp_path, path, "--threshold", "0.0")
    assert code == 0
    labels = read_labels_csv(labels_path)
    assert np.unique(labels.values).tolist() == [0]


def test_fit_grid_flags_require_auto(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=40)
    usage_error("fit", "--input", str(data), "--resemblance", "log",
                "--threshold", "0.5", "--grid-step", "0.1",
                "--labels-out", "l.csv", "--model-out", "m.json")
    usage_error("fit", "--input", str(data), "--resemblance", "log",
                "--threshold", "0.5", "--diagnostics-out", "d.csv",
                "--labels-out", "l.csv", "--model-out", "m.json")


def test_fit_writes_diagnostics(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=120, noise=0.04)
    diag = tmp_path / "diag.csv"
    code, _, _ = _fit(tmp_path, data, "--auto-threshold", "--grid-step", "0.02",
                      "--diagnostics-out", str(diag))
    assert code == 0
    lines = diag.read_text().strip().splitlines()
    assert lines[0] == "tau,num_clusters,s1,s2,total"
    assert len(lines) == 52  # floor(1/0.02) + 1 candidates


def test_fit_missing_input_is_data_error(tmp_path, capsys):
    code, _, _ = _fit(tmp_path, tmp_path / "absent.csv", "--threshold", "0.5")
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_fit_outputs_are_deterministic(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=120, noise=0.04)
    outputs = []
    for tag in ("one", "two"):
        labels = tmp_path / f"labels_{tag}.csv"
        model = tmp_path / f"model_{tag}.json"
        diag = tmp_path / f"diag_{tag}.csv"
        assert run("fit", "--input", str(data), "--resemblance", "log",
                   "--auto-threshold", "--diagnostics-out", str(diag),
                   "--labels-out", str(labels), "--model-out", str(model)) == 0
        outputs.append((labels.read_bytes(), model.read_bytes(), diag.read_bytes()))
    assert outputs[0] == outputs[1]


# -------------------------------------------------- predict

def test_predict_roundtrip_on_training_csv(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=160, noise=0.04)
    code, labels_path, model_path = _fit(tmp_path, data, "--auto-threshold")
    assert code == 0
    out = tmp_path / "pred.csv"
    assert run("predict", "--model", str(model_path), "--input", str(data),
               "--output", str(out)) == 0
    fit_labels = read_labels_csv(labels_path)
    pred_labels = read_labels_csv(out)
    keep = fit_labels.values >= 0
    assert np.array_equal(pred_labels.values[keep], fit_labels.values[keep])


def test_predict_far_point_is_outlier(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=80, noise=0.02)
    code, _, model_path = _fit(tmp_path, data, "--threshold", "0.5")
    assert code == 0
    far = tmp_path / "far.csv"
    write_points_csv(far, Dataset(np.array([[500.0, 500.0]])))
    out = tmp_path / "pred.csv"
    assert run("predict", "--model", str(model_path), "--input", str(far),
               "--output", str(out)) == 0
    assert read_labels_csv(out).values.tolist() == [-1]


def test_predict_corrupted_model_exits_one(tmp_path, capsys):
    bad = tmp_path / "model.json"
    bad.write_text('{"format": "famcluster-model", "version": 1, ')
    out = tmp_path / "pred.csv"
    data = _gen(tmp_path, family="two_moons", n=40)
    assert run("predict", "--model", str(bad), "--input", str(data),
               "--output", str(out)) == 1
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_predict_dimension_mismatch_exits_one(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=60)
    code, _, model_path = _fit(tmp_path, data, "--threshold", "0.5")
    assert code == 0
    wide = tmp_path / "wide.csv"
    write_points_csv(wide, Dataset(np.zeros((3, 3))))
    assert run("predict", "--model", str(model_path), "--input", str(wide),
               "--output", str(tmp_path / "pred.csv")) == 1


# -------------------------------------------------- eval

def test_eval_identical_files(tmp_path, capsys):
    data = _gen(tmp_path, family="two_circles", n=60)
    assert run("eval", "--pred", str(data), "--truth", str(data)) == 0
    out = capsys.readouterr().out
    assert "ari 1.0" in out
    assert "clusters 2" in out


def test_eval_known_four_point_example(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text("label\n0\n0\n1\n1\n")
    b.write_text("label\n0\n0\n0\n1\n")
    assert run("eval", "--pred", str(a), "--truth", str(b)) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert float(first.split()[1]) == pytest.approx(0.0, abs=1e-12)


def test_eval_length_mismatch_exits_one(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    a.write_text("label\n0\n1\n")
    b.write_text("label\n0\n1\n2\n")
    assert run("eval", "--pred", str(a), "--truth", str(b)) == 1


# -------------------------------------------------- plot

def test_plot_writes_svg_marker_per_point(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=60, noise=0.03)
    code, labels_path, _ = _fit(tmp_path, data, "--auto-threshold")
    assert code == 0
    out = tmp_path / "fig.svg"
    assert run("plot", "--input", str(data), "--labels", str(labels_path),
               "--out", str(out)) == 0
    text = out.read_text()
    ET.fromstring(text)  # well-formed XML
    assert text.count("<use") >= 60


def test_plot_is_deterministic(tmp_path):
    data = _gen(tmp_path, family="two_circles", n=40)
    code, labels_path, _ = _fit(tmp_path, data, "--threshold", "0.5")
    assert code == 0
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for out in (a, b):
        assert run("plot", "--input", str(data), "--labels", str(labels_path),
                   "--out", str(out)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_plot_length_mismatch_exits_one(tmp_path):
    data = _gen(tmp_path, family="two_moons", n=40)
    labels = tmp_path / "short.csv"
    labels.write_text("label\n0\n1\n")
    assert run("plot", "--input", str(data), "--labels", str(labels),
               "--out", str(tmp_path / "f.svg")) == 1


def test_plot_empty_dataset_exits_one(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    labels = tmp_path / "labels.csv"
    labels.write_text("label\n")
    assert run("plot", "--input", str(empty), "--labels", str(labels),
               "--out", str(tmp_path / "f.svg")) == 1


# -------------------------------------------------- model persistence

def test_model_save_load_roundtrip_predictions(tmp_path):
    rng = np.random.default_rng(50)
    data = Dataset(rng.normal(size=(70, 2)))
    result = fit(data, ResemblanceConfig("rbf"), k=6, tau=0.6,
                 outliers=OutlierPolicy("ratio"))
    path = tmp_path / "model.json"
    save_model(result.model, path)
    loaded = load_model(path)
    queries = rng.normal(scale=2.0, size=(150, 2))
    a = predict(result.model, queries)
    b = predict(loaded, queries)
    assert np.array_equal(a.values, b.values)
    # the document embeds training data at full precision
    assert np.array_equal(loaded.train.points, data.points)
    assert loaded.bounds == result.model.bounds
    assert loaded.tau == result.model.tau


def test_model_file_is_versioned_json(tmp_path):
    rng = np.random.default_rng(51)
    data = Dataset(rng.normal(size=(10, 2)))
    result = fit(data, ResemblanceConfig("log"), k=2, tau=0.5)
    path = tmp_path / "model.json"
    save_model(result.model, path)
    document = json.loads(path.read_text())
    assert document["format"] == "famcluster-model"
    assert document["version"] == 1
    assert document["resemblance"]["kind"] == "log"


def test_load_model_rejects_wrong_format(tmp_path):
    from famcluster import ModelFormatError

    path = tmp_path / "model.json"
    path.write_text('{"format": "something-else", "version": 1}')
    with pytest.raises(ModelFormatError):
        load_model(path)
    path.write_text('{"format": "famcluster-model", "version": 99}')
    with pytest.raises(ModelFormatError):
        load_model(path)
