"""Synthetic benchmark generators and CSV interchange.

Generation is driven by an in-repo SplitMix64 stream so the same spec
yields bit-identical datasets on every platform, independent of numpy's
random module.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import Dataset, Labels

GENERATOR_FAMILIES = ("two_spirals", "two_circles", "two_moons", "gaussian_blobs")

def _rotated_cov(theta: float, var_major: float, var_minor: float) -> tuple:
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    cov = rot @ np.diag([var_major, var_minor]) @ rot.T
    return tuple(tuple(row) for row in cov)


#: Default three-Gaussian benchmark: one spherical blob, one rotated
#: anisotropic blob, one axis-aligned elongated blob; each elongation
#: runs roughly across, not along, the directions to its neighbors.
DEFAULT_BLOB_MEANS = ((0.0, 0.0), (5.0, 0.0), (2.5, 4.0))
DEFAULT_BLOB_COVS = (
    ((1.0, 0.0), (0.0, 1.0)),
    _rotated_cov(np.pi / 3.0, 1.5, 0.2),
    ((2.0, 0.0), (0.0, 0.3)),
)

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


class SplitMix64:
    """Counter-based SplitMix64 stream (Steele, Lea & Flood 2014).

    The i-th raw output is mix64(seed + (i+1) * 0x9E3779B97F4A7C15) with
    the standard xor-shift/multiply finalizer, giving identical streams on
    every platform. Uniform doubles take the top 53 bits; normals come
    from the Box-Muller transform.
    """

    def __init__(self, seed: int):
        self._seed = np.uint64(int(seed) & _MASK64)
        self._position = 0

    def _raw(self, count: int) -> np.ndarray:
        start = self._position + 1
        self._position += count
        counter = np.arange(start, start + count, dtype=np.uint64)
        z = self._seed + counter * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))

    def uniform(self, count: int) -> np.ndarray:
        """count doubles uniform on [0, 1)."""
        return (self._raw(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, count: int) -> np.ndarray:
        """count standard normal doubles via Box-Muller."""
        pairs = (count + 1) // 2
        # u1 shifted into (0, 1] so log never sees zero
        u1 = ((self._raw(pairs) >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
        u2 = self.uniform(pairs)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs, dtype=np.float64)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]


@dataclass(frozen=True)
class GeneratorSpec:
    """Which benchmark family to draw, how many points, noise and seed."""

    family: str
    n: int
    noise: float = 0.0
    seed: int = 0
    means: tuple = DEFAULT_BLOB_MEANS
    covs: tuple = DEFAULT_BLOB_COVS

    def __post_init__(self):
        if self.family not in GENERATOR_FAMILIES:
            raise ValueError(
                f"unknown family {self.family!r}; expected one of {GENERATOR_FAMILIES}"
            )
        if self.n < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if not (np.isfinite(self.noise) and self.noise >= 0):
            raise ValueError(f"noise must be a finite non-negative real, got {self.noise}")
        if self.family == "gaussian_blobs":
            means = np.asarray(self.means, dtype=np.float64)
            if means.ndim != 2 or len(self.covs) != means.shape[0]:
                raise ValueError("means must be 2-D with one covariance per mean")
            for cov in self.covs:
                _psd_factor(np.asarray(cov, dtype=np.float64), means.shape[1])


def _psd_factor(cov: np.ndarray, d: int) -> np.ndarray:
    """Factor L with L L^T = cov; accepts PSD matrices including rank-deficient."""
    if cov.shape != (d, d):
        raise ValueError(f"covariance must be {d} x {d}, got {cov.shape}")
    if not np.allclose(cov, cov.T, atol=1e-12):
        raise ValueError("covariance must be symmetric")
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals.min() < -1e-10:
        raise ValueError("covariance must be positive semi-definite")
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def _branch_sizes(n: int, branches: int) -> list[int]:
    base, extra = divmod(n, branches)
    return [base + (1 if i < extra else 0) for i in range(branches)]


def generate(spec: GeneratorSpec) -> tuple[Dataset, Labels]:
    """Draw a benchmark dataset plus ground-truth branch labels.

    The parametric families (spirals, circles, moons) place points on an
    even parameter grid along each branch, the usual construction for
    these benchmarks; randomness enters through the coordinatewise
    Gaussian noise (sigma = spec.noise) added to the assembled point set.
    Gaussian blobs are sampled from their configured covariances. Output
    is a deterministic function of the GeneratorSpec fields.
    """
    rng = SplitMix64(spec.seed)
    parts: list[np.ndarray] = []
    labels: list[np.ndarray] = []

    if spec.family == "two_spirals":
        # r(t) = t / 4pi over t in [pi, 4pi]: arms start at radius 0.25,
        # so they never meet at the origin; second arm is the negation
        for branch, size in enumerate(_branch_sizes(spec.n, 2)):
            t = np.linspace(np.pi, 4.0 * np.pi, size)
            radius = t / (4.0 * np.pi)
            arm = np.column_stack((radius * np.cos(t), radius * np.sin(t)))
            parts.append(arm if branch == 0 else -arm)
            labels.append(np.full(size, branch, dtype=np.int64))
    elif spec.family == "two_circles":
        for branch, (size, radius) in enumerate(zip(_branch_sizes(spec.n, 2), (1.0, 0.5))):
            theta = np.linspace(0.0, 2.0 * np.pi, size, endpoint=False)
            parts.append(np.column_stack((radius * np.cos(theta), radius * np.sin(theta))))
            labels.append(np.full(size, branch, dtype=np.int64))
    elif spec.family == "two_moons":
        sizes = _branch_sizes(spec.n, 2)
        t = np.linspace(0.0, np.pi, sizes[0])
        parts.append(np.column_stack((np.cos(t), np.sin(t))))
        labels.append(np.zeros(sizes[0], dtype=np.int64))
        t = np.linspace(0.0, np.pi, sizes[1])
        parts.append(np.column_stack((1.0 - np.cos(t), 0.5 - np.sin(t))))
        labels.append(np.ones(sizes[1], dtype=np.int64))
    else:
        means = np.asarray(spec.means, dtype=np.float64)
        d = means.shape[1]
        for branch, size in enumerate(_branch_sizes(spec.n, means.shape[0])):
            factor = _psd_factor(np.asarray(spec.covs[branch], dtype=np.float64), d)
            draws = rng.normal(size * d).reshape(size, d)
            parts.append(means[branch] + draws @ factor.T)
            labels.append(np.full(size, branch, dtype=np.int64))

    points = np.concatenate(parts, axis=0)
    if spec.noise > 0:
        points = points + spec.noise * rng.normal(points.size).reshape(points.shape)
    return Dataset(points), Labels(np.concatenate(labels))


# ---------------------------------------------------------------- CSV IO
#
# Interchange format: comma-separated, one point per row, an optional
# trailing integer "label" column, and an optional single header row
# (detected as a row with any non-numeric cell). Writers always emit a
# header and repr-format floats, so write -> read round-trips exactly.

LABEL_COLUMN = "label"


class CsvFormatError(ValueError):
    """Malformed CSV input; the message names the offending row."""


def _parse_rows(path) -> tuple[list[str] | None, list[list[float]], int]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        rows = [row for row in csv.reader(handle)]
    rows = [row for row in rows if row]
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")

    header = None
    start = 0
    try:
        [float(cell) for cell in rows[0]]
    except ValueError:
        header = [cell.strip() for cell in rows[0]]
        start = 1

    width = None
    data: list[list[float]] = []
    for offset, row in enumerate(rows[start:], start=start + 1):
        if width is None:
            width = len(row)
            if header is not None and len(header) != width:
                raise CsvFormatError(
                    f"{path}: row {offset}: expected {len(header)} cells, got {width}"
                )
        elif len(row) != width:
            raise CsvFormatError(
                f"{path}: row {offset}: expected {width} cells, got {len(row)}"
            )
        try:
            data.append([float(cell) for cell in row])
        except ValueError as exc:
            raise CsvFormatError(f"{path}: row {offset}: {exc}") from None
    if not data:
        raise CsvFormatError(f"{path}: no data rows")
    return header, data, width


def _has_label_column(header: list[str] | None) -> bool:
    return header is not None and header and header[-1] == LABEL_COLUMN


def read_points_csv(path) -> Dataset:
    """Read a points CSV; a header-marked trailing label column is ignored."""
    header, data, width = _parse_rows(path)
    matrix = np.asarray(data, dtype=np.float64)
    if _has_label_column(header):
        if width < 2:
            raise CsvFormatError(f"{path}: label column present but no feature columns")
        matrix = matrix[:, :-1]
    return Dataset(matrix)


def read_labels_csv(path) -> Labels:
    """Read labels: the header-marked label column, or a lone unlabeled column."""
    header, data, width = _parse_rows(path)
    matrix = np.asarray(data, dtype=np.float64)
    if _has_label_column(header):
        column = matrix[:, -1]
    elif width == 1:
        column = matrix[:, 0]
    else:
        raise CsvFormatError(
            f"{path}: expected a '{LABEL_COLUMN}' header column or a single column of labels"
        )
    rounded = np.rint(column)
    if not np.array_equal(rounded, column):
        raise CsvFormatError(f"{path}: labels must be integers")
    return Labels(rounded.astype(np.int64))


def write_points_csv(path, data: Dataset, labels: Labels | None = None) -> None:
    """Write points (and optionally a trailing label column) at full precision."""
    if labels is not None and len(labels) != data.n:
        raise ValueError(f"labels length {len(labels)} does not match n = {data.n}")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        header = [f"x{j}" for j in range(data.d)]
        if labels is not None:
            header.append(LABEL_COLUMN)
        handle.write(",".join(header) + "\n")
        for i in range(data.n):
            cells = [repr(float(v)) for v in data.points[i]]
            if labels is not None:
                cells.append(str(int(labels.values[i])))
            handle.write(",".join(cells) + "\n")


def write_labels_csv(path, labels: Labels) -> None:
    """Write a single-column labels CSV."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(LABEL_COLUMN + "\n")
        for value in labels.values:
            handle.write(f"{int(value)}\n")
