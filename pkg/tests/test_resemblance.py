import math

import numpy as np
import pytest

from famcluster import (
    ResemblanceConfig,
    cosine_resemblance,
    log_resemblance,
    normalize_edges,
    rbf_resemblance,
    sigmoid_resemblance,
)
from famcluster.resemblance import score_pair


def test_log_zero_distance_near_one():
    assert log_resemblance([1.0, 2.0], [1.0, 2.0], eps=1e-8) == pytest.approx(1.0, abs=1e-7)


def test_log_half_at_distance_e_minus_one():
    # ln(e - 1 + 1) = 1, so the score is 1/(1+1)
    x2 = [math.e - 1.0]
    assert log_resemblance([0.0], x2, eps=1e-12) == pytest.approx(0.5, abs=1e-9)


def test_log_direct_evaluation_distance_nine():
    expected = 1.0 / (1.0 + math.log(9.0 + 1.0 + 1e-8))  # = 0.3027931064724302
    got = log_resemblance([0.0], [9.0], eps=1e-8)
    assert got == pytest.approx(expected, abs=1e-15)
    assert got == pytest.approx(0.3027931064724302, abs=1e-12)


def test_log_strictly_decreasing_in_distance():
    rng = np.random.default_rng(3)
    dists = np.sort(rng.uniform(0.0, 50.0, size=64))
    scores = [log_resemblance([0.0], [d], eps=1e-8) for d in dists]
    assert all(a > b for a, b in zip(scores, scores[1:]))


def test_cosine_examples():
    assert cosine_resemblance([2.0, 1.0], [2.0, 1.0]) == pytest.approx(1.0, abs=1e-12)
    assert cosine_resemblance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0, abs=1e-12)
    assert cosine_resemblance([1.0, 0.0], [-1.0, 0.0]) == pytest.approx(-1.0, abs=1e-12)
    with pytest.raises(ValueError):
        cosine_resemblance([0.0, 0.0], [1.0, 0.0])


def test_rbf_examples():
    assert rbf_resemblance([3.0, 4.0], [3.0, 4.0], gamma=1.0) == 1.0
    # gamma * dist^2 = 0.5 * 2 = 1
    assert rbf_resemblance([0.0], [math.sqrt(2.0)], gamma=0.5) == pytest.approx(
        math.exp(-1.0), abs=1e-12
    )
    assert rbf_resemblance([0.0, 0.0], [1.0, 1.0], gamma=1.0) == pytest.approx(
        math.exp(-2.0), abs=1e-12
    )
    with pytest.raises(ValueError):
        rbf_resemblance([0.0], [1.0], gamma=0.0)


def test_sigmoid_examples():
    # dot = -coef0/gamma makes the argument vanish
    assert sigmoid_resemblance([1.0, 0.0], [-0.5, 0.3], gamma=2.0, coef0=1.0) == pytest.approx(
        0.0, abs=1e-12
    )
    assert sigmoid_resemblance([1.0, 0.0], [0.0, 1.0], gamma=1.0, coef0=0.0) == 0.0
    assert sigmoid_resemblance([1.0, 0.0], [1.0, 0.0], gamma=1.0, coef0=0.0) == pytest.approx(
        math.tanh(1.0), abs=1e-12
    )


def test_dimension_mismatch_errors():
    for fn in (
        lambda a, b: log_resemblance(a, b),
        cosine_resemblance,
        lambda a, b: rbf_resemblance(a, b, 1.0),
        lambda a, b: sigmoid_resemblance(a, b, 1.0),
    ):
        with pytest.raises(ValueError):
            fn([1.0, 2.0], [1.0, 2.0, 3.0])


def test_all_kinds_symmetric_exactly():
    rng = np.random.default_rng(5)
    configs = [
        ResemblanceConfig("log"),
        ResemblanceConfig("cosine"),
        ResemblanceConfig("rbf", gamma=0.7),
        ResemblanceConfig("sigmoid", gamma=0.7, coef0=0.2),
    ]
    for _ in range(50):
        a, b = rng.normal(size=(2, 3)) + 0.1
        for cfg in configs:
            assert score_pair(cfg, a, b) == score_pair(cfg, b, a)


def test_normalize_two_scores():
    normalized, bounds = normalize_edges(np.array([0.2, 0.7]))
    assert normalized.tolist() == [0.0, 1.0]
    assert (bounds.r_min, bounds.r_max) == (0.2, 0.7)


def test_normalize_affine():
    normalized, _ = normalize_edges(np.array([1.0, 2.0, 3.0]))
    assert normalized.tolist() == [0.0, 0.5, 1.0]


def test_normalize_degenerate_range():
    normalized, bounds = normalize_edges(np.array([0.4, 0.4]))
    assert normalized.tolist() == [1.0, 1.0]
    assert (bounds.r_min, bounds.r_max) == (0.4, 0.4)


def test_normalize_properties():
    rng = np.random.default_rng(9)
    for _ in range(40):
        scores = rng.normal(scale=3.0, size=rng.integers(2, 60))
        normalized, bounds = normalize_edges(scores)
        assert normalized.min() >= 0.0 and normalized.max() <= 1.0
        if bounds.r_max > bounds.r_min:
            assert normalized[scores.argmin()] == 0.0
            assert normalized[scores.argmax()] == 1.0
        # affine map preserves the ordering of scores
        assert np.array_equal(np.argsort(scores, kind="stable"),
                              np.argsort(normalized, kind="stable"))


def test_normalize_empty_errors():
    with pytest.raises(ValueError):
        normalize_edges(np.array([]))
    with pytest.raises(ValueError):
        normalize_edges(np.array([1.0, np.nan]))
