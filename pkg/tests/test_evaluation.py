from itertools import combinations

import numpy as np
import pytest

from famcluster import Labels, adjusted_rand_index, summarize
from famcluster.evaluation import ClusterSummary


def ari_pair_oracle(a, b):
    """Enumerate every pair and apply the adjusted Rand formula directly."""
    n = len(a)
    same_both = same_a = same_b = total = 0
    for i, j in combinations(range(n), 2):
        total += 1
        pa, pb = a[i] == a[j], b[i] == b[j]
        same_both += pa and pb
        same_a += pa
        same_b += pb
    expected = same_a * same_b / total
    maximum = (same_a + same_b) / 2
    if maximum == expected:
        return 1.0
    return (same_both - expected) / (maximum - expected)


def test_identical_partitions_score_one():
    for labels in ([0, 0, 1, 1], [3, 3, 3], [0, 1, 2, 3]):
        assert adjusted_rand_index(labels, labels) == 1.0


def test_one_cluster_vs_singletons_scores_zero():
    assert adjusted_rand_index([0, 0, 0, 0], [0, 1, 2, 3]) == 0.0


def test_four_point_derived_example():
    a, b = [0, 0, 1, 1], [0, 0, 0, 1]
    got = adjusted_rand_index(a, b)
    assert got == pytest.approx(ari_pair_oracle(a, b), abs=1e-12)
    assert got == pytest.approx(0.0, abs=1e-12)


def test_ari_matches_pair_oracle_on_random_labelings():
    rng = np.random.default_rng(44)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        a = rng.integers(-1, 4, size=n)
        b = rng.integers(-1, 4, size=n)
        assert adjusted_rand_index(a, b) == pytest.approx(ari_pair_oracle(a, b), abs=1e-10)


def test_ari_symmetric_and_relabel_invariant():
    rng = np.random.default_rng(45)
    for _ in range(25):
        n = int(rng.integers(4, 60))
        a = rng.integers(0, 5, size=n)
        b = rng.integers(0, 5, size=n)
        assert adjusted_rand_index(a, b) == pytest.approx(
            adjusted_rand_index(b, a), abs=1e-12
        )
        perm = rng.permutation(5)
        assert adjusted_rand_index(perm[a], b) == pytest.approx(
            adjusted_rand_index(a, b), abs=1e-12
        )


def test_outliers_form_one_group():
    # -1 on one side matches a renamed ordinary group on the other
    assert adjusted_rand_index([-1, -1, 0, 0], [7, 7, 2, 2]) == 1.0


def test_ari_length_mismatch():
    with pytest.raises(ValueError):
        adjusted_rand_index([0, 1], [0, 1, 2])


def test_summarize_examples():
    s = summarize(Labels(np.array([0, 0, 1, -1])))
    assert (s.num_clusters, s.sizes, s.outliers) == (2, (2, 1), 1)
    s = summarize(Labels(np.array([-1, -1, -1])))
    assert (s.num_clusters, s.sizes, s.outliers) == (0, (), 3)
    s = summarize(Labels(np.zeros(10, dtype=int)))
    assert (s.num_clusters, s.sizes, s.outliers) == (1, (10,), 0)


def test_summary_total_matches_input_length():
    rng = np.random.default_rng(46)
    for _ in range(20):
        labels = Labels(rng.integers(-1, 4, size=int(rng.integers(1, 50))))
        assert summarize(labels).total == len(labels)


def test_cluster_summary_validation():
    with pytest.raises(ValueError):
        ClusterSummary(2, (3,), 0)
    with pytest.raises(ValueError):
        ClusterSummary(1, (0,), 0)
    with pytest.raises(ValueError):
        ClusterSummary(1, (3,), -1)
