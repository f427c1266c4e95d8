from __future__ import annotations

import numpy as np
import pytest

from mergespace import (
    LabeledMergeTree,
    MergeTree,
    MergespaceError,
    as_sym_matrix,
    canonicalize,
    geodesic_length,
    geodesic_point,
    induced_matrix,
    labeled_interleaving,
    labeled_trees_equal,
    linf_distance,
    one_center,
    tree_of_matrix,
    ultrafy,
)
from worked import SEVEN_A, SEVEN_B, SEVEN_DISTANCE
from util import rand_labeled_pair, rand_ultra_matrix, rand_valid_matrix


def _two_leaf(merge_h, base=0.0):
    t = MergeTree(
        [(0, base), (1, base), (2, float(merge_h))], [(0, 2), (1, 2)]
    )
    return LabeledMergeTree(t, {1: 0, 2: 1})


def test_distance_between_shifted_wyes():
    a = _two_leaf(2.0)
    b = LabeledMergeTree(
        MergeTree([(0, 1.0), (1, 1.0), (2, 3.0)], [(0, 2), (1, 2)]),
        {1: 0, 2: 1},
    )
    assert labeled_interleaving(a, b) == 1.0
    assert labeled_interleaving(a, a) == 0.0


def test_distance_on_the_seven_label_pair():
    assert labeled_interleaving(SEVEN_A, SEVEN_B) == SEVEN_DISTANCE


def test_distance_requires_matching_label_counts():
    a = _two_leaf(2.0)
    single = LabeledMergeTree(MergeTree([(0, 0.0)], []), {1: 0})
    with pytest.raises(MergespaceError):
        labeled_interleaving(a, single)


def test_distance_never_exceeds_the_matrix_gap():
    rng = np.random.default_rng(83)
    for _ in range(60):
        n = int(rng.integers(1, 7))
        m1 = rand_valid_matrix(rng, n)
        m2 = rand_valid_matrix(rng, n)
        d = labeled_interleaving(tree_of_matrix(m1), tree_of_matrix(m2))
        assert d <= linf_distance(m1, m2) + 1e-12


def test_geodesic_endpoints_are_the_canonical_inputs():
    rng = np.random.default_rng(89)
    for _ in range(20):
        a, b = rand_labeled_pair(rng, max_leaves=4)
        assert labeled_trees_equal(geodesic_point(a, b, 0.0), canonicalize(a))
        assert labeled_trees_equal(geodesic_point(a, b, 1.0), canonicalize(b))


def test_geodesic_interpolates_matrices_linearly():
    rng = np.random.default_rng(97)
    for _ in range(20):
        n = int(rng.integers(1, 6))
        m1 = rand_ultra_matrix(rng, n)
        m2 = rand_ultra_matrix(rng, n)
        lam = float(rng.random())
        mid = geodesic_point(tree_of_matrix(m1), tree_of_matrix(m2), lam)
        blend = as_sym_matrix((1 - lam) * m1.array + lam * m2.array)
        assert induced_matrix(mid) == ultrafy(blend)


def test_geodesic_is_additive_along_the_parameter():
    rng = np.random.default_rng(101)
    for _ in range(15):
        a, b = rand_labeled_pair(rng, max_leaves=4)
        d = labeled_interleaving(a, b)
        lam = float(rng.uniform(0.1, 0.9))
        mid = geodesic_point(a, b, lam)
        left = labeled_interleaving(canonicalize(a), mid)
        right = labeled_interleaving(mid, canonicalize(b))
        assert abs(left + right - d) <= 1e-9
        assert abs(left - lam * d) <= 1e-9


def test_geodesic_rejects_out_of_range_parameters():
    a, b = _two_leaf(2.0), _two_leaf(4.0)
    with pytest.raises(MergespaceError):
        geodesic_point(a, b, -0.1)
    with pytest.raises(MergespaceError):
        geodesic_point(a, b, 1.2)


def test_geodesic_length_matches_the_direct_distance():
    rng = np.random.default_rng(103)
    for _ in range(10):
        a, b = rand_labeled_pair(rng, max_leaves=4)
        d = labeled_interleaving(a, b)
        assert abs(geodesic_length(a, b, samples=7) - d) <= 1e-9


def test_one_center_of_three_wyes():
    trees = [_two_leaf(2.0), _two_leaf(4.0), _two_leaf(8.0)]
    center, radius = one_center(trees)
    assert radius == 3.0
    assert sorted(center.tree.height.values()) == [0.0, 0.0, 5.0]
    for t in trees:
        assert labeled_interleaving(center, t) <= radius


def test_one_center_radius_is_half_the_worst_entry_range():
    rng = np.random.default_rng(107)
    for _ in range(25):
        n = int(rng.integers(1, 6))
        mats = [rand_ultra_matrix(rng, n) for _ in range(int(rng.integers(2, 5)))]
        trees = [tree_of_matrix(m) for m in mats]
        center, radius = one_center(trees)
        stack = np.stack([m.array for m in mats])
        expect = float((stack.max(axis=0) - stack.min(axis=0)).max()) / 2.0
        assert abs(radius - expect) <= 1e-12
        for t in trees:
            assert labeled_interleaving(center, t) <= radius + 1e-12


def test_one_center_of_a_single_tree_is_that_tree():
    t = _two_leaf(3.0)
    center, radius = one_center([t])
    assert radius == 0.0
    assert labeled_trees_equal(center, canonicalize(t))


def test_one_center_needs_at_least_one_tree():
    with pytest.raises(MergespaceError):
        one_center([])
