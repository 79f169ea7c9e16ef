import itertools

import numpy as np
import pytest

from acotsp import (
    DistanceMatrix,
    InvalidArgumentError,
    Tour,
    TspInstance,
    build_distance_matrix,
    held_karp_optimum,
    load_tsplib,
    nearest_neighbor_tour,
    tour_length,
)
from acotsp.instance import canonical_order
from acotsp.tsplib import corpus_names, corpus_path

from _util import random_asymmetric, random_matrix


def loop_length(order, values):
    """Edge-by-edge re-evaluation used as the reference for ``tour_length``."""
    total = 0.0
    for k in range(len(order)):
        total += values[order[k]][order[(k + 1) % len(order)]]
    return total


def test_unit_square_perimeter(unit_square):
    assert tour_length([0, 1, 2, 3], unit_square) == 4.0


def test_unit_square_crossing_tour(unit_square):
    assert tour_length([0, 2, 1, 3], unit_square) == pytest.approx(2 + 2 * 2 ** 0.5, abs=1e-12)


def test_random_seven_city_tour_matches_loop(rng):
    d = random_matrix(rng, 7)
    order = rng.permutation(7)
    assert tour_length(order, d) == pytest.approx(loop_length(order, d.values), rel=1e-15)


def test_rotation_and_reversal_invariance(rng):
    d = random_matrix(rng, 11)
    order = list(rng.permutation(11))
    base = tour_length(order, d)
    for k in range(11):
        rotated = order[k:] + order[:k]
        assert tour_length(rotated, d) == pytest.approx(base, rel=1e-12)
        assert tour_length(rotated[::-1], d) == pytest.approx(base, rel=1e-12)


def test_tour_length_rejects_non_permutations(unit_square):
    for bad in ([0, 1, 2], [0, 1, 1, 3], [0, 1, 2, 4], [0.0, 1.0, 2.0, 3.0]):
        with pytest.raises(InvalidArgumentError):
            tour_length(bad, unit_square)


def test_canonical_order_fixes_rotation_and_direction(rng):
    d = random_matrix(rng, 9)
    order = list(rng.permutation(9))
    reference = canonical_order(order)
    assert reference[0] == 0 and reference[1] < reference[-1]
    for k in range(9):
        rotated = order[k:] + order[:k]
        assert canonical_order(rotated) == reference
        assert canonical_order(rotated[::-1]) == reference
    t = Tour.from_order(order, d).canonical(d)
    assert t.order == reference
    assert t.length == pytest.approx(tour_length(order, d), rel=1e-12)


def test_canonical_order_keeps_direction_when_asymmetric():
    assert canonical_order([2, 0, 3, 1], symmetric=False) == (0, 3, 1, 2)


def test_nearest_neighbor_on_collinear(collinear):
    tour = nearest_neighbor_tour(collinear, start=0)
    assert tour.order == (0, 1, 2)
    assert tour.length == 6.0


def test_nearest_neighbor_ties_go_to_lowest_index(unit_square):
    # from 0, cities 1 and 3 are both at distance 1
    assert nearest_neighbor_tour(unit_square, 0).order == (0, 1, 2, 3)


def test_nearest_neighbor_start_out_of_range(collinear):
    with pytest.raises(InvalidArgumentError):
        nearest_neighbor_tour(collinear, start=3)


def test_nearest_neighbor_is_a_valid_bounded_tour(rng):
    for _ in range(20):
        d = random_matrix(rng, 8)
        tour = nearest_neighbor_tour(d, int(rng.integers(8)))
        assert sorted(tour.order) == list(range(8))
        assert tour.length >= held_karp_optimum(d).optimal_length - 1e-9


def test_distance_matrix_invariants():
    with pytest.raises(InvalidArgumentError):
        DistanceMatrix(np.ones((3, 4)))
    with pytest.raises(InvalidArgumentError):
        DistanceMatrix(np.ones((3, 3)))  # non-zero diagonal
    with pytest.raises(InvalidArgumentError):
        DistanceMatrix(np.array([[0, -1, 1], [-1, 0, 1], [1, 1, 0]]))
    with pytest.raises(InvalidArgumentError):
        DistanceMatrix(np.array([[0, 1, 2], [2, 0, 1], [1, 2, 0]]), symmetric=True)
    d = DistanceMatrix(np.array([[0, 1, 2], [2, 0, 1], [1, 2, 0]]))
    assert not d.symmetric
    with pytest.raises(ValueError):
        d.values[0, 1] = 5.0


def test_instance_requires_exactly_one_payload():
    with pytest.raises(InvalidArgumentError):
        TspInstance(name="x", dimension=3, weight_kind="EUC_2D")
    with pytest.raises(InvalidArgumentError):
        TspInstance.from_coordinates([[0, 0], [1, 1]])
    with pytest.raises(InvalidArgumentError):
        TspInstance(name="x", dimension=3, weight_kind="EUC_2D", nodes=np.zeros((4, 2)))


def test_rounding_mode_changes_distances():
    inst = TspInstance.from_coordinates([[0, 0], [1, 1], [3, 4]])
    real = build_distance_matrix(inst)
    rounded = build_distance_matrix(inst.with_rounding("tsplib"))
    assert real[0, 1] == 2 ** 0.5
    assert rounded[0, 1] == 1.0
    assert rounded[0, 2] == 5.0


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_matrices_are_valid(name):
    for mode in ("tsplib", "real"):
        inst = load_tsplib(corpus_path(name), rounding=mode)
        d = build_distance_matrix(inst)
        assert d.n == inst.dimension
        assert (np.diag(d.values) == 0).all()
        assert (d.values >= 0).all()
        if inst.problem_type == "TSP":
            assert d.symmetric


def test_asymmetric_matrix_lengths_depend_on_direction(rng):
    d = random_asymmetric(rng, 6)
    order = list(range(6))
    forward = tour_length(order, d)
    assert forward == loop_length(order, d.values)
    lengths = {tour_length(p, d) for p in itertools.permutations(range(6)) if p[0] == 0}
    assert len(lengths) > 1
