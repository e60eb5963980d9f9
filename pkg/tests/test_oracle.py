import math

import numpy as np
import pytest

from imagepers.barcode import Barcode, Interval
from imagepers.oracle import (InstanceTooLarge, OracleError, RankGrid, barcode_from_ranks,
                              image_barcode_oracle, induced_rank, nullspace_mod_p, rank_grid,
                              rank_mod_p)
from imagepers.rips import DistanceMatrix, DominanceError, FiltrationPair

import helpers


def two_points():
    return FiltrationPair(DistanceMatrix([[0, 2], [2, 0]]), DistanceMatrix([[0, 1], [1, 0]]))


def test_rank_mod_p():
    A = np.array([[1, 1], [1, 1]])
    assert rank_mod_p(A, 2) == 1
    assert rank_mod_p(np.array([[1, 2], [2, 1]]), 3) == 1
    assert rank_mod_p(np.array([[1, 2], [2, 1]]), 5) == 2
    assert rank_mod_p(np.zeros((0, 3)), 2) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_nullspace(p):
    rng = np.random.default_rng(p)
    A = rng.integers(0, p, size=(4, 7))
    N = nullspace_mod_p(A, p)
    assert len(N) == 7 - rank_mod_p(A, p)
    assert not np.any(A @ N.T % p)


def test_induced_rank_examples():
    pair = two_points()
    assert induced_rank(pair, 0, 0.5, 0.5) == 2
    assert induced_rank(pair, 0, 1.5, 1.5) == 1
    assert induced_rank(pair, 0, 0, 3) == 1
    square = helpers.square_on_circle()
    assert induced_rank(square, 1, 1.6, 1.6) == 1
    assert induced_rank(square, 1, 1.5, 1.6) == 0
    assert induced_rank(square, 1, 1.6, 2.5) == 0
    with pytest.raises(ValueError):
        induced_rank(pair, 0, 2, 1)


def test_constant_rank_grid():
    grid = RankGrid(0, [0.0, 1.0], np.array([[1, 1], [-1, 1]]))
    assert [(iv.birth, iv.death) for iv in barcode_from_ranks(grid)] == [(0.0, math.inf)]


def test_two_point_grid():
    grid = rank_grid(two_points(), 0)
    assert grid.scales == [0.0, 1.0, 2.0]
    assert grid.ranks[0].tolist() == [2, 1, 1]
    assert Barcode(barcode_from_ranks(grid)) == Barcode([Interval(0, 0, 1), Interval(0, 0)])


def test_inconsistent_grid_is_detected():
    grid = RankGrid(0, [0.0, 1.0], np.array([[1, 2], [-1, 2]]))
    with pytest.raises(OracleError):
        grid.check()
    with pytest.raises(OracleError):
        barcode_from_ranks(RankGrid(0, [0.0, 1.0], np.array([[0, 1], [-1, 1]])))


@pytest.mark.parametrize("seed", range(5))
def test_grid_is_monotone(seed):
    rng = np.random.default_rng(seed)
    pair = helpers.dominated_pair(rng, 6)
    for d in range(3):
        grid = rank_grid(pair, d)
        grid.check()
        m = len(grid.scales)
        for a in range(m):
            for b in range(a, m):
                s, t = grid.scales[a], grid.scales[b]
                if (a + b) % 7 == 0:
                    assert grid.ranks[a, b] == induced_rank(pair, d, s, t)


def test_square_oracle():
    bc = image_barcode_oracle(helpers.square_on_circle())
    (b, d), = bc.diagram(1)
    assert b == pytest.approx(math.pi / 2) and d == pytest.approx(2)


def test_oracle_identity_pair_is_single_barcode():
    D = DistanceMatrix(np.ones((3, 3)) - np.eye(3))
    bc = image_barcode_oracle(FiltrationPair(D, D))
    assert sorted(bc.diagram(0)) == [(0, 1), (0, 1), (0, math.inf)]
    assert bc.diagram(1) == []


def test_oracle_threshold():
    base = two_points()
    pair = FiltrationPair(base.dL, base.dK, threshold=0.5)
    assert sorted(image_barcode_oracle(pair).diagram(0)) == [(0, math.inf), (0, math.inf)]
    with pytest.raises(ValueError):
        induced_rank(pair, 0, 0, 1)


def test_size_guard():
    D = DistanceMatrix(np.zeros((40, 40)))
    with pytest.raises(InstanceTooLarge):
        image_barcode_oracle(FiltrationPair(D, D, max_dim=2))


def test_oracle_checks_dominance():
    a, b = two_points().dL, two_points().dK
    with pytest.raises(DominanceError):
        image_barcode_oracle(FiltrationPair(b, a))
