"""Tests for inter-point distance criteria and the phi_q family."""

import math

import numpy as np
import pytest

from sfdesign.errors import BudgetExceededError, DimensionMismatchError, InfiniteEnergyError, InvalidDimensionError
from sfdesign.modules.design import LevelMatrix, random_latin_hypercube, to_unit_cube
from sfdesign.modules.distance import (
    CHEBYSHEV,
    EUCLIDEAN,
    PHI_Q_PRESETS,
    RECTANGULAR,
    DistanceOrder,
    DistanceProfile,
    audze_eglais,
    distance_profile,
    dmin2,
    interpoint_distance,
    maximin_compare,
    min_interpoint_distance,
    minimax_cover_radius,
    phi_q,
    phi_q_from_profile,
    phi_q_pairwise,
)

SQUARE = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])


class TestInterpointDistance:
    def test_identity(self):
        """A point is at distance 0 from itself."""
        assert interpoint_distance([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_orders(self):
        """Rectangular, Euclidean and Chebyshev distances of the unit diagonal."""
        assert interpoint_distance([0, 0], [1, 1], RECTANGULAR) == pytest.approx(2.0)
        assert interpoint_distance([0, 0], [1, 1], EUCLIDEAN) == pytest.approx(math.sqrt(2))
        assert interpoint_distance([0, 0], [1, 1], CHEBYSHEV) == pytest.approx(1.0)

    def test_pythagorean_triple(self):
        """(3, 4) is at Euclidean distance 5."""
        assert interpoint_distance([0, 0], [3, 4], 2) == pytest.approx(5.0)

    def test_dimension_mismatch(self):
        """Points of different dimension are rejected."""
        with pytest.raises(DimensionMismatchError):
            interpoint_distance([0, 0], [1, 1, 1])

    def test_order_parse(self):
        """Orders parse from text, including infinity."""
        assert DistanceOrder.parse("inf").is_chebyshev
        assert DistanceOrder.parse("1").t == 1.0
        with pytest.raises(InvalidDimensionError):
            DistanceOrder(0)


class TestMaximinAndMinimax:
    def test_two_points(self):
        """{0, 1} on the line has separation 1."""
        assert min_interpoint_distance(np.array([[0.0], [1.0]]), RECTANGULAR) == pytest.approx(1.0)

    def test_lattice_spacing(self):
        """An equally spaced lattice of n points has separation 1/(n-1)."""
        X = np.linspace(0.0, 1.0, 7).reshape(-1, 1)
        assert min_interpoint_distance(X) == pytest.approx(1.0 / 6.0)

    def test_square_corners(self):
        """The unit-square corners are at least 1 apart."""
        assert min_interpoint_distance(SQUARE) == pytest.approx(1.0)

    def test_single_point_needs_pairs(self):
        """Separation needs two points."""
        with pytest.raises(InvalidDimensionError):
            min_interpoint_distance(np.array([[0.5, 0.5]]))

    def test_cover_radius_single_point(self):
        """A center point leaves the endpoints 0.5 away."""
        assert minimax_cover_radius(np.array([[0.5]]), RECTANGULAR, resolution=11) == pytest.approx(0.5)

    def test_cover_radius_of_grid_is_zero(self):
        """A design equal to the grid covers it exactly."""
        X = np.linspace(0.0, 1.0, 5).reshape(-1, 1)
        assert minimax_cover_radius(X, resolution=5) == pytest.approx(0.0)

    def test_cover_radius_two_points(self):
        """{0.25, 0.75} leaves 0.25 uncovered at the ends and the middle."""
        assert minimax_cover_radius(np.array([[0.25], [0.75]]), 1, resolution=5) == pytest.approx(0.25)

    def test_cover_radius_budget(self):
        """Grids over the budget are refused."""
        with pytest.raises(BudgetExceededError):
            minimax_cover_radius(np.full((2, 6), 0.5), resolution=20, budget=1000)


class TestAudzeEglais:
    def test_unit_and_double_distance(self):
        """1/d^2 for a single pair."""
        assert audze_eglais(np.array([[0.0], [1.0]])) == pytest.approx(1.0)
        assert audze_eglais(np.array([[0.0], [2.0]])) == pytest.approx(0.25)

    def test_three_collinear(self):
        """{0, 0.5, 1} sums to 4 + 4 + 1."""
        assert audze_eglais(np.array([[0.0], [0.5], [1.0]])) == pytest.approx(9.0)

    def test_coincident_points(self):
        """Coincident points make the energy infinite."""
        with pytest.raises(InfiniteEnergyError):
            audze_eglais(np.array([[0.2], [0.2]]))


class TestDistanceProfile:
    def test_two_runs(self):
        """Two runs have a single distance."""
        profile = distance_profile(LevelMatrix(np.array([[-1], [1]])))
        assert profile.m == 1
        assert profile.multiplicities == (1,)

    def test_equilateral(self):
        """An equilateral triangle has one distance with multiplicity 3."""
        X = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
        profile = distance_profile(X)
        assert profile.multiplicities == (3,)
        assert not profile.exact

    def test_square(self):
        """Square corners: four sides and two diagonals."""
        profile = distance_profile(SQUARE)
        assert profile.distances == pytest.approx((1.0, math.sqrt(2)))
        assert profile.multiplicities == (4, 2)

    def test_exact_grouping_on_levels(self):
        """Level matrices group ties exactly and count every pair."""
        L = random_latin_hypercube(12, 4, seed=8)
        for order in (RECTANGULAR, EUCLIDEAN, CHEBYSHEV):
            profile = distance_profile(L, order)
            assert profile.exact
            assert profile.pairs == 66
            assert list(profile.distances) == sorted(set(profile.distances))


class TestPhiQ:
    def test_single_pair(self):
        """Two points at distance d give 1/d for any q."""
        X = np.array([[0.0], [0.5]])
        for q in (1, 5, 50):
            assert phi_q(X, q) == pytest.approx(2.0)

    def test_square_at_q50(self):
        """(4 + 2 / sqrt(2)^50)^(1/50) on the square corners."""
        assert phi_q(SQUARE, 50) == pytest.approx(1.0281, abs=1e-4)

    def test_profile_sum(self):
        """d = (1, 2), J = (1, 1), q = 1 gives 1.5."""
        assert phi_q_from_profile(DistanceProfile((1.0, 2.0), (1, 1)), 1) == pytest.approx(1.5)

    def test_agrees_with_pairwise_sum(self):
        """The profile form matches the direct double sum on random designs."""
        for seed in range(5):
            X = to_unit_cube(random_latin_hypercube(10, 4, seed=seed)).values
            assert phi_q(X, 15) == pytest.approx(phi_q_pairwise(X, 15), rel=1e-9)

    def test_large_q_tends_to_separation(self):
        """1/phi_q lies within a factor C(n, 2)^(1/q) below the minimum distance."""
        for seed in range(3):
            L = random_latin_hypercube(8, 3, seed=seed)
            separation = min_interpoint_distance(L)
            assert separation / 28 ** (1 / 200) - 1e-12 <= 1.0 / phi_q(L, 200) <= separation + 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_q_200_is_within_one_percent(self, seed):
        """Without ties at the minimum, q = 200 puts 1/phi_q within 1% of the separation."""
        X = np.random.default_rng(seed).random((8, 3))
        assert 1.0 / phi_q(X, 200) == pytest.approx(min_interpoint_distance(X), rel=0.01)

    def test_presets(self):
        """Guidance presets for small, moderate and large designs."""
        assert PHI_Q_PRESETS == {"small": 5, "moderate": 20, "large": 50}

    def test_sequential_dominance_agrees_with_phi_q(self):
        """Designs preferred by the sequential comparator also have smaller phi_q at q = 50."""
        agreements = 0
        cases = 0
        for seed in range(40):
            a = random_latin_hypercube(8, 3, seed=2 * seed)
            b = random_latin_hypercube(8, 3, seed=2 * seed + 1)
            verdict = maximin_compare(distance_profile(a), distance_profile(b))
            if verdict == 0:
                continue
            da, db = distance_profile(a).distances[0], distance_profile(b).distances[0]
            if max(da, db) / min(da, db) <= 28 ** (1 / 50):
                continue
            cases += 1
            better, worse = (a, b) if verdict < 0 else (b, a)
            agreements += phi_q(better, 50) < phi_q(worse, 50)
        assert cases > 0
        assert agreements == cases


class TestDmin2:
    def test_two_factors_equals_separation(self):
        """With two factors the only projection is the design itself."""
        L = random_latin_hypercube(7, 2, seed=1)
        assert dmin2(L) == pytest.approx(min_interpoint_distance(L))

    def test_projections(self):
        """Offsets (3, 4, 0) project to 5, 3 and 4."""
        X = np.array([[0.0, 0.0, 0.0], [3.0, 4.0, 0.0]])
        assert dmin2(X) == pytest.approx(3.0)

    def test_not_larger_than_separation(self):
        """Projection never increases the minimum distance."""
        for seed in range(5):
            L = random_latin_hypercube(9, 4, seed=seed)
            assert dmin2(L) <= min_interpoint_distance(L) + 1e-12

    def test_needs_two_factors(self):
        """A single factor has no two-dimensional projection."""
        with pytest.raises(InvalidDimensionError):
            dmin2(np.array([[0.1], [0.2]]))
