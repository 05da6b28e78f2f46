"""Tests for the annealing, columnwise-pairwise and threshold-accepting optimizers."""

import numpy as np
import pytest

from sfdesign.config import SearchParams
from sfdesign.errors import DesignError, InvalidDimensionError
from sfdesign.modules.correlation import correlation_matrix
from sfdesign.modules.design import random_latin_hypercube, validate_latin_hypercube
from sfdesign.modules.discrepancy import centered_l2
from sfdesign.modules.distance import RECTANGULAR, dmin2, min_interpoint_distance, phi_q
from sfdesign.modules.search import (
    Objective,
    ObjectiveName,
    anneal_lh,
    columnwise_pairwise,
    maximin_lh,
    threshold_accepting_utype,
)

FAST = SearchParams(seed=1, max_iterations=300)


def non_increasing(trace, tol=1e-9):
    return all(b <= a + tol for a, b in zip(trace, trace[1:]))


class TestObjective:
    def test_parse(self):
        """Names parse case-insensitively and 'phi_q:20' sets q."""
        assert Objective.parse("phi_q:20").q == 20.0
        assert Objective.parse("CL2").name is ObjectiveName.CL2
        with pytest.raises(DesignError):
            Objective.parse("bogus")

    def test_dmin2_is_negated(self):
        """Larger projection distance means a smaller objective."""
        L = random_latin_hypercube(6, 3, seed=2)
        assert Objective(ObjectiveName.DMIN2).evaluate(L) == pytest.approx(-dmin2(L))

    def test_str(self):
        """phi_q shows its exponents."""
        assert str(Objective()) == "phi_q(q=15, t=2)"
        assert str(Objective(ObjectiveName.RHO_MAX)) == "rho_max"


class TestAnnealing:
    def test_best_so_far_trace(self):
        """The trace starts at the start value, never increases and ends at the result."""
        result = anneal_lh(8, 3, params=FAST)
        assert len(result.trace) == FAST.max_iterations + 1
        assert result.trace[0] == result.start_value
        assert non_increasing(result.trace)
        assert result.trace[-1] == result.value
        assert result.value <= result.start_value

    def test_result_is_latin_and_value_matches(self):
        """The returned design is a Latin hypercube whose phi_q is the reported value."""
        result = anneal_lh(8, 3, params=FAST)
        assert validate_latin_hypercube(result.design).is_latin_hypercube
        assert result.value == pytest.approx(phi_q(result.design, 15), rel=1e-9)

    def test_reproducible(self):
        """The same seed gives the same design."""
        first = anneal_lh(7, 2, params=FAST)
        second = anneal_lh(7, 2, params=FAST)
        assert first.design == second.design
        assert first.trace == second.trace

    @pytest.mark.parametrize("t", [1.0, 2.0])
    def test_incremental_update_matches_full(self, t):
        """Incremental phi_q agrees with full evaluation after every accepted move."""
        objective = Objective(ObjectiveName.PHI_Q, 10, t)
        params = SearchParams(seed=3, max_iterations=200, cooling_interval=50)
        result = anneal_lh(9, 3, objective, params, verify_incremental=True)
        assert result.value == pytest.approx(phi_q(result.design, 10, t), rel=1e-9)

    def test_start_design(self):
        """A supplied start fixes the shape and the initial value."""
        start = random_latin_hypercube(8, 3, seed=4)
        result = anneal_lh(0, 0, params=FAST, start=start)
        assert result.design.shape == (8, 3)
        assert result.start_value == pytest.approx(phi_q(start, 15), rel=1e-9)

    def test_correlation_objective(self):
        """Annealing on rho_ave_sq lowers it from the start."""
        objective = Objective(ObjectiveName.RHO_AVE_SQ)
        result = anneal_lh(9, 3, objective, SearchParams(seed=2, max_iterations=400))
        assert result.value <= result.start_value
        assert result.value == pytest.approx(correlation_matrix(result.design).rho_ave_sq)

    def test_restarts_independent_of_workers(self):
        """Threaded restarts return the same winner as sequential ones."""
        sequential = anneal_lh(7, 2, params=SearchParams(seed=5, max_iterations=150, restarts=3))
        threaded = anneal_lh(7, 2, params=SearchParams(seed=5, max_iterations=150, restarts=3, workers=3))
        assert sequential.design == threaded.design
        assert sequential.restart == threaded.restart
        assert sequential.value == threaded.value

    def test_maximin_wrapper(self):
        """maximin_lh anneals on phi_q with the given exponent."""
        result = maximin_lh(6, 2, q=5, params=FAST)
        assert result.value == pytest.approx(phi_q(result.design, 5), rel=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_maximin_is_polished(self, seed):
        """After the exchange polish, another columnwise-pairwise pass finds no improving swap."""
        params = SearchParams(seed=seed, max_iterations=300)
        result = maximin_lh(12, 3, q=15, t=1.0, params=params)
        assert non_increasing(result.trace)
        objective = Objective(ObjectiveName.PHI_Q, 15, 1.0)
        again = columnwise_pairwise(0, 0, objective, params, start=result.design)
        assert len(again.trace) == 1 + 3
        assert again.design == result.design
        assert again.value == pytest.approx(result.value, rel=1e-12)

    def test_intermediate_designs_are_latin(self):
        """Every accepted move keeps the design a Latin hypercube."""
        seen = []
        anneal_lh(8, 3, params=FAST, on_accept=seen.append)
        assert seen
        assert all(validate_latin_hypercube(L).is_latin_hypercube for L in seen)

    def test_invalid_shape(self):
        """At least two runs are needed."""
        with pytest.raises(InvalidDimensionError):
            anneal_lh(1, 2, params=FAST)


class TestColumnwisePairwise:
    def test_monotone_until_no_improvement(self):
        """Only improving swaps are applied."""
        result = columnwise_pairwise(8, 3, params=SearchParams(seed=0, max_iterations=10))
        assert non_increasing(result.trace)
        assert result.value <= result.start_value
        assert validate_latin_hypercube(result.design).is_latin_hypercube
        assert result.value == pytest.approx(phi_q(result.design, 15), rel=1e-9)

    def test_trace_counts_column_steps(self):
        """One trace entry per column per sweep, after the starting value."""
        result = columnwise_pairwise(6, 2, params=SearchParams(seed=1, max_iterations=3))
        assert (len(result.trace) - 1) % 2 == 0
        assert len(result.trace) <= 1 + 2 * 3


class TestThresholdAccepting:
    def test_u_type_design(self):
        """The result keeps every level twice per column and reports its CL2."""
        params = SearchParams(seed=0, max_iterations=200, threshold_stages=5)
        result = threshold_accepting_utype(6, 3, 2, params=params)
        assert result.design.levels == 3
        assert validate_latin_hypercube(result.design).passed
        assert result.value == pytest.approx(centered_l2(result.design).value)
        assert result.value <= result.start_value

    def test_as_many_levels_as_runs(self):
        """With one run per level the search stays inside Latin hypercubes."""
        params = SearchParams(seed=1, max_iterations=200, threshold_stages=4)
        result = threshold_accepting_utype(7, 7, 2, params=params)
        assert validate_latin_hypercube(result.design).is_latin_hypercube
        assert result.value <= result.start_value

    def test_levels_must_divide_runs(self):
        """U(6; 4^2) does not exist."""
        with pytest.raises(InvalidDimensionError):
            threshold_accepting_utype(6, 4, 2, params=FAST)


class TestSearchQuality:
    def test_small_orthogonal_design_is_found(self):
        """Annealing on rho_ave_sq reaches an orthogonal 5 x 2 design for at least 95 of 100 seeds."""
        objective = Objective(ObjectiveName.RHO_AVE_SQ)
        hits = sum(
            anneal_lh(5, 2, objective, SearchParams(seed=seed)).value <= 1e-12
            for seed in range(100)
        )
        assert hits >= 95

    def test_maximin_beats_typical_random_design(self):
        """maximin_lh(9, 2, t=1) reaches the median random rectangular separation for 99 of 100 seeds."""
        random_separations = [
            min_interpoint_distance(random_latin_hypercube(9, 2, seed=seed), RECTANGULAR)
            for seed in range(1000)
        ]
        median = float(np.median(random_separations))
        wins = sum(
            min_interpoint_distance(maximin_lh(9, 2, t=1.0, params=SearchParams(seed=seed, max_iterations=300)).design,
                                    RECTANGULAR) >= median
            for seed in range(100)
        )
        assert wins >= 99
