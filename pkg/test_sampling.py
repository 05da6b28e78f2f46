"""Tests for mean estimation, sampling schemes, jackknife errors and quadrature variances."""

import math

import numpy as np
import pytest

from sfdesign.errors import (
    BudgetExceededError,
    ConstructionError,
    DesignError,
    DimensionMismatchError,
    InvalidDimensionError,
)
from sfdesign.modules.design import random_latin_hypercube, to_unit_cube
from sfdesign.modules.oa import galois_plane_oa
from sfdesign.modules.sampling import (
    TEST_FUNCTIONS,
    SamplingScheme,
    SchemeKind,
    estimate_mean,
    jackknife_variance,
    main_effect_variance,
    test_function,
    total_variance,
    variance_experiment,
)

SRS = SamplingScheme(SchemeKind.SRS)
LHS = SamplingScheme(SchemeKind.LHS)


class TestFunctions:
    @pytest.mark.parametrize("name", sorted(TEST_FUNCTIONS))
    def test_known_means(self, name):
        """Quadrature reproduces every stated mean."""
        f = test_function(name, 3)
        values = f(np.array([[0.5, 0.5, 0.5]]))
        assert values.shape == (1,)
        nodes, weights = np.polynomial.legendre.leggauss(20)
        nodes, weights = (nodes + 1) / 2, weights / 2
        grid = np.array(np.meshgrid(nodes, nodes, nodes, indexing="ij")).reshape(3, -1).T
        w = np.einsum("i,j,k->ijk", weights, weights, weights).ravel()
        assert np.dot(w, f(grid)) == pytest.approx(f.mean, abs=1e-10)

    def test_unknown_name(self):
        """Unknown function names are rejected."""
        with pytest.raises(DesignError):
            test_function("rosenbrock", 2)

    def test_interaction_needs_two_inputs(self):
        """The interaction function is undefined for one input."""
        with pytest.raises(InvalidDimensionError):
            test_function("interaction", 1)

    def test_arity_checked(self):
        """Evaluating on the wrong number of columns fails."""
        with pytest.raises(DimensionMismatchError):
            test_function("product", 2)(np.zeros((3, 3)))

    def test_midpoint_lattice_mean_is_exact_for_linear(self):
        """A midpoint Latin hypercube integrates an additive linear function exactly."""
        D = to_unit_cube(random_latin_hypercube(10, 2, seed=0))
        assert estimate_mean(test_function("additive_linear", 2), D) == pytest.approx(1.0)


class TestJackknife:
    def test_known_values(self):
        """1..5 has variance 5/2 and jackknife standard error sqrt(35/18)."""
        variance, stderr = jackknife_variance([1, 2, 3, 4, 5])
        assert variance == pytest.approx(2.5)
        assert stderr == pytest.approx(math.sqrt(35 / 18))

    def test_constant_values(self):
        """Identical values have zero variance and zero error."""
        assert jackknife_variance([2.0] * 10) == (0.0, 0.0)

    def test_too_few_values(self):
        """Leave-one-out variances need at least three values."""
        with pytest.raises(InvalidDimensionError):
            jackknife_variance([1.0, 2.0])


class TestSchemes:
    def test_oa_required(self):
        """OA-based sampling needs an array of the right size."""
        with pytest.raises(ConstructionError):
            SamplingScheme(SchemeKind.OALHS).check(9, 2)
        with pytest.raises(ConstructionError):
            SamplingScheme(SchemeKind.OALHS, galois_plane_oa(3)).check(16, 2)
        with pytest.raises(ConstructionError):
            SamplingScheme(SchemeKind.OALHS, galois_plane_oa(3)).check(9, 5)

    def test_draws_lie_in_cube(self):
        """Every scheme draws n x k points in [0, 1)."""
        rng = np.random.default_rng(0)
        for scheme in (SRS, LHS, SamplingScheme(SchemeKind.OALHS, galois_plane_oa(3))):
            X = scheme.draw(9, 3, rng)
            assert X.shape == (9, 3)
            assert X.min() >= 0.0 and X.max() < 1.0

    def test_lhs_draw_is_stratified(self):
        """LHS puts one point in each of the n slabs of every coordinate."""
        X = LHS.draw(10, 2, np.random.default_rng(4))
        for j in range(2):
            assert sorted(np.floor(X[:, j] * 10).astype(int).tolist()) == list(range(10))

    def test_quantile_transform(self):
        """A quantile function is applied after sampling."""
        scheme = SamplingScheme(SchemeKind.SRS, quantile=lambda X: -X)
        assert scheme.draw(5, 2, np.random.default_rng(1)).max() <= 0.0


class TestVarianceExperiment:
    def test_too_few_replications(self):
        """Fewer than 100 replications are refused."""
        with pytest.raises(InvalidDimensionError):
            variance_experiment(test_function("product", 2), 10, 2, LHS, replications=99)

    def test_arity_must_match(self):
        """k must match the function's arity."""
        with pytest.raises(DimensionMismatchError):
            variance_experiment(test_function("product", 2), 10, 3, LHS)

    def test_constant_has_zero_variance(self):
        """The mean of a constant never varies."""
        result = variance_experiment(test_function("constant", 2), 8, 2, SRS)
        assert result.variance == 0.0
        assert result.replications == 100

    @pytest.mark.parametrize("name", ["additive_linear", "additive_exp", "nonmonotone"])
    def test_lhs_beats_srs_on_additive(self, name):
        """LHS removes the additive part of the variance, by more than three standard errors."""
        f = test_function(name, 2)
        srs = variance_experiment(f, 25, 2, SRS, replications=2000, seed=1)
        lhs = variance_experiment(f, 25, 2, LHS, replications=2000, seed=1)
        assert srs.variance - lhs.variance >= 3 * math.hypot(srs.stderr, lhs.stderr)

    def test_oa_based_beats_lhs_on_interaction(self):
        """OA-based sampling also stratifies pairs of inputs."""
        f = test_function("interaction", 2)
        oalhs = SamplingScheme(SchemeKind.OALHS, galois_plane_oa(5))
        lhs = variance_experiment(f, 25, 2, LHS, replications=2000, seed=2)
        oa = variance_experiment(f, 25, 2, oalhs, replications=2000, seed=2)
        assert lhs.variance - oa.variance >= 3 * math.hypot(lhs.stderr, oa.stderr)

    @pytest.mark.parametrize("name", ["additive_linear", "interaction"])
    def test_srs_variance_is_total_over_n(self, name):
        """Under SRS, n times the variance of the mean recovers the total variance."""
        f = test_function(name, 2)
        srs = variance_experiment(f, 25, 2, SRS, replications=2000, seed=3)
        assert abs(25 * srs.variance - total_variance(f)) <= 3 * 25 * srs.stderr

    def test_workers_do_not_change_result(self):
        """Per-replication seeds make threaded runs identical."""
        f = test_function("product", 2)
        one = variance_experiment(f, 8, 2, LHS, seed=3)
        many = variance_experiment(f, 8, 2, LHS, seed=3, workers=4)
        assert one.means == many.means


class TestQuadrature:
    def test_product_main_effect(self):
        """x1 x2 has main effect x1/2 - 1/4 with variance 1/48."""
        f = test_function("product", 2)
        assert main_effect_variance(f, 0) == pytest.approx(1 / 48)
        assert main_effect_variance(f, 1) == pytest.approx(1 / 48)
        assert total_variance(f) == pytest.approx(1 / 9 - 1 / 16)

    def test_interaction_has_no_main_effects(self):
        """The pure interaction has zero main effects and variance 1/144."""
        f = test_function("interaction", 2)
        assert main_effect_variance(f, 0) == pytest.approx(0.0, abs=1e-15)
        assert total_variance(f) == pytest.approx(1 / 144)

    def test_additive_function_is_all_main_effects(self):
        """Main effects of an additive function add up to its variance."""
        f = test_function("additive_exp", 3)
        effects = sum(main_effect_variance(f, j) for j in range(3))
        assert effects == pytest.approx(total_variance(f))

    def test_limits(self):
        """Too few nodes, out-of-range inputs and oversized grids are refused."""
        f = test_function("product", 2)
        with pytest.raises(InvalidDimensionError):
            main_effect_variance(f, 0, quadrature_points=10)
        with pytest.raises(InvalidDimensionError):
            main_effect_variance(f, 2)
        with pytest.raises(BudgetExceededError):
            total_variance(test_function("product", 5))
