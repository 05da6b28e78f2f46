"""Tests for orthogonal Latin hypercube constructions and the run-size catalog."""

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from sfdesign.errors import ConstructionError, DimensionMismatchError, InvalidDimensionError
from sfdesign.modules.correlation import correlation_matrix, is_orthogonal, second_order_check
from sfdesign.modules.design import LevelMatrix, random_latin_hypercube, validate_latin_hypercube
from sfdesign.modules.hadamard import hadamard
from sfdesign.modules.oa import galois_plane_oa, load_oa
from sfdesign.modules.olh import (
    BOUND_RULE,
    CATALOG,
    KRONECKER,
    OA_COUPLING,
    OLHCatalogEntry,
    RECURSIVE_FOLDOVER,
    ROTATION,
    SEQUENTIAL_SEARCH,
    bingham_general,
    bingham_kronecker,
    bingham_prediction,
    best_known_bound,
    bound_rule,
    catalog_entries,
    doubling_pipeline,
    exists_olh,
    kron_augmented,
    kron_construct,
    near_orth_prediction,
    oa_coupled_olh,
    oa_coupled_prediction,
    sun_olh_even,
    sun_olh_odd,
    sun_recursive,
)
from sfdesign.modules.tables import H4_STACKED, OLH_8_4, get_table

TABLES_DIR = Path(__file__).parent / "tables"
ORTHOGONAL_LH = "orthogonal Latin hypercube"


class TestOACoupling:
    def test_twenty_five_runs(self):
        """OLH(5, 2) and OA(25, 5^6, 2) give an orthogonal 25 x 12 Latin hypercube."""
        L = oa_coupled_olh(get_table("olh_5_2"), load_oa(TABLES_DIR / "oa_25_5_6.txt"))
        assert L.shape == (25, 12)
        assert validate_latin_hypercube(L).is_latin_hypercube
        assert is_orthogonal(L).orthogonal

    def test_bundled_array_matches_plane(self):
        """The bundled 25-run array is the GF(5) plane array."""
        assert np.array_equal(load_oa(TABLES_DIR / "oa_25_5_6.txt").symbols, galois_plane_oa(5).symbols)

    @pytest.mark.parametrize("seed", range(20))
    def test_correlation_is_kronecker_with_identity(self, seed):
        """R(L) = R(B) kron I_2f exactly, for random B over several run sizes."""
        n = (3, 4, 5, 7)[seed % 4]
        k = 2 + seed % 3
        width = 2 * (1 + (seed // 4) % 2)
        B = random_latin_hypercube(n, k, seed=seed)
        L = oa_coupled_olh(B, galois_plane_oa(n).columns(range(width)))
        R_B = correlation_matrix(B).exact
        R_L = correlation_matrix(L).exact
        for a in range(k * width):
            for b in range(k * width):
                expected = R_B[a // width][b // width] if a % width == b % width else 0
                assert R_L[a][b] == expected

    def test_prediction_matches_measurement(self):
        """rho_max is kept and rho_ave_sq scales by (q - 1)/(2qf - 1), exactly."""
        B = get_table("nolh_13_12")
        L = oa_coupled_olh(B, galois_plane_oa(13).columns(range(2)))
        measured = correlation_matrix(L)
        predicted = oa_coupled_prediction(correlation_matrix(B), q=12, f=1)
        assert L.shape == (169, 24)
        assert measured.rho_max_exact == predicted.exact_rho_max == Fraction(9, 182)
        assert measured.rho_ave_sq_exact == predicted.exact_rho_ave_sq
        assert predicted.exact_rho_ave_sq == Fraction(11, 23) * correlation_matrix(B).rho_ave_sq_exact

    def test_full_array_prediction(self):
        """With all 14 columns of the 169-run array the RMS correlation drops to about 0.0057."""
        predicted = oa_coupled_prediction(correlation_matrix(get_table("nolh_13_12")), q=12, f=7)
        assert predicted.rho_max == pytest.approx(0.0495, abs=1e-4)
        assert predicted.rho_ave == pytest.approx(0.0057, abs=1e-4)

    @pytest.mark.parametrize("name,q,k", [("olh_7_3", 7, 24), ("olh_9_5", 9, 50), ("olh_11_7", 11, 84)])
    def test_catalog_sizes(self, name, q, k):
        """The catalogued factor counts for 49, 81 and 121 runs are reached."""
        L = oa_coupled_olh(get_table(name), galois_plane_oa(q).columns(range(q + 1)))
        assert L.shape == (q * q, k)
        assert CATALOG[q * q].k == k
        assert CATALOG[q * q].source == OA_COUPLING
        assert is_orthogonal(L).orthogonal

    def test_wrong_array_size(self):
        """The array must have n^2 runs on n symbols."""
        with pytest.raises(DimensionMismatchError):
            oa_coupled_olh(get_table("olh_5_2"), galois_plane_oa(7))

    def test_odd_column_count(self):
        """Columns pair up into blocks."""
        with pytest.raises(DimensionMismatchError):
            oa_coupled_olh(get_table("olh_5_2"), galois_plane_oa(5).columns(range(3)))

    def test_needs_latin_input(self):
        """B must be a Latin hypercube."""
        B = LevelMatrix(np.array([[-1, 1], [1, -1], [-1, 1], [1, -1], [0, 0]]), 3)
        with pytest.raises(ConstructionError):
            oa_coupled_olh(B, galois_plane_oa(5))

    def test_invalid_prediction_arguments(self):
        """q and f must be positive."""
        with pytest.raises(InvalidDimensionError):
            oa_coupled_prediction(correlation_matrix(get_table("olh_5_2")), q=0, f=1)


class TestRecursiveFoldover:
    def test_base_case(self):
        """S_1 and T_1 start the recursion."""
        S, T = sun_recursive(1)
        assert S.tolist() == [[1, 1], [1, -1]]
        assert T.tolist() == [[1, 2], [2, -1]]

    def test_odd_c3_matches_table(self):
        """c = 3 reproduces the stored 17 x 8 design."""
        assert sun_olh_odd(3) == get_table("sun_17_8")

    def test_odd_is_second_order(self):
        """Odd designs are second-order orthogonal Latin hypercubes."""
        for c in (1, 2, 3, 4):
            L = sun_olh_odd(c)
            assert L.shape == (2 ** (c + 1) + 1, 2 ** c)
            assert validate_latin_hypercube(L).is_latin_hypercube
            assert second_order_check(L).second_order

    def test_even_is_second_order(self):
        """Even designs sit on half-integer levels and are second-order orthogonal."""
        for c in (1, 2, 3, 4):
            L = sun_olh_even(c)
            assert L.shape == (2 ** (c + 1), 2 ** c)
            assert np.all(L.doubled % 2 == 1)
            assert validate_latin_hypercube(L).is_latin_hypercube
            assert second_order_check(L).second_order

    @pytest.mark.parametrize("c", [4, 5, 6])
    def test_catalog_sizes(self, c):
        """The catalogued counts for 2^(c+1) and 2^(c+1) + 1 runs are reached."""
        for L in (sun_olh_even(c), sun_olh_odd(c)):
            assert is_orthogonal(L).orthogonal
            assert CATALOG[L.n].k == L.k
            assert CATALOG[L.n].source == RECURSIVE_FOLDOVER

    def test_c_must_be_positive(self):
        """c = 0 has no design."""
        with pytest.raises(InvalidDimensionError):
            sun_recursive(0)


class TestKronecker:
    def test_augmented_64_runs(self):
        """Sixteen plus sixteen factors from two 8-run inputs, all orthogonal."""
        B = E = get_table("olh_8_4_foldover")
        result = kron_augmented(H4_STACKED, B, E, H4_STACKED)
        assert result.design.shape == (64, 32)
        assert result.label == ORTHOGONAL_LH
        assert result.conditions.orthogonal
        L, U = result.parts
        assert L.shape == U.shape == (64, 16)
        assert validate_latin_hypercube(U).is_latin_hypercube
        assert is_orthogonal(result.design).orthogonal

    def test_plain_product(self):
        """The unaugmented product is an orthogonal 64 x 16 Latin hypercube."""
        B = get_table("olh_8_4_foldover")
        result = kron_construct(H4_STACKED, B, B, H4_STACKED)
        assert result.design.shape == (64, 16)
        assert result.label == ORTHOGONAL_LH
        assert is_orthogonal(result.design).orthogonal

    def test_near_orthogonal_prediction_is_exact(self):
        """A 32 x 15 design from the nearly orthogonal 16 x 15 one matches the weighted prediction."""
        B = get_table("nolh_16_15")
        E = LevelMatrix(np.array([[1], [-1]]))
        result = kron_construct([[1], [1]], B, E, hadamard(16)[:, 1:])
        assert result.design.shape == (32, 15)
        assert result.conditions.near_orthogonal
        assert not result.conditions.orthogonal
        assert result.label == "Latin hypercube"
        measured = correlation_matrix(result.design)
        predicted = near_orth_prediction(correlation_matrix(B), correlation_matrix(E), n1=2, n2=16, k1=1, k2=15)
        assert measured.rho_max_exact == predicted.exact_rho_max
        assert measured.rho_ave_sq_exact == predicted.exact_rho_ave_sq
        assert measured.rho_max == pytest.approx(Fraction(255, 1023) * correlation_matrix(B).rho_max)

    @pytest.mark.parametrize("seed", range(10))
    def test_near_orthogonal_prediction_holds_for_foldover_inputs(self, seed):
        """Random foldover B with paired F signs gives a Latin design matching the prediction exactly."""
        rng = np.random.default_rng(seed)
        n1 = (2, 4)[seed % 2]
        k1 = 1 + (seed // 2) % 2
        m = 4 if seed < 5 else 8
        k2 = 2 + seed % 3
        half = np.column_stack([
            rng.permutation(np.arange(1, 2 * m, 2)) * rng.choice([-1, 1], size=m) for _ in range(k2)
        ])
        B = LevelMatrix(np.vstack([half, -half]), 2 * m)
        F = np.vstack([hadamard(m)[:, :k2]] * 2)
        A = hadamard(n1)[:, :k1]
        E = random_latin_hypercube(n1, k1, seed=seed)
        result = kron_construct(A, B, E, F)
        assert result.conditions.near_orthogonal
        assert validate_latin_hypercube(result.design).is_latin_hypercube
        measured = correlation_matrix(result.design)
        predicted = near_orth_prediction(correlation_matrix(B), correlation_matrix(E), n1=n1, n2=2 * m, k1=k1, k2=k2)
        assert measured.rho_max_exact == predicted.exact_rho_max
        assert measured.rho_ave_sq_exact == predicted.exact_rho_ave_sq

    def test_failing_conditions_downgrade_label(self):
        """Unpaired signs give a plain matrix instead of raising."""
        result = kron_construct([[1], [-1]], get_table("olh_8_4"), LevelMatrix(np.array([[1], [-1]])), H4_STACKED)
        assert not result.conditions.latin
        assert result.label == "matrix"

    def test_shape_mismatch(self):
        """A and E must share a shape."""
        B = get_table("olh_8_4")
        with pytest.raises(DimensionMismatchError):
            kron_construct([[1], [1]], B, LevelMatrix(np.array([[1, 1], [-1, -1]])), H4_STACKED)

    def test_augmentation_needs_equal_runs(self):
        """n1 must equal n2."""
        B = get_table("olh_8_4")
        with pytest.raises(DimensionMismatchError):
            kron_augmented([[1], [1]], B, LevelMatrix(np.array([[1], [-1]])), H4_STACKED)


class TestDoublingPipeline:
    def test_from_eight_runs(self):
        """OLH(8, 4) doubles to 16 x 4, 32 x 8, 64 x 16 and 128 x 32."""
        results = doubling_pipeline(get_table("olh_8_4"))
        assert sorted(results) == [2, 4, 8, 16]
        for m, result in results.items():
            assert result.design.shape == (8 * m, 4 * m // 2)
            assert result.label == ORTHOGONAL_LH
            assert is_orthogonal(result.design).orthogonal

    def test_from_sixteen_runs(self):
        """OLH(16, 12) doubles to an orthogonal 32 x 12 design."""
        result = doubling_pipeline(get_table("olh_16_12"))[2]
        assert result.design.shape == (32, 12)
        assert is_orthogonal(result.design).orthogonal

    def test_explicit_hadamard(self):
        """A supplied Hadamard matrix must match the run count."""
        with pytest.raises(DimensionMismatchError):
            doubling_pipeline(LevelMatrix(np.array(OLH_8_4)), hadamard(4))


class TestBlockDesigns:
    def test_kronecker_keeps_rho_max(self):
        """A kron D0 keeps rho_max and scales rho_ave_sq by (k2 - 1)/(k1 k2 - 1)."""
        D0 = get_table("u_6_3_2")
        D = bingham_kronecker(hadamard(2), D0)
        assert D.shape == (12, 4)
        assert D.levels == 3
        assert validate_latin_hypercube(D).passed
        measured = correlation_matrix(D)
        predicted = bingham_prediction([correlation_matrix(D0)] * 2, k2=2)
        assert measured.rho_max_exact == predicted.exact_rho_max == Fraction(1, 4)
        assert measured.rho_ave_sq_exact == predicted.exact_rho_ave_sq == Fraction(1, 48)

    @pytest.mark.parametrize("instance", range(10))
    def test_prediction_for_distinct_random_blocks(self, instance):
        """Distinct random blocks under an orthogonal sign matrix match the block prediction exactly."""
        n1 = (2, 4)[instance % 2]
        k1 = 1 + (instance // 2) % n1
        n0 = (5, 6, 7)[instance % 3]
        k2 = 2 + (instance // 3) % 2
        blocks = [random_latin_hypercube(n0, k2, seed=10 * instance + j) for j in range(k1)]
        D = bingham_general(hadamard(n1)[:, :k1], blocks)
        assert D.shape == (n1 * n0, k1 * k2)
        measured = correlation_matrix(D)
        predicted = bingham_prediction([correlation_matrix(b) for b in blocks], k2=k2)
        assert measured.rho_max_exact == predicted.exact_rho_max
        assert measured.rho_ave_sq_exact == predicted.exact_rho_ave_sq

    def test_general_equals_kronecker_for_equal_blocks(self):
        """Identical blocks reduce the general form to the Kronecker product."""
        D0 = get_table("u_6_3_2")
        A = hadamard(4)[:, :2]
        assert bingham_general(A, [D0, D0]) == bingham_kronecker(A, D0)

    def test_general_with_distinct_blocks(self):
        """Different blocks of the same shape fill their own block columns."""
        D1 = get_table("u_6_3_2")
        D2 = LevelMatrix(D1.doubled[:, ::-1], 3)
        D = bingham_general(hadamard(2), [D1, D2])
        assert np.array_equal(D.doubled[:6, 2:], D2.doubled)
        assert np.array_equal(D.doubled[6:, 2:], -D2.doubled)

    def test_block_count_must_match(self):
        """One design per column of A."""
        with pytest.raises(DimensionMismatchError):
            bingham_general(hadamard(2), [get_table("u_6_3_2")])


class TestCatalog:
    def test_existence(self):
        """OLHs exist for n >= 4 except n = 2 mod 4."""
        assert [n for n in range(1, 15) if exists_olh(n)] == [4, 5, 7, 8, 9, 11, 12, 13]
        assert [n for n in range(2, 65) if not exists_olh(n)] == [2, 3] + list(range(6, 63, 4))

    def test_full_table(self):
        """Every stored run size with its best known factor count and source."""
        S, R, OA, RF, K = SEQUENTIAL_SEARCH, ROTATION, OA_COUPLING, RECURSIVE_FOLDOVER, KRONECKER
        expected = [
            (4, 2, S), (5, 2, S), (7, 3, S), (8, 4, S), (9, 5, S), (11, 7, S), (12, 6, S),
            (13, 6, S), (15, 6, S), (16, 12, R), (17, 6, S), (19, 6, S), (20, 6, S),
            (21, 6, S), (23, 6, S), (24, 6, S),
            (25, 12, OA), (32, 16, RF), (33, 16, RF), (48, 12, K), (49, 24, OA),
            (64, 32, RF), (65, 32, RF), (80, 12, K), (81, 50, OA), (96, 24, K), (97, 24, K),
            (112, 12, K), (113, 12, K), (121, 84, OA), (128, 64, RF), (129, 64, RF),
            (144, 24, K), (145, 12, K), (160, 24, K), (161, 24, K), (169, 84, OA),
            (176, 12, K), (177, 12, K), (192, 48, K), (193, 48, K), (208, 12, K), (209, 12, K),
            (224, 24, K), (225, 24, K), (240, 12, K), (241, 12, K), (256, 248, R),
        ]
        assert [(e.n, e.k, e.source) for e in catalog_entries()] == expected
        assert all(best_known_bound(n) == OLHCatalogEntry(n, k, source) for n, k, source in expected)

    def test_small_entries(self):
        """Stored small-run bounds."""
        assert best_known_bound(9).k == 5
        assert best_known_bound(16).k == 12
        assert best_known_bound(16).source == ROTATION
        assert best_known_bound(256).k == 248

    def test_bound_rule_beyond_table(self):
        """Beyond the table the largest applicable bound is used."""
        assert best_known_bound(300) == OLHCatalogEntry(300, 6, BOUND_RULE)
        assert bound_rule(512) == 48
        assert bound_rule(513) == 48
        assert bound_rule(258) is None
        assert best_known_bound(258) is None

    def test_catalog_rows_exist(self):
        """Every catalogued run size admits an OLH and entries are sorted by n."""
        entries = catalog_entries()
        assert [e.n for e in entries] == sorted(CATALOG)
        assert all(exists_olh(e.n) for e in entries)
