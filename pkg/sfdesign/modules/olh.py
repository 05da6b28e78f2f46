"""Orthogonal and nearly orthogonal Latin hypercube constructions and the run-size catalog."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from sfdesign.errors import (
    ConstructionError,
    DesignError,
    DimensionMismatchError,
    InvalidDimensionError,
)
from sfdesign.modules.correlation import CorrelationSummary, is_orthogonal
from sfdesign.modules.design import LevelMatrix, validate_latin_hypercube
from sfdesign.modules.hadamard import TEMPLATES, hadamard, is_column_orthogonal
from sfdesign.modules.oa import OrthogonalArray

logger = logging.getLogger(__name__)


def exists_olh(n: int) -> bool:
    """Whether an orthogonal Latin hypercube with n runs and at least two factors exists.

    False for n < 4 and for n = 2 mod 4, true otherwise.
    """
    return n >= 4 and n % 4 != 2


@dataclass(frozen=True)
class CorrelationPrediction:
    """Predicted correlation summaries of a constructed design.

    Attributes:
        rho_max: Predicted maximum absolute correlation
        rho_ave_sq: Predicted mean squared correlation
        exact_rho_max: Exact value when the inputs carried exact correlations
        exact_rho_ave_sq: Exact value when the inputs carried exact correlations
    """
    rho_max: float
    rho_ave_sq: float
    exact_rho_max: Fraction | None = None
    exact_rho_ave_sq: Fraction | None = None

    @property
    def rho_ave(self) -> float:
        return self.rho_ave_sq ** 0.5


def _as_signs(matrix, name: str) -> np.ndarray:
    arr = np.asarray(matrix, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or not np.all(np.abs(arr) == 1):
        raise DesignError(f"{name} must be a matrix of +-1")
    return arr


# OA coupling

def oa_coupled_olh(B: LevelMatrix, A: OrthogonalArray) -> LevelMatrix:
    """Large Latin hypercube from a small one and an OA of index unity.

    Each column of B is substituted for the symbols of A (symbol m becomes
    B's m-th entry), the result is cut into two-column blocks and every block
    (a1, a2) becomes (a1 + n a2, -n a1 + a2). Blocks are concatenated column of
    B first, so R(L) = R(B) kron I_2f.

    Args:
        B: n x q Latin hypercube
        A: OA(n^2, n^(2f), 2)

    Returns:
        n^2 x 2qf Latin hypercube
    """
    n = B.n
    if not B.is_latin:
        raise ConstructionError("B must be a Latin hypercube")
    if not A.is_symmetric or A.s != n or A.n != n * n:
        raise DimensionMismatchError(f"need OA({n * n}, {n}^2f, 2) for a {n}-run B, got {A!r}")
    if A.k % 2:
        raise DimensionMismatchError(f"OA must have an even number of columns, got {A.k}")
    f = A.k // 2
    blocks = []
    for j in range(B.k):
        substituted = B.doubled[:, j][A.symbols - 1]
        for t in range(f):
            a1, a2 = substituted[:, 2 * t], substituted[:, 2 * t + 1]
            blocks.extend([a1 + n * a2, -n * a1 + a2])
    L = LevelMatrix(np.column_stack(blocks), n * n)
    logger.info("OA coupling: %dx%d from %dx%d and %r", L.n, L.k, B.n, B.k, A)
    return L


def oa_coupled_prediction(B_summary: CorrelationSummary, q: int, f: int) -> CorrelationPrediction:
    """Correlations of oa_coupled_olh output: rho_max is kept, rho_ave_sq scales by (q-1)/(2qf-1)."""
    if q < 1 or f < 1:
        raise InvalidDimensionError(f"q and f must be positive, got q={q}, f={f}")
    weight = Fraction(q - 1, 2 * q * f - 1)
    exact_ave = B_summary.rho_ave_sq_exact
    return CorrelationPrediction(
        B_summary.rho_max,
        float(weight) * B_summary.rho_ave_sq,
        B_summary.rho_max_exact,
        weight * exact_ave if exact_ave is not None else None,
    )


# Recursive foldover (second-order orthogonal) designs

S1 = np.array([[1, 1], [1, -1]], dtype=np.int64)
T1 = np.array([[1, 2], [2, -1]], dtype=np.int64)


def _flip_top(M: np.ndarray) -> np.ndarray:
    out = M.copy()
    out[: M.shape[0] // 2] *= -1
    return out


def sun_recursive(c: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sign matrix S_c and integer matrix T_c, both 2^c x 2^c.

    Starting from S_1 and T_1, with * negating the top half and h = 2^(c-1):
    S_c = [[S, -S*], [S, S*]] and T_c = [[T, -(T* + h S*)], [T + h S, T*]].
    """
    if c < 1:
        raise InvalidDimensionError(f"c must be at least 1, got {c}")
    S, T = S1.copy(), T1.copy()
    for level in range(2, c + 1):
        h = 2 ** (level - 1)
        S_star, T_star = _flip_top(S), _flip_top(T)
        S, T = (np.block([[S, -S_star], [S, S_star]]),
                np.block([[T, -(T_star + h * S_star)], [T + h * S, T_star]]))
    return S, T


def sun_olh_odd(c: int) -> LevelMatrix:
    """(2^(c+1) + 1) x 2^c second-order orthogonal LH: T_c, a zero row, then -T_c."""
    _, T = sun_recursive(c)
    stacked = np.vstack([T, np.zeros((1, T.shape[1]), dtype=np.int64), -T])
    return LevelMatrix(2 * stacked)


def sun_olh_even(c: int) -> LevelMatrix:
    """2^(c+1) x 2^c second-order orthogonal LH on half-integer levels: H_c = T_c - S_c/2 and -H_c."""
    S, T = sun_recursive(c)
    H = 2 * T - S
    return LevelMatrix(np.vstack([H, -H]))


# Kronecker constructions

@dataclass(frozen=True)
class KronConditions:
    """Which orthogonality and Latin hypercube conditions hold for A, B, E, F.

    Attributes:
        signs_orthogonal: A and F are column-orthogonal +-1 matrices
        inputs_orthogonal: B and E are orthogonal Latin hypercubes
        cross_zero: A'E = 0 or B'F = 0
        pairing_a: In every column, rows with opposite E entries share the A entry
        pairing_b: In every column, rows with opposite B entries share the F entry
    """
    signs_orthogonal: bool
    inputs_orthogonal: bool
    cross_zero: bool
    pairing_a: bool
    pairing_b: bool

    @property
    def latin(self) -> bool:
        return self.pairing_a or self.pairing_b

    @property
    def orthogonal(self) -> bool:
        return self.signs_orthogonal and self.inputs_orthogonal and self.cross_zero and self.latin

    @property
    def near_orthogonal(self) -> bool:
        """Conditions under which the correlation prediction applies."""
        return self.signs_orthogonal and self.cross_zero and self.latin

    def as_dict(self) -> Dict[str, bool]:
        return {
            "signs_orthogonal": self.signs_orthogonal,
            "inputs_orthogonal": self.inputs_orthogonal,
            "cross_zero": self.cross_zero,
            "pairing_a": self.pairing_a,
            "pairing_b": self.pairing_b,
            "latin": self.latin,
            "orthogonal": self.orthogonal,
        }


@dataclass(frozen=True)
class KronResult:
    """A Kronecker-constructed design with its condition report.

    ``label`` is "orthogonal Latin hypercube", "Latin hypercube" or "matrix".
    ``parts`` holds (L, U) for the augmented construction.
    """
    design: LevelMatrix
    conditions: KronConditions
    label: str
    parts: Tuple[LevelMatrix, ...] = ()


def _pairing_holds(values: np.ndarray, signs: np.ndarray) -> bool:
    for i in range(values.shape[1]):
        opposite = values[:, i][:, None] == -values[:, i][None, :]
        same = signs[:, i][:, None] == signs[:, i][None, :]
        if not np.all(same | ~opposite):
            return False
    return True


def kron_conditions(A, B: LevelMatrix, E: LevelMatrix, F) -> KronConditions:
    """Evaluate the conditions for A kron B + n2 E kron F; never raises on failing input."""
    A = _as_signs(A, "A")
    F = _as_signs(F, "F")
    signs = is_column_orthogonal(A) and is_column_orthogonal(F)
    inputs = bool(is_orthogonal(B).orthogonal and is_orthogonal(E).orthogonal
                  and B.is_latin and E.is_latin)
    cross = bool(np.all(A.T @ E.doubled == 0) or np.all(B.doubled.T @ F == 0))
    return KronConditions(signs, inputs, cross, _pairing_holds(E.doubled, A), _pairing_holds(B.doubled, F))


def _check_shapes(A: np.ndarray, B: LevelMatrix, E: LevelMatrix, F: np.ndarray):
    if A.shape != E.shape:
        raise DimensionMismatchError(f"A is {A.shape} but E is {E.shape}")
    if F.shape != B.shape:
        raise DimensionMismatchError(f"F is {F.shape} but B is {B.shape}")


def _label(conditions: KronConditions, design: LevelMatrix) -> str:
    if conditions.orthogonal:
        return "orthogonal Latin hypercube"
    if validate_latin_hypercube(design).passed:
        return "Latin hypercube"
    return "matrix"


def kron_construct(A, B: LevelMatrix, E: LevelMatrix, F) -> KronResult:
    """L = A kron B + n2 E kron F in doubled integer arithmetic.

    Args:
        A: n1 x k1 sign matrix
        B: n2 x k2 Latin hypercube
        E: n1 x k1 Latin hypercube
        F: n2 x k2 sign matrix

    Returns:
        KronResult; failing conditions downgrade the label instead of raising
    """
    A = _as_signs(A, "A")
    F = _as_signs(F, "F")
    _check_shapes(A, B, E, F)
    n2 = B.n
    doubled = np.kron(A, B.doubled) + n2 * np.kron(E.doubled, F)
    design = LevelMatrix(doubled, A.shape[0] * n2)
    conditions = kron_conditions(A, B, E, F)
    label = _label(conditions, design)
    logger.info("Kronecker construction: %dx%d %s", design.n, design.k, label)
    return KronResult(design, conditions, label)


def kron_augmented(A, B: LevelMatrix, E: LevelMatrix, F) -> KronResult:
    """(L, U) with U = -n1 A kron B + E kron F, doubling the factor count when n1 = n2."""
    A = _as_signs(A, "A")
    F = _as_signs(F, "F")
    _check_shapes(A, B, E, F)
    n1, n2 = A.shape[0], B.n
    if n1 != n2:
        raise DimensionMismatchError(f"augmentation needs n1 = n2, got {n1} and {n2}")
    base = kron_construct(A, B, E, F)
    U = LevelMatrix(-n1 * np.kron(A, B.doubled) + np.kron(E.doubled, F), n1 * n2)
    combined = LevelMatrix(np.hstack([base.design.doubled, U.doubled]), n1 * n2)
    if base.conditions.orthogonal and is_orthogonal(combined).orthogonal:
        label = "orthogonal Latin hypercube"
    else:
        label = "Latin hypercube" if validate_latin_hypercube(combined).passed else "matrix"
    return KronResult(combined, base.conditions, label, (base.design, U))


def doubling_pipeline(B: LevelMatrix, hadamard_n: np.ndarray | None = None) -> Dict[int, KronResult]:
    """OLH(2n, k), OLH(4n, 2k), OLH(8n, 4k) and OLH(16n, 8k) from an OLH(n, k).

    For each template order m the template gives A (signs, stacked twice) and
    E (an OLH(m, m/2)); F is the first k columns of an order-n Hadamard matrix.

    Args:
        B: OLH(n, k) with n a multiple of 4 (or n = 2)
        hadamard_n: Hadamard matrix of order n; built when omitted

    Returns:
        Mapping from the multiplier m to its construction result
    """
    n, k = B.n, B.k
    H = hadamard(n) if hadamard_n is None else _as_signs(hadamard_n, "hadamard_n")
    if H.shape != (n, n):
        raise DimensionMismatchError(f"Hadamard matrix must be {n}x{n}, got {H.shape}")
    if k > n:
        raise ConstructionError(f"{k} factors exceed the {n} Hadamard columns")
    F = H[:, :k]
    results = {}
    for order, template in sorted(TEMPLATES.items()):
        results[order] = kron_construct(template.stacked_signs(), B, template.latin_hypercube(), F)
    return results


def near_orth_prediction(B_summary: CorrelationSummary, E_summary: CorrelationSummary,
                         n1: int, n2: int, k1: int, k2: int) -> CorrelationPrediction:
    """Correlations of A kron B + n2 E kron F from those of B and E.

    rho_ave_sq(L) = w1 rho_ave_sq(B) + w2 rho_ave_sq(E) and
    rho_max(L) = max(w3 rho_max(B), w4 rho_max(E)), with n = n1 n2,
    w3 = (n2^2 - 1)/(n^2 - 1), w4 = n2^2 (n1^2 - 1)/(n^2 - 1),
    w1 = w3^2 (k2 - 1)/(k1 k2 - 1) and w2 = w4^2 (k1 - 1)/(k1 k2 - 1).
    """
    n = n1 * n2
    w3 = Fraction(n2 * n2 - 1, n * n - 1)
    w4 = Fraction(n2 * n2 * (n1 * n1 - 1), n * n - 1)
    pairs = k1 * k2 - 1
    w1 = w3 * w3 * Fraction(k2 - 1, pairs) if pairs else Fraction(0)
    w2 = w4 * w4 * Fraction(k1 - 1, pairs) if pairs else Fraction(0)
    rho_ave_sq = float(w1) * B_summary.rho_ave_sq + float(w2) * E_summary.rho_ave_sq
    rho_max = max(float(w3) * B_summary.rho_max, float(w4) * E_summary.rho_max)
    exact_ave = exact_max = None
    if B_summary.exact is not None and E_summary.exact is not None:
        exact_ave = w1 * B_summary.rho_ave_sq_exact + w2 * E_summary.rho_ave_sq_exact
        exact_max = max(w3 * B_summary.rho_max_exact, w4 * E_summary.rho_max_exact)
    return CorrelationPrediction(rho_max, rho_ave_sq, exact_max, exact_ave)


# s-level Kronecker designs

def bingham_kronecker(A, D0: LevelMatrix) -> LevelMatrix:
    """D = A kron D0 for a sign matrix A and an s-level design D0."""
    A = _as_signs(A, "A")
    return LevelMatrix(np.kron(A, D0.doubled), D0.levels)


def bingham_general(A, designs: Sequence[LevelMatrix]) -> LevelMatrix:
    """Block design whose (i, j) block is a_ij D_j.

    Args:
        A: n1 x k1 sign matrix
        designs: k1 designs of identical shape and level count

    Returns:
        (n1 n2) x (k1 k2) design
    """
    A = _as_signs(A, "A")
    if len(designs) != A.shape[1]:
        raise DimensionMismatchError(f"A has {A.shape[1]} columns but {len(designs)} designs were given")
    first = designs[0]
    for D in designs[1:]:
        if D.shape != first.shape or D.levels != first.levels:
            raise DimensionMismatchError("all designs must share shape and level count")
    blocks = [[A[i, j] * designs[j].doubled for j in range(A.shape[1])] for i in range(A.shape[0])]
    return LevelMatrix(np.block(blocks), first.levels)


def bingham_prediction(summaries: Sequence[CorrelationSummary], k2: int) -> CorrelationPrediction:
    """Correlations of a block design with column-orthogonal A.

    rho_max is the largest rho_max of the blocks; rho_ave_sq is
    w * mean(rho_ave_sq(D_j)) with w = (k2 - 1)/(k1 k2 - 1).
    """
    k1 = len(summaries)
    pairs = k1 * k2 - 1
    w = Fraction(k2 - 1, pairs) if pairs else Fraction(0)
    rho_max = max(s.rho_max for s in summaries)
    rho_ave_sq = float(w) * sum(s.rho_ave_sq for s in summaries) / k1
    exact_ave = exact_max = None
    if all(s.exact is not None for s in summaries):
        exact_ave = w * sum(s.rho_ave_sq_exact for s in summaries) / k1
        exact_max = max(s.rho_max_exact for s in summaries)
    return CorrelationPrediction(rho_max, rho_ave_sq, exact_max, exact_ave)


# Catalog of best known factor counts

@dataclass(frozen=True)
class OLHCatalogEntry:
    """Best known lower bound k on the factor count of an OLH with n runs."""
    n: int
    k: int
    source: str


SEQUENTIAL_SEARCH = "sequential-search"
ROTATION = "rotation"
OA_COUPLING = "oa-coupling"
RECURSIVE_FOLDOVER = "recursive-foldover"
KRONECKER = "kronecker"
BOUND_RULE = "bound-rule"

_SMALL = {4: 2, 5: 2, 7: 3, 8: 4, 9: 5, 11: 7, 12: 6, 13: 6, 15: 6, 16: 12,
          17: 6, 19: 6, 20: 6, 21: 6, 23: 6, 24: 6}

_LARGE = [
    (25, 12, OA_COUPLING), (32, 16, RECURSIVE_FOLDOVER), (33, 16, RECURSIVE_FOLDOVER),
    (48, 12, KRONECKER), (49, 24, OA_COUPLING), (64, 32, RECURSIVE_FOLDOVER),
    (65, 32, RECURSIVE_FOLDOVER), (80, 12, KRONECKER), (81, 50, OA_COUPLING),
    (96, 24, KRONECKER), (97, 24, KRONECKER), (112, 12, KRONECKER), (113, 12, KRONECKER),
    (121, 84, OA_COUPLING), (128, 64, RECURSIVE_FOLDOVER), (129, 64, RECURSIVE_FOLDOVER),
    (144, 24, KRONECKER), (145, 12, KRONECKER), (160, 24, KRONECKER), (161, 24, KRONECKER),
    (169, 84, OA_COUPLING), (176, 12, KRONECKER), (177, 12, KRONECKER), (192, 48, KRONECKER),
    (193, 48, KRONECKER), (208, 12, KRONECKER), (209, 12, KRONECKER), (224, 24, KRONECKER),
    (225, 24, KRONECKER), (240, 12, KRONECKER), (241, 12, KRONECKER), (256, 248, ROTATION),
]

CATALOG: Dict[int, OLHCatalogEntry] = {
    **{n: OLHCatalogEntry(n, k, ROTATION if n == 16 else SEQUENTIAL_SEARCH) for n, k in _SMALL.items()},
    **{n: OLHCatalogEntry(n, k, source) for n, k, source in _LARGE},
}


def bound_rule(n: int) -> int | None:
    """Largest applicable general lower bound for n = 16m + j runs, or None."""
    m, j = divmod(n, 16)
    bounds = []
    if m >= 1 and j not in (2, 6, 10, 14):
        bounds.append(6)
    if j == 11:
        bounds.append(7)
    if m >= 2 and j in (0, 1):
        bounds.append(12)
    if n // 32 >= 2 and n % 32 in (0, 1):
        bounds.append(24)
    if n // 64 >= 2 and n % 64 in (0, 1):
        bounds.append(48)
    return max(bounds) if bounds else None


def best_known_bound(n: int) -> OLHCatalogEntry | None:
    """Catalogued bound for n <= 256, else the general rule, else None."""
    if n in CATALOG:
        return CATALOG[n]
    k = bound_rule(n)
    return OLHCatalogEntry(n, k, BOUND_RULE) if k is not None else None


def catalog_entries() -> List[OLHCatalogEntry]:
    return [CATALOG[n] for n in sorted(CATALOG)]
