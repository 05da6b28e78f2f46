"""Column correlations, orthogonality and second-order orthogonality checks."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from sfdesign.errors import ZeroVarianceError
from sfdesign.modules.design import DesignMatrix, LevelMatrix, validate_latin_hypercube

logger = logging.getLogger(__name__)

FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class CorrelationSummary:
    """Correlation matrix of a design and its two scalar summaries.

    Attributes:
        R: k x k correlation matrix with unit diagonal
        rho_max: Largest absolute off-diagonal correlation
        rho_ave_sq: Mean squared off-diagonal correlation over the k(k-1)/2 pairs
        exact: Off-diagonal entries as Fractions when every column has the same
            integer sum of squares (all Latin hypercubes), else None
    """
    R: np.ndarray
    rho_max: float
    rho_ave_sq: float
    exact: Tuple[Tuple[Fraction, ...], ...] | None = None

    @property
    def k(self) -> int:
        return self.R.shape[0]

    @property
    def rho_ave(self) -> float:
        """Root mean square correlation, the figure usually quoted as rho_ave."""
        return math.sqrt(self.rho_ave_sq)

    @property
    def rho_ave_sq_exact(self) -> Fraction | None:
        if self.exact is None:
            return None
        k = self.k
        if k < 2:
            return Fraction(0)
        total = sum(self.exact[i][j] ** 2 for i in range(k) for j in range(i + 1, k))
        return total / (k * (k - 1) // 2)

    @property
    def rho_max_exact(self) -> Fraction | None:
        if self.exact is None:
            return None
        k = self.k
        return max((abs(self.exact[i][j]) for i in range(k) for j in range(i + 1, k)), default=Fraction(0))


def _summarize(R: np.ndarray, exact=None) -> CorrelationSummary:
    k = R.shape[0]
    upper = R[np.triu_indices(k, 1)]
    rho_max = float(np.abs(upper).max()) if upper.size else 0.0
    rho_ave_sq = float(np.mean(upper ** 2)) if upper.size else 0.0
    R.setflags(write=False)
    return CorrelationSummary(R, rho_max, rho_ave_sq, exact)


def _integer_cross(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """n * X'Y - colsum(X) colsum(Y)' in exact integer arithmetic."""
    n = X.shape[0]
    X = X.astype(object)
    Y = Y.astype(object)
    return n * X.T.dot(Y) - np.outer(X.sum(axis=0), Y.sum(axis=0))


def _integer_variance(X: np.ndarray) -> list:
    """Diagonal of _integer_cross(X, X) without forming the full product."""
    n = X.shape[0]
    X = X.astype(object)
    return [n * (X[:, j] * X[:, j]).sum() - X[:, j].sum() ** 2 for j in range(X.shape[1])]


def correlation_matrix(D) -> CorrelationSummary:
    """Pearson correlations between the columns of a design.

    LevelMatrix numerators are computed exactly on doubled integer levels; when
    all columns share a sum of squares the entries are also reported as Fractions.

    Args:
        D: LevelMatrix, DesignMatrix or array

    Returns:
        CorrelationSummary

    Raises:
        ZeroVarianceError: A column is constant
    """
    if isinstance(D, LevelMatrix):
        C = _integer_cross(D.doubled, D.doubled)
        diag = [C[j, j] for j in range(D.k)]
        for j, value in enumerate(diag):
            if value == 0:
                raise ZeroVarianceError(f"column {j} is constant")
        exact = None
        if len(set(diag)) == 1:
            exact = tuple(tuple(Fraction(int(C[i, j]), int(diag[0])) for j in range(D.k))
                          for i in range(D.k))
            R = np.array([[float(x) for x in row] for row in exact])
        else:
            R = np.array([[int(C[i, j]) / math.sqrt(int(diag[i]) * int(diag[j]))
                           for j in range(D.k)] for i in range(D.k)])
            np.fill_diagonal(R, 1.0)
        return _summarize(R, exact)
    X = D.values if isinstance(D, DesignMatrix) else np.asarray(D, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    centered = X - X.mean(axis=0)
    ss = np.einsum("ij,ij->j", centered, centered)
    zero = np.nonzero(ss <= FLOAT_TOL * max(1.0, float(ss.max(initial=0.0))))[0]
    if zero.size:
        raise ZeroVarianceError(f"column {zero[0]} is constant")
    R = centered.T @ centered / np.sqrt(np.outer(ss, ss))
    R = np.clip(R, -1.0, 1.0)
    np.fill_diagonal(R, 1.0)
    return _summarize(R)


@dataclass(frozen=True)
class OrthogonalityReport:
    """Whether a design is balanced and column-orthogonal."""
    orthogonal: bool
    balanced: bool
    max_deviation: float

    def __bool__(self) -> bool:
        return self.orthogonal


def is_orthogonal(D) -> OrthogonalityReport:
    """Check balance and R = I.

    LevelMatrix inputs are checked exactly; real-valued inputs have no level
    structure to balance and are compared to the identity within 1e-12.
    """
    balanced = validate_latin_hypercube(D).passed if isinstance(D, LevelMatrix) else True
    try:
        summary = correlation_matrix(D)
    except ZeroVarianceError:
        return OrthogonalityReport(False, balanced, 1.0)
    if summary.exact is not None:
        zero = summary.rho_max_exact == 0
    elif isinstance(D, LevelMatrix):
        C = _integer_cross(D.doubled, D.doubled)
        zero = all(C[i, j] == 0 for i in range(D.k) for j in range(i + 1, D.k))
    else:
        zero = summary.rho_max <= FLOAT_TOL
    return OrthogonalityReport(bool(balanced and zero), balanced, summary.rho_max)


def interaction_pairs(k: int) -> list:
    """Column index pairs (i, j), i <= j, in lexicographic order."""
    return [(i, j) for i in range(k) for j in range(i, k)]


def interaction_columns(D) -> np.ndarray:
    """All k(k+1)/2 element-wise products d_i * d_j, i <= j, lexicographic in (i, j)."""
    if isinstance(D, LevelMatrix):
        X = D.to_levels()
    elif isinstance(D, DesignMatrix):
        X = D.values
    else:
        X = np.asarray(D, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
    pairs = interaction_pairs(X.shape[1])
    return np.column_stack([X[:, i] * X[:, j] for i, j in pairs])


@dataclass(frozen=True)
class SecondOrderReport:
    """First- and second-order orthogonality outcome.

    Attributes:
        first_order: Column correlation matrix is the identity
        second_order: Additionally every column is uncorrelated with every
            interaction column (constant interaction columns count as uncorrelated)
        max_abs_corr: Largest absolute correlation among the checked pairs
    """
    first_order: bool
    second_order: bool
    max_abs_corr: float


def second_order_check(D) -> SecondOrderReport:
    """Check R(D) = I and zero correlation between D and its interaction columns."""
    first = is_orthogonal(D)
    if isinstance(D, LevelMatrix):
        X = D.doubled
        P = np.column_stack([X[:, i] * X[:, j] for i, j in interaction_pairs(D.k)])
        cross = _integer_cross(X, P)
        var_x = _integer_variance(X)
        var_p = _integer_variance(P)
        zero = True
        largest = first.max_deviation
        for a in range(X.shape[1]):
            for b in range(P.shape[1]):
                if var_p[b] == 0 or cross[a, b] == 0:
                    continue
                zero = False
                largest = max(largest, abs(int(cross[a, b])) / math.sqrt(int(var_x[a]) * int(var_p[b])))
        second = bool(first.orthogonal and zero)
        return SecondOrderReport(first.orthogonal, second, min(largest, 1.0))
    X = D.values if isinstance(D, DesignMatrix) else np.asarray(D, dtype=float)
    P = interaction_columns(X)
    Xc = X - X.mean(axis=0)
    Pc = P - P.mean(axis=0)
    sx = np.sqrt(np.einsum("ij,ij->j", Xc, Xc))
    sp = np.sqrt(np.einsum("ij,ij->j", Pc, Pc))
    live = sp > FLOAT_TOL * max(1.0, float(sp.max(initial=0.0)))
    corr = np.zeros((X.shape[1], P.shape[1]))
    corr[:, live] = (Xc.T @ Pc[:, live]) / np.outer(sx, sp[live])
    largest = max(first.max_deviation, float(np.abs(corr).max(initial=0.0)))
    second = bool(first.orthogonal and np.all(np.abs(corr) <= FLOAT_TOL))
    return SecondOrderReport(first.orthogonal, second, largest)
