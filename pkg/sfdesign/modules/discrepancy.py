"""Star and L2-type discrepancies with brute-force integration oracles."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np
from numpy.polynomial.legendre import leggauss

from sfdesign.errors import BudgetExceededError, DesignError, InvalidDimensionError
from sfdesign.modules.design import DesignMatrix, JitterMode, LevelMatrix, to_unit_cube

logger = logging.getLogger(__name__)

DEFAULT_EXACT_BUDGET = 20_000_000


class DiscrepancyMethod(Enum):
    STAR_EXACT = "star-exact"
    STAR_GRID = "star-grid"
    L2_WARNOCK = "L2-warnock"
    SL2 = "SL2"
    CL2 = "CL2"
    ML2 = "ML2"
    BRUTE_FORCE = "brute-force"


class BoxFamily(Enum):
    """Box families integrated by the oracle."""
    STAR = "star"
    MODIFIED = "modified"
    CENTERED = "centered"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class DiscrepancyResult:
    """A discrepancy value.

    Attributes:
        value: Non-negative value
        method: How it was computed
        squared: True when value is the squared discrepancy
    """
    value: float
    method: DiscrepancyMethod
    squared: bool

    @property
    def root(self) -> float:
        """The discrepancy itself, whatever the stored convention."""
        return math.sqrt(self.value) if self.squared else self.value

    @property
    def square(self) -> float:
        return self.value if self.squared else self.value ** 2


def as_points(P) -> np.ndarray:
    """Unit-cube coordinates; level matrices are placed at cell midpoints."""
    if isinstance(P, LevelMatrix):
        return to_unit_cube(P, JitterMode.MIDPOINT).values
    if isinstance(P, DesignMatrix):
        return P.values
    X = np.asarray(P, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2 or X.shape[0] < 1:
        raise InvalidDimensionError(f"expected a non-empty n x s matrix, got shape {X.shape}")
    if X.min() < 0.0 or X.max() >= 1.0:
        raise DesignError("points must lie in [0, 1)")
    return X


def star_discrepancy_exact(P, budget: int = DEFAULT_EXACT_BUDGET) -> DiscrepancyResult:
    """Exact star discrepancy sup |#(P in [0, x))/n - vol([0, x))|.

    Critical corners are products of the distinct point coordinates and 1.
    At each corner both the open count (points strictly below, the box itself)
    and the closed count (the limit of boxes shrinking onto the corner) are
    compared with the volume.

    Raises:
        BudgetExceededError: n times the number of corners exceeds the budget
    """
    X = as_points(P)
    n, s = X.shape
    grids = [np.union1d(X[:, l], [1.0]) for l in range(s)]
    shape = tuple(len(g) for g in grids)
    corners = int(np.prod(shape, dtype=np.int64))
    if n * corners > budget:
        raise BudgetExceededError(f"{n} points x {corners} corners exceed the budget of {budget}")
    index = tuple(np.searchsorted(grids[l], X[:, l]) for l in range(s))
    closed = np.zeros(shape, dtype=np.int64)
    np.add.at(closed, index, 1)
    for axis in range(s):
        closed = np.cumsum(closed, axis=axis)
    open_ = np.pad(closed, [(1, 0)] * s)[tuple(slice(0, m) for m in shape)]
    volume = grids[0]
    for g in grids[1:]:
        volume = np.multiply.outer(volume, g)
    value = max(float(np.max(volume - open_ / n)), float(np.max(closed / n - volume)))
    return DiscrepancyResult(value, DiscrepancyMethod.STAR_EXACT, False)


def star_discrepancy_grid(P, resolution: int, budget: int = DEFAULT_EXACT_BUDGET) -> DiscrepancyResult:
    """Largest local discrepancy over open and closed anchored boxes with corners on {0, 1/r, ..., 1}^s.

    A lower bound for the exact star discrepancy.
    """
    X = as_points(P)
    n, s = X.shape
    if resolution < 1:
        raise InvalidDimensionError(f"resolution must be positive, got {resolution}")
    if (resolution + 1) ** s > budget:
        raise BudgetExceededError(f"{resolution + 1}^{s} grid corners exceed the budget of {budget}")
    axis = np.arange(resolution + 1) / resolution

    def corner_counts(side: str) -> np.ndarray:
        counts = np.zeros((resolution + 1,) * s, dtype=np.int64)
        np.add.at(counts, tuple(np.searchsorted(axis, X[:, l], side=side) for l in range(s)), 1)
        for a in range(s):
            counts = np.cumsum(counts, axis=a)
        return counts

    volume = axis
    for _ in range(s - 1):
        volume = np.multiply.outer(volume, axis)
    # side="right" counts x < corner, side="left" counts x <= corner
    open_ = corner_counts("right")
    closed = corner_counts("left")
    value = max(float(np.max(volume - open_ / n)), float(np.max(closed / n - volume)))
    return DiscrepancyResult(value, DiscrepancyMethod.STAR_GRID, False)


def _clamp(value: float) -> float:
    return max(float(value), 0.0)


def l2_discrepancy(P) -> DiscrepancyResult:
    """Squared L2 star discrepancy (Warnock's formula).

    3^-s - (2^(1-s)/n) sum_i prod_l (1 - x_il^2)
         + (1/n^2) sum_i sum_j prod_l (1 - max(x_il, x_jl))
    """
    X = as_points(P)
    n, s = X.shape
    single = np.prod(1.0 - X ** 2, axis=1).sum()
    pair = np.prod(1.0 - np.maximum(X[:, None, :], X[None, :, :]), axis=2).sum()
    value = 3.0 ** -s - 2.0 ** (1 - s) / n * single + pair / n ** 2
    return DiscrepancyResult(_clamp(value), DiscrepancyMethod.L2_WARNOCK, True)


def centered_l2(P) -> DiscrepancyResult:
    """Squared centered L2 discrepancy."""
    X = as_points(P)
    n, s = X.shape
    z = np.abs(X - 0.5)
    single = np.prod(1.0 + 0.5 * z - 0.5 * z ** 2, axis=1).sum()
    pair = np.prod(1.0 + 0.5 * z[:, None, :] + 0.5 * z[None, :, :]
                   - 0.5 * np.abs(X[:, None, :] - X[None, :, :]), axis=2).sum()
    value = (13.0 / 12.0) ** s - 2.0 / n * single + pair / n ** 2
    return DiscrepancyResult(_clamp(value), DiscrepancyMethod.CL2, True)


def symmetric_l2(P) -> DiscrepancyResult:
    """Squared symmetric L2 discrepancy."""
    X = as_points(P)
    n, s = X.shape
    single = np.prod(1.0 + 2.0 * X - 2.0 * X ** 2, axis=1).sum()
    pair = np.prod(1.0 - np.abs(X[:, None, :] - X[None, :, :]), axis=2).sum()
    value = (4.0 / 3.0) ** s - 2.0 / n * single + 2.0 ** s / n ** 2 * pair
    return DiscrepancyResult(_clamp(value), DiscrepancyMethod.SL2, True)


def modified_l2(P) -> DiscrepancyResult:
    """Squared modified L2 discrepancy."""
    X = as_points(P)
    n, s = X.shape
    single = np.prod(3.0 - X ** 2, axis=1).sum()
    pair = np.prod(2.0 - np.maximum(X[:, None, :], X[None, :, :]), axis=2).sum()
    value = (4.0 / 3.0) ** s - 2.0 ** (1 - s) / n * single + pair / n ** 2
    return DiscrepancyResult(_clamp(value), DiscrepancyMethod.ML2, True)


MEASURES = {
    "star": star_discrepancy_exact,
    "l2": l2_discrepancy,
    "cl2": centered_l2,
    "sl2": symmetric_l2,
    "ml2": modified_l2,
}


def discrepancy(P, measure: str, **kwargs) -> DiscrepancyResult:
    """Evaluate a named measure: star, l2, cl2, sl2 or ml2."""
    try:
        function = MEASURES[measure.lower()]
    except KeyError:
        raise DesignError(f"unknown discrepancy measure {measure!r}; choose from {', '.join(MEASURES)}")
    return function(P, **kwargs)


# Brute-force oracle

_NODES, _WEIGHTS = leggauss(2)


def _membership(family: BoxFamily, p: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Per-coordinate contribution w(p, x) of a point with coordinate p at box corner x."""
    below = p[:, None] < x[None, :]
    if family is BoxFamily.CENTERED:
        return np.where(x[None, :] < 0.5, below, ~below).astype(float)
    if family is BoxFamily.SYMMETRIC:
        return np.where(below, 1.0, -1.0)
    return below.astype(float)


def _volume(family: BoxFamily, x: np.ndarray) -> np.ndarray:
    if family is BoxFamily.CENTERED:
        return np.where(x < 0.5, x, 1.0 - x)
    if family is BoxFamily.SYMMETRIC:
        return 2.0 * x - 1.0
    return x


def _subset_integral(X: np.ndarray, family: BoxFamily, budget: int) -> float:
    n, s = X.shape
    factors, first, second, lengths = [], [], [], []
    for l in range(s):
        breaks = np.union1d(X[:, l], [0.0, 1.0])
        if family is BoxFamily.CENTERED:
            breaks = np.union1d(breaks, [0.5])
        lo, hi = breaks[:-1], breaks[1:]
        half = (hi - lo) / 2.0
        mid = (hi + lo) / 2.0
        nodes = mid[:, None] + half[:, None] * _NODES[None, :]
        v = _volume(family, nodes)
        factors.append(_membership(family, X[:, l], mid))
        first.append((v * _WEIGHTS).sum(axis=1) * half)
        second.append((v ** 2 * _WEIGHTS).sum(axis=1) * half)
        lengths.append(hi - lo)
    cells = int(np.prod([len(f) for f in lengths], dtype=np.int64))
    if n * cells > budget:
        raise BudgetExceededError(f"{n} points x {cells} cells exceed the budget of {budget}")
    count = np.ones((n,) + (1,) * s)
    for l, W in enumerate(factors):
        shape = [n] + [1] * s
        shape[l + 1] = W.shape[1]
        count = count * W.reshape(shape)
    c = count.mean(axis=0)

    def outer(parts):
        out = parts[0]
        for part in parts[1:]:
            out = np.multiply.outer(out, part)
        return out

    return float(np.sum(c ** 2 * outer(lengths) - 2.0 * c * outer(first) + outer(second)))


def l2_family_oracle(P, family: BoxFamily, budget: int = DEFAULT_EXACT_BUDGET) -> DiscrepancyResult:
    """Squared L2 discrepancy by exact piecewise integration over a box family.

    The local discrepancy is constant in the point counts on every cell cut by
    the point coordinates (and 1/2 for centered boxes), so each cell is
    integrated in closed form. STAR integrates over the full dimension; the
    other families sum over every non-empty coordinate projection.
    """
    X = as_points(P)
    s = X.shape[1]
    if family is BoxFamily.STAR:
        subsets = [tuple(range(s))]
    else:
        subsets = [u for size in range(1, s + 1) for u in combinations(range(s), size)]
    total = sum(_subset_integral(X[:, list(u)], family, budget) for u in subsets)
    logger.debug("Oracle %s over %d projections: %.12g", family.value, len(subsets), total)
    return DiscrepancyResult(_clamp(total), DiscrepancyMethod.BRUTE_FORCE, True)
