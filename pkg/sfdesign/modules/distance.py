"""Inter-point distance criteria: maximin, minimax, Audze-Eglais and phi_q."""

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist, pdist

from sfdesign.errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InfiniteEnergyError,
    InvalidDimensionError,
)
from sfdesign.modules.design import DesignMatrix, LevelMatrix

logger = logging.getLogger(__name__)

DEFAULT_Q = 15
PHI_Q_PRESETS = {"small": 5, "moderate": 20, "large": 50}
DEFAULT_GRID_BUDGET = 2_000_000
GROUPING_RTOL = 1e-9


@dataclass(frozen=True)
class DistanceOrder:
    """Exponent t of the distance; math.inf selects the Chebyshev distance."""
    t: float = 2.0

    def __post_init__(self):
        if not self.t > 0:
            raise InvalidDimensionError(f"distance exponent must be positive, got {self.t}")
        object.__setattr__(self, "t", float(self.t))

    @classmethod
    def parse(cls, text: str) -> "DistanceOrder":
        """Parse '1', '2', '0.5' or 'inf'."""
        return cls(math.inf if text.strip().lower() in ("inf", "infinity", "max") else float(text))

    @property
    def is_chebyshev(self) -> bool:
        return math.isinf(self.t)

    def __str__(self) -> str:
        return "inf" if self.is_chebyshev else f"{self.t:g}"


RECTANGULAR = DistanceOrder(1.0)
EUCLIDEAN = DistanceOrder(2.0)
CHEBYSHEV = DistanceOrder(math.inf)


def _order(ord) -> DistanceOrder:
    return ord if isinstance(ord, DistanceOrder) else DistanceOrder(ord)


def _points(D) -> np.ndarray:
    if isinstance(D, LevelMatrix):
        return D.to_levels()
    if isinstance(D, DesignMatrix):
        return D.values
    arr = np.asarray(D, dtype=float)
    return arr.reshape(-1, 1) if arr.ndim == 1 else arr


def _combine(diffs: np.ndarray, order: DistanceOrder) -> np.ndarray:
    if order.is_chebyshev:
        return diffs.max(axis=-1)
    return (diffs ** order.t).sum(axis=-1) ** (1.0 / order.t)


def interpoint_distance(u, v, ord=EUCLIDEAN) -> float:
    """Distance (sum |u_j - v_j|^t)^(1/t) between two points.

    Args:
        u: First point
        v: Second point
        ord: DistanceOrder or exponent t

    Returns:
        The distance; the Chebyshev order gives max |u_j - v_j|
    """
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape:
        raise DimensionMismatchError(f"points have dimensions {u.size} and {v.size}")
    return float(_combine(np.abs(u - v), _order(ord)))


def pairwise_distances(D, ord=EUCLIDEAN) -> np.ndarray:
    """Condensed vector of all C(n, 2) distances in pdist order."""
    X = _points(D)
    order = _order(ord)
    if order.is_chebyshev:
        return pdist(X, metric="chebyshev")
    if order.t >= 1.0:
        return pdist(X, metric="minkowski", p=order.t)
    i, j = np.triu_indices(X.shape[0], 1)
    return _combine(np.abs(X[i] - X[j]), order)


def _require_pairs(D) -> np.ndarray:
    X = _points(D)
    if X.shape[0] < 2:
        raise InvalidDimensionError(f"need at least 2 points, got {X.shape[0]}")
    return X


def min_interpoint_distance(D, ord=EUCLIDEAN) -> float:
    """Smallest distance over all pairs of runs (the maximin criterion)."""
    X = _require_pairs(D)
    return float(pairwise_distances(X, ord).min())


def minimax_cover_radius(D, ord=EUCLIDEAN, resolution: int = 11,
                         budget: int = DEFAULT_GRID_BUDGET) -> float:
    """Grid approximation of the minimax (coverage) radius.

    Evaluates the distance to the nearest design point at every node of the
    regular grid {0, 1/(r-1), ..., 1}^k and returns the largest. This is a lower
    bound on the true cover radius that tightens as the resolution grows.

    Args:
        D: Design in the unit cube
        ord: DistanceOrder or exponent t
        resolution: Grid nodes per axis, at least 2
        budget: Largest number of grid nodes evaluated

    Returns:
        Approximate cover radius

    Raises:
        BudgetExceededError: resolution^k exceeds the budget
    """
    X = _points(D)
    order = _order(ord)
    if resolution < 2:
        raise InvalidDimensionError(f"resolution must be at least 2, got {resolution}")
    n, k = X.shape
    total = resolution ** k
    if total > budget:
        raise BudgetExceededError(f"{resolution}^{k} grid nodes exceed the budget of {budget}")
    axis = np.linspace(0.0, 1.0, resolution)
    chunk = max(1, min(total, 4_000_000 // max(n, 1)))
    radius = 0.0
    for start in range(0, total, chunk):
        index = np.unravel_index(np.arange(start, min(start + chunk, total)), (resolution,) * k)
        nodes = np.column_stack([axis[i] for i in index])
        if order.is_chebyshev:
            dist = cdist(nodes, X, metric="chebyshev")
        elif order.t >= 1.0:
            dist = cdist(nodes, X, metric="minkowski", p=order.t)
        else:
            dist = _combine(np.abs(nodes[:, None, :] - X[None, :, :]), order)
        radius = max(radius, float(dist.min(axis=1).max()))
    return radius


def audze_eglais(D, ord=EUCLIDEAN) -> float:
    """Potential energy sum over pairs of 1 / d^2."""
    X = _require_pairs(D)
    dist = pairwise_distances(X, ord)
    if np.any(dist == 0.0):
        raise InfiniteEnergyError("design has coincident points")
    return float(np.sum(1.0 / dist ** 2))


@dataclass(frozen=True)
class DistanceProfile:
    """Distinct inter-point distances with their multiplicities.

    Attributes:
        distances: Strictly increasing distinct distances d_1 < ... < d_m
        multiplicities: Number of pairs J_i at each distance
        exact: True when ties were grouped on exact integer keys
    """
    distances: Tuple[float, ...]
    multiplicities: Tuple[int, ...]
    exact: bool = True

    @property
    def m(self) -> int:
        return len(self.distances)

    @property
    def pairs(self) -> int:
        return sum(self.multiplicities)

    def as_sequence(self) -> list:
        """Interleaved (d_1, J_1, d_2, J_2, ...)."""
        out = []
        for d, j in zip(self.distances, self.multiplicities):
            out.extend([d, j])
        return out


def _exact_keys(L: LevelMatrix, order: DistanceOrder) -> np.ndarray | None:
    if not (order.is_chebyshev or order.t in (1.0, 2.0)):
        return None
    i, j = np.triu_indices(L.n, 1)
    diffs = np.abs(L.doubled[i] - L.doubled[j])
    if order.is_chebyshev:
        return diffs.max(axis=1)
    return (diffs ** int(order.t)).sum(axis=1)


def distance_profile(D, ord=EUCLIDEAN) -> DistanceProfile:
    """Sorted distinct distances and multiplicities of a design.

    LevelMatrix inputs with t in {1, 2, inf} are grouped on integer t-th power
    sums of doubled levels, so ties are exact. Other inputs are grouped with a
    relative tolerance of 1e-9 and the profile is flagged inexact.
    """
    X = _require_pairs(D)
    order = _order(ord)
    keys = _exact_keys(D, order) if isinstance(D, LevelMatrix) else None
    if keys is not None:
        values, counts = np.unique(keys, return_counts=True)
        if order.is_chebyshev:
            distances = values / 2.0
        else:
            distances = values.astype(float) ** (1.0 / order.t) / 2.0
        return DistanceProfile(tuple(float(d) for d in distances), tuple(int(c) for c in counts), True)
    dist = np.sort(pairwise_distances(X, order))
    distances, counts = [], []
    for d in dist:
        if distances and d - distances[-1] <= GROUPING_RTOL * max(abs(distances[-1]), 1e-300):
            counts[-1] += 1
        else:
            distances.append(float(d))
            counts.append(1)
    return DistanceProfile(tuple(distances), tuple(counts), False)


def phi_q_from_profile(profile: DistanceProfile, q: float = DEFAULT_Q) -> float:
    """(sum_i J_i / d_i^q)^(1/q), evaluated relative to d_1 to avoid overflow."""
    if q <= 0:
        raise InvalidDimensionError(f"q must be positive, got {q}")
    d = np.asarray(profile.distances, dtype=float)
    J = np.asarray(profile.multiplicities, dtype=float)
    dmin = d[0]
    if dmin == 0.0:
        raise InfiniteEnergyError("design has coincident points")
    return float(np.sum(J * (dmin / d) ** q) ** (1.0 / q) / dmin)


def phi_q(D, q: float = DEFAULT_Q, ord=EUCLIDEAN) -> float:
    """Morris-Mitchell phi_q criterion; smaller is better."""
    return phi_q_from_profile(distance_profile(D, ord), q)


def phi_q_pairwise(D, q: float = DEFAULT_Q, ord=EUCLIDEAN) -> float:
    """phi_q as a direct sum over pairs (reference evaluation)."""
    dist = pairwise_distances(_require_pairs(D), ord)
    if np.any(dist == 0.0):
        raise InfiniteEnergyError("design has coincident points")
    dmin = dist.min()
    return float(np.sum((dmin / dist) ** q) ** (1.0 / q) / dmin)


def maximin_compare(first: DistanceProfile, second: DistanceProfile) -> int:
    """Sequential maximin comparison of two profiles.

    Walks (d_1, J_1, d_2, J_2, ...): a larger distance wins, then a smaller
    multiplicity wins.

    Returns:
        -1 if the first design is better, 1 if the second is, 0 on a tie
    """
    for d1, j1, d2, j2 in zip(first.distances, first.multiplicities,
                              second.distances, second.multiplicities):
        if not math.isclose(d1, d2, rel_tol=GROUPING_RTOL):
            return -1 if d1 > d2 else 1
        if j1 != j2:
            return -1 if j1 < j2 else 1
    return 0


def dmin2(D, ord=EUCLIDEAN) -> float:
    """Smallest distance over all point pairs in all two-dimensional projections."""
    X = _require_pairs(D)
    if X.shape[1] < 2:
        raise InvalidDimensionError(f"need at least 2 factors, got {X.shape[1]}")
    return min(float(pairwise_distances(X[:, [h, l]], ord).min())
               for h, l in combinations(range(X.shape[1]), 2))
