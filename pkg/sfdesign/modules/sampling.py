"""Mean estimation over designs and empirical variance comparisons of sampling schemes."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from sfdesign.errors import (
    BudgetExceededError,
    ConstructionError,
    DesignError,
    DimensionMismatchError,
    InvalidDimensionError,
)
from sfdesign.modules.design import DesignMatrix, JitterMode, random_latin_hypercube, to_unit_cube
from sfdesign.modules.oa import OrthogonalArray, oa_based_lh

logger = logging.getLogger(__name__)

MIN_REPLICATIONS = 100
MIN_QUADRATURE_POINTS = 64
QUADRATURE_BUDGET = 20_000_000


@dataclass(frozen=True)
class TestFunction:
    """Deterministic function on [0, 1)^k with known mean where available.

    Attributes:
        name: Identifier
        arity: Number of inputs k
        evaluate: Maps an n x k array to n values
        mean: Exact integral over the unit cube, if known
    """
    __test__ = False

    name: str
    arity: int
    evaluate: Callable[[np.ndarray], np.ndarray]
    mean: float | None = None

    def __call__(self, X) -> np.ndarray:
        X = X.values if isinstance(X, DesignMatrix) else np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.arity:
            raise DimensionMismatchError(f"{self.name} takes {self.arity} inputs, got {X.shape[1]}")
        return np.asarray(self.evaluate(X), dtype=float) * np.ones(X.shape[0])


def _constant(k: int, value: float = 1.0) -> TestFunction:
    return TestFunction("constant", k, lambda X: np.full(X.shape[0], value), value)


def _additive_linear(k: int) -> TestFunction:
    return TestFunction("additive_linear", k, lambda X: X.sum(axis=1), k / 2.0)


def _additive_exp(k: int) -> TestFunction:
    return TestFunction("additive_exp", k, lambda X: np.exp(X).sum(axis=1), k * (math.e - 1.0))


def _interaction(k: int) -> TestFunction:
    if k < 2:
        raise InvalidDimensionError("the interaction function needs at least 2 inputs")
    return TestFunction("interaction", k, lambda X: (X[:, 0] - 0.5) * (X[:, 1] - 0.5), 0.0)


def _nonmonotone(k: int) -> TestFunction:
    return TestFunction("nonmonotone", k, lambda X: np.sin(2.0 * np.pi * X).sum(axis=1), 0.0)


def _product(k: int) -> TestFunction:
    return TestFunction("product", k, lambda X: X.prod(axis=1), 0.5 ** k)


TEST_FUNCTIONS: Dict[str, Callable[[int], TestFunction]] = {
    "constant": _constant,
    "additive_linear": _additive_linear,
    "additive_exp": _additive_exp,
    "interaction": _interaction,
    "nonmonotone": _nonmonotone,
    "product": _product,
}


def test_function(name: str, k: int) -> TestFunction:
    """Built-in test function by name for k inputs."""
    try:
        return TEST_FUNCTIONS[name](k)
    except KeyError:
        raise DesignError(f"unknown test function {name!r}; choose from {', '.join(TEST_FUNCTIONS)}")


test_function.__test__ = False


class SchemeKind(Enum):
    SRS = "srs"
    LHS = "lhs"
    OALHS = "oalhs"


@dataclass(frozen=True)
class SamplingScheme:
    """How one realization of n points is drawn.

    Attributes:
        kind: Simple random, Latin hypercube or OA-based Latin hypercube sampling
        oa: Orthogonal array for OALHS; its first k columns are used
        jitter: Placement within cells for LHS and OALHS
        quantile: Optional inverse marginal CDF applied to every coordinate
    """
    kind: SchemeKind = SchemeKind.LHS
    oa: OrthogonalArray | None = None
    jitter: JitterMode = JitterMode.RANDOM
    quantile: Callable[[np.ndarray], np.ndarray] | None = None

    def check(self, n: int, k: int):
        if self.kind is SchemeKind.OALHS:
            if self.oa is None:
                raise ConstructionError("OA-based sampling needs an orthogonal array")
            if self.oa.n != n or self.oa.k < k:
                raise ConstructionError(f"{self.oa!r} cannot supply {n} runs for {k} factors")

    def draw(self, n: int, k: int, rng: np.random.Generator) -> np.ndarray:
        """One realization as an n x k array."""
        self.check(n, k)
        if self.kind is SchemeKind.SRS:
            X = rng.random((n, k))
        elif self.kind is SchemeKind.LHS:
            X = to_unit_cube(random_latin_hypercube(n, k, rng), self.jitter, rng).values
        else:
            L = oa_based_lh(self.oa.columns(range(k)), rng)
            X = to_unit_cube(L, self.jitter, rng).values
        return self.quantile(X) if self.quantile is not None else X


def estimate_mean(f: TestFunction, D) -> float:
    """Sample mean (1/n) sum_i f(x_i)."""
    return float(np.mean(f(D)))


@dataclass(frozen=True)
class VarianceEstimate:
    """Variance of the mean estimator across replications.

    Attributes:
        variance: Sample variance of the replicated means
        stderr: Jackknife standard error of that variance
        means: The replicated means, in replication order
    """
    variance: float
    stderr: float
    means: Tuple[float, ...]

    @property
    def replications(self) -> int:
        return len(self.means)


def jackknife_variance(values) -> Tuple[float, float]:
    """Sample variance and its leave-one-out jackknife standard error."""
    y = np.asarray(values, dtype=float)
    R = y.size
    if R < 3:
        raise InvalidDimensionError(f"need at least 3 values, got {R}")
    dev2 = (y - y.mean()) ** 2
    S = dev2.sum()
    leave_one_out = (S - R / (R - 1) * dev2) / (R - 2)
    stderr = math.sqrt((R - 1) / R * np.sum((leave_one_out - leave_one_out.mean()) ** 2))
    return float(S / (R - 1)), stderr


def variance_experiment(f: TestFunction, n: int, k: int, scheme: SamplingScheme,
                        replications: int = MIN_REPLICATIONS, seed: int = 0,
                        workers: int = 1) -> VarianceEstimate:
    """Replicate the mean estimator under a sampling scheme.

    Each replication draws from its own child of SeedSequence(seed), so the
    result does not depend on the number of workers.

    Raises:
        InvalidDimensionError: Fewer than 100 replications
        ConstructionError: The scheme cannot produce n x k designs
    """
    if replications < MIN_REPLICATIONS:
        raise InvalidDimensionError(f"need at least {MIN_REPLICATIONS} replications, got {replications}")
    if f.arity != k:
        raise DimensionMismatchError(f"{f.name} takes {f.arity} inputs, got k={k}")
    scheme.check(n, k)
    children = np.random.SeedSequence(seed).spawn(replications)

    def replicate(child) -> float:
        return estimate_mean(f, scheme.draw(n, k, np.random.default_rng(child)))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            means = list(pool.map(replicate, children))
    else:
        means = [replicate(child) for child in children]
    variance, stderr = jackknife_variance(means)
    logger.info("%s %s n=%d: variance %.6g (se %.2g) over %d replications",
                f.name, scheme.kind.value, n, variance, stderr, replications)
    return VarianceEstimate(variance, stderr, tuple(means))


def _quadrature_grid(f: TestFunction, points: int):
    if points < MIN_QUADRATURE_POINTS:
        raise InvalidDimensionError(f"need at least {MIN_QUADRATURE_POINTS} quadrature points, got {points}")
    k = f.arity
    if points ** k > QUADRATURE_BUDGET:
        raise BudgetExceededError(f"{points}^{k} quadrature nodes exceed the budget of {QUADRATURE_BUDGET}")
    nodes, weights = leggauss(points)
    nodes = (nodes + 1.0) / 2.0
    weights = weights / 2.0
    mesh = np.meshgrid(*([nodes] * k), indexing="ij")
    values = f(np.column_stack([m.ravel() for m in mesh])).reshape((points,) * k)
    return values, weights


def main_effect_variance(f: TestFunction, j: int, quadrature_points: int = MIN_QUADRATURE_POINTS) -> float:
    """Variance of the main effect E[f | x_j] - mu by tensor Gauss-Legendre quadrature."""
    if not 0 <= j < f.arity:
        raise InvalidDimensionError(f"input index {j} outside 0..{f.arity - 1}")
    values, weights = _quadrature_grid(f, quadrature_points)
    effect = np.moveaxis(values, j, 0)
    for _ in range(f.arity - 1):
        effect = effect @ weights
    mu = weights @ effect
    return float(max(weights @ (effect - mu) ** 2, 0.0))


def total_variance(f: TestFunction, quadrature_points: int = MIN_QUADRATURE_POINTS) -> float:
    """Var[f(x)] for x uniform on the unit cube."""
    values, weights = _quadrature_grid(f, quadrature_points)
    w = weights
    for _ in range(f.arity - 1):
        w = np.multiply.outer(w, weights)
    mu = np.sum(w * values)
    return float(max(np.sum(w * (values - mu) ** 2), 0.0))
