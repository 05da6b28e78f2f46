"""Stochastic design optimizers: simulated annealing, columnwise-pairwise exchange, threshold accepting."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Tuple

import numpy as np

from sfdesign.config import SearchParams
from sfdesign.errors import DesignError, InfiniteEnergyError, InvalidDimensionError
from sfdesign.modules.correlation import correlation_matrix
from sfdesign.modules.design import LevelMatrix, level_grid
from sfdesign.modules.discrepancy import discrepancy
from sfdesign.modules.distance import DEFAULT_Q, audze_eglais, dmin2, phi_q

logger = logging.getLogger(__name__)

NEIGHBOUR_SAMPLES = 100
IMPROVEMENT_RTOL = 1e-12


class ObjectiveName(Enum):
    PHI_Q = "phi_q"
    RHO_AVE_SQ = "rho_ave_sq"
    RHO_MAX = "rho_max"
    AUDZE_EGLAIS = "audze_eglais"
    DMIN2 = "dmin2"
    L2 = "l2"
    CL2 = "cl2"
    SL2 = "sl2"
    ML2 = "ml2"


@dataclass(frozen=True)
class Objective:
    """A criterion to minimize over level matrices.

    Attributes:
        name: Criterion; DMIN2 is negated so that smaller is better
        q: phi_q exponent
        t: Distance exponent (math.inf for Chebyshev)
    """
    name: ObjectiveName = ObjectiveName.PHI_Q
    q: float = DEFAULT_Q
    t: float = 2.0

    @classmethod
    def parse(cls, text: str, q: float = DEFAULT_Q, t: float = 2.0) -> "Objective":
        """Parse 'phi_q', 'rho_ave_sq', 'cl2', ...; 'phi_q:20' sets q."""
        name, _, arg = text.strip().lower().partition(":")
        try:
            objective = ObjectiveName(name)
        except ValueError:
            raise DesignError(f"unknown objective {text!r}; choose from "
                              f"{', '.join(o.value for o in ObjectiveName)}")
        return cls(objective, float(arg) if arg else q, t)

    def evaluate(self, L: LevelMatrix) -> float:
        if self.name is ObjectiveName.PHI_Q:
            return phi_q(L, self.q, self.t)
        if self.name is ObjectiveName.RHO_AVE_SQ:
            return correlation_matrix(L).rho_ave_sq
        if self.name is ObjectiveName.RHO_MAX:
            return correlation_matrix(L).rho_max
        if self.name is ObjectiveName.AUDZE_EGLAIS:
            return audze_eglais(L, self.t)
        if self.name is ObjectiveName.DMIN2:
            return -dmin2(L, self.t)
        return discrepancy(L, self.name.value).value

    def __str__(self) -> str:
        if self.name is ObjectiveName.PHI_Q:
            return f"phi_q(q={self.q:g}, t={self.t:g})"
        return self.name.value


@dataclass(frozen=True)
class SearchResult:
    """Best design found and the best-so-far objective trace.

    trace[0] is the starting value; every later entry follows one proposal
    (one column step for columnwise-pairwise).
    """
    design: LevelMatrix
    value: float
    trace: Tuple[float, ...]
    restart: int = 0
    start_value: float = field(default=math.nan)


class _FullEvaluator:
    """Evaluates the objective from scratch on every proposal."""

    def __init__(self, objective: Objective, X: np.ndarray, levels: int):
        self.objective = objective
        self.levels = levels
        self.X = X.copy()
        self.value = self._evaluate(self.X)
        self._pending = None

    def _evaluate(self, X: np.ndarray) -> float:
        return self.objective.evaluate(LevelMatrix(X, self.levels))

    def propose(self, col: int, r1: int, r2: int) -> float:
        Y = self.X.copy()
        Y[[r1, r2], col] = Y[[r2, r1], col]
        self._pending = (Y, self._evaluate(Y))
        return self._pending[1]

    def commit(self):
        self.X, self.value = self._pending

    def refresh(self):
        pass


class _PhiQEvaluator:
    """phi_q with incremental updates of the pairwise power sums.

    Works on doubled levels: P[i, j] = sum_l |x_il - x_jl|^t is an exact integer
    for t in {1, 2}, and S = sum_{i<j} P_ij^(-q/t) gives phi_q = 2 S^(1/q).
    """

    def __init__(self, objective: Objective, X: np.ndarray, levels: int, verify: bool = False):
        self.objective = objective
        self.levels = levels
        self.verify = verify
        self.X = X.copy()
        self.t = int(objective.t)
        self.exponent = -objective.q / objective.t
        self.refresh()

    def _powers(self, a, b):
        return np.abs(a - b) ** self.t

    def refresh(self):
        X = self.X
        self.P = sum(self._powers(X[:, l][:, None], X[:, l][None, :]) for l in range(X.shape[1]))
        if np.any(self.P[np.triu_indices(X.shape[0], 1)] == 0):
            raise InfiniteEnergyError("design has coincident points")
        with np.errstate(divide="ignore"):
            self.T = np.where(self.P > 0, self.P.astype(float) ** self.exponent, 0.0)
        self.S = self.T[np.triu_indices(X.shape[0], 1)].sum()
        self.value = self._phi(self.S)

    def _phi(self, S: float) -> float:
        return 2.0 * S ** (1.0 / self.objective.q)

    def propose(self, col: int, r1: int, r2: int) -> float:
        x = self.X[:, col]
        a, b = x[r1], x[r2]
        others = np.ones(len(x), dtype=bool)
        others[[r1, r2]] = False
        gain = self._powers(b, x) - self._powers(a, x)
        P1 = self.P[r1] + gain
        P2 = self.P[r2] - gain
        with np.errstate(divide="ignore"):
            T1 = np.where(others, P1.astype(float) ** self.exponent, 0.0)
            T2 = np.where(others, P2.astype(float) ** self.exponent, 0.0)
        old = self.T[r1, others].sum() + self.T[r2, others].sum()
        S = self.S - old + T1.sum() + T2.sum()
        self._pending = (col, r1, r2, P1, P2, T1, T2, S)
        return self._phi(S)

    def commit(self):
        col, r1, r2, P1, P2, T1, T2, S = self._pending
        keep12 = self.P[r1, r2]
        for r, Pr, Tr in ((r1, P1, T1), (r2, P2, T2)):
            self.P[r, :] = Pr
            self.P[:, r] = Pr
            self.T[r, :] = Tr
            self.T[:, r] = Tr
        self.P[r1, r2] = self.P[r2, r1] = keep12
        self.P[r1, r1] = self.P[r2, r2] = 0
        t12 = float(keep12) ** self.exponent
        self.T[r1, r2] = self.T[r2, r1] = t12
        self.T[r1, r1] = self.T[r2, r2] = 0.0
        self.X[[r1, r2], col] = self.X[[r2, r1], col]
        self.S = S
        self.value = self._phi(S)
        if self.verify:
            full = self.objective.evaluate(LevelMatrix(self.X, self.levels))
            if not math.isclose(full, self.value, rel_tol=1e-9):
                raise AssertionError(f"incremental phi_q {self.value} differs from full {full}")


def _evaluator(objective: Objective, X: np.ndarray, levels: int, verify: bool = False):
    if objective.name is ObjectiveName.PHI_Q and objective.t in (1.0, 2.0):
        return _PhiQEvaluator(objective, X, levels, verify)
    return _FullEvaluator(objective, X, levels)


def _random_move(rng: np.random.Generator, X: np.ndarray) -> Tuple[int, int, int] | None:
    n, k = X.shape
    col = int(rng.integers(k))
    r1, r2 = (int(r) for r in rng.choice(n, size=2, replace=False))
    if X[r1, col] == X[r2, col]:
        return None
    return col, r1, r2


def _neighbour_spread(rng, ev) -> float:
    deltas = []
    for _ in range(NEIGHBOUR_SAMPLES):
        move = _random_move(rng, ev.X)
        if move is not None:
            deltas.append(ev.propose(*move) - ev.value)
    spread = float(np.std(deltas)) if deltas else 0.0
    return spread if spread > 0 else 1.0


def _balanced_start(rng, n: int, k: int, levels: int) -> np.ndarray:
    base = np.repeat(level_grid(levels), n // levels)
    return np.column_stack([rng.permutation(base) for _ in range(k)])


def _check_shape(n: int, k: int, levels: int):
    if n < 2 or k < 1:
        raise InvalidDimensionError(f"need n >= 2 and k >= 1, got n={n}, k={k}")
    if levels < 2 or n % levels:
        raise InvalidDimensionError(f"{levels} levels do not divide {n} runs")


def _anneal_chain(n, k, levels, objective, params: SearchParams, seed, index, start, verify, on_accept=None):
    rng = np.random.default_rng(seed)
    X = start.doubled if start is not None else _balanced_start(rng, n, k, levels)
    ev = _evaluator(objective, X, levels, verify)
    start_value = best = ev.value
    best_X = ev.X.copy()
    temperature = params.initial_temperature or _neighbour_spread(rng, ev)
    interval = params.cooling_interval or 100 * n
    trace = [best]
    for iteration in range(params.max_iterations):
        move = _random_move(rng, ev.X)
        if move is not None:
            new = ev.propose(*move)
            delta = new - ev.value
            if delta <= 0 or rng.random() < math.exp(-delta / temperature):
                ev.commit()
                if on_accept is not None:
                    on_accept(LevelMatrix(ev.X.copy(), levels))
                if ev.value < best:
                    best, best_X = ev.value, ev.X.copy()
        trace.append(best)
        if (iteration + 1) % interval == 0:
            temperature *= params.cooling_factor
            ev.refresh()
            logger.debug("restart %d iteration %d: temperature %.4g best %.6g",
                         index, iteration + 1, temperature, best)
    return SearchResult(LevelMatrix(best_X, levels), best, tuple(trace), index, start_value)


def _best_of_restarts(chain: Callable, params: SearchParams) -> SearchResult:
    seeds = np.random.SeedSequence(params.seed).spawn(params.restarts)
    if params.workers > 1 and params.restarts > 1:
        with ThreadPoolExecutor(max_workers=params.workers) as pool:
            results = list(pool.map(chain, seeds, range(params.restarts)))
    else:
        results = [chain(seed, index) for index, seed in enumerate(seeds)]
    best = min(results, key=lambda r: (r.value, r.restart))
    logger.info("Best of %d restarts: restart %d value %.6g", len(results), best.restart, best.value)
    return best


def anneal_lh(n: int, k: int, objective: Objective = Objective(), params: SearchParams = SearchParams(),
              start: LevelMatrix | None = None, levels: int | None = None,
              verify_incremental: bool = False,
              on_accept: Callable[[LevelMatrix], None] | None = None) -> SearchResult:
    """Simulated annealing over Latin hypercubes (or balanced s-level designs).

    The neighbourhood swaps two entries of one uniformly chosen column, which
    keeps every column balanced. Worse moves are accepted with probability
    exp(-delta / temperature); the temperature starts at the spread of random
    neighbour deltas unless given and decays by cooling_factor every
    cooling_interval proposals.

    Args:
        n: Run count
        k: Factor count
        objective: Criterion to minimize
        params: Seed, schedule and restart settings
        start: Optional starting design (used by every restart)
        levels: Level count, default n
        verify_incremental: Cross-check incremental phi_q against full evaluation
        on_accept: Called with a copy of the current design after every accepted move

    Returns:
        The best design over all restarts
    """
    levels = n if levels is None else levels
    if start is not None:
        n, k, levels = start.n, start.k, start.levels
    _check_shape(n, k, levels)

    def chain(seed, index):
        return _anneal_chain(n, k, levels, objective, params, seed, index, start, verify_incremental, on_accept)

    return _best_of_restarts(chain, params)


def maximin_lh(n: int, k: int, q: float = DEFAULT_Q, t: float = 2.0,
               params: SearchParams = SearchParams()) -> SearchResult:
    """Maximin Latin hypercube: anneal on phi_q, then polish with columnwise-pairwise.

    The returned trace is the annealing trace followed by the polishing
    column steps; start_value and restart come from the annealing run.
    """
    objective = Objective(ObjectiveName.PHI_Q, q, t)
    annealed = anneal_lh(n, k, objective, params)
    polish_params = params.model_copy(update={"restarts": 1, "workers": 1})
    polished = columnwise_pairwise(n, k, objective, polish_params, start=annealed.design)
    trace = annealed.trace + tuple(min(value, annealed.value) for value in polished.trace[1:])
    logger.info("maximin polish: %.6g -> %.6g", annealed.value, polished.value)
    return SearchResult(polished.design, polished.value, trace, annealed.restart, annealed.start_value)


def _cp_chain(n, k, levels, objective, params: SearchParams, seed, index, start):
    rng = np.random.default_rng(seed)
    X = start.doubled if start is not None else _balanced_start(rng, n, k, levels)
    ev = _evaluator(objective, X, levels)
    start_value = ev.value
    trace = [ev.value]
    pairs = [(r1, r2) for r1 in range(n) for r2 in range(r1 + 1, n)]
    for sweep in range(params.max_iterations):
        improved = False
        for col in range(k):
            best_move, best_value = None, ev.value - IMPROVEMENT_RTOL * abs(ev.value)
            for r1, r2 in pairs:
                if ev.X[r1, col] == ev.X[r2, col]:
                    continue
                value = ev.propose(col, r1, r2)
                if value < best_value:
                    best_move, best_value = (col, r1, r2), value
            if best_move is not None:
                ev.propose(*best_move)
                ev.commit()
                improved = True
            trace.append(ev.value)
        ev.refresh()
        logger.debug("restart %d sweep %d: %.6g", index, sweep + 1, ev.value)
        if not improved:
            break
    return SearchResult(LevelMatrix(ev.X, levels), ev.value, tuple(trace), index, start_value)


def columnwise_pairwise(n: int, k: int, objective: Objective = Objective(),
                        params: SearchParams = SearchParams(),
                        start: LevelMatrix | None = None, levels: int | None = None) -> SearchResult:
    """Columnwise-pairwise exchange.

    Each sweep visits the columns in order and applies the best of all
    within-column swaps when it improves the objective. Stops after a sweep
    without improvement or after max_iterations sweeps.
    """
    levels = n if levels is None else levels
    if start is not None:
        n, k, levels = start.n, start.k, start.levels
    _check_shape(n, k, levels)

    def chain(seed, index):
        return _cp_chain(n, k, levels, objective, params, seed, index, start)

    return _best_of_restarts(chain, params)


def _threshold_chain(n, k, levels, objective, params: SearchParams, seed, index, start):
    rng = np.random.default_rng(seed)
    X = start.doubled if start is not None else _balanced_start(rng, n, k, levels)
    ev = _evaluator(objective, X, levels)
    start_value = best = ev.value
    best_X = ev.X.copy()
    initial = params.initial_temperature or _neighbour_spread(rng, ev)
    stages = params.threshold_stages
    per_stage = max(1, params.max_iterations // stages)
    trace = [best]
    for h in range(stages):
        threshold = initial * (1.0 - h / stages)
        for _ in range(per_stage):
            move = _random_move(rng, ev.X)
            if move is not None and ev.propose(*move) - ev.value <= threshold:
                ev.commit()
                if ev.value < best:
                    best, best_X = ev.value, ev.X.copy()
            trace.append(best)
        logger.debug("restart %d stage %d: threshold %.4g best %.6g", index, h, threshold, best)
    return SearchResult(LevelMatrix(best_X, levels), best, tuple(trace), index, start_value)


def threshold_accepting_utype(n: int, levels: int, k: int,
                              objective: Objective = Objective(ObjectiveName.CL2),
                              params: SearchParams = SearchParams(),
                              start: LevelMatrix | None = None) -> SearchResult:
    """Threshold accepting over U-type designs U(n; levels^k).

    Every column holds each of the levels n/levels times; the threshold
    decreases linearly over threshold_stages stages to initial/stages.
    """
    if start is not None:
        n, k, levels = start.n, start.k, start.levels
    _check_shape(n, k, levels)

    def chain(seed, index):
        return _threshold_chain(n, k, levels, objective, params, seed, index, start)

    return _best_of_restarts(chain, params)
