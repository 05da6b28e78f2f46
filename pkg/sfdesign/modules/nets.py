"""Elementary intervals, (t,m,s)-net and (t,s)-sequence verification, radical-inverse points."""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from sfdesign.errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    WrongCardinalityError,
)
from sfdesign.modules.design import DesignMatrix

logger = logging.getLogger(__name__)

# Absorbs representation error of coordinates such as 1/9 before taking floor
SNAP_TOL = 1e-9


@dataclass(frozen=True)
class ElementaryIntervalShape:
    """prod_l [a_l / b^d_l, (a_l + 1) / b^d_l) in base b."""
    base: int
    exponents: Tuple[int, ...]
    anchors: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.base < 2:
            raise InvalidDimensionError(f"base must be at least 2, got {self.base}")
        if self.anchors and len(self.anchors) != len(self.exponents):
            raise DimensionMismatchError("one anchor per exponent is required")
        for a, d in zip(self.anchors, self.exponents):
            if not 0 <= a < self.base ** d:
                raise InvalidDimensionError(f"anchor {a} outside 0..{self.base ** d - 1}")

    @property
    def volume(self) -> float:
        return float(self.base) ** -sum(self.exponents)

    def bounds(self) -> list:
        return [(a / self.base ** d, (a + 1) / self.base ** d) for a, d in zip(self.anchors, self.exponents)]

    def count(self, points) -> int:
        """Number of points inside the interval, by digit comparison."""
        X = _coordinates(points)
        cells = np.column_stack([digit_cells(X[:, l], self.base, d) for l, d in enumerate(self.exponents)])
        return int(np.all(cells == np.array(self.anchors), axis=1).sum())


def _coordinates(points) -> np.ndarray:
    X = points.values if isinstance(points, DesignMatrix) else np.asarray(points, dtype=float)
    return X.reshape(-1, 1) if X.ndim == 1 else X


def digit_cells(x: np.ndarray, base: int, exponent: int) -> np.ndarray:
    """floor(x * base^exponent), i.e. the leading base-b digits of x as one integer."""
    scale = base ** exponent
    cells = np.floor(np.asarray(x) * scale + SNAP_TOL).astype(np.int64)
    return np.clip(cells, 0, scale - 1)


def compositions(total: int, parts: int) -> list:
    """All (d_1..d_parts) with non-negative entries summing to total, in colex order."""
    found = [c for c in product(range(total + 1), repeat=parts) if sum(c) == total]
    return sorted(found, key=lambda c: c[::-1])


@dataclass(frozen=True)
class NetReport:
    """Outcome of a (t,m,s)-net check; witness is the first interval with a wrong count."""
    passed: bool
    base: int
    t: int
    m: int
    witness: ElementaryIntervalShape | None = None
    count: int | None = None
    expected: int | None = None

    def __bool__(self) -> bool:
        return self.passed


def is_net(P, b: int, t: int, m: int, s: int | None = None) -> NetReport:
    """Check whether b^m points form a (t,m,s)-net in base b.

    Every elementary interval of volume b^(t-m) must hold exactly b^t points.
    Exponent vectors are scanned in colex order and anchors in row-major order.

    Raises:
        WrongCardinalityError: The point count is not b^m
    """
    X = _coordinates(P)
    n, dims = X.shape
    if s is not None and s != dims:
        raise DimensionMismatchError(f"expected {s} dimensions, got {dims}")
    if not 0 <= t <= m:
        raise InvalidDimensionError(f"need 0 <= t <= m, got t={t}, m={m}")
    if n != b ** m:
        raise WrongCardinalityError(f"a net with m={m} in base {b} has {b ** m} points, got {n}")
    depth = m - t
    expected = b ** t
    cache = {}
    for exponents in compositions(depth, dims):
        code = np.zeros(n, dtype=np.int64)
        for l, d in enumerate(exponents):
            key = (l, d)
            if key not in cache:
                cache[key] = digit_cells(X[:, l], b, d)
            code = code * b ** d + cache[key]
        counts = np.bincount(code, minlength=b ** depth)
        bad = np.nonzero(counts != expected)[0]
        if bad.size:
            index = int(bad[0])
            anchors = tuple(int(a) for a in np.unravel_index(index, [b ** d for d in exponents]))
            witness = ElementaryIntervalShape(b, tuple(exponents), anchors)
            return NetReport(False, b, t, m, witness, int(counts[index]), expected)
    return NetReport(True, b, t, m)


@dataclass(frozen=True)
class SliceVerdict:
    """Net check of points k b^m .. (k+1) b^m - 1."""
    k: int
    m: int
    report: NetReport

    @property
    def passed(self) -> bool:
        return self.report.passed


@dataclass(frozen=True)
class SequenceReport:
    base: int
    t: int
    verdicts: Tuple[SliceVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def failures(self) -> list:
        return [v for v in self.verdicts if not v.passed]

    def __bool__(self) -> bool:
        return self.passed


def is_sequence_prefix(points, b: int, t: int, m_max: int | None = None,
                       m_min: int | None = None) -> SequenceReport:
    """Check the (t,s)-sequence property on a finite prefix.

    For each m in [m_min, m_max] (default t+1 up to the largest m with b^m
    points available) every aligned slice of b^m consecutive points must be a
    (t,m,s)-net.
    """
    X = _coordinates(points)
    n = X.shape[0]
    if n < b ** (t + 1):
        raise WrongCardinalityError(f"need at least {b ** (t + 1)} points, got {n}")
    if m_max is None:
        m_max = 0
        while b ** (m_max + 1) <= n:
            m_max += 1
    m_min = t + 1 if m_min is None else m_min
    verdicts = []
    for m in range(max(m_min, t), m_max + 1):
        size = b ** m
        for k in range(n // size):
            report = is_net(X[k * size:(k + 1) * size], b, t, m)
            verdicts.append(SliceVerdict(k, m, report))
    return SequenceReport(b, t, tuple(verdicts))


def radical_inverse(indices, base: int) -> np.ndarray:
    """Digit reversal of integer indices about the radix point in the given base."""
    if base < 2:
        raise InvalidDimensionError(f"base must be at least 2, got {base}")
    i = np.asarray(indices, dtype=np.int64).copy()
    result = np.zeros(i.shape, dtype=float)
    factor = 1.0 / base
    while np.any(i > 0):
        i, digit = np.divmod(i, base)
        result += digit * factor
        factor /= base
    return result


def radical_inverse_points(n: int, bases: int | Sequence[int], start: int = 0) -> DesignMatrix:
    """Points whose coordinate l is the radical inverse of the index in bases[l] (Halton style)."""
    bases = [bases] if isinstance(bases, (int, np.integer)) else list(bases)
    index = np.arange(start, start + n)
    return DesignMatrix(np.column_stack([radical_inverse(index, b) for b in bases]))


def hammersley_points(n: int, bases: int | Sequence[int]) -> DesignMatrix:
    """First coordinate i/n, remaining coordinates radical inverses of i."""
    bases = [bases] if isinstance(bases, (int, np.integer)) else list(bases)
    index = np.arange(n)
    columns = [index / n] + [radical_inverse(index, b) for b in bases]
    return DesignMatrix(np.column_stack(columns))


def sobol_points(n: int, s: int) -> DesignMatrix:
    """First n points of the unscrambled Sobol' sequence in s dimensions."""
    sampler = qmc.Sobol(d=s, scramble=False)
    if n & (n - 1) == 0:
        values = sampler.random_base2(n.bit_length() - 1)
    else:
        values = sampler.random(n)
    return DesignMatrix(values)
