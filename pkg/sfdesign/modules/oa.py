"""Orthogonal arrays: strength verification, text ingestion and OA-based Latin hypercubes."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from sfdesign.errors import (
    AsymmetricArrayError,
    ConstructionError,
    DesignError,
    DivisibilityError,
    InvalidDimensionError,
    OAParseError,
    StrengthViolationError,
)
from sfdesign.modules.design import LevelMatrix
from sfdesign.modules.galois import galois_field

logger = logging.getLogger(__name__)

DEFAULT_STRENGTH = 2


@dataclass(frozen=True, eq=False)
class OrthogonalArray:
    """n x k array of 1-based symbols with per-column level counts and a declared strength.

    Attributes:
        symbols: Read-only int64 array, column j holds values in 1..levels[j]
        levels: Level count per column (an int means every column)
        strength: Declared strength r
    """
    symbols: np.ndarray
    levels: Tuple[int, ...] | int
    strength: int = DEFAULT_STRENGTH

    def __post_init__(self):
        arr = np.array(self.symbols, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidDimensionError(f"orthogonal array must be a non-empty matrix, got shape {arr.shape}")
        levels = self.levels
        if isinstance(levels, (int, np.integer)):
            levels = (int(levels),) * arr.shape[1]
        levels = tuple(int(s) for s in levels)
        if len(levels) != arr.shape[1]:
            raise InvalidDimensionError(f"{len(levels)} level counts for {arr.shape[1]} columns")
        for j, s in enumerate(levels):
            column = arr[:, j]
            if s < 1 or column.min() < 1 or column.max() > s:
                raise DesignError(f"column {j} has symbols outside 1..{s}")
        if self.strength < 0:
            raise InvalidDimensionError(f"strength must be non-negative, got {self.strength}")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)
        object.__setattr__(self, "levels", levels)

    @property
    def n(self) -> int:
        return self.symbols.shape[0]

    @property
    def k(self) -> int:
        return self.symbols.shape[1]

    @property
    def is_symmetric(self) -> bool:
        return len(set(self.levels)) == 1

    @property
    def s(self) -> int:
        """Common level count of a symmetric array."""
        if not self.is_symmetric:
            raise AsymmetricArrayError(f"array has mixed level counts {self.levels}")
        return self.levels[0]

    def columns(self, indices: Sequence[int]) -> "OrthogonalArray":
        indices = list(indices)
        return OrthogonalArray(self.symbols[:, indices], tuple(self.levels[j] for j in indices), self.strength)

    def __repr__(self) -> str:
        shown = self.levels[0] if self.is_symmetric else self.levels
        return f"OrthogonalArray(n={self.n}, k={self.k}, levels={shown}, strength={self.strength})"


@dataclass(frozen=True)
class StrengthWitness:
    """First column subset and level combination whose count is wrong."""
    columns: Tuple[int, ...]
    combination: Tuple[int, ...]
    count: int
    expected: Fraction

    def __str__(self) -> str:
        return (f"columns {list(self.columns)} combination {list(self.combination)} "
                f"appears {self.count} times, expected {self.expected}")


@dataclass(frozen=True)
class StrengthReport:
    """Outcome of an exhaustive strength check."""
    strength: int
    passed: bool
    witness: StrengthWitness | None = None

    def __bool__(self) -> bool:
        return self.passed


def verify_strength(A: OrthogonalArray, r: int) -> StrengthReport:
    """Check that every r-column subarray holds each level combination equally often.

    Subsets are scanned in lexicographic order and combinations in row-major
    order, so the witness of a failure is deterministic.

    Args:
        A: Array to check
        r: Strength, at most k

    Returns:
        StrengthReport with a witness on failure
    """
    if r > A.k:
        raise InvalidDimensionError(f"strength {r} exceeds {A.k} columns")
    zero_based = A.symbols - 1
    for subset in combinations(range(A.k), r):
        radices = [A.levels[j] for j in subset]
        cells = int(np.prod(radices, dtype=np.int64))
        expected = Fraction(A.n, cells)
        code = np.zeros(A.n, dtype=np.int64)
        for j in subset:
            code = code * A.levels[j] + zero_based[:, j]
        counts = np.bincount(code, minlength=cells)
        bad = np.nonzero(counts != int(expected))[0] if expected.denominator == 1 else np.arange(1)
        if bad.size:
            index = int(bad[0])
            combination = tuple(int(d) + 1 for d in np.unravel_index(index, radices)) if radices else ()
            witness = StrengthWitness(tuple(subset), combination, int(counts[index]), expected)
            logger.debug("Strength %d fails: %s", r, witness)
            return StrengthReport(r, False, witness)
    return StrengthReport(r, True)


def _parse_ints(line: str, number: int) -> list:
    try:
        return [int(token) for token in line.split()]
    except ValueError:
        raise OAParseError(f"line {number}: expected whitespace-separated integers, got {line.strip()!r}")


def parse_oa(text: str, source: str = "<oa>") -> OrthogonalArray:
    """Parse an orthogonal array from text.

    One run per line with whitespace-separated symbols. An optional first line
    ``n k s r`` or ``n k s1 .. sk r`` declares the shape, level counts and
    strength; without it the level count is the largest symbol and the
    strength defaults to 2. Files with 0-based symbols are shifted to 1-based.
    Lines starting with '#' are ignored.
    """
    lines = [(number, raw) for number, raw in enumerate(text.splitlines(), start=1)
             if raw.strip() and not raw.lstrip().startswith("#")]
    if not lines:
        raise OAParseError(f"{source}: no rows")
    rows = [(number, _parse_ints(raw, number)) for number, raw in lines]
    header = None
    if len(rows) > 1:
        first = rows[0][1]
        width = len(rows[1][1])
        rest_max = max(max(values) for _, values in rows[1:])
        if (len(first) in (4, width + 3) and first[0] == len(rows) - 1
                and first[1] == width and max(first[2:-1]) >= rest_max):
            header = first
            rows = rows[1:]
    width = len(rows[0][1])
    for number, values in rows:
        if len(values) != width:
            raise OAParseError(f"{source}: line {number} has {len(values)} symbols, expected {width}")
    symbols = np.array([values for _, values in rows], dtype=np.int64)
    if symbols.min() == 0:
        symbols = symbols + 1
    if symbols.min() < 1:
        raise OAParseError(f"{source}: negative symbols")
    if header is None:
        levels, strength = int(symbols.max()), DEFAULT_STRENGTH
    else:
        levels = header[2] if len(header) == 4 else tuple(header[2:-1])
        strength = header[-1]
    try:
        return OrthogonalArray(symbols, levels, strength)
    except DesignError as e:
        raise OAParseError(f"{source}: {e}") from e


def load_oa(path: str | Path) -> OrthogonalArray:
    """Read an orthogonal array file and verify its declared strength.

    Raises:
        OAParseError: Empty, ragged or non-integer content
        StrengthViolationError: The array is not of its declared strength
    """
    path = Path(path)
    A = parse_oa(path.read_text(), str(path))
    report = verify_strength(A, min(A.strength, A.k))
    if not report.passed:
        raise StrengthViolationError(f"{path}: not of strength {A.strength}: {report.witness}",
                                     witness=report.witness)
    logger.info("Loaded %r from %s", A, path)
    return A


def format_oa(A: OrthogonalArray, header: bool = True) -> str:
    """Text form accepted by parse_oa."""
    out = []
    if header:
        level_part = [A.levels[0]] if A.is_symmetric else list(A.levels)
        out.append(" ".join(str(v) for v in [A.n, A.k, *level_part, A.strength]))
    out.extend(" ".join(str(v) for v in row) for row in A.symbols.tolist())
    return "\n".join(out) + "\n"


def oa_based_lh_asym(A: OrthogonalArray, seed=None) -> LevelMatrix:
    """OA-based Latin hypercube for arrays with per-column level counts.

    In column j the n/s_j positions holding symbol m receive a random
    permutation of (m-1)n/s_j + 1, ..., m n/s_j; the result is centered by (n+1)/2.

    Args:
        A: Orthogonal array (strength >= 1 per column)
        seed: Seed, SeedSequence or Generator

    Returns:
        n x k Latin hypercube
    """
    rng = np.random.default_rng(seed)
    n = A.n
    ranks = np.empty(A.symbols.shape, dtype=np.int64)
    for j, s in enumerate(A.levels):
        if n % s:
            raise DivisibilityError(f"column {j}: {s} levels do not divide {n} runs")
        block = n // s
        column = A.symbols[:, j]
        for m in range(1, s + 1):
            rows = np.nonzero(column == m)[0]
            if rows.size != block:
                raise ConstructionError(f"column {j}: symbol {m} appears {rows.size} times, expected {block}")
            ranks[rows, j] = rng.permutation(np.arange((m - 1) * block + 1, m * block + 1))
    return LevelMatrix(2 * ranks - (n + 1), n)


def oa_based_lh(A: OrthogonalArray, seed=None) -> LevelMatrix:
    """OA-based Latin hypercube from a symmetric array.

    Raises:
        AsymmetricArrayError: Columns have different level counts
    """
    if not A.is_symmetric:
        raise AsymmetricArrayError(f"mixed level counts {A.levels}; use oa_based_lh_asym")
    L = oa_based_lh_asym(A, seed)
    logger.info("Built %dx%d OA-based Latin hypercube from s=%d", L.n, L.k, A.s)
    return L


def projection_cells(L: LevelMatrix, s: int) -> np.ndarray:
    """Cell index floor(s * d) of every midpoint-scaled entry, in integer arithmetic."""
    return (2 * L.ranks() + 1) * s // (2 * L.levels)


def verify_projection_property(L: LevelMatrix, s: int, r: int) -> bool:
    """True iff every r-column projection puts n/s^r points in each cell of the s^r grid.

    Raises:
        DivisibilityError: s^r does not divide n
    """
    cells = s ** r
    if r < 1 or r > L.k:
        raise InvalidDimensionError(f"projection dimension {r} not in 1..{L.k}")
    if L.n % cells:
        raise DivisibilityError(f"{s}^{r} cells do not divide {L.n} runs")
    expected = L.n // cells
    digits = projection_cells(L, s)
    for subset in combinations(range(L.k), r):
        code = np.zeros(L.n, dtype=np.int64)
        for j in subset:
            code = code * s + digits[:, j]
        if np.any(np.bincount(code, minlength=cells) != expected):
            return False
    return True


def galois_plane_oa(q: int) -> OrthogonalArray:
    """OA(q^2, q^(q+1), 2) over GF(q) for a prime power q.

    Rows are indexed by (a, b); the columns are a and b + c*a for every c in GF(q).
    """
    F = galois_field(q)
    a, b = np.divmod(np.arange(q * q), q)
    columns = [a] + [F.add[b, F.mul[c, a]] for c in range(q)]
    return OrthogonalArray(np.column_stack(columns) + 1, q, 2)
