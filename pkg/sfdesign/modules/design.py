"""Exact Latin hypercube representations, unit-cube scaling and validation."""

import csv
import io
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np

from sfdesign.errors import (
    CsvFormatError,
    DegenerateInputError,
    DesignError,
    InvalidDimensionError,
)

logger = logging.getLogger(__name__)

# Relative tolerance for linear dependence in Gram-Schmidt
GRAM_SCHMIDT_TOL = 1e-12


class JitterMode(Enum):
    """Placement of a point inside its level cell."""
    RANDOM = "random"
    MIDPOINT = "midpoint"


def _as_int_matrix(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InvalidDimensionError(f"expected a 2-D matrix, got {arr.ndim} dimensions")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise DesignError("doubled levels must be integers")
        arr = rounded
    return np.array(arr, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class LevelMatrix:
    """n x k design on centered, equally spaced levels.

    Levels are stored doubled so that half-integer levels stay exact: the
    s-level grid {-(s-1)/2, ..., (s-1)/2} is held as {-(s-1), -(s-3), ..., s-1}.
    When ``levels == n`` a valid matrix is a Latin hypercube.

    Attributes:
        doubled: Read-only int64 array of doubled levels
        levels: Number of levels s per column (defaults to the run count)
    """
    doubled: np.ndarray
    levels: int | None = None

    def __post_init__(self):
        arr = _as_int_matrix(self.doubled)
        n, k = arr.shape
        if n < 1 or k < 1:
            raise InvalidDimensionError(f"design must have at least one run and one factor, got {n}x{k}")
        levels = n if self.levels is None else int(self.levels)
        if levels < 1 or levels > n:
            raise InvalidDimensionError(f"level count {levels} must lie in [1, {n}]")
        arr.setflags(write=False)
        object.__setattr__(self, "doubled", arr)
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_levels(cls, values, levels: int | None = None) -> "LevelMatrix":
        """Build from true (possibly half-integer) levels.

        Args:
            values: n x k array-like of levels such as 0.5, -1.5, 2
            levels: Level count s (default n)

        Returns:
            LevelMatrix holding 2 * values
        """
        arr = np.asarray(values, dtype=float)
        doubled = 2.0 * arr
        if not np.allclose(doubled, np.rint(doubled), rtol=0, atol=1e-9):
            raise DesignError("levels must be multiples of 1/2")
        return cls(np.rint(doubled).astype(np.int64), levels)

    @classmethod
    def from_symbols(cls, symbols, levels: int) -> "LevelMatrix":
        """Build from 1-based symbols 1..s (the U-type table convention)."""
        arr = np.asarray(symbols, dtype=np.int64)
        return cls(2 * arr - (levels + 1), levels)

    @property
    def n(self) -> int:
        return self.doubled.shape[0]

    @property
    def k(self) -> int:
        return self.doubled.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.doubled.shape

    @property
    def is_latin(self) -> bool:
        """True when the level count equals the run count."""
        return self.levels == self.n

    def to_levels(self) -> np.ndarray:
        """True levels as floats."""
        return self.doubled / 2.0

    def ranks(self) -> np.ndarray:
        """0-based level index of every entry."""
        return (self.doubled + (self.levels - 1)) // 2

    def to_symbols(self) -> np.ndarray:
        """1-based symbols 1..s."""
        return self.ranks() + 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, LevelMatrix):
            return NotImplemented
        return self.levels == other.levels and np.array_equal(self.doubled, other.doubled)

    def __hash__(self):
        return hash((self.levels, self.doubled.tobytes(), self.doubled.shape))

    def __repr__(self) -> str:
        return f"LevelMatrix(n={self.n}, k={self.k}, levels={self.levels})"


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """n x k points in the half-open unit cube [0, 1)^k."""
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidDimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() >= 1.0:
            raise DesignError("design points must lie in [0, 1)")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.values.shape

    def __repr__(self) -> str:
        return f"DesignMatrix(n={self.n}, k={self.k})"


@dataclass(frozen=True)
class ColumnCheck:
    """Outcome of the balance check for one column."""
    index: int
    passed: bool
    message: str = "ok"


@dataclass(frozen=True)
class ValidationReport:
    """Per-column balance diagnostics for a LevelMatrix."""
    columns: Tuple[ColumnCheck, ...]
    levels: int
    runs: int

    @property
    def passed(self) -> bool:
        return all(column.passed for column in self.columns)

    @property
    def is_latin_hypercube(self) -> bool:
        return self.passed and self.levels == self.runs

    def failures(self) -> list:
        return [column for column in self.columns if not column.passed]

    def __bool__(self) -> bool:
        return self.passed


def level_grid(levels: int) -> np.ndarray:
    """Doubled centered grid {-(s-1), -(s-3), ..., s-1}."""
    return np.arange(-(levels - 1), levels, 2, dtype=np.int64)


def _format_level(value: float) -> str:
    return f"{value:g}"


def validate_latin_hypercube(L: LevelMatrix) -> ValidationReport:
    """Check every column against the balance invariant.

    Each column must hold every level of the s-level grid exactly n/s times.
    With s = n this is the Latin hypercube permutation property. Never raises
    for bad content.

    Args:
        L: Matrix to check

    Returns:
        Report with a diagnostic message for every failing column
    """
    n, s = L.n, L.levels
    grid = level_grid(s)
    checks = []
    for j in range(L.k):
        if n % s:
            checks.append(ColumnCheck(j, False, f"run count {n} is not a multiple of {s} levels"))
            continue
        target = n // s
        values, counts = np.unique(L.doubled[:, j], return_counts=True)
        message = None
        off_grid = np.setdiff1d(values, grid)
        if off_grid.size:
            message = f"level {_format_level(off_grid[0] / 2)} is not on the {s}-level grid"
        else:
            wrong = np.nonzero(counts != target)[0]
            missing = np.setdiff1d(grid, values)
            if wrong.size:
                value, count = values[wrong[0]], counts[wrong[0]]
                kind = "duplicated level" if count > target else "level"
                message = f"{kind} {_format_level(value / 2)} appears {count} times, expected {target}"
            elif missing.size:
                message = f"level {_format_level(missing[0] / 2)} is missing"
        checks.append(ColumnCheck(j, message is None, message or "ok"))
    return ValidationReport(tuple(checks), s, n)


def random_balanced_design(n: int, k: int, levels: int, seed=None) -> LevelMatrix:
    """Random design whose columns are independent shuffles of a balanced column.

    Args:
        n: Run count
        k: Factor count
        levels: Level count s, must divide n
        seed: Seed, SeedSequence or Generator

    Returns:
        LevelMatrix with each level appearing n/s times per column
    """
    if n < 1 or k < 1:
        raise InvalidDimensionError(f"n and k must be positive, got n={n}, k={k}")
    if levels < 1 or n % levels:
        raise InvalidDimensionError(f"{levels} levels do not divide {n} runs")
    rng = np.random.default_rng(seed)
    base = np.repeat(level_grid(levels), n // levels)
    columns = [rng.permutation(base) for _ in range(k)]
    return LevelMatrix(np.column_stack(columns), levels)


def random_latin_hypercube(n: int, k: int, seed=None) -> LevelMatrix:
    """Random Latin hypercube: independent uniform permutations per column.

    Args:
        n: Run count (>= 1)
        k: Factor count (>= 1)
        seed: Seed, SeedSequence or Generator; equal seeds give equal matrices

    Returns:
        n x k LevelMatrix with s = n
    """
    return random_balanced_design(n, k, n, seed)


def to_unit_cube(L: LevelMatrix,
                 mode: JitterMode = JitterMode.MIDPOINT,
                 seed=None,
                 jitter=None) -> DesignMatrix:
    """Scale a level matrix into [0, 1)^k.

    d_ij = (l_ij + (s-1)/2 + u_ij) / s, where s is the level count.

    Args:
        L: Level matrix
        mode: MIDPOINT fixes u = 0.5 (lattice sample); RANDOM draws u uniformly
        seed: Seed for RANDOM mode
        jitter: Explicit u values (scalar or n x k), overrides mode

    Returns:
        DesignMatrix
    """
    s = L.levels
    ranks = (L.doubled + (s - 1)) / 2.0
    if jitter is not None:
        u = np.broadcast_to(np.asarray(jitter, dtype=float), L.shape)
        if u.min() < 0.0 or u.max() >= 1.0:
            raise DesignError("jitter values must lie in [0, 1)")
    elif mode is JitterMode.MIDPOINT:
        u = 0.5
    else:
        u = np.random.default_rng(seed).random(L.shape)
    points = (ranks + u) / s
    return DesignMatrix(np.minimum(points, np.nextafter(1.0, 0.0)))


def unit_cube_ranks(D: DesignMatrix, levels: int) -> np.ndarray:
    """Recover 0-based level indices floor(s * d) from scaled points."""
    return np.floor(D.values * levels).astype(np.int64)


def _as_float_matrix(D) -> np.ndarray:
    if isinstance(D, LevelMatrix):
        return D.to_levels()
    if isinstance(D, DesignMatrix):
        return D.values
    arr = np.asarray(D, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def gram_schmidt_design(L, range_low: float = 0.0, range_high: float = 1.0) -> np.ndarray:
    """Design with exactly uncorrelated columns built from a Latin hypercube.

    Columns are centered, orthogonalized in order, then affinely rescaled into
    [range_low, range_high].

    Args:
        L: LevelMatrix, DesignMatrix or array whose columns are orthogonalized
        range_low: Lower end of every output column
        range_high: Upper end of every output column

    Returns:
        n x k float array (the upper end is attained, so this is not a DesignMatrix)

    Raises:
        DegenerateInputError: A centered column is dependent on the earlier ones
    """
    if range_high <= range_low:
        raise DesignError(f"empty output range [{range_low}, {range_high}]")
    X = _as_float_matrix(L)
    centered = X - X.mean(axis=0)
    U = np.empty_like(centered)
    for j in range(centered.shape[1]):
        v = centered[:, j]
        u = v.copy()
        # two passes keep the columns orthogonal to working precision
        for _ in range(2):
            for i in range(j):
                ui = U[:, i]
                u = u - (ui @ u) / (ui @ ui) * ui
        norm_v = np.linalg.norm(v)
        if norm_v == 0.0 or np.linalg.norm(u) <= GRAM_SCHMIDT_TOL * norm_v:
            raise DegenerateInputError(f"column {j} is linearly dependent on the preceding columns")
        U[:, j] = u
    low, high = U.min(axis=0), U.max(axis=0)
    return range_low + (U - low) / (high - low) * (range_high - range_low)


# CSV serialization

def _header(k: int) -> list:
    return [f"col{j + 1}" for j in range(k)]


def level_matrix_csv(L: LevelMatrix) -> str:
    """CSV text with true levels (integers or halves)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_header(L.k))
    for row in L.doubled:
        writer.writerow([str(d // 2) if d % 2 == 0 else f"{d / 2}" for d in row.tolist()])
    return buffer.getvalue()


def design_matrix_csv(D) -> str:
    """CSV text with 17 significant digits per value."""
    values = D.values if isinstance(D, DesignMatrix) else np.asarray(D, dtype=float)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_header(values.shape[1]))
    for row in values:
        writer.writerow([format(float(x), ".17g") for x in row])
    return buffer.getvalue()


def write_csv(matrix, path: str | Path) -> Path:
    """Write a LevelMatrix, DesignMatrix or float array as CSV."""
    path = Path(path)
    text = level_matrix_csv(matrix) if isinstance(matrix, LevelMatrix) else design_matrix_csv(matrix)
    path.write_text(text)
    return path


def parse_csv_matrix(text: str, source: str = "<csv>") -> np.ndarray:
    """Parse CSV text with an optional header row into a float matrix.

    Raises:
        CsvFormatError: Ragged rows, non-numeric cells or no data
    """
    rows = []
    width = None
    for number, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            values = [float(cell) for cell in row]
        except ValueError:
            if number == 1 and width is None:
                width = len(row)
                continue
            raise CsvFormatError(f"{source}: non-numeric value in {row!r}", line=number)
        if width is None:
            width = len(values)
        if len(values) != width:
            raise CsvFormatError(f"{source}: expected {width} fields, found {len(values)}", line=number)
        rows.append(values)
    if not rows:
        raise CsvFormatError(f"{source}: no data rows")
    return np.array(rows, dtype=float)


def read_csv_matrix(path: str | Path) -> np.ndarray:
    path = Path(path)
    return parse_csv_matrix(path.read_text(), str(path))


def load_level_matrix(path: str | Path, levels: int | None = None) -> LevelMatrix:
    """Read a CSV of true levels into a LevelMatrix."""
    values = read_csv_matrix(path)
    doubled = 2.0 * values
    if not np.allclose(doubled, np.rint(doubled), rtol=0, atol=1e-9):
        raise CsvFormatError(f"{path}: levels must be multiples of 1/2")
    return LevelMatrix(np.rint(doubled).astype(np.int64), levels)


def load_design_matrix(path: str | Path) -> DesignMatrix:
    """Read a CSV of unit-cube points."""
    return DesignMatrix(read_csv_matrix(path))


def infer_level_matrix(values: np.ndarray) -> LevelMatrix | None:
    """Interpret a float matrix as a balanced level matrix when it is one.

    Returns the LevelMatrix when every column is a balanced arrangement of one
    centered s-level grid, else None.
    """
    doubled = 2.0 * np.asarray(values, dtype=float)
    if not np.allclose(doubled, np.rint(doubled), rtol=0, atol=1e-9):
        return None
    doubled = np.rint(doubled).astype(np.int64)
    levels = int(doubled.max() - doubled.min()) // 2 + 1
    if levels < 2 or levels > doubled.shape[0] or doubled.shape[0] % levels:
        return None
    candidate = LevelMatrix(doubled, levels)
    return candidate if validate_latin_hypercube(candidate).passed else None


def stack_columns(matrices: Sequence[LevelMatrix]) -> LevelMatrix:
    """Concatenate level matrices with equal run and level counts side by side."""
    first = matrices[0]
    for other in matrices[1:]:
        if other.n != first.n or other.levels != first.levels:
            raise InvalidDimensionError("matrices must share run and level counts")
    return LevelMatrix(np.hstack([m.doubled for m in matrices]), first.levels)
