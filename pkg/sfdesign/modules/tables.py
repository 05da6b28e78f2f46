"""Embedded reference designs used as construction inputs and regression values."""

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from sfdesign.errors import DesignError
from sfdesign.modules.design import DesignMatrix, LevelMatrix, design_matrix_csv, level_matrix_csv
from sfdesign.modules.oa import OrthogonalArray, format_oa

# Random 5 x 3 Latin hypercube (true levels) and one jittered unit-cube scaling of it
LH_5_3 = [
    [2, 0, -2],
    [1, -2, -1],
    [-2, 2, 0],
    [0, -1, 2],
    [-1, 1, 1],
]

D_5_3 = [
    [0.9253, 0.5117, 0.1610],
    [0.7621, 0.1117, 0.3081],
    [0.1241, 0.9878, 0.4473],
    [0.5744, 0.3719, 0.8270],
    [0.3181, 0.7514, 0.6916],
]

# OA(9, 3^4, 2) and an OA-based Latin hypercube built from it (true levels)
OA_9_3_4 = [
    [1, 1, 1, 1],
    [1, 2, 2, 3],
    [1, 3, 3, 2],
    [2, 1, 2, 2],
    [2, 2, 3, 1],
    [2, 3, 1, 3],
    [3, 1, 3, 3],
    [3, 2, 1, 2],
    [3, 3, 2, 1],
]

OALH_9_4 = [
    [-2, -2, -4, -2],
    [-4, 0, 1, 2],
    [-3, 4, 2, 1],
    [-1, -4, -1, -1],
    [1, -1, 4, -3],
    [0, 2, -3, 4],
    [3, -3, 3, 3],
    [2, 1, -2, 0],
    [4, 3, 0, -4],
]

# Small orthogonal Latin hypercubes (true levels unless noted)
OLH_5_2 = [
    [1, -2],
    [2, 1],
    [0, 0],
    [-1, 2],
    [-2, -1],
]

OLH_7_3 = [
    [-3, 3, 2],
    [-2, 0, -3],
    [-1, -2, -1],
    [0, -3, 1],
    [1, -1, 3],
    [2, 1, -2],
    [3, 2, 0],
]

# doubled levels
OLH_8_4 = [
    [1, -3, 7, 5],
    [3, 1, 5, -7],
    [5, -7, -3, -1],
    [7, 5, -1, 3],
    [-7, -5, 1, -3],
    [-5, 7, 3, 1],
    [-3, -1, -5, 7],
    [-1, 3, -7, -5],
]

# doubled levels, rows reordered so the bottom half is the negated top half
OLH_8_4_FOLDOVER = [
    [1, -3, 7, 5],
    [3, 1, 5, -7],
    [5, -7, -3, -1],
    [7, 5, -1, 3],
    [-1, 3, -7, -5],
    [-3, -1, -5, 7],
    [-5, 7, 3, 1],
    [-7, -5, 1, -3],
]

# Hadamard matrix of order 4 stacked on itself, the sign partner of OLH_8_4_FOLDOVER
H4_STACKED = [
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
]

OLH_9_5 = [
    [-4, -2, 0, -3, 3],
    [-3, 4, 2, 1, -2],
    [-2, -3, -4, -1, -3],
    [-1, 3, -2, 3, 4],
    [0, -4, 4, 4, 0],
    [1, 2, -1, 0, -4],
    [2, 0, 3, -2, -1],
    [3, 1, 1, -4, 2],
    [4, -1, -3, 2, 1],
]

OLH_11_7 = [
    [-5, -4, -5, -5, -3, 0, 0],
    [-4, 2, -1, 3, 4, 5, 4],
    [-3, -2, 4, 5, -4, -2, -1],
    [-2, 3, -3, 4, 1, -4, -2],
    [-1, 4, 2, -4, 3, 2, -4],
    [0, -5, 5, -2, 5, -3, 2],
    [1, 5, 3, -3, -5, -1, 5],
    [2, -1, 1, 1, -2, 3, -5],
    [3, 0, 0, -1, 0, 1, -3],
    [4, 1, -4, 0, 2, -5, 1],
    [5, -3, -2, 2, -1, 4, 3],
]

# Nearly orthogonal 13 x 12 Latin hypercube
NOLH_13_12 = [
    [-6, -6, -5, -4, -5, -2, 2, 1, -3, -2, -1, -2],
    [-5, 5, 3, -5, 3, 4, -6, 0, -4, 1, -3, -1],
    [-4, 2, -4, 1, 2, 6, 5, -5, 6, 0, 1, 1],
    [-3, 1, 2, 4, -6, 1, -2, 6, 2, 3, 2, 6],
    [-2, -2, 6, -3, 6, -5, 3, 4, 4, -3, 3, 0],
    [-1, -5, 4, 6, 1, -1, 0, -4, 0, 6, -5, -3],
    [0, 6, 0, 3, -4, -6, -3, -3, 3, -5, 0, -4],
    [1, 0, -3, 5, 5, 0, 1, 2, -5, -6, -4, 5],
    [2, -1, -6, 0, 4, -4, -5, -2, -1, 5, 6, 2],
    [3, 4, 1, 2, -1, 2, 6, 3, -6, 2, 5, -6],
    [4, -4, 5, -2, -3, 3, -1, -6, -2, -4, 4, 3],
    [5, 3, -1, -6, -2, -3, 4, -1, 1, 4, -6, 4],
    [6, -3, -2, -1, 0, 5, -4, 5, 5, -1, -2, -5],
]

# Orthogonal 16 x 12 Latin hypercube obtained by rotation, doubled levels
OLH_16_12 = [
    [-15, 5, 9, -3, 7, 11, -11, 7, -9, 3, -15, 5],
    [-13, 1, 1, 13, -7, -11, 11, -7, -1, -13, -13, 1],
    [-11, 7, -7, -11, 13, -1, -1, -13, 9, -3, 15, -5],
    [-9, 3, -15, 5, -13, 1, 1, 13, 1, 13, 13, -1],
    [-7, -11, 11, -7, 11, -7, 7, 11, 5, 15, -3, -9],
    [-5, -15, 3, 9, -11, 7, -7, -11, 13, -1, -1, -13],
    [-3, -9, -5, -15, 1, 13, 13, -1, -5, -15, 3, 9],
    [-1, -13, -13, 1, -1, -13, -13, 1, -13, 1, 1, 13],
    [1, 13, 13, -1, -9, 3, -15, 5, 11, -7, 7, 11],
    [3, 9, 5, 15, 9, -3, 15, -5, 3, 9, 5, 15],
    [5, 15, -3, -9, -3, -9, -5, -15, -11, 7, -7, -11],
    [7, 11, -11, 7, 3, 9, 5, 15, -3, -9, -5, -15],
    [9, -3, 15, -5, -5, -15, 3, 9, -7, -11, 11, -7],
    [11, -7, 7, 11, 5, 15, -3, -9, -15, 5, 9, -3],
    [13, -1, -1, -13, -15, 5, 9, -3, 7, 11, -11, 7],
    [15, -5, -9, 3, 15, -5, -9, 3, 15, -5, -9, 3],
]

# Nearly orthogonal 16 x 15 Latin hypercube, doubled levels
NOLH_16_15 = [
    [-15, 15, -13, 13, -5, -13, 5, 3, -1, 5, -7, 5, -9, -9, 5],
    [-13, -15, -3, 3, 7, 3, 15, -11, 13, -5, 7, -13, -7, -3, -3],
    [-11, -9, -5, -11, -15, 13, -5, 11, -9, 9, 9, 3, -5, -1, -11],
    [-9, -1, 9, -15, -11, 1, -1, -13, 5, -1, -15, 7, 1, 3, 15],
    [-7, 1, -7, 7, 15, 15, -13, 9, -5, -13, -3, -1, -1, 7, 13],
    [-5, 13, 11, -5, 9, -7, -3, -9, -13, 11, 13, -9, -3, 13, 1],
    [-3, -5, 13, 15, -9, -9, -11, 1, 7, -9, 15, 11, 9, 1, -1],
    [-1, -11, 3, -7, 11, -15, 13, 15, -7, -3, -9, 9, 7, 9, -5],
    [1, 3, -9, -3, -1, -5, -15, -1, 11, 3, -11, -15, 15, 5, -15],
    [3, -3, 15, 11, 3, 9, 1, -7, -15, 1, -13, -3, 3, -15, -9],
    [5, 9, 7, -1, 5, 11, 9, 13, 15, 15, 5, 1, 11, -7, 9],
    [7, 7, -1, -13, 13, -1, -7, -5, 9, -7, 3, 15, -13, -11, -13],
    [9, 5, -11, -9, -7, -3, 7, -3, -11, -15, 11, -7, 13, -13, 7],
    [11, 11, 5, 5, -13, 7, 11, 5, 3, -11, -5, -5, -11, 15, -7],
    [13, -7, -15, 9, 1, 5, 3, -15, -3, 13, 1, 13, 5, 11, 3],
    [15, -13, 1, 1, -3, -11, -9, 7, 1, 7, -1, -11, -15, -5, 11],
]

# Second-order orthogonal 17 x 8 Latin hypercube from the recursive foldover
SUN_17_8 = [
    [1, 2, 3, 4, 5, 6, 7, 8],
    [2, -1, -4, 3, 6, -5, -8, 7],
    [3, 4, -1, -2, -7, -8, 5, 6],
    [4, -3, 2, -1, -8, 7, -6, 5],
    [5, 6, 7, 8, -1, -2, -3, -4],
    [6, -5, -8, 7, -2, 1, 4, -3],
    [7, 8, -5, -6, 3, 4, -1, -2],
    [8, -7, 6, -5, 4, -3, 2, -1],
    [0, 0, 0, 0, 0, 0, 0, 0],
    [-1, -2, -3, -4, -5, -6, -7, -8],
    [-2, 1, 4, -3, -6, 5, 8, -7],
    [-3, -4, 1, 2, 7, 8, -5, -6],
    [-4, 3, -2, 1, 8, -7, 6, -5],
    [-5, -6, -7, -8, 1, 2, 3, 4],
    [-6, 5, 8, -7, 2, -1, -4, 3],
    [-7, -8, 5, 6, -3, -4, 1, 2],
    [-8, 7, -6, 5, -4, 3, -2, 1],
]

# Uniform U-type designs, 1-based symbols
U_6_3_2 = [
    [1, 1],
    [2, 2],
    [3, 3],
    [1, 3],
    [2, 1],
    [3, 2],
]

U_6_6_2 = [
    [1, 3],
    [2, 5],
    [3, 1],
    [4, 6],
    [5, 2],
    [6, 4],
]

# Top halves of orthogonal designs of orders 2, 4, 8 and 16. Entry +-i stands
# for +-x_i; x_i = 1 gives the sign pattern and x_i = (2i-1)/2 a Latin hypercube.
TEMPLATE_PATTERNS = {
    2: [[1]],
    4: [
        [1, 2],
        [2, -1],
    ],
    8: [
        [1, -2, 4, 3],
        [2, 1, 3, -4],
        [3, -4, -2, -1],
        [4, 3, -1, 2],
    ],
    16: [
        [1, -2, -4, -3, -8, 7, 5, 6],
        [2, 1, -3, 4, -7, -8, -6, 5],
        [3, -4, 2, 1, -6, -5, 7, -8],
        [4, 3, 1, -2, -5, 6, -8, -7],
        [5, -6, -8, 7, 4, 3, -1, -2],
        [6, 5, -7, -8, 3, -4, 2, -1],
        [7, -8, 6, -5, 2, -1, -3, 4],
        [8, 7, 5, 6, 1, 2, 4, 3],
    ],
}


def _levels(rows, levels=None) -> LevelMatrix:
    return LevelMatrix.from_levels(rows, levels)


def _doubled(rows) -> LevelMatrix:
    return LevelMatrix(np.array(rows, dtype=np.int64))


@dataclass(frozen=True)
class TableEntry:
    """A named embedded design.

    Attributes:
        name: Identifier accepted by get_table and the dump-table command
        description: One-line description
        build: Factory returning a LevelMatrix, DesignMatrix or OrthogonalArray
    """
    name: str
    description: str
    build: Callable[[], object]

    def to_text(self) -> str:
        """CSV text, or OA text for orthogonal arrays."""
        value = self.build()
        if isinstance(value, OrthogonalArray):
            return format_oa(value)
        if isinstance(value, LevelMatrix):
            return level_matrix_csv(value)
        return design_matrix_csv(value)


TABLES: Dict[str, TableEntry] = {entry.name: entry for entry in [
    TableEntry("lh_5_3", "random 5x3 Latin hypercube", lambda: _levels(LH_5_3)),
    TableEntry("d_5_3", "jittered unit-cube scaling of lh_5_3", lambda: DesignMatrix(D_5_3)),
    TableEntry("oa_9_3_4", "OA(9, 3^4, 2)", lambda: OrthogonalArray(OA_9_3_4, 3, 2)),
    TableEntry("oalh_9_4", "OA-based Latin hypercube from oa_9_3_4", lambda: _levels(OALH_9_4)),
    TableEntry("olh_5_2", "orthogonal Latin hypercube, 5 runs 2 factors", lambda: _levels(OLH_5_2)),
    TableEntry("olh_7_3", "orthogonal Latin hypercube, 7 runs 3 factors", lambda: _levels(OLH_7_3)),
    TableEntry("olh_8_4", "orthogonal Latin hypercube, 8 runs 4 factors", lambda: _doubled(OLH_8_4)),
    TableEntry("olh_8_4_foldover", "olh_8_4 with foldover row order", lambda: _doubled(OLH_8_4_FOLDOVER)),
    TableEntry("olh_9_5", "orthogonal Latin hypercube, 9 runs 5 factors", lambda: _levels(OLH_9_5)),
    TableEntry("olh_11_7", "orthogonal Latin hypercube, 11 runs 7 factors", lambda: _levels(OLH_11_7)),
    TableEntry("nolh_13_12", "nearly orthogonal Latin hypercube, 13 runs 12 factors",
               lambda: _levels(NOLH_13_12)),
    TableEntry("olh_16_12", "orthogonal Latin hypercube by rotation, 16 runs 12 factors",
               lambda: _doubled(OLH_16_12)),
    TableEntry("nolh_16_15", "nearly orthogonal Latin hypercube, 16 runs 15 factors",
               lambda: _doubled(NOLH_16_15)),
    TableEntry("sun_17_8", "second-order orthogonal Latin hypercube, 17 runs 8 factors",
               lambda: _levels(SUN_17_8)),
    TableEntry("u_6_3_2", "uniform design U(6; 3^2)", lambda: LevelMatrix.from_symbols(U_6_3_2, 3)),
    TableEntry("u_6_6_2", "uniform design U(6; 6^2)", lambda: LevelMatrix.from_symbols(U_6_6_2, 6)),
]}


def get_table(name: str):
    """Build the embedded design registered under name.

    Raises:
        DesignError: Unknown name
    """
    try:
        return TABLES[name].build()
    except KeyError:
        raise DesignError(f"unknown table {name!r}; known: {', '.join(sorted(TABLES))}")
