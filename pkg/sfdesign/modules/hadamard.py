"""Hadamard matrices and the orthogonal-design templates used for doubling."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict

import numpy as np

from sfdesign.errors import InvalidDimensionError, UnsupportedOrderError
from sfdesign.modules.design import LevelMatrix
from sfdesign.modules.galois import galois_field, prime_power
from sfdesign.modules.tables import TEMPLATE_PATTERNS

logger = logging.getLogger(__name__)

H2 = np.array([[1, 1], [1, -1]], dtype=np.int64)


def sylvester(power: int) -> np.ndarray:
    """Sylvester Hadamard matrix of order 2^power."""
    H = np.ones((1, 1), dtype=np.int64)
    for _ in range(power):
        H = np.kron(H2, H)
    return H


def paley(q: int) -> np.ndarray:
    """Paley type I Hadamard matrix of order q + 1 for a prime power q = 3 mod 4."""
    if q % 4 != 3 or prime_power(q) is None:
        raise UnsupportedOrderError(f"Paley construction needs a prime power q = 3 mod 4, got {q}")
    F = galois_field(q)
    a, b = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
    Q = F.character(F.sub(a, b))
    H = np.empty((q + 1, q + 1), dtype=np.int64)
    H[0, :] = 1
    H[1:, 0] = -1
    H[1:, 1:] = Q + np.eye(q, dtype=np.int64)
    return H


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@lru_cache(maxsize=None)
def _hadamard(order: int) -> np.ndarray:
    if _is_power_of_two(order):
        return sylvester(order.bit_length() - 1)
    power = 0
    base = order
    while base % 2 == 0:
        q = base - 1
        if q % 4 == 3 and prime_power(q) is not None:
            logger.debug("Hadamard order %d = 2^%d x Paley(%d)", order, power, q)
            H = paley(q)
            for _ in range(power):
                H = np.kron(H2, H)
            return H
        base //= 2
        power += 1
    raise UnsupportedOrderError(f"no implemented construction gives a Hadamard matrix of order {order}")


def hadamard(order: int) -> np.ndarray:
    """Hadamard matrix H with H H' = order * I.

    Powers of two use Sylvester doubling; other orders are 2^a (q + 1) with q a
    prime power congruent to 3 mod 4 (Paley type I, then Sylvester doubling).

    Args:
        order: Matrix order

    Returns:
        order x order int64 matrix of +-1

    Raises:
        UnsupportedOrderError: The order is not reachable by these constructions
    """
    if order < 1:
        raise InvalidDimensionError(f"order must be positive, got {order}")
    H = _hadamard(order).copy()
    return H


def is_hadamard(H: np.ndarray) -> bool:
    H = np.asarray(H, dtype=np.int64)
    n = H.shape[0]
    return H.shape == (n, n) and np.all(np.abs(H) == 1) and np.array_equal(H @ H.T, n * np.eye(n, dtype=np.int64))


def is_column_orthogonal(S: np.ndarray) -> bool:
    """True when S is a +-1 matrix with S'S = nI."""
    S = np.asarray(S, dtype=np.int64)
    return bool(np.all(np.abs(S) == 1)
                and np.array_equal(S.T @ S, S.shape[0] * np.eye(S.shape[1], dtype=np.int64)))


@dataclass(frozen=True)
class OrthogonalDesignTemplate:
    """Signed-index pattern of an orthogonal design of order m.

    ``pattern`` is the m/2 x m/2 top half; entry +-i stands for +-x_i.
    """
    order: int
    pattern: tuple

    @property
    def half(self) -> np.ndarray:
        return np.array(self.pattern, dtype=np.int64)

    def sign_matrix(self) -> np.ndarray:
        """Top half with every x_i = 1."""
        return np.sign(self.half)

    def stacked_signs(self) -> np.ndarray:
        """A = (S', S')' of shape m x m/2."""
        S = self.sign_matrix()
        return np.vstack([S, S])

    def latin_hypercube(self) -> LevelMatrix:
        """x_i = (2i - 1)/2 on the top half, negated on the bottom: an OLH(m, m/2)."""
        X = self.half
        top = np.sign(X) * (2 * np.abs(X) - 1)
        return LevelMatrix(np.vstack([top, -top]))


TEMPLATES: Dict[int, OrthogonalDesignTemplate] = {
    order: OrthogonalDesignTemplate(order, tuple(tuple(row) for row in rows))
    for order, rows in TEMPLATE_PATTERNS.items()
}
