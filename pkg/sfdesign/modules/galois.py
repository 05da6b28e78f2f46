"""Finite field arithmetic GF(p^m) on integer-coded elements."""

import logging
from functools import lru_cache
from itertools import product
from typing import List, Tuple

import numpy as np

from sfdesign.errors import ConstructionError

logger = logging.getLogger(__name__)


def prime_power(q: int) -> Tuple[int, int] | None:
    """Return (p, m) with q = p^m for a prime p, or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m = 0
    while q % p == 0:
        q //= p
        m += 1
    return (p, m) if q == 1 else None


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _poly_mod(coeffs: List[int], modulus: List[int], p: int) -> List[int]:
    """Remainder of coeffs modulo a monic polynomial (lowest degree first)."""
    rem = [c % p for c in coeffs]
    deg = len(modulus) - 1
    for top in range(len(rem) - 1, deg - 1, -1):
        c = rem[top]
        if c:
            for i, mc in enumerate(modulus):
                rem[top - deg + i] = (rem[top - deg + i] - c * mc) % p
    return rem[:deg] + [0] * max(0, deg - len(rem))


def _poly_mul(a: List[int], b: List[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _is_irreducible(modulus: List[int], p: int) -> bool:
    m = len(modulus) - 1
    for degree in range(1, m // 2 + 1):
        for lower in product(range(p), repeat=degree):
            if not any(_poly_mod(modulus, list(lower) + [1], p)):
                return False
    return True


def irreducible_polynomial(p: int, m: int) -> List[int]:
    """First monic irreducible polynomial of degree m over GF(p), lowest degree first."""
    for lower in product(range(p), repeat=m):
        candidate = list(lower) + [1]
        if m == 1 or (candidate[0] != 0 and _is_irreducible(candidate, p)):
            return candidate
    raise ConstructionError(f"no irreducible polynomial of degree {m} over GF({p})")


class GaloisField:
    """GF(q) with elements coded 0..q-1 as base-p digit vectors of polynomials."""

    def __init__(self, q: int):
        """Build addition and multiplication tables.

        Args:
            q: Field order, a prime power

        Raises:
            ConstructionError: q is not a prime power
        """
        pm = prime_power(q)
        if pm is None:
            raise ConstructionError(f"{q} is not a prime power")
        self.q = q
        self.p, self.m = pm
        self.modulus = irreducible_polynomial(self.p, self.m)
        digits = [self._digits(e) for e in range(q)]
        self.add = np.array([[self._encode([(x + y) % self.p for x, y in zip(a, b)])
                              for b in digits] for a in digits], dtype=np.int64)
        self.mul = np.array([[self._encode(_poly_mod(_poly_mul(a, b, self.p), self.modulus, self.p))
                              for b in digits] for a in digits], dtype=np.int64)
        self.neg = np.array([int(np.nonzero(self.add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        squares = {int(self.mul[a, a]) for a in range(1, q)}
        self._character = np.array([0] + [1 if a in squares else -1 for a in range(1, q)], dtype=np.int64)
        logger.debug("Built GF(%d) with modulus %s", q, self.modulus)

    def _digits(self, e: int) -> List[int]:
        out = []
        for _ in range(self.m):
            out.append(e % self.p)
            e //= self.p
        return out

    def _encode(self, digits: List[int]) -> int:
        return sum(d * self.p ** i for i, d in enumerate(digits))

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def character(self, a) -> np.ndarray:
        """Quadratic character: 0 at zero, 1 on nonzero squares, -1 otherwise."""
        return self._character[a]

    def __repr__(self) -> str:
        return f"GaloisField({self.q})"


@lru_cache(maxsize=None)
def galois_field(q: int) -> GaloisField:
    return GaloisField(q)
