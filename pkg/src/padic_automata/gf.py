"""Arithmetic in GF(p^l).

An element is an int in ``[0, q)`` whose base-p digits are the coefficients
(constant term first) of a polynomial in the generator, reduced modulo a
fixed monic irreducible polynomial.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .padic import int_to_word, require_prime, word_to_int

# Conway polynomials, coefficients constant term first.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
}


def _poly_mod(a: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    l = len(mod) - 1
    for i in range(len(a) - 1, l - 1, -1):
        c = a[i] % p
        if c:
            for j in range(l + 1):
                a[i - l + j] = (a[i - l + j] - c * mod[j]) % p
    return [x % p for x in a[:l]] + [0] * max(0, l - len(a))


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(mod: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    l = len(mod) - 1
    if l < 1 or mod[-1] != 1:
        return False
    for deg in range(1, l // 2 + 1):
        for low in product(range(p), repeat=deg):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod(list(mod), divisor, p)):
                return False
    return True


def find_irreducible(p: int, l: int) -> tuple[int, ...]:
    """Conway polynomial when tabulated, else the first monic irreducible in
    lexicographic order of (constant term, ..., x^(l-1) coefficient) read as
    a base-p number."""
    if (p, l) in CONWAY:
        return CONWAY[(p, l)]
    for code in range(p**l):
        cand = int_to_word(code, p, l) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise ArithmeticError(f"no irreducible polynomial of degree {l} over GF({p})")


class GF:
    def __init__(self, p: int, l: int = 1, modulus: tuple[int, ...] | None = None):
        self.p = require_prime(p)
        if l < 1:
            raise ValueError("extension degree must be >= 1")
        self.l = l
        self.q = p**l
        self.modulus = tuple(modulus) if modulus is not None else find_irreducible(p, l)
        if len(self.modulus) != l + 1 or not is_irreducible(self.modulus, p):
            raise ValueError(f"{self.modulus} is not a monic irreducible of degree {l}")
        q = self.q
        self._add = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
        self._neg = [self._slow_add(0, a, -1) for a in range(q)]
        self._mul = [[self._slow_mul(a, b) for b in range(q)] for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            self._inv[a] = next(b for b in range(1, q) if self._mul[a][b] == 1)

    def _slow_add(self, a: int, b: int, sign: int = 1) -> int:
        da, db = int_to_word(a, self.p, self.l), int_to_word(b, self.p, self.l)
        return word_to_int([(x + sign * y) % self.p for x, y in zip(da, db)], self.p)

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(int_to_word(a, self.p, self.l), int_to_word(b, self.p, self.l), self.p)
        return word_to_int(_poly_mod(prod, self.modulus, self.p), self.p)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        while e:
            if e & 1:
                out = self._mul[out][a]
            a = self._mul[a][a]
            e >>= 1
        return out

    def order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = self._mul[x][a]
            k += 1
        return k

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.l, self.modulus) == (
            other.p, other.l, other.modulus)

    def __hash__(self):
        return hash((self.p, self.l, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.l}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def field(p: int, l: int = 1) -> GF:
    return GF(p, l)
