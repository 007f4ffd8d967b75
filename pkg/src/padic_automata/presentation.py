"""Exact, finitely described functions ``Z_p -> Z_p``.

Every presentation can be evaluated exactly at integers (and, except for
depth-limited tables, at any element of Q ∩ Z_p), which is what makes van der
Put coefficients and residual functions computable without guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence, Union

from .padic import (
    NotPadicIntegerError,
    Rational,
    as_padic,
    check_base,
    floor_log,
    format_rational,
    int_to_word,
    reduce_mod,
)
from .transducer import Transducer


class DepthOverflowError(ValueError):
    """A depth-limited presentation was asked for more digits than it has."""


@dataclass(frozen=True)
class Violation:
    """Witness that ``x ≡ y (mod p^n)`` but ``f(x) ≢ f(y) (mod p^n)``."""

    x: int
    y: int
    n: int


def _check_residual_args(p: int, n: int, k: int) -> None:
    if n < 0:
        raise ValueError("residual offset must be non-negative")
    if k < floor_log(n, p) + 1:
        raise ValueError(f"residual f_{{{n},{k}}} needs k >= floor_log_p(n) + 1")


def _carry(value: Fraction, p: int, k: int) -> Fraction:
    """``(v - (v mod p^k)) / p^k``, the part of ``v`` above the first ``k`` digits."""
    return (value - reduce_mod(value, p, k)) / p**k


class Presentation:
    """Common behaviour; subclasses provide ``p``, ``exact``, ``residual`` and ``key``."""

    p: int

    def exact(self, x: Rational) -> Fraction:
        raise NotImplementedError

    def residual(self, n: int, k: int) -> "Presentation":
        raise NotImplementedError

    def key(self) -> tuple:
        raise NotImplementedError

    def evaluate_mod(self, x: int, n: int) -> int:
        if not 0 <= x < self.p**n:
            raise ValueError(f"input {x} outside [0, {self.p}^{n})")
        return reduce_mod(self.exact(x), self.p, n)

    def table_mod(self, n: int) -> list[int]:
        return [self.evaluate_mod(x, n) for x in range(self.p**n)]

    def output_digit(self, r: int) -> int:
        """First output digit on input digit ``r``; the Mealy output of this state."""
        return self.evaluate_mod(r, 1)

    def evaluation_depth(self) -> int | None:
        """Largest supported evaluation depth, ``None`` when unbounded."""
        return None


@dataclass(frozen=True)
class Polynomial(Presentation):
    """``f(x) = c_0 + c_1 x + ... + c_d x^d`` with coefficients in Q ∩ Z_p."""

    p: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        check_base(self.p)
        cs = [as_padic(c, self.p) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def exact(self, x: Rational) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def residual(self, n: int, k: int) -> "Polynomial":
        _check_residual_args(self.p, n, k)
        cs = self.coeffs
        pk = self.p**k
        out = [_carry(self.exact(n), self.p, k)]
        for j in range(1, len(cs)):
            s = sum(comb(i, j) * cs[i] * n ** (i - j) for i in range(j, len(cs)))
            out.append(Fraction(s) * pk ** (j - 1))
        return Polynomial(self.p, tuple(out))

    def key(self) -> tuple:
        return ("poly", self.p, self.coeffs)

    def describe(self) -> dict:
        return {"kind": "poly", "p": self.p,
                "coeffs": [format_rational(c) for c in self.coeffs]}


@dataclass(frozen=True)
class Affine(Presentation):
    """``f(x) = a + b x``."""

    p: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        check_base(self.p)
        object.__setattr__(self, "a", as_padic(self.a, self.p))
        object.__setattr__(self, "b", as_padic(self.b, self.p))

    def exact(self, x: Rational) -> Fraction:
        return self.a + self.b * Fraction(x)

    def residual(self, n: int, k: int) -> "Affine":
        _check_residual_args(self.p, n, k)
        return Affine(self.p, _carry(self.exact(n), self.p, k), self.b)

    def key(self) -> tuple:
        return ("affine", self.p, self.a, self.b)

    def describe(self) -> dict:
        return {"kind": "affine", "p": self.p,
                "a": format_rational(self.a), "b": format_rational(self.b)}


@dataclass(frozen=True)
class AutomatonBacked(Presentation):
    machine: Transducer

    @property
    def p(self) -> int:  # type: ignore[override]
        return self.machine.p

    def exact(self, x: Rational) -> Fraction:
        return self.machine.eval_rational(x)

    def evaluate_mod(self, x: int, n: int) -> int:
        return self.machine.eval_mod(x, n)

    def table_mod(self, n: int) -> list[int]:
        return self.machine.table_mod(n)

    def output_digit(self, r: int) -> int:
        return self.machine.output[self.machine.initial][r]

    def residual(self, n: int, k: int) -> "AutomatonBacked":
        _check_residual_args(self.p, n, k)
        s = self.machine.run(int_to_word(n, self.p, k))
        return AutomatonBacked(self.machine.with_initial(s))

    def key(self) -> tuple:
        m = self.machine
        return ("automaton", m.p, m.delta, m.output, m.initial)

    def describe(self) -> dict:
        return {"kind": "automaton", **self.machine.to_dict()}


VDP_TAILS = ("zero", "truncated")


@dataclass(frozen=True)
class VdpTable(Presentation):
    """``f(x) = sum_m b_m p^floor_log(m) chi(m, x)`` from a table of ``b_m``, ``m < p^K``.

    ``tail='zero'`` sets ``b_m = 0`` beyond the table, giving a total function;
    ``tail='truncated'`` leaves them unknown and limits evaluation to depth K.
    """

    p: int
    K: int
    b: tuple[Fraction, ...]
    tail: str = "zero"

    def __post_init__(self):
        check_base(self.p)
        if self.K < 1:
            raise ValueError("table depth K must be >= 1")
        if self.tail not in VDP_TAILS:
            raise ValueError(f"unknown tail rule {self.tail!r}")
        b = tuple(as_padic(v, self.p) for v in self.b)
        if len(b) != self.p**self.K:
            raise ValueError(f"expected {self.p ** self.K} coefficients, got {len(b)}")
        object.__setattr__(self, "b", b)

    def evaluation_depth(self) -> int | None:
        return self.K if self.tail == "truncated" else None

    def coefficient(self, m: int) -> Fraction:
        if m < len(self.b):
            return self.b[m]
        if self.tail == "zero":
            return Fraction(0)
        raise DepthOverflowError(f"b_{m} lies beyond the table depth {self.K}")

    def exact(self, x: Rational) -> Fraction:
        p = self.p
        x = as_padic(x, p)
        if self.tail == "truncated" and not (
            x.denominator == 1 and 0 <= x < p**self.K
        ):
            raise DepthOverflowError(f"value at {x} needs coefficients beyond depth {self.K}")
        acc = self.coefficient(reduce_mod(x, p, 1))
        for j in range(2, self.K + 1):
            m = reduce_mod(x, p, j)
            if m >= p ** (j - 1):
                acc += self.b[m] * p ** (j - 1)
        return acc

    def evaluate_mod(self, x: int, n: int) -> int:
        if self.tail == "truncated" and n > self.K:
            raise DepthOverflowError(f"depth {n} exceeds table depth {self.K}")
        return super().evaluate_mod(x, n)

    def residual(self, n: int, k: int) -> "VdpTable":
        _check_residual_args(self.p, n, k)
        p = self.p
        if self.tail == "truncated" and k >= self.K:
            raise DepthOverflowError(f"residual at depth {k} exceeds table depth {self.K}")
        depth = max(self.K - k, 1)
        c = _carry(self.exact(n), p, k)
        pk = p**k
        b = [c]
        for t in range(1, p**depth):
            v = self.coefficient(n + pk * t)
            b.append(c + v if t < p else v)
        return VdpTable(p, depth, tuple(b), self.tail)

    def key(self) -> tuple:
        if self.tail == "zero":
            b = list(self.b)
            while len(b) > 1 and b[-1] == 0:
                b.pop()
            return ("vdp", self.p, tuple(b))
        return ("vdp-truncated", self.p, self.K, self.b)

    def describe(self) -> dict:
        return {"kind": "vdp", "p": self.p, "K": self.K, "tail": self.tail,
                "b": [format_rational(v) for v in self.b]}


@dataclass(frozen=True)
class LocallyConstant(Presentation):
    """``f(x) = values[x mod p^K]``; need not be 1-Lipschitz (e.g. digit extractors)."""

    p: int
    K: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        check_base(self.p)
        vals = tuple(as_padic(v, self.p) for v in self.values)
        if len(vals) != self.p**self.K:
            raise ValueError(f"expected {self.p ** self.K} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    def exact(self, x: Rational) -> Fraction:
        return self.values[reduce_mod(x, self.p, self.K)]

    def residual(self, n: int, k: int) -> "LocallyConstant":
        _check_residual_args(self.p, n, k)
        p, pk = self.p, self.p**k
        depth = max(self.K - k, 0)
        c = reduce_mod(self.exact(n), p, k)
        vals = []
        for z in range(p**depth):
            v = self.exact(n + pk * z) - c
            if v.numerator % pk:
                raise NotPadicIntegerError(f"f is not 1-Lipschitz at {n + pk * z}")
            vals.append(v / pk)
        return LocallyConstant(p, depth, tuple(vals))

    def key(self) -> tuple:
        return ("locally-constant", self.p, self.K, self.values)

    def describe(self) -> dict:
        return {"kind": "locally-constant", "p": self.p, "K": self.K,
                "values": [format_rational(v) for v in self.values]}


def digit_function(p: int, i: int) -> LocallyConstant:
    """``x -> delta_i(x)``, the i-th digit as a value in {0, ..., p-1}."""
    K = i + 1
    return LocallyConstant(p, K, tuple((x // p**i) % p for x in range(p**K)))


def check_lipschitz_depth(f: Presentation, D: int) -> Violation | None:
    """Search for a violation of the 1-Lipschitz condition among inputs below ``p^D``.

    Returns ``None`` when for every ``n <= D`` and ``x ≡ y (mod p^n)`` with
    ``x, y < p^D`` the images agree modulo ``p^n``.  Otherwise returns the
    first witness in order of increasing ``n`` then ``y``, with ``x = y mod p^n``.
    """
    if D < 1:
        raise ValueError("depth must be >= 1")
    p = f.p
    table = f.table_mod(D)
    for n in range(1, D + 1):
        mod = p**n
        for y in range(mod, p**D):
            x = y % mod
            if (table[y] - table[x]) % mod:
                return Violation(x, y, n)
    return None


Exact = Union[Polynomial, Affine, AutomatonBacked, VdpTable, LocallyConstant]


def polynomial(p: int, coeffs: Sequence[Rational]) -> Polynomial:
    return Polynomial(p, tuple(Fraction(c) for c in coeffs))
