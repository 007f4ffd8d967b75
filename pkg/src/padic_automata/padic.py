"""Exact arithmetic on truncated p-adic integers and on Q ∩ Z_p.

Elements of Q ∩ Z_p are plain :class:`fractions.Fraction` values whose
denominator is coprime to ``p``.  Words over the digit alphabet are tuples
of ints, least significant digit first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence, Union

Rational = Union[int, Fraction]


class NotPadicIntegerError(ValueError):
    """Raised when a rational has a denominator divisible by ``p``."""


def check_base(p: int) -> int:
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"base must be an integer >= 2, got {p!r}")
    return p


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def require_prime(p: int) -> int:
    check_base(p)
    if not is_prime(p):
        raise ValueError(f"a prime base is required here, got {p}")
    return p


def as_padic(x: Rational, p: int) -> Fraction:
    """Coerce ``x`` to a Fraction and check that it lies in Q ∩ Z_p."""
    x = Fraction(x)
    if gcd(x.denominator, p) != 1:
        raise NotPadicIntegerError(f"{x} is not a {p}-adic integer")
    return x


def is_padic_integer(x: Rational, p: int) -> bool:
    return gcd(Fraction(x).denominator, p) == 1


def reduce_mod(x: Rational, p: int, n: int) -> int:
    """Return ``x mod p**n`` as an integer in ``[0, p**n)``."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    x = as_padic(x, p)
    mod = p**n
    if mod == 1:
        return 0
    if x.denominator == 1:
        return x.numerator % mod
    return x.numerator * pow(x.denominator, -1, mod) % mod


def digit(x: Rational, p: int, i: int) -> int:
    """The coefficient of ``p**i`` in the canonical p-adic expansion of ``x``."""
    if i < 0:
        raise ValueError("digit index must be non-negative")
    return reduce_mod(x, p, i + 1) // p**i


def digits(x: Rational, p: int, n: int) -> tuple[int, ...]:
    """The first ``n`` p-adic digits of ``x``, least significant first."""
    r = reduce_mod(x, p, n)
    return int_to_word(r, p, n)


def valuation(x: Rational, p: int) -> int | None:
    """p-adic valuation of a p-adic integer; ``None`` for zero."""
    x = as_padic(x, p)
    if x == 0:
        return None
    v, num = 0, x.numerator
    while num % p == 0:
        num //= p
        v += 1
    return v


def divide_exact(x: Rational, p: int, k: int) -> Fraction:
    """``x / p**k``, raising if the quotient leaves Z_p."""
    x = as_padic(x, p)
    if k and x.numerator % p**k:
        raise NotPadicIntegerError(f"{x} is not divisible by {p}^{k} in Z_{p}")
    return x / p**k


def floor_log(m: int, p: int) -> int:
    """``floor(log_p m)`` with the convention ``floor_log(0) == 0``."""
    if m < 0:
        raise ValueError("floor_log is defined for m >= 0")
    k = 0
    while m >= p:
        m //= p
        k += 1
    return k


def int_to_word(x: int, p: int, n: int | None = None) -> tuple[int, ...]:
    """Base-p digits of a non-negative integer, least significant first.

    With ``n`` given the word has exactly ``n`` letters (``x`` must fit);
    otherwise it is the shortest expansion (empty for zero).
    """
    if x < 0:
        raise ValueError("only non-negative integers have finite words")
    out = []
    if n is None:
        while x:
            x, r = divmod(x, p)
            out.append(r)
        return tuple(out)
    for _ in range(n):
        x, r = divmod(x, p)
        out.append(r)
    if x:
        raise ValueError(f"value does not fit in {n} base-{p} digits")
    return tuple(out)


def word_to_int(word: Sequence[int], p: int) -> int:
    value = 0
    for d in reversed(word):
        if not 0 <= d < p:
            raise ValueError(f"digit {d} outside alphabet of size {p}")
        value = value * p + d
    return value


def check_word(word: Sequence[int], p: int) -> tuple[int, ...]:
    word = tuple(word)
    for d in word:
        if not isinstance(d, int) or not 0 <= d < p:
            raise ValueError(f"digit {d!r} outside alphabet of size {p}")
    return word


@dataclass(frozen=True)
class EventuallyPeriodicDigits:
    """Digit stream ``preperiod`` followed by ``period`` repeated forever."""

    p: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        check_base(self.p)
        object.__setattr__(self, "preperiod", check_word(self.preperiod, self.p))
        object.__setattr__(self, "period", check_word(self.period, self.p))
        if not self.period:
            raise ValueError("period must be non-empty")

    def digit(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def __iter__(self) -> Iterator[int]:
        yield from self.preperiod
        while True:
            yield from self.period

    def canonical(self) -> "EventuallyPeriodicDigits":
        return to_eventually_periodic(from_eventually_periodic(self), self.p)


def to_eventually_periodic(x: Rational, p: int) -> EventuallyPeriodicDigits:
    """Digit stream of ``x`` in canonical form (shortest period, then preperiod).

    Follows the orbit of ``x -> (x - digit0(x)) / p``; distinct points of the
    orbit have distinct digit tails, so the first repeat yields the minimal
    preperiod and the cycle length is the minimal period.
    """
    x = as_padic(x, p)
    seen: dict[Fraction, int] = {}
    out: list[int] = []
    while x not in seen:
        seen[x] = len(out)
        d = reduce_mod(x, p, 1)
        out.append(d)
        x = (x - d) / p
    start = seen[x]
    return EventuallyPeriodicDigits(p, tuple(out[:start]), tuple(out[start:]))


def from_eventually_periodic(e: EventuallyPeriodicDigits) -> Fraction:
    p = e.p
    pre = word_to_int(e.preperiod, p)
    L = len(e.period)
    cycle = Fraction(word_to_int(e.period, p), 1 - p**L)
    return pre + p ** len(e.preperiod) * cycle


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())
