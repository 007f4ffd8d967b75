"""Van der Put coefficients of functions on Z_p and reconstruction from them."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .padic import Rational, check_base, floor_log, format_rational, reduce_mod
from .presentation import Presentation, VdpTable


class NotIntegral(ArithmeticError):
    """``B_m`` is not divisible by ``p^floor_log(m)``: f is not 1-Lipschitz."""

    def __init__(self, m: int, B: Fraction):
        super().__init__(f"B_{m} = {B} is not divisible by p^floor_log({m})")
        self.m = m
        self.B = B


def chi(m: int, x: Rational, p: int) -> int:
    """Indicator of the ball ``m + p^(floor_log(m)+1) Z_p``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    n = floor_log(m, p) + 1
    return int(reduce_mod(x, p, n) == m % p**n)


def top_digit_removed(m: int, p: int) -> int:
    """``m - m_{n-1} p^{n-1}``: ``m`` with its most significant digit cleared."""
    if m < p:
        return 0
    return m % p ** floor_log(m, p)


def coeff_B(f: Presentation, m: int) -> Fraction:
    if m < 0:
        raise ValueError("m must be non-negative")
    if m < f.p:
        return f.exact(m)
    return f.exact(m) - f.exact(top_digit_removed(m, f.p))


def normalize(B: Fraction, m: int, p: int) -> Fraction:
    """``b_m = B_m / p^floor_log(m)``; raises :class:`NotIntegral` when not in Z_p."""
    shift = p ** floor_log(m, p)
    if B.numerator % shift:
        raise NotIntegral(m, B)
    return B / shift


def coeff_b(f: Presentation, m: int) -> Fraction:
    return normalize(coeff_B(f, m), m, f.p)


@dataclass(frozen=True)
class VdpSeries:
    p: int
    K: int
    B: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        check_base(self.p)
        size = self.p**self.K
        if len(self.B) != size or len(self.b) != size:
            raise ValueError(f"a depth-{self.K} series has {size} coefficients")
        for m, (B, b) in enumerate(zip(self.B, self.b)):
            if B != b * self.p ** floor_log(m, self.p):
                raise ValueError(f"b_{m} is inconsistent with B_{m}")

    @classmethod
    def from_b(cls, p: int, K: int, b) -> "VdpSeries":
        b = tuple(Fraction(v) for v in b)
        B = tuple(v * p ** floor_log(m, p) for m, v in enumerate(b))
        return cls(p, K, B, b)

    def as_presentation(self, tail: str = "zero") -> VdpTable:
        return VdpTable(self.p, self.K, self.b, tail)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "K": self.K,
            "B": [format_rational(v) for v in self.B],
            "b": [[str(v.numerator), str(v.denominator)] for v in self.b],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VdpSeries":
        p, K = int(d["p"]), int(d["K"])
        b = [Fraction(int(num), int(den)) for num, den in d["b"]]
        series = cls.from_b(p, K, b)
        if "B" in d and [Fraction(v) for v in d["B"]] != list(series.B):
            raise ValueError("B and b coefficients disagree")
        return series

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def extract(f: Presentation, K: int, threads: int = 1) -> VdpSeries:
    """Coefficients ``B_m, b_m`` for ``m < p^K``.

    Raises :class:`NotIntegral` at the first (smallest) offending ``m``.
    """
    p = f.p
    ms = range(p**K)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            B = list(pool.map(lambda m: coeff_B(f, m), ms, chunksize=64))
    else:
        B = [coeff_B(f, m) for m in ms]
    b = tuple(normalize(v, m, p) for m, v in enumerate(B))
    return VdpSeries(p, K, tuple(B), b)


def eval_from_vdp(s: VdpSeries, x: int, K: int | None = None) -> int:
    """``sum_{m < p^K} B_m chi(m, x)`` reduced modulo ``p^K``.

    Only the ``K`` balls containing ``x`` contribute: ``m = x mod p``, plus
    ``m = x mod p^j`` whenever digit ``j-1`` of ``x`` is non-zero.
    """
    p = s.p
    K = s.K if K is None else K
    if K > s.K:
        raise ValueError(f"series only has depth {s.K}")
    if not 0 <= x < p**K:
        raise ValueError(f"input {x} outside [0, {p}^{K})")
    acc = s.B[x % p]
    for j in range(2, K + 1):
        m = x % p**j
        if m >= p ** (j - 1):
            acc += s.B[m]
    return reduce_mod(acc, p, K)
