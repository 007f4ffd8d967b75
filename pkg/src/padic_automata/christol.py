"""Algebraic relations for power series over GF(p^l).

A relation ``u_0 + u_1 F + ... + u_d F^d = 0`` is searched for by linear
algebra on truncated series; every verdict states the precision it was
checked at and is evidence, not proof.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .gf import GF, field
from .kernel import Dfao, automatic_eval

DEFAULT_MARGIN = 32


@dataclass(frozen=True)
class SeriesOverFq:
    field: GF
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if any(not 0 <= c < self.field.q for c in coeffs):
            raise ValueError("coefficient outside the field")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def precision(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class Tau:
    """Injection of a finite alphabet into GF(p^l), by sorted order."""

    field: GF
    mapping: dict

    def __call__(self, value) -> int:
        return self.mapping[value]


def _sort_key(v):
    return (0, Fraction(v)) if isinstance(v, (int, Fraction)) else (1, str(v))


def tau_embed(values: Iterable[Hashable], p: int, l: int | None = None) -> Tau:
    """Send the i-th smallest value to the field element encoded by ``i``.

    ``l`` defaults to the least extension degree with ``p^l >= len(values)``.
    """
    vals = sorted(set(values), key=_sort_key)
    if l is None:
        l = 1
        while p**l < len(vals):
            l += 1
    if len(vals) > p**l:
        raise ValueError(f"{len(vals)} symbols do not fit in GF({p}^{l})")
    return Tau(field(p, l), {v: i for i, v in enumerate(vals)})


def series_from_values(values: Sequence, tau: Tau) -> SeriesOverFq:
    return SeriesOverFq(tau.field, tuple(tau(v) for v in values))


def series_from_dfao(dfao: Dfao, tau: Tau, N: int) -> SeriesOverFq:
    return SeriesOverFq(tau.field, tuple(tau(automatic_eval(dfao, n)) for n in range(N)))


@dataclass(frozen=True)
class AlgebraicRelation:
    """``u[i]`` holds the coefficients of ``u_i(X)``, constant term first."""

    field: GF
    u: tuple[tuple[int, ...], ...]
    verified_precision: int | None = None

    def __post_init__(self):
        u = tuple(tuple(ui) for ui in self.u)
        if len(u) < 2:
            raise ValueError("a relation needs u_0 and at least u_1")
        object.__setattr__(self, "u", u)

    @property
    def d(self) -> int:
        return len(self.u) - 1

    @property
    def H(self) -> int:
        return max((len(ui) - 1 for ui in self.u), default=0)

    def is_zero(self) -> bool:
        return not any(c for ui in self.u for c in ui)

    def to_dict(self) -> dict:
        return {
            "p": self.field.p,
            "l": self.field.l,
            "modulus": list(self.field.modulus),
            "d": self.d,
            "u": [list(ui) for ui in self.u],
            "verified_precision": self.verified_precision,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AlgebraicRelation":
        f = GF(int(d["p"]), int(d["l"]), tuple(d["modulus"]))
        rel = cls(f, d["u"], d.get("verified_precision"))
        if "d" in d and int(d["d"]) != rel.d:
            raise ValueError("declared degree does not match u")
        return rel

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass(frozen=True)
class Holds:
    precision: int


@dataclass(frozen=True)
class FailsAt:
    index: int


@dataclass(frozen=True)
class NotFoundWithinBounds:
    max_d: int
    max_H: int
    precision: int


def _mul_trunc(F: GF, a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    out = [0] * N
    add, mul = F.add, F.mul
    for i, x in enumerate(a[:N]):
        if x:
            for j in range(min(len(b), N - i)):
                y = b[j]
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return out


def _powers(series: SeriesOverFq, d: int, N: int) -> list[list[int]]:
    F = series.field
    base = list(series.coeffs[:N])
    pw = [[1] + [0] * (N - 1)]
    for _ in range(d):
        pw.append(_mul_trunc(F, pw[-1], base, N))
    return pw


def verify_relation(series: SeriesOverFq, rel: AlgebraicRelation, N: int) -> Holds | FailsAt:
    """Check ``sum u_i F^i ≡ 0 (mod X^N)``."""
    if rel.is_zero():
        raise ValueError("the all-zero relation is not a relation")
    if series.field != rel.field:
        raise ValueError("series and relation live over different fields")
    if N > series.precision:
        raise ValueError(f"precision {N} exceeds the {series.precision} known coefficients")
    F = series.field
    total = [0] * N
    for ui, pw in zip(rel.u, _powers(series, rel.d, N)):
        for k, c in enumerate(_mul_trunc(F, ui, pw, N)):
            total[k] = F.add(total[k], c)
    for k, c in enumerate(total):
        if c:
            return FailsAt(k)
    return Holds(N)


def nullspace(F: GF, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of the right kernel, in reduced row echelon form."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in enumerate(pivots):
            v[pc] = F.neg(m[row][fc])
        basis.append(v)
    if len(basis) > 1:
        basis = rref(F, basis)
    return basis


def rref(F: GF, rows: list[list[int]]) -> list[list[int]]:
    m = [list(r) for r in rows]
    r = 0
    for c in range(len(m[0]) if m else 0):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        r += 1
    return [row for row in m if any(row)]


def find_relation(series: SeriesOverFq, max_d: int, max_H: int,
                  margin: int = DEFAULT_MARGIN) -> AlgebraicRelation | NotFoundWithinBounds:
    """First relation in the order d = 1..max_d, then H = 0..max_H.

    Solves for the coefficients of ``u_0 .. u_d`` (degree <= H) that make
    the series vanish modulo ``X^N`` with ``N = (max_d+1)(max_H+1) + margin``,
    and accepts a candidate only if it still holds modulo ``X^(2N)``.
    """
    if max_d < 1 or max_H < 0:
        raise ValueError("need max_d >= 1 and max_H >= 0")
    N = (max_d + 1) * (max_H + 1) + margin
    if series.precision < 2 * N:
        raise ValueError(f"need {2 * N} coefficients, series has {series.precision}")
    F = series.field
    pw = _powers(series, max_d, N)
    for d in range(1, max_d + 1):
        for H in range(max_H + 1):
            cols = [(i, h) for i in range(d + 1) for h in range(H + 1)]
            rows = [[pw[i][k - h] if k >= h else 0 for i, h in cols] for k in range(N)]
            for v in nullspace(F, rows, len(cols)):
                u = [[0] * (H + 1) for _ in range(d + 1)]
                for (i, h), c in zip(cols, v):
                    u[i][h] = c
                rel = AlgebraicRelation(F, u)
                if rel.is_zero():
                    continue
                if isinstance(verify_relation(series, rel, 2 * N), Holds):
                    return AlgebraicRelation(F, u, 2 * N)
    return NotFoundWithinBounds(max_d, max_H, N)
