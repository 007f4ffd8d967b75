"""p-kernels of sequences over finite alphabets and their DFAOs.

Indices are fed to a DFAO least significant digit first, so the kernel
element ``(a_{j p^m + t})_j`` is exactly the sequence computed from the state
reached after reading the ``m`` low digits of ``t``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence, Union

from .padic import check_base, format_rational, int_to_word
from .vdp import VdpSeries

DEFAULT_MAX_ELEMS = 1024


class DfaoFormatError(ValueError):
    pass


def _encode_symbol(v):
    return format_rational(v) if isinstance(v, Fraction) else v


@dataclass(frozen=True)
class Dfao:
    p: int
    delta: tuple[tuple[int, ...], ...]
    output: tuple[Hashable, ...]
    initial: int = 0

    def __post_init__(self):
        check_base(self.p)
        delta = tuple(tuple(row) for row in self.delta)
        n = len(delta)
        if n == 0 or len(self.output) != n:
            raise ValueError("need one output per state and at least one state")
        for s, row in enumerate(delta):
            if len(row) != self.p or any(not 0 <= t < n for t in row):
                raise ValueError(f"state {s}: bad transition row {row}")
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "output", tuple(self.output))

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def run(self, word: Sequence[int], state: int | None = None) -> int:
        s = self.initial if state is None else state
        for r in word:
            s = self.delta[s][r]
        return s

    def __call__(self, n: int):
        return automatic_eval(self, n)

    def normalized(self) -> "Dfao":
        """Equivalent minimal DFAO whose output is unchanged by reading a 0.

        Such a machine computes the same value whatever number of high zeros
        pads the index, which is what makes states and kernel elements match.
        The state ``(s, o)`` remembers the value ``o`` owed to index ``j = 0``.
        """
        start = (self.initial, self.output[self.initial])
        index = {start: 0}
        pairs = [start]
        delta = []
        i = 0
        while i < len(pairs):
            s, o = pairs[i]
            row = []
            for t in range(self.p):
                s2 = self.delta[s][t]
                nxt = (s2, o if t == 0 else self.output[s2])
                if nxt not in index:
                    index[nxt] = len(pairs)
                    pairs.append(nxt)
                row.append(index[nxt])
            delta.append(row)
            i += 1
        return _minimize(self.p, delta, [o for _, o in pairs])

    def is_zero_robust(self) -> bool:
        return all(self.output[self.delta[s][0]] == self.output[s] for s in range(self.n_states))

    def to_dict(self) -> dict:
        rational = any(isinstance(v, Fraction) for v in self.output)
        return {
            "p": self.p,
            "digit_order": "lsb",
            "states": self.n_states,
            "initial": self.initial,
            "delta": [list(r) for r in self.delta],
            "output": [_encode_symbol(v) for v in self.output],
            "alphabet": "rational" if rational else "symbol",
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Dfao":
        if d.get("digit_order") != "lsb":
            raise DfaoFormatError(
                f"DFAO digit order {d.get('digit_order')!r} is not supported; expected 'lsb'"
            )
        try:
            output = d["output"]
            if d.get("alphabet") == "rational":
                output = [Fraction(v) for v in output]
            dfao = cls(int(d["p"]), d["delta"], output, int(d.get("initial", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise DfaoFormatError(f"malformed DFAO: {exc}") from exc
        if "states" in d and int(d["states"]) != dfao.n_states:
            raise DfaoFormatError("declared state count does not match tables")
        return dfao

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dot(self, name: str = "dfao") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];"]
        for s in range(self.n_states):
            lines.append(f'  s{s} [label="{s}/{_encode_symbol(self.output[s])}", shape=circle];')
        lines.append(f"  __start -> s{self.initial};")
        for s in range(self.n_states):
            edges: dict[int, list[str]] = {}
            for r in range(self.p):
                edges.setdefault(self.delta[s][r], []).append(str(r))
            for t, labs in edges.items():
                lines.append(f'  s{s} -> s{t} [label="{", ".join(labs)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _minimize(p: int, delta: list[list[int]], output: list) -> Dfao:
    codes: dict = {}
    block = [codes.setdefault(o, len(codes)) for o in output]
    count = len(codes)
    while True:
        sigs: dict = {}
        new = [sigs.setdefault((block[s],) + tuple(block[t] for t in delta[s]), len(sigs))
               for s in range(len(delta))]
        if len(sigs) == count:
            break
        block, count = new, len(sigs)
    rep: dict[int, int] = {}
    for s in range(len(delta)):
        rep.setdefault(block[s], s)
    order = [rep[block[0]]]
    seen = set(order)
    queue = deque(order)
    while queue:
        s = queue.popleft()
        for t in delta[s]:
            r = rep[block[t]]
            if r not in seen:
                seen.add(r)
                order.append(r)
                queue.append(r)
    idx = {s: i for i, s in enumerate(order)}
    return Dfao(p, [[idx[rep[block[t]]] for t in delta[s]] for s in order],
                [output[s] for s in order], 0)


def automatic_eval(dfao: Dfao, n: int):
    """Feed the base-p digits of ``n`` (LSB first, no padding) and read the output."""
    if n < 0:
        raise ValueError("index must be non-negative")
    return dfao.output[dfao.run(int_to_word(n, dfao.p))]


@dataclass(frozen=True)
class DfaoBacked:
    dfao: Dfao

    @property
    def p(self) -> int:
        return self.dfao.p

    def __getitem__(self, n: int):
        return automatic_eval(self.dfao, n)


@dataclass(frozen=True)
class TableBacked:
    """Values ``a_0 ... a_{p^K - 1}``; equality of subsequences is only
    checked on the indices available."""

    p: int
    K: int
    values: tuple

    def __post_init__(self):
        check_base(self.p)
        if len(self.values) != self.p**self.K:
            raise ValueError(f"expected {self.p ** self.K} values")
        object.__setattr__(self, "values", tuple(self.values))

    def __getitem__(self, n: int):
        return self.values[n]


@dataclass(frozen=True)
class CoefficientStream:
    """The sequence ``(b_m)`` of normalized van der Put coefficients."""

    series: VdpSeries

    @property
    def p(self) -> int:
        return self.series.p

    def as_table(self) -> TableBacked:
        return TableBacked(self.series.p, self.series.K, self.series.b)

    @property
    def alphabet(self) -> list[Fraction]:
        return sorted(set(self.series.b))


SequencePresentation = Union[DfaoBacked, TableBacked, CoefficientStream]


@dataclass(frozen=True)
class KernelElement:
    """The subsequence ``(a_{j p^m + t})_j``."""

    m: int
    t: int

    def index(self, p: int, j: int) -> int:
        return j * p**self.m + self.t


@dataclass(frozen=True)
class Kernel:
    p: int
    elements: tuple[KernelElement, ...]
    delta: tuple[tuple[int, ...], ...]
    first: tuple
    closed: bool
    certified_depth: int | None = None
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return len(self.elements)

    def to_dict(self) -> dict:
        return {
            "verdict": "Kernel",
            "p": self.p,
            "size": self.size,
            "closed": self.closed,
            "certified_depth": self.certified_depth,
            "elements": [[e.m, e.t] for e in self.elements],
        }


@dataclass(frozen=True)
class KernelBoundExceeded:
    elements_found: int
    max_elems: int
    certified_depth: int | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": "KernelBoundExceeded",
            "elements_found": self.elements_found,
            "max_elems": self.max_elems,
            "certified_depth": self.certified_depth,
        }


def p_kernel(seq: SequencePresentation, max_elems: int = DEFAULT_MAX_ELEMS,
             window: int | None = None) -> Kernel | KernelBoundExceeded:
    """Breadth-first closure of ``seq`` under ``a -> (a_{p j + t})_j``.

    DFAO-backed sequences are handled exactly.  For a table of depth K,
    subsequences are compared on their first ``p^window`` terms (default
    ``window = K // 2``), so only levels ``m <= K - window`` can be explored;
    the result records ``certified_depth = window``.
    """
    if isinstance(seq, CoefficientStream):
        seq = seq.as_table()
    if isinstance(seq, DfaoBacked):
        return _dfao_kernel(seq.dfao, max_elems)
    if isinstance(seq, TableBacked):
        return _table_kernel(seq, max_elems, window)
    raise TypeError(f"unsupported sequence presentation {type(seq).__name__}")


def _dfao_kernel(dfao: Dfao, max_elems: int) -> Kernel | KernelBoundExceeded:
    d = dfao.normalized()
    if d.n_states > max_elems:
        return KernelBoundExceeded(d.n_states, max_elems)
    p = d.p
    # normalized() numbers states in BFS order, so discovery names are canonical
    names: dict[int, KernelElement] = {0: KernelElement(0, 0)}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        e = names[s]
        for t in range(p):
            s2 = d.delta[s][t]
            if s2 not in names:
                names[s2] = KernelElement(e.m + 1, e.t + t * p**e.m)
                queue.append(s2)
    return Kernel(p, tuple(names[s] for s in range(d.n_states)), d.delta, d.output, True)


def _table_kernel(seq: TableBacked, max_elems: int,
                  window: int | None) -> Kernel | KernelBoundExceeded:
    p, K = seq.p, seq.K
    W = K // 2 if window is None else window
    if not 0 <= W <= K:
        raise ValueError(f"window must lie in [0, {K}]")
    codes: dict = {}
    coded = [codes.setdefault(v, len(codes)) for v in seq.values]
    span = p**W

    def window_of(e: KernelElement) -> tuple[int, ...]:
        step = p**e.m
        return tuple(coded[j * step + e.t] for j in range(span))

    elements = [KernelElement(0, 0)]
    windows = [window_of(elements[0])]
    index = {windows[0]: 0}
    witnesses: dict[tuple[int, int], int] = {}
    delta: list[list[int]] = []
    closed = True
    i = 0
    while i < len(elements):
        e = elements[i]
        if e.m + 1 > K - W:
            closed = False
            break
        row = []
        for t in range(p):
            child = KernelElement(e.m + 1, e.t + t * p**e.m)
            w = window_of(child)
            j = index.get(w)
            if j is None:
                if len(elements) >= max_elems:
                    return KernelBoundExceeded(len(elements) + 1, max_elems, W)
                j = len(elements)
                for other, ow in enumerate(windows):
                    witnesses[(other, j)] = next(x for x in range(span) if ow[x] != w[x])
                index[w] = j
                elements.append(child)
                windows.append(w)
            row.append(j)
        delta.append(row)
        i += 1
    first = tuple(seq.values[e.t] for e in elements)
    return Kernel(p, tuple(elements), tuple(tuple(r) for r in delta), first, closed, W,
                  witnesses)


def dfao_from_kernel(kernel: Kernel) -> Dfao:
    if not kernel.closed:
        raise ValueError("kernel closure is incomplete; no DFAO can be built")
    return Dfao(kernel.p, kernel.delta, kernel.first, 0)


def thue_morse(n: int) -> int:
    return bin(n).count("1") & 1


THUE_MORSE = Dfao(2, [[0, 1], [1, 0]], [0, 1])
