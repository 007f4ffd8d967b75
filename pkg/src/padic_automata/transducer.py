"""Letter-to-letter Mealy transducers over the alphabet {0, ..., p-1}.

A machine reads the p-adic digits of its input least significant first and
emits one output digit per input digit, so it computes a 1-Lipschitz map
``Z_p -> Z_p`` (its automaton function).  Tables are indexed
``delta[state][digit]`` and ``output[state][digit]``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .padic import (
    EventuallyPeriodicDigits,
    Rational,
    check_base,
    check_word,
    from_eventually_periodic,
    int_to_word,
    to_eventually_periodic,
    word_to_int,
)


class MachineFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Transducer:
    p: int
    delta: tuple[tuple[int, ...], ...]
    output: tuple[tuple[int, ...], ...]
    initial: int = 0
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        p = check_base(self.p)
        delta = tuple(tuple(row) for row in self.delta)
        output = tuple(tuple(row) for row in self.output)
        n = len(delta)
        if n == 0:
            raise ValueError("a transducer needs at least one state")
        if len(output) != n:
            raise ValueError("transition and output tables differ in size")
        for s in range(n):
            if len(delta[s]) != p or len(output[s]) != p:
                raise ValueError(f"state {s}: tables must have one entry per digit")
            for t in delta[s]:
                if not 0 <= t < n:
                    raise ValueError(f"state {s}: transition to unknown state {t}")
            for o in output[s]:
                if not 0 <= o < p:
                    raise ValueError(f"state {s}: output digit {o} outside alphabet")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != n:
                raise ValueError("one label per state expected")
            object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "output", output)

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def with_initial(self, state: int) -> "Transducer":
        if not 0 <= state < self.n_states:
            raise IndexError(f"no state {state}")
        return Transducer(self.p, self.delta, self.output, state, self.labels)

    def run(self, word: Sequence[int], state: int | None = None) -> int:
        """State reached after reading ``word`` (LSB first)."""
        s = self.initial if state is None else state
        for r in word:
            s = self.delta[s][r]
        return s

    def eval_word(self, word: Sequence[int]) -> tuple[int, ...]:
        word = check_word(word, self.p)
        s = self.initial
        out = []
        for r in word:
            out.append(self.output[s][r])
            s = self.delta[s][r]
        return tuple(out)

    def eval_mod(self, x: int, n: int) -> int:
        if not 0 <= x < self.p**n:
            raise ValueError(f"input {x} outside [0, {self.p}^{n})")
        return word_to_int(self.eval_word(int_to_word(x, self.p, n)), self.p)

    def table_mod(self, n: int) -> list[int]:
        """``[eval_mod(x, n) for x in range(p**n)]``, built level by level."""
        p = self.p
        states = [self.initial]
        values = [0]
        for level in range(n):
            weight = p**level
            new_states = [0] * (len(states) * p)
            new_values = [0] * (len(states) * p)
            for r in range(p):
                base = r * len(states)
                for x, s in enumerate(states):
                    new_states[base + x] = self.delta[s][r]
                    new_values[base + x] = values[x] + self.output[s][r] * weight
            states, values = new_states, new_values
        return values

    def eval_rational(self, x: Rational) -> Fraction:
        """Exact image of ``x`` in Q ∩ Z_p.

        An eventually periodic input drives a finite machine into a cycle of
        (state, phase) pairs, so the output stream is eventually periodic too.
        """
        x = Fraction(x)
        if x.denominator == 1 and x >= 0:
            stream = EventuallyPeriodicDigits(self.p, int_to_word(int(x), self.p), (0,))
        else:
            stream = to_eventually_periodic(x, self.p)
        s = self.initial
        pre_out = []
        for r in stream.preperiod:
            pre_out.append(self.output[s][r])
            s = self.delta[s][r]
        seen: dict[int, int] = {}
        blocks: list[list[int]] = []
        while s not in seen:
            seen[s] = len(blocks)
            block = []
            for r in stream.period:
                block.append(self.output[s][r])
                s = self.delta[s][r]
            blocks.append(block)
        start = seen[s]
        for block in blocks[:start]:
            pre_out.extend(block)
        cycle = [d for block in blocks[start:] for d in block]
        return from_eventually_periodic(
            EventuallyPeriodicDigits(self.p, tuple(pre_out), tuple(cycle))
        )

    def reachable(self, start: int | None = None) -> list[int]:
        """States reachable from ``start`` in BFS order, digits ascending."""
        s0 = self.initial if start is None else start
        order = [s0]
        seen = {s0}
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for t in self.delta[s]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def _relabel(self, order: list[int], initial: int) -> "Transducer":
        index = {s: i for i, s in enumerate(order)}
        delta = [[index[t] for t in self.delta[s]] for s in order]
        output = [list(self.output[s]) for s in order]
        labels = None if self.labels is None else [self.labels[s] for s in order]
        return Transducer(self.p, delta, output, index[initial], labels)

    def trim_reachable(self) -> "Transducer":
        return self._relabel(self.reachable(), self.initial)

    def subautomaton(self, state: int) -> "Transducer":
        if not 0 <= state < self.n_states:
            raise IndexError(f"no state {state}")
        return self._relabel(self.reachable(state), state)

    def partition(self) -> list[int]:
        """Block index of every state under Mealy (output) equivalence."""
        p = self.p
        rows = {}
        block = []
        for s in range(self.n_states):
            block.append(rows.setdefault(self.output[s], len(rows)))
        n_blocks = len(rows)
        while True:
            sigs: dict[tuple, int] = {}
            new_block = []
            for s in range(self.n_states):
                sig = (block[s],) + tuple(block[self.delta[s][r]] for r in range(p))
                new_block.append(sigs.setdefault(sig, len(sigs)))
            if len(sigs) == n_blocks:
                return new_block
            block, n_blocks = new_block, len(sigs)

    def minimize(self) -> "Transducer":
        """Minimal equivalent machine, states numbered in BFS order."""
        m = self.trim_reachable()
        block = m.partition()
        rep: dict[int, int] = {}
        for s in range(m.n_states):
            rep.setdefault(block[s], s)
        reps = sorted(rep.values())
        delta = {s: [rep[block[t]] for t in m.delta[s]] for s in reps}
        order = [rep[block[m.initial]]]
        seen = set(order)
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for t in delta[s]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        index = {s: i for i, s in enumerate(order)}
        return Transducer(
            m.p,
            [[index[t] for t in delta[s]] for s in order],
            [list(m.output[s]) for s in order],
            0,
        )

    def to_dict(self) -> dict:
        d = {
            "p": self.p,
            "digit_order": "lsb",
            "states": self.n_states,
            "initial": self.initial,
            "delta": [list(r) for r in self.delta],
            "output": [list(r) for r in self.output],
        }
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Transducer":
        try:
            if d.get("digit_order", "lsb") != "lsb":
                raise MachineFormatError("only digit_order 'lsb' is supported")
            m = cls(int(d["p"]), d["delta"], d["output"], int(d.get("initial", 0)),
                    d.get("labels"))
        except (KeyError, TypeError) as exc:
            raise MachineFormatError(f"malformed transducer: {exc}") from exc
        if "states" in d and int(d["states"]) != m.n_states:
            raise MachineFormatError("declared state count does not match tables")
        return m

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_dot(self, name: str = "transducer") -> str:
        """Graphviz source; edges carry ``in/out`` labels."""
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point];']
        for s in range(self.n_states):
            label = self.labels[s] if self.labels else str(s)
            shape = "doublecircle" if s == self.initial else "circle"
            lines.append(f'  s{s} [label="{label}", shape={shape}];')
        lines.append(f"  __start -> s{self.initial};")
        for s in range(self.n_states):
            edges: dict[int, list[str]] = {}
            for r in range(self.p):
                edges.setdefault(self.delta[s][r], []).append(f"{r}/{self.output[s][r]}")
            for t, labs in edges.items():
                lines.append(f'  s{s} -> s{t} [label="{", ".join(labs)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def equivalent(a: Transducer, b: Transducer) -> bool:
    """Behavioural equality of two initial machines (product-machine BFS)."""
    if a.p != b.p:
        return False
    start = (a.initial, b.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        s, t = queue.popleft()
        if a.output[s] != b.output[t]:
            return False
        for r in range(a.p):
            nxt = (a.delta[s][r], b.delta[t][r])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return True


def horizon_state_count(m: Transducer, levels: int, horizon: int) -> int:
    """Distinct behaviours, on words of length ``horizon``, of the states
    reached by words of length at most ``levels``.

    Only the first ``levels + horizon`` input digits are ever read, so this
    is meaningful for truncated machines whose deeper transitions are
    placeholders.  For a minimal machine it equals the state count once
    ``levels`` covers its depth and ``horizon`` separates its states.
    """
    p = m.p
    words = [()]
    for _ in range(horizon):
        words = [w + (r,) for w in words for r in range(p)]
    frontier = {m.initial}
    reached = set(frontier)
    for _ in range(levels):
        frontier = {m.delta[s][r] for s in frontier for r in range(p)} - reached
        reached |= frontier
    sigs = set()
    for s in reached:
        sigs.add(tuple(m.with_initial(s).eval_word(w) for w in words))
    return len(sigs)


def identity_machine(p: int) -> Transducer:
    return Transducer(p, [[0] * p], [list(range(p))])


def complement_machine(p: int) -> Transducer:
    """Digitwise ``r -> p-1-r``; computes ``x -> -1 - x``."""
    return Transducer(p, [[0] * p], [[p - 1 - r for r in range(p)]])


def increment_machine(p: int) -> Transducer:
    """``x -> x + 1``: state 0 carries, state 1 copies."""
    carry_delta = [0 if r == p - 1 else 1 for r in range(p)]
    carry_out = [(r + 1) % p for r in range(p)]
    return Transducer(
        p, [carry_delta, [1] * p], [carry_out, list(range(p))], 0, ["carry", "copy"]
    )


def random_transducer(p: int, n_states: int, rng) -> Transducer:
    """Random machine with every state reachable from state 0."""
    delta = [[rng.randrange(n_states) for _ in range(p)] for _ in range(n_states)]
    # spanning tree on distinct slots guarantees reachability
    free = [(0, r) for r in range(p)]
    for s in range(1, n_states):
        q, r = free.pop(rng.randrange(len(free)))
        delta[q][r] = s
        free.extend((s, d) for d in range(p))
    output = [[rng.randrange(p) for _ in range(p)] for _ in range(n_states)]
    return Transducer(p, delta, output)


def all_words(p: int, length: int) -> Iterable[tuple[int, ...]]:
    for x in range(p**length):
        yield int_to_word(x, p, length)
