"""Decide, up to a stated depth, whether a 1-Lipschitz function is computed by
a finite automaton.

Two conditions on the normalized van der Put coefficients ``b_m`` are
checked: the values form a finite set of rationals, and the p-kernel of
``(b_m)`` is finite.  :func:`cross_check` compares the outcome with residual
synthesis, which answers the same question by a different route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .kernel import (
    DEFAULT_MAX_ELEMS,
    CoefficientStream,
    Dfao,
    DfaoBacked,
    KernelBoundExceeded,
    automatic_eval,
    dfao_from_kernel,
    p_kernel,
)
from .padic import format_rational
from .presentation import AutomatonBacked, Presentation
from .synthesis import DEFAULT_MAX_STATES, BoundExceeded, Finite, synthesize_minimal
from .transducer import Transducer
from .vdp import NotIntegral, VdpSeries, extract


class InconsistencyError(AssertionError):
    """Two routes that must agree produced different answers."""


DEFAULT_VALUE_BOUND = 64

EXIT_CERTIFIED = 0
EXIT_ERROR = 1
EXIT_BOUND = 2


@dataclass(frozen=True)
class SatisfiesCriterion:
    B_f: tuple[Fraction, ...]
    kernel_dfao: Dfao
    certified_depth: int
    kernel_window: int | None
    value_counts: tuple[int, ...]

    exit_code = EXIT_CERTIFIED

    def to_dict(self) -> dict:
        return {
            "verdict": "SatisfiesCriterion",
            "B_f": [format_rational(v) for v in self.B_f],
            "kernel_size": self.kernel_dfao.n_states,
            "kernel_dfao": self.kernel_dfao.to_dict(),
            "certified_depth": self.certified_depth,
            "kernel_window": self.kernel_window,
            "value_counts": list(self.value_counts),
        }


@dataclass(frozen=True)
class FailsIntegrality:
    m: int
    B: Fraction

    exit_code = EXIT_CERTIFIED

    def to_dict(self) -> dict:
        return {"verdict": "FailsIntegrality", "witness_m": self.m,
                "B_m": format_rational(self.B)}


@dataclass(frozen=True)
class ValueBoundExceeded:
    distinct_count: int
    depth: int
    value_bound: int
    value_counts: tuple[int, ...]
    stable: bool

    exit_code = EXIT_BOUND

    def to_dict(self) -> dict:
        return {
            "verdict": "ValueBoundExceeded",
            "distinct_count": self.distinct_count,
            "depth": self.depth,
            "value_bound": self.value_bound,
            "value_counts": list(self.value_counts),
            "stable": self.stable,
        }


@dataclass(frozen=True)
class KernelBoundExceededVerdict:
    elements_found: int
    depth: int
    kernel_bound: int
    closed: bool

    exit_code = EXIT_BOUND

    def to_dict(self) -> dict:
        return {
            "verdict": "KernelBoundExceeded",
            "elements_found": self.elements_found,
            "depth": self.depth,
            "kernel_bound": self.kernel_bound,
            "closed": self.closed,
        }


FinitenessVerdict = (SatisfiesCriterion | FailsIntegrality | ValueBoundExceeded
                     | KernelBoundExceededVerdict)


def value_counts(series: VdpSeries, window: int = 2) -> tuple[int, ...]:
    """Distinct-value counts of ``b_m`` over ``m < p^j`` for ``j = K-window .. K``."""
    p, K = series.p, series.K
    out = []
    for j in range(max(K - window, 0), K + 1):
        out.append(len(set(series.b[: p**j])))
    return tuple(out)


def coefficient_dfao(machine: Transducer) -> Dfao:
    """DFAO computing ``m -> b_m`` for the automaton function of ``machine``.

    For ``m >= p`` with top digit ``r`` at position ``L-1``, ``b_m = g(r) - g(0)``
    where ``g`` is the function computed from the state reached after the
    ``L-1`` low digits of ``m``.  A DFAO state therefore remembers the machine
    state before the last digit read, that digit, and whether it was the
    first one (``b_r = f(r)`` for single-digit ``m``).
    """
    p = machine.p
    values: dict[tuple[int, int], Fraction] = {}

    def delta_value(s: int, r: int) -> Fraction:
        if (s, r) not in values:
            g = machine.with_initial(s)
            values[(s, r)] = g.eval_rational(r) - g.eval_rational(0) if r else Fraction(0)
        return values[(s, r)]

    start = ("start",)
    index = {start: 0}
    states = [start]
    delta: list[list[int]] = []
    output: list[Fraction] = []
    i = 0
    while i < len(states):
        st = states[i]
        if st == start:
            s_next = machine.initial
            output.append(machine.eval_rational(0))
            nxt = [(s_next, r, True) for r in range(p)]
        else:
            s, r, first = st
            output.append(machine.eval_rational(r) if first else delta_value(s, r))
            nxt = [(machine.delta[s][r], r2, False) for r2 in range(p)]
        row = []
        for key in nxt:
            if key not in index:
                index[key] = len(states)
                states.append(key)
            row.append(index[key])
        delta.append(row)
        i += 1
    return Dfao(p, delta, output).normalized()


def check_finiteness(
    f: Presentation,
    K: int,
    value_bound: int = DEFAULT_VALUE_BOUND,
    kernel_bound: int = DEFAULT_MAX_ELEMS,
    window: int | None = None,
    threads: int = 1,
) -> FinitenessVerdict:
    if K < 1:
        raise ValueError("depth K must be >= 1")
    try:
        series = extract(f, K, threads=threads)
    except NotIntegral as exc:
        return FailsIntegrality(exc.m, exc.B)
    counts = value_counts(series)
    if isinstance(f, AutomatonBacked):
        return _automaton_criterion(f, series, counts, value_bound, kernel_bound)
    stable = len(set(counts)) == 1
    if counts[-1] > value_bound or not stable:
        return ValueBoundExceeded(counts[-1], K, value_bound, counts, stable)
    kernel = p_kernel(CoefficientStream(series), kernel_bound, window)
    if isinstance(kernel, KernelBoundExceeded):
        return KernelBoundExceededVerdict(kernel.elements_found, K, kernel_bound, False)
    if not kernel.closed:
        return KernelBoundExceededVerdict(kernel.size, K, kernel_bound, False)
    B_f = tuple(sorted(set(series.b)))
    return SatisfiesCriterion(B_f, dfao_from_kernel(kernel), K, kernel.certified_depth, counts)


def _automaton_criterion(f: AutomatonBacked, series: VdpSeries, counts, value_bound: int,
                         kernel_bound: int) -> FinitenessVerdict:
    """Exact route for machines: the coefficient sequence has a DFAO built
    from the machine, checked against the extracted coefficients."""
    K = series.K
    dfao = coefficient_dfao(f.machine)
    for m, b in enumerate(series.b):
        if automatic_eval(dfao, m) != b:
            raise InconsistencyError(f"coefficient DFAO disagrees with b_{m}")
    B_f = tuple(sorted(set(dfao.output)))
    if len(B_f) > value_bound:
        return ValueBoundExceeded(len(B_f), K, value_bound, counts, True)
    kernel = p_kernel(DfaoBacked(dfao), kernel_bound)
    if isinstance(kernel, KernelBoundExceeded):
        return KernelBoundExceededVerdict(kernel.elements_found, K, kernel_bound, False)
    return SatisfiesCriterion(B_f, dfao_from_kernel(kernel), K, None, counts)


@dataclass(frozen=True)
class CrossCheckReport:
    finiteness: FinitenessVerdict
    synthesis: Finite | BoundExceeded | None
    status: str  # "finite", "not-lipschitz", "inconclusive", "inconsistent"

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"

    @property
    def synthesis_states(self) -> int | None:
        return self.synthesis.n_states if isinstance(self.synthesis, Finite) else None

    @property
    def exit_code(self) -> int:
        if self.status == "inconsistent":
            return EXIT_ERROR
        return EXIT_BOUND if self.status == "inconclusive" else EXIT_CERTIFIED

    def to_dict(self) -> dict:
        return {
            "verdict": "CrossChecked",
            "status": self.status,
            "consistent": self.consistent,
            "synthesis_states": self.synthesis_states,
            "finiteness": self.finiteness.to_dict(),
            "synthesis": None if self.synthesis is None else self.synthesis.to_dict(),
        }


def cross_check(
    f: Presentation,
    K: int,
    value_bound: int = DEFAULT_VALUE_BOUND,
    kernel_bound: int = DEFAULT_MAX_ELEMS,
    max_states: int = DEFAULT_MAX_STATES,
    threads: int = 1,
) -> CrossCheckReport:
    verdict = check_finiteness(f, K, value_bound, kernel_bound, threads=threads)
    if isinstance(verdict, FailsIntegrality):
        return CrossCheckReport(verdict, None, "not-lipschitz")
    synth = synthesize_minimal(f, max_states)
    if isinstance(verdict, SatisfiesCriterion) and isinstance(synth, Finite):
        status = "finite"
    elif isinstance(synth, BoundExceeded) and synth.certificate and \
            synth.certificate.get("proves_infinite") and isinstance(verdict, SatisfiesCriterion):
        status = "inconsistent"
    else:
        status = "inconclusive"
    return CrossCheckReport(verdict, synth, status)
