"""The acceptance corpus behind ``padic verify-paper``.

Each check returns a :class:`CheckResult` carrying JSON-ready artifacts;
artifact bytes must not depend on the thread count.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import corpus
from .christol import Holds, find_relation, series_from_dfao, tau_embed, verify_relation
from .finiteness import SatisfiesCriterion, cross_check
from .formats import dumps
from .kernel import THUE_MORSE, Kernel, dfao_from_kernel, p_kernel, thue_morse
from .presentation import AutomatonBacked, check_lipschitz_depth
from .synthesis import BoundExceeded, naive_automaton
from .transducer import all_words, horizon_state_count
from .vdp import NotIntegral, eval_from_vdp, extract

SEED = 20100


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    artifacts: dict[str, dict] = field(default_factory=dict)


def check_naive_roundtrip(threads: int = 1, seed: int = SEED) -> CheckResult:
    D = 6
    machines = corpus.random_machines(50, seed)
    rng = random.Random(seed + 1)
    failures = []
    words_checked = 0
    for i, m in enumerate(machines):
        naive = naive_automaton(AutomatonBacked(m), D)
        if m.p == 5:
            words = []
            for _ in range(10_000):
                length = rng.randint(0, D)
                words.append(tuple(rng.randrange(5) for _ in range(length)))
        else:
            words = [w for L in range(D + 1) for w in all_words(m.p, L)]
        words_checked += len(words)
        if any(naive.eval_word(w) != m.eval_word(w) for w in words):
            failures.append(i)
    return CheckResult(
        "naive-automaton-roundtrip", not failures,
        f"50 machines, {words_checked} words, mismatching machines: {failures}",
        {"naive_roundtrip.json": {"machines": len(machines), "words": words_checked,
                                  "failures": failures}},
    )


def _vdp_corpus(seed: int):
    items = [(name, f) for name, f in corpus.named_corpus(2).items()]
    rng = random.Random(seed + 2)
    for p in (2, 3, 5):
        for j in range(4):
            items.append((f"random_poly_p{p}_{j}", corpus.random_polynomial(p, rng)))
    return items


def check_vdp_roundtrip(threads: int = 1, seed: int = SEED) -> CheckResult:
    failures = []
    artifacts = {}
    for name, f in _vdp_corpus(seed):
        K = corpus.DESK_DEPTH[f.p]
        series = extract(f, K, threads=threads)
        table = f.table_mod(K)
        if any(eval_from_vdp(series, x, K) != table[x] for x in range(f.p**K)):
            failures.append(name)
        if name in corpus.named_corpus(2):
            artifacts[f"vdp_{name}.json"] = extract(f, 5, threads=threads).to_dict()
    return CheckResult("vdp-roundtrip", not failures, f"mismatches: {failures}", artifacts)


def check_integrality(threads: int = 1, seed: int = SEED) -> CheckResult:
    bad = []
    for name, f in _vdp_corpus(seed):
        try:
            extract(f, corpus.DESK_DEPTH[f.p], threads=threads)
        except NotIntegral as exc:
            bad.append((name, exc.m))
    try:
        extract(corpus.second_digit(2), 4)
        witness = None
    except NotIntegral as exc:
        witness = exc.m
    ok = not bad and witness == 2
    return CheckResult("vdp-integrality", ok,
                       f"non-integral in corpus: {bad}; second-digit witness m={witness}",
                       {"integrality.json": {"corpus_failures": bad, "second_digit_witness": witness}})


EXPECTED_STATES = {"identity": 1, "not": 1, "increment": 2, "affine_1_3x": 3, "square": None}


def check_cross(threads: int = 1, seed: int = SEED) -> CheckResult:
    rows = {}
    ok = True
    for name, f in corpus.named_corpus(2).items():
        report = cross_check(f, 10, value_bound=64, kernel_bound=1024, max_states=64,
                             threads=threads)
        oracle = horizon_state_count(naive_automaton(f, 10), 5, 5)
        expected = EXPECTED_STATES[name]
        if expected is None:
            good = (not isinstance(report.finiteness, SatisfiesCriterion)
                    and isinstance(report.synthesis, BoundExceeded))
        else:
            good = (report.status == "finite" and report.synthesis_states == expected
                    and oracle == expected)
        ok &= good and report.consistent
        rows[name] = {"report": report.to_dict(), "naive_horizon_states": oracle, "ok": good}
    return CheckResult("finiteness-cross-check", ok,
                       ", ".join(f"{k}: {v['report']['status']}/{v['report']['synthesis_states']}"
                                 for k, v in rows.items()),
                       {"cross_check.json": rows})


def check_kernel(threads: int = 1, seed: int = SEED) -> CheckResult:
    kernel = p_kernel(corpus.thue_morse_table(12))
    ok = isinstance(kernel, Kernel) and kernel.closed and kernel.size == 2
    if ok:
        dfao = dfao_from_kernel(kernel)
        ok = all(dfao(n) == thue_morse(n) for n in range(2**12))
        art = {"thue_morse_kernel.json": kernel.to_dict(), "thue_morse_dfao.json": dfao.to_dict()}
    else:
        art = {"thue_morse_kernel.json": kernel.to_dict()}
    return CheckResult("thue-morse-kernel", ok, f"kernel size {getattr(kernel, 'size', None)}", art)


def check_christol(threads: int = 1, seed: int = SEED) -> CheckResult:
    tau = tau_embed([0, 1], 2)
    series = series_from_dfao(THUE_MORSE, tau, 256)
    rel = find_relation(series, 2, 3)
    tm_ok = hasattr(rel, "u") and isinstance(verify_relation(series, rel, 128), Holds)
    ones = series_from_dfao(corpus.constant_dfao(1), tau, 256)
    rel1 = find_relation(ones, 2, 3)
    ones_ok = hasattr(rel1, "u") and rel1.d == 1 and isinstance(
        verify_relation(ones, rel1, 128), Holds)
    art = {}
    if tm_ok:
        art["thue_morse_relation.json"] = rel.to_dict()
    if ones_ok:
        art["all_ones_relation.json"] = rel1.to_dict()
    return CheckResult("christol-relations", tm_ok and ones_ok,
                       f"thue-morse: {getattr(rel, 'u', rel)}; all-ones: {getattr(rel1, 'u', rel1)}",
                       art)


def check_lipschitz(threads: int = 1, seed: int = SEED) -> CheckResult:
    v = check_lipschitz_depth(corpus.second_digit(2), 2)
    witness_ok = v is not None and (v.x, v.y, v.n) == (0, 2, 1)
    machines = [corpus.bitwise_not(2).machine, corpus.increment(2).machine]
    machines += corpus.random_machines(12, seed + 3, bases=(2, 3))
    machines += corpus.random_machines(1, seed + 4, bases=(5,))
    failing = [i for i, m in enumerate(machines)
               if check_lipschitz_depth(AutomatonBacked(m), 8) is not None]
    return CheckResult(
        "lipschitz-checker", witness_ok and not failing,
        f"second-digit witness {v}; automaton failures {failing} of {len(machines)}",
        {"lipschitz.json": {"witness": None if v is None else [v.x, v.y, v.n],
                            "automata_checked": len(machines), "failures": failing}},
    )


CHECKS: list[Callable[[int, int], CheckResult]] = [
    check_naive_roundtrip,
    check_vdp_roundtrip,
    check_integrality,
    check_cross,
    check_kernel,
    check_christol,
    check_lipschitz,
]


def run_all(threads: int = 1, seed: int = SEED) -> list[CheckResult]:
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda c: c(threads, seed), CHECKS))
    return [c(threads, seed) for c in CHECKS]


def write_artifacts(results: list[CheckResult], out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for r in results:
        for fname, payload in sorted(r.artifacts.items()):
            path = out_dir / fname
            path.write_text(dumps(payload))
            written.append(path)
    summary = {r.name: {"passed": r.passed, "detail": r.detail} for r in results}
    path = out_dir / "summary.json"
    path.write_text(dumps(summary))
    written.append(path)
    return written
