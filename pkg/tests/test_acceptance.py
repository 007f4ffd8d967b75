"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import contextlib
import io
import random
import sys
from pathlib import Path

from padic_automata import corpus
from padic_automata.christol import (
    AlgebraicRelation,
    Holds,
    find_relation,
    series_from_dfao,
    tau_embed,
    verify_relation,
)
from padic_automata.cli import main
from padic_automata.finiteness import SatisfiesCriterion, check_finiteness
from padic_automata.kernel import THUE_MORSE, Kernel, dfao_from_kernel, p_kernel
from padic_automata.padic import reduce_mod
from padic_automata.presentation import AutomatonBacked, Violation, check_lipschitz_depth
from padic_automata.synthesis import BoundExceeded, Finite, naive_automaton, synthesize_minimal
from padic_automata.transducer import all_words, horizon_state_count
from padic_automata.vdp import NotIntegral, eval_from_vdp, extract

SEED = 1234


def report(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    return ok


# 1 -----------------------------------------------------------------------

def criterion_1():
    D = 6
    machines = corpus.random_machines(50, SEED)
    rng = random.Random(SEED)
    bad = []
    for i, m in enumerate(machines):
        naive = naive_automaton(AutomatonBacked(m), D)
        if m.p == 5:
            words = [tuple(rng.randrange(5) for _ in range(rng.randint(0, D)))
                     for _ in range(10_000)]
        else:
            words = [w for L in range(D + 1) for w in all_words(m.p, L)]
        if any(naive.eval_word(w) != m.eval_word(w) for w in words):
            bad.append(i)
    bases = sorted({m.p for m in machines})
    return report(1, "naive automaton equals the machine on words of length <= 6",
                  not bad, f"50 machines over p in {bases}, mismatches {bad}")


# 2 -----------------------------------------------------------------------

def vdp_corpus():
    items = list(corpus.named_corpus(2).items())
    rng = random.Random(SEED)
    for p in (2, 3, 5):
        for j in range(4):
            items.append((f"poly{j}_p{p}", corpus.random_polynomial(p, rng)))
    return items


def criterion_2():
    bad = []
    for name, f in vdp_corpus():
        K = corpus.DESK_DEPTH[f.p]
        s = extract(f, K)
        # oracle: exact value reduced modulo p^K
        if any(eval_from_vdp(s, x, K) != reduce_mod(f.exact(x), f.p, K) for x in range(f.p**K)):
            bad.append(name)
    return report(2, "van der Put reconstruction equals f mod p^K", not bad,
                  f"{len(vdp_corpus())} functions, mismatches {bad}")


# 3 -----------------------------------------------------------------------

def criterion_3():
    bad = []
    for name, f in vdp_corpus():
        try:
            extract(f, corpus.DESK_DEPTH[f.p])
        except NotIntegral as exc:
            bad.append((name, exc.m))
    try:
        extract(corpus.second_digit(2), 4)
        witness = None
    except NotIntegral as exc:
        witness = exc.m
    return report(3, "coefficients integral on the corpus, second digit fails at m=2",
                  not bad and witness == 2, f"failures {bad}, witness m={witness}")


# 4 -----------------------------------------------------------------------

EXPECTED = {"identity": 1, "not": 1, "increment": 2, "affine_1_3x": 3}


def criterion_4():
    rows = []
    ok = True
    fs = corpus.named_corpus(2)
    for name, states in EXPECTED.items():
        f = fs[name]
        verdict = check_finiteness(f, 10, value_bound=64)
        synth = synthesize_minimal(f, 64)
        oracle = horizon_state_count(naive_automaton(f, 10), 5, 5)
        good = (isinstance(verdict, SatisfiesCriterion) and isinstance(synth, Finite)
                and synth.n_states == states == oracle)
        ok &= good
        rows.append(f"{name}={getattr(synth, 'n_states', None)}/{oracle}")
    sq = corpus.square(2)
    sq_verdict = check_finiteness(sq, 10, value_bound=64)
    sq_synth = synthesize_minimal(sq, 64)
    sq_ok = not isinstance(sq_verdict, SatisfiesCriterion) and isinstance(sq_synth, BoundExceeded)
    rows.append(f"square={type(sq_verdict).__name__}/{type(sq_synth).__name__}")
    return report(4, "finiteness criterion and synthesis agree on the corpus", ok and sq_ok,
                  ", ".join(rows))


# 5 -----------------------------------------------------------------------

def criterion_5():
    kernel = p_kernel(corpus.thue_morse_table(12))
    ok = isinstance(kernel, Kernel) and kernel.closed and kernel.size == 2
    if ok:
        d = dfao_from_kernel(kernel)
        ok = all(d(n) == bin(n).count("1") % 2 for n in range(2**12))
    return report(5, "Thue-Morse 2-kernel has 2 elements and rebuilds the sequence", ok,
                  f"size {getattr(kernel, 'size', None)}")


# 6 -----------------------------------------------------------------------

def criterion_6():
    tau = tau_embed([0, 1], 2)
    tm = series_from_dfao(THUE_MORSE, tau, 256)
    rel = find_relation(tm, 2, 3)
    tm_ok = isinstance(rel, AlgebraicRelation) and isinstance(verify_relation(tm, rel, 128), Holds)
    ones = series_from_dfao(corpus.constant_dfao(1), tau, 256)
    rel1 = find_relation(ones, 2, 3)
    ones_ok = isinstance(rel1, AlgebraicRelation) and rel1.d == 1 and isinstance(
        verify_relation(ones, rel1, 128), Holds)
    return report(6, "algebraic relations for Thue-Morse and all-ones over F_2",
                  tm_ok and ones_ok,
                  f"Thue-Morse d={getattr(rel, 'd', None)}, all-ones d={getattr(rel1, 'd', None)}")


# 7 -----------------------------------------------------------------------

def criterion_7():
    v = check_lipschitz_depth(corpus.second_digit(2), 2)
    # oracle for the witness: 0 and 2 agree mod 2, their second digits are 0 and 1
    witness_ok = v == Violation(0, 2, 1)
    machines = [corpus.bitwise_not(2).machine, corpus.increment(2).machine]
    machines += corpus.random_machines(12, SEED, bases=(2, 3))
    machines += corpus.random_machines(1, SEED, bases=(5,))
    failing = [i for i, m in enumerate(machines)
               if check_lipschitz_depth(AutomatonBacked(m), 8) is not None]
    return report(7, "Lipschitz checker finds the second-digit witness and passes automata",
                  witness_ok and not failing, f"witness {v}, automaton failures {failing}")


# 8 -----------------------------------------------------------------------

def criterion_8(tmp: Path):
    outs = {}
    codes = {}
    for threads in (1, 8):
        out = tmp / f"threads{threads}"
        with contextlib.redirect_stdout(io.StringIO()):
            codes[threads] = main(["verify-paper", "--threads", str(threads), "--out", str(out)])
        outs[threads] = {p.name: p.read_bytes() for p in sorted(out.glob("*.json"))}
    same = outs[1] == outs[8] and len(outs[1]) > 1
    return report(8, "verify-paper artifacts identical for 1 and 8 threads",
                  same and codes[1] == codes[8] == 0,
                  f"{len(outs[1])} artifacts, exit codes {codes[1]}/{codes[8]}")


def test_criterion_1_naive_roundtrip(capsys):
    with capsys.disabled():
        assert criterion_1()


def test_criterion_2_vdp_roundtrip(capsys):
    with capsys.disabled():
        assert criterion_2()


def test_criterion_3_integrality(capsys):
    with capsys.disabled():
        assert criterion_3()


def test_criterion_4_cross_check(capsys):
    with capsys.disabled():
        assert criterion_4()


def test_criterion_5_kernel(capsys):
    with capsys.disabled():
        assert criterion_5()


def test_criterion_6_christol(capsys):
    with capsys.disabled():
        assert criterion_6()


def test_criterion_7_lipschitz(capsys):
    with capsys.disabled():
        assert criterion_7()


def test_criterion_8_determinism(tmp_path, capsys):
    with capsys.disabled():
        assert criterion_8(tmp_path)


if __name__ == "__main__":
    import tempfile

    results = [criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(),
               criterion_6(), criterion_7()]
    with tempfile.TemporaryDirectory() as d:
        results.append(criterion_8(Path(d)))
    sys.exit(0 if all(results) else 1)
