from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic_automata import corpus
from padic_automata.padic import digits
from padic_automata.presentation import AutomatonBacked, Polynomial
from padic_automata.synthesis import (
    BoundExceeded,
    Finite,
    LipschitzViolation,
    WordCode,
    naive_automaton,
    synthesize_minimal,
)
from padic_automata.transducer import all_words, equivalent, horizon_state_count
from padic_automata.vdp import extract
from strategies import machines, polynomials, primes


def test_word_codes_binary():
    c = WordCode(2)
    assert [c.omega(i) for i in range(7)] == [(), (0,), (1,), (0, 0), (1, 0), (0, 1), (1, 1)]
    assert c.nu((1, 1)) == 6


@given(primes, st.integers(0, 5000))
def test_word_code_bijection(p, i):
    c = WordCode(p)
    assert c.nu(c.omega(i)) == i


def test_prepend_and_theta():
    assert WordCode.prepend(1, (0, 0)) == (0, 0, 1)
    assert WordCode.theta((1, 0, 0)) == (0, 0, 1)


@settings(max_examples=30, deadline=None)
@given(polynomials(max_degree=3))
def test_naive_automaton_matches_function(f):
    D = {2: 6, 3: 4, 5: 3}[f.p]
    m = naive_automaton(f, D)
    assert m.n_states == (f.p**D - 1) // (f.p - 1)
    for L in range(D + 1):
        for w in all_words(f.p, L):
            x = sum(r * f.p**i for i, r in enumerate(w))
            assert m.eval_word(w) == digits(f.exact(x), f.p, L)


def test_naive_automaton_rejects_non_lipschitz():
    with pytest.raises(LipschitzViolation):
        naive_automaton(corpus.second_digit(2), 3)


@pytest.mark.parametrize("name,states", [
    ("identity", 1), ("not", 1), ("increment", 2), ("affine_1_3x", 3),
])
def test_minimal_state_counts(name, states):
    f = corpus.named_corpus(2)[name]
    result = synthesize_minimal(f)
    assert isinstance(result, Finite)
    assert result.n_states == states
    # oracle: distinct behaviours inside the depth-10 naive tree
    assert horizon_state_count(naive_automaton(f, 10), 5, 5) == states
    assert result.machine.table_mod(10) == f.table_mod(10)


def test_square_exceeds_bound_with_certificate():
    result = synthesize_minimal(corpus.square(2), 64)
    assert isinstance(result, BoundExceeded)
    assert result.states_found == 65
    assert result.certificate["proves_infinite"]
    assert result.certificate["leading_coefficients_k1_to_k3"] == ["2/1", "4/1", "8/1"]


@settings(max_examples=60, deadline=None)
@given(machines())
def test_synthesis_recovers_minimal_machine(m):
    result = synthesize_minimal(AutomatonBacked(m))
    assert isinstance(result, Finite)
    assert equivalent(result.machine, m)
    assert result.n_states == m.minimize().n_states


@settings(max_examples=25, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6), primes)
def test_affine_integer_maps_are_finite(a, b, p):
    f = Polynomial(p, (Fraction(a), Fraction(b)))
    result = synthesize_minimal(f, 256)
    assert isinstance(result, Finite)
    assert result.machine.table_mod(3) == f.table_mod(3)


def test_truncated_table_synthesis_records_depth():
    series = extract(corpus.affine_1_3x(2), 10)
    result = synthesize_minimal(series.as_presentation("truncated"))
    assert isinstance(result, Finite)
    assert result.n_states == 3
    assert result.certified_depth == 5


def test_truncated_table_of_square_hits_depth():
    series = extract(corpus.square(2), 8)
    result = synthesize_minimal(series.as_presentation("truncated"), 1000)
    assert isinstance(result, BoundExceeded)
    assert result.reason == "table depth"


def test_verdict_dicts():
    d = synthesize_minimal(corpus.increment(2)).to_dict()
    assert d["verdict"] == "Finite" and d["states"] == 2
    assert synthesize_minimal(corpus.square(2), 8).to_dict()["verdict"] == "BoundExceeded"
