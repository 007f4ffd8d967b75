from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic_automata.padic import reduce_mod
from padic_automata.presentation import (
    Affine,
    AutomatonBacked,
    DepthOverflowError,
    LocallyConstant,
    Polynomial,
    VdpTable,
    Violation,
    check_lipschitz_depth,
    digit_function,
)
from padic_automata.transducer import complement_machine, increment_machine
from strategies import machines, padic_rationals, polynomials, primes


def residual_oracle(f, n, k, z):
    p = f.p
    return (f.exact(n + p**k * z) - reduce_mod(f.exact(n), p, k)) / p**k


@st.composite
def residual_args(draw, p):
    k = draw(st.integers(1, 4))
    n = draw(st.integers(0, p**k - 1))
    z = draw(padic_rationals(p, 20))
    return n, k, z


@given(st.data(), polynomials())
def test_polynomial_residual_identity(data, f):
    n, k, z = data.draw(residual_args(f.p))
    assert f.residual(n, k).exact(z) == residual_oracle(f, n, k, z)


@given(st.data(), primes, st.integers(-20, 20), st.integers(-20, 20))
def test_affine_residual_identity(data, p, a, b):
    f = Affine(p, Fraction(a), Fraction(b))
    n, k, z = data.draw(residual_args(p))
    assert f.residual(n, k).exact(z) == residual_oracle(f, n, k, z)


@given(st.data(), machines())
def test_automaton_residual_identity(data, m):
    f = AutomatonBacked(m)
    n, k, z = data.draw(residual_args(m.p))
    assert f.residual(n, k).exact(z) == residual_oracle(f, n, k, z)


@settings(max_examples=40)
@given(st.data(), primes)
def test_vdp_table_residual_identity(data, p):
    K = 3
    b = data.draw(st.lists(st.integers(-5, 5), min_size=p**K, max_size=p**K))
    f = VdpTable(p, K, tuple(Fraction(v) for v in b))
    n, k, z = data.draw(residual_args(p))
    assert f.residual(n, k).exact(z) == residual_oracle(f, n, k, z)


def test_residual_needs_long_enough_prefix():
    with pytest.raises(ValueError):
        Polynomial(2, (Fraction(1),)).residual(4, 2)


def test_affine_residual_values():
    f = Affine(2, Fraction(1), Fraction(3))
    # f(1 + 2z) = 4 + 6z; f(1) mod 2 = 0, so the residual is 2 + 3z
    assert f.residual(1, 1) == Affine(2, Fraction(2), Fraction(3))
    # f(0 + 2z) = 1 + 6z; 1 mod 2 = 1, residual 3z
    assert f.residual(0, 1) == Affine(2, Fraction(0), Fraction(3))


def test_polynomial_strips_trailing_zeros_and_rejects_denominators():
    assert Polynomial(2, (Fraction(1), Fraction(0))).degree == 0
    with pytest.raises(ValueError):
        Polynomial(3, (Fraction(1, 3),))


def test_second_digit_violation_witness():
    assert check_lipschitz_depth(digit_function(2, 1), 2) == Violation(0, 2, 1)


@pytest.mark.parametrize("f", [
    Polynomial(2, (Fraction(0), Fraction(0), Fraction(1))),
    Affine(3, Fraction(1, 2), Fraction(7)),
    AutomatonBacked(increment_machine(5)),
    AutomatonBacked(complement_machine(2)),
])
def test_lipschitz_functions_pass(f):
    assert check_lipschitz_depth(f, 4 if f.p == 5 else 6) is None


def test_locally_constant_that_is_lipschitz():
    # x -> x mod 4: equal inputs mod 4 give equal outputs
    f = LocallyConstant(2, 2, tuple(Fraction(v) for v in range(4)))
    assert check_lipschitz_depth(f, 4) is None
    # x -> [x mod 4 == 3]: 1 and 3 agree mod 2, their images do not
    g = LocallyConstant(2, 2, (Fraction(0), Fraction(0), Fraction(0), Fraction(1)))
    assert check_lipschitz_depth(g, 2) == Violation(1, 3, 1)


def test_truncated_table_limits_depth():
    f = VdpTable(2, 2, (Fraction(0), Fraction(1), Fraction(1), Fraction(1)), "truncated")
    assert f.table_mod(2) == [0, 1, 2, 3]
    with pytest.raises(DepthOverflowError):
        f.evaluate_mod(0, 3)
    with pytest.raises(DepthOverflowError):
        f.exact(Fraction(1, 3))


def test_zero_tail_identity_table():
    # b = (0, 1, 1, 1) is the identity up to depth 2, and x mod 4 beyond it
    f = VdpTable(2, 2, (Fraction(0), Fraction(1), Fraction(1), Fraction(1)))
    assert f.exact(13) == 13 % 4


@given(st.data(), polynomials(), st.integers(0, 5))
def test_evaluate_mod_coherent_across_depths(data, f, n):
    x = data.draw(st.integers(0, f.p**n - 1)) if n else 0
    for j in range(n + 1):
        assert f.evaluate_mod(x % f.p**j, j) == f.evaluate_mod(x, n) % f.p**j


@given(machines())
def test_automaton_backed_keys_are_state_specific(m):
    f = AutomatonBacked(m)
    assert f.key() == AutomatonBacked(m).key()
    assert f.residual(0, 1).key() == AutomatonBacked(m.with_initial(m.delta[m.initial][0])).key()
