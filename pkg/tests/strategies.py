"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from padic_automata.presentation import Polynomial
from padic_automata.transducer import Transducer

primes = st.sampled_from([2, 3, 5])


@st.composite
def padic_rationals(draw, p, size=50):
    num = draw(st.integers(-size, size))
    den = draw(st.integers(1, size).filter(lambda d: d % p))
    return Fraction(num, den)


@st.composite
def machines(draw, p=None, max_states=6):
    p = draw(primes) if p is None else p
    n = draw(st.integers(1, max_states))
    delta = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=p, max_size=p),
                          min_size=n, max_size=n))
    output = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=p, max_size=p),
                           min_size=n, max_size=n))
    return Transducer(p, delta, output, draw(st.integers(0, n - 1)))


@st.composite
def polynomials(draw, p=None, max_degree=3):
    p = draw(primes) if p is None else p
    coeffs = draw(st.lists(padic_rationals(p, 9), min_size=1, max_size=max_degree + 1))
    return Polynomial(p, tuple(coeffs))
