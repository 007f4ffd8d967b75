import pytest
from hypothesis import given, strategies as st

from padic_automata.gf import CONWAY, GF, field, find_irreducible, is_irreducible

SMALL_FIELDS = [(p, l) for p in (2, 3, 5) for l in (1, 2, 3, 4) if p**l <= 256]


def generator(F):
    # the class of x; for l = 1 that is the root of x + c, i.e. -c
    return F.p if F.l > 1 else (-F.modulus[0]) % F.p


def has_root(mod, p):
    return any(sum(c * x**i for i, c in enumerate(mod)) % p == 0 for x in range(p))


@pytest.mark.parametrize("key", sorted(CONWAY))
def test_conway_polynomials_are_irreducible_and_primitive(key):
    p, l = key
    mod = CONWAY[key]
    assert len(mod) == l + 1 and mod[-1] == 1
    if 2 <= l <= 3:
        assert not has_root(mod, p)
    assert is_irreducible(mod, p)
    if p**l <= 256:
        F = field(p, l)
        assert F.order(generator(F)) == p**l - 1


def test_reducible_polynomials_rejected():
    assert not is_irreducible((0, 1, 1), 2)   # x + x^2
    assert not is_irreducible((1, 0, 1), 2)   # (1 + x)^2
    assert not is_irreducible((1, 0, 1, 0, 1), 2)  # (1 + x + x^2)^2
    with pytest.raises(ValueError):
        GF(2, 2, (1, 0, 1))


def test_untabulated_degree_gets_an_irreducible():
    mod = find_irreducible(3, 5)
    assert len(mod) == 6 and is_irreducible(mod, 3)


def test_gf4_tables():
    F = field(2, 2)
    # x^2 = x + 1: encoding 2 is x, 3 is x + 1
    assert F.mul(2, 2) == 3
    assert F.mul(2, 3) == 1
    assert F.add(2, 3) == 1


def test_prime_required():
    with pytest.raises(ValueError):
        GF(4, 1)


@pytest.mark.parametrize("p,l", SMALL_FIELDS)
def test_inverses_and_group_order(p, l):
    F = field(p, l)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1
        assert F.pow(a, -1) == F.inv(a)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("p,l", SMALL_FIELDS)
def test_frobenius_is_additive(p, l):
    F = field(p, l)
    for a in range(F.q):
        for b in range(0, F.q, max(1, F.q // 16)):
            assert F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p))


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_field_axioms(key, data):
    F = field(*key)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, 0) == a and F.mul(a, 1) == a
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(F.add(a, b), b) == a
