import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padic_automata import corpus
from padic_automata.christol import (
    AlgebraicRelation,
    FailsAt,
    Holds,
    NotFoundWithinBounds,
    SeriesOverFq,
    find_relation,
    nullspace,
    series_from_dfao,
    series_from_values,
    tau_embed,
    verify_relation,
)
from padic_automata.gf import field
from padic_automata.kernel import THUE_MORSE, Dfao, thue_morse


def mod2_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] ^= y
    return out


def mod2_relation_residue(u, t, n):
    """Coefficients of sum_i u_i(X) T^i modulo X^n, computed over plain ints."""
    acc = [0] * n
    power = [1] + [0] * (n - 1)
    for ui in u:
        term = mod2_mul(list(ui), power, n)
        acc = [x ^ y for x, y in zip(acc, term)]
        power = mod2_mul(power, t, n)
    return acc


def test_thue_morse_relation():
    tau = tau_embed([0, 1], 2)
    series = series_from_dfao(THUE_MORSE, tau, 256)
    rel = find_relation(series, 2, 3)
    assert isinstance(rel, AlgebraicRelation)
    assert isinstance(verify_relation(series, rel, 128), Holds)
    # (1+X)^3 T^2 + (1+X)^2 T + X = 0 over F_2
    assert rel.u == ((0, 1, 0, 0), (1, 0, 1, 0), (1, 1, 1, 1))
    t = [thue_morse(n) for n in range(512)]
    assert not any(mod2_relation_residue(rel.u, t, 512))


def test_all_ones_relation_has_degree_one():
    tau = tau_embed([0, 1], 2)
    series = series_from_dfao(corpus.constant_dfao(1), tau, 256)
    rel = find_relation(series, 2, 3)
    assert rel.d == 1
    assert isinstance(verify_relation(series, rel, 128), Holds)
    assert not any(mod2_relation_residue(rel.u, [1] * 300, 300))


def test_all_ones_over_f3():
    tau = tau_embed([0, 1], 3)
    series = series_from_values([1] * 300, tau)
    rel = find_relation(series, 2, 2)
    assert rel.d == 1 and isinstance(verify_relation(series, rel, 300), Holds)


def test_random_bits_have_no_small_relation():
    rng = random.Random(7)
    tau = tau_embed([0, 1], 2)
    series = series_from_values([rng.randrange(2) for _ in range(200)], tau)
    assert isinstance(find_relation(series, 2, 2), NotFoundWithinBounds)


def test_verify_reports_first_failure():
    F = field(2)
    series = SeriesOverFq(F, (1,) * 8)
    # F + X is 1 + 0 X + 1 X^2 + ... so coefficient 0 fails first
    rel = AlgebraicRelation(F, ((0, 1), (1,)))
    assert verify_relation(series, rel, 4) == FailsAt(0)
    # (1 + X) F + 1 = 0 only needs coefficient 0 fixed: 1 + 1 = 0
    assert isinstance(verify_relation(series, AlgebraicRelation(F, ((1,), (1, 1))), 8), Holds)


def test_zero_relation_is_rejected():
    F = field(2)
    with pytest.raises(ValueError):
        verify_relation(SeriesOverFq(F, (0, 1)), AlgebraicRelation(F, ((0,), (0,))), 2)


def test_series_too_short():
    tau = tau_embed([0, 1], 2)
    with pytest.raises(ValueError):
        find_relation(series_from_values([1] * 10, tau), 2, 3)


def test_tau_embedding_picks_least_field():
    tau = tau_embed([Fraction(3), Fraction(-1), Fraction(1, 2)], 2)
    assert tau.field.q == 4
    assert [tau(Fraction(-1)), tau(Fraction(1, 2)), tau(Fraction(3))] == [0, 1, 2]
    with pytest.raises(ValueError):
        tau_embed(range(5), 2, 2)


def test_relation_json_roundtrip():
    F = field(3, 2)
    rel = AlgebraicRelation(F, ((1, 2, 0), (0, 8)), 64)
    assert AlgebraicRelation.from_dict(json.loads(rel.to_json())) == rel


def test_rational_valued_dfao_relation():
    # the sequence -1, -2, -2, ... embedded into GF(2)
    d = Dfao(2, [[1, 1], [1, 1]], [Fraction(-1), Fraction(-2)]).normalized()
    tau = tau_embed(d.output, 2)
    series = series_from_dfao(d, tau, 256)
    rel = find_relation(series, 2, 3)
    assert isinstance(rel, AlgebraicRelation)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, 1), (2, 2), (3, 1), (5, 1)]), st.data())
def test_nullspace_vectors_annihilate_rows(key, data):
    F = field(*key)
    ncols = data.draw(st.integers(1, 5))
    rows = data.draw(st.lists(st.lists(st.integers(0, F.q - 1), min_size=ncols,
                                       max_size=ncols), min_size=0, max_size=5))
    basis = nullspace(F, rows, ncols)
    assert len(basis) >= ncols - len(rows)
    for v in basis:
        assert any(v)
        for row in rows:
            acc = 0
            for x, y in zip(row, v):
                acc = F.add(acc, F.mul(x, y))
            assert acc == 0
