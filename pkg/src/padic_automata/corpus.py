"""Reference functions and machines used by the self-check and the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .kernel import Dfao, TableBacked, thue_morse
from .presentation import Affine, AutomatonBacked, Polynomial, Presentation, digit_function
from .transducer import Transducer, complement_machine, increment_machine, random_transducer

# p^K <= 4096 for each base
DESK_DEPTH = {2: 12, 3: 7, 5: 5}


def identity(p: int = 2) -> Polynomial:
    return Polynomial(p, (Fraction(0), Fraction(1)))


def bitwise_not(p: int = 2) -> AutomatonBacked:
    return AutomatonBacked(complement_machine(p))


def increment(p: int = 2) -> AutomatonBacked:
    return AutomatonBacked(increment_machine(p))


def affine_1_3x(p: int = 2) -> Affine:
    return Affine(p, Fraction(1), Fraction(3))


def square(p: int = 2) -> Polynomial:
    return Polynomial(p, (Fraction(0), Fraction(0), Fraction(1)))


def second_digit(p: int = 2):
    """``x -> delta_1(x)``: continuous but not 1-Lipschitz."""
    return digit_function(p, 1)


def named_corpus(p: int = 2) -> dict[str, Presentation]:
    return {
        "identity": identity(p),
        "not": bitwise_not(p),
        "increment": increment(p),
        "affine_1_3x": affine_1_3x(p),
        "square": square(p),
    }


def random_padic_rational(p: int, rng: random.Random, size: int = 9) -> Fraction:
    while True:
        den = rng.randint(1, size)
        if den % p:
            return Fraction(rng.randint(-size, size), den)


def random_polynomial(p: int, rng: random.Random, max_degree: int = 3) -> Polynomial:
    """Random polynomial with coefficients in Q ∩ Z_p, hence 1-Lipschitz."""
    degree = rng.randint(0, max_degree)
    return Polynomial(p, tuple(random_padic_rational(p, rng) for _ in range(degree + 1)))


def random_machines(count: int, seed: int, bases=(2, 3, 5), max_states: int = 12) -> list[Transducer]:
    rng = random.Random(seed)
    return [random_transducer(bases[i % len(bases)], rng.randint(1, max_states), rng)
            for i in range(count)]


def thue_morse_table(K: int = 12) -> TableBacked:
    return TableBacked(2, K, tuple(thue_morse(n) for n in range(2**K)))


def constant_dfao(c, p: int = 2) -> Dfao:
    return Dfao(p, [[0] * p], [c])
