from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import dense_mul, word_product
from strategies import multivectors

from partialslice.clifford import (
    Multivector,
    Q,
    Signature,
    blade_product,
    blade_product_oracle,
    conjugate,
    mv_mul,
    norm_squared,
)

E1, E2, E3 = (Multivector.generator(i) for i in (1, 2, 3))


def test_generator_squares_to_minus_one():
    assert blade_product(0b1, 0b1) == (-1, 0)


def test_anticommutation():
    assert blade_product(0b01, 0b10) == (1, 0b11)
    assert blade_product(0b10, 0b01) == (-1, 0b11)


def test_e12_times_e23():
    # e1 e2 e2 e3 = -e1 e3
    assert word_product(0b011, 0b110) == (-1, 0b101)
    assert blade_product(0b011, 0b110) == (-1, 0b101)


@pytest.mark.parametrize("n", range(1, 6))
def test_blade_product_matches_word_reduction(n):
    for a, b in product(range(1 << n), repeat=2):
        assert blade_product(a, b) == word_product(a, b)
        assert blade_product_oracle(a, b) == word_product(a, b)


def test_examples():
    one = Multivector.scalar(1)
    assert (one + E1) * (one - E1) == Multivector.scalar(2)
    a = Multivector({0: 2, 0b101: Fraction(-1, 3)})
    assert a * 1 == a
    assert mv_mul(mv_mul(E1, E2), E3) == Multivector.blade(0b111)


def test_conjugation():
    assert conjugate(E1) == -E1
    assert conjugate(Multivector.scalar(1)) == Multivector.scalar(1)
    assert conjugate(Multivector.blade(0b11)) == -Multivector.blade(0b11)
    assert (E2 * E1) == -Multivector.blade(0b11)


def test_norm_squared():
    assert norm_squared(Multivector.scalar(1) + E1) == 2
    assert norm_squared(Multivector()) == 0
    assert norm_squared(Multivector({0b10: Fraction(3, 5), 0b100: Fraction(4, 5)})) == 1


def test_zero_coefficients_dropped_and_reduced():
    a = Multivector({0: "2/4", 1: 0})
    assert a.coeffs == {0: Q("1/2")}
    assert (E1 - E1).coeffs == {}


def test_json_round_trip():
    a = Multivector({0: "1/2", 0b101: -3})
    assert a.to_json() == {"0x0": "1/2", "0x5": "-3"}
    assert Multivector.from_json(a.to_json()) == a


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature(0, 0)
    with pytest.raises(ValueError):
        Signature(-1, 2)
    with pytest.raises(ValueError):
        Signature(10, 7)
    with pytest.raises(ValueError):
        Signature(1, 1).check(Multivector.blade(0b100))


@given(multivectors(4), multivectors(4), multivectors(4))
def test_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(multivectors(4), multivectors(4))
def test_product_matches_dense_oracle(a, b):
    expected = dense_mul({m: Fraction(int(v.numerator), int(v.denominator)) for m, v in a.coeffs.items()},
                         {m: Fraction(int(v.numerator), int(v.denominator)) for m, v in b.coeffs.items()})
    assert (a * b) == Multivector(expected)


@given(multivectors(4), multivectors(4))
def test_conjugate_reverses_products(a, b):
    assert conjugate(a * b) == conjugate(b) * conjugate(a)
    assert conjugate(conjugate(a)) == a


@given(st.lists(st.fractions(-4, 4, max_denominator=5), min_size=4, max_size=4))
def test_vector_squares_to_minus_norm(v):
    x = Multivector.vector(v)
    assert x * x == Multivector.scalar(-norm_squared(x))
