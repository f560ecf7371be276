import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from oracles import poly, to_sympy
from strategies import ambient_polynomials, polynomials, rational_points

from partialslice.clifford import Multivector, Signature
from partialslice.mvpoly import (
    MVPolynomial,
    ambient_vars,
    evaluate,
    homogeneous_parts,
    partial_derivative,
    substitute_radial,
)
from partialslice.slices import paravector_poly

V2 = ("x0", "x1")
E1 = Multivector.generator(1)


def test_partial_derivative_examples():
    P = MVPolynomial.monomial(V2, (2, 0), E1)
    assert partial_derivative(P, "x0") == MVPolynomial.monomial(V2, (1, 0), E1 * 2)
    assert partial_derivative(poly("x0**2", V2), "x1").is_zero()
    assert partial_derivative(poly("r**3 - 3*r", ("r",)), "r") == poly("3*r**2 - 3", ("r",))


def test_partial_derivative_unknown_variable():
    with pytest.raises(KeyError):
        partial_derivative(poly("x0", V2), "x7")


def test_substitute_radial_examples():
    s03, s02 = Signature(0, 3), Signature(0, 2)
    assert substitute_radial(poly("t", ("x0", "t")), s03) == poly("x1**2 + x2**2 + x3**2", ambient_vars(s03))
    assert substitute_radial(poly("x0*t", ("x0", "t")), s02) == poly("x0*x1**2 + x0*x2**2", ambient_vars(s02))
    assert substitute_radial(poly("t**2", ("x0", "t")), s02) == poly("x1**4 + 2*x1**2*x2**2 + x2**4", ambient_vars(s02))


def test_substitute_radial_requires_t():
    with pytest.raises(ValueError):
        substitute_radial(poly("x0", ("x0", "r")), Signature(0, 2))


def test_evaluate_examples():
    P = MVPolynomial.variable(V2, "x0") + MVPolynomial.variable(V2, "x1", E1)
    assert evaluate(P, [1, 2]) == Multivector({0: 1, 1: 2})
    assert evaluate(poly("x0**2", V2), [3, 7]) == Multivector.scalar(9)
    with pytest.raises(ValueError):
        evaluate(P, [1])


@given(rational_points(4))
def test_evaluate_square_matches_clifford_product(pt):
    sig = Signature(0, 3)
    x = paravector_poly(sig)
    v = evaluate(x, pt)
    assert evaluate(x * x, pt) == v * v


def test_homogeneous_parts_examples():
    parts = homogeneous_parts(poly("x0**2 + x1", V2))
    assert parts == [poly("x1", V2), poly("x0**2", V2)]
    assert homogeneous_parts(MVPolynomial.zero(V2)) == []
    assert homogeneous_parts(poly("(x0 + x1)**2", V2)) == [poly("(x0 + x1)**2", V2)]


def test_json_round_trip_and_order():
    P = poly("x1 + x0**2 + 3", V2) + MVPolynomial.monomial(V2, (1, 1), E1)
    data = P.to_json()
    assert [t["exp"] for t in data["terms"]] == [[0, 0], [0, 1], [2, 0], [1, 1]]
    assert MVPolynomial.from_json(data) == P


def test_arithmetic_agrees_with_sympy():
    a, b = poly("x0 + 2*x1", V2), poly("x0 - x1**2", V2)
    x0, x1 = sp.symbols("x0 x1", real=True)
    assert to_sympy(a * b)[0] == sp.expand((x0 + 2 * x1) * (x0 - x1**2))


def test_clifford_coefficients_multiply_in_order():
    a = MVPolynomial.monomial(V2, (1, 0), E1)
    b = MVPolynomial.monomial(V2, (0, 1), Multivector.generator(2))
    assert (a * b).coefficient((1, 1)) == Multivector.blade(0b11)
    assert (b * a).coefficient((1, 1)) == -Multivector.blade(0b11)


SIG = Signature(1, 2)


@given(ambient_polynomials(SIG), st.sampled_from(ambient_vars(SIG)), st.sampled_from(ambient_vars(SIG)))
def test_mixed_partials_commute(P, u, v):
    assert P.diff(u).diff(v) == P.diff(v).diff(u)


@given(ambient_polynomials(SIG))
def test_homogeneous_parts_sum_back(P):
    parts = homogeneous_parts(P)
    assert sum(parts, MVPolynomial.zero(P.vars)) == P
    assert all(len({sum(e) for e in part.terms}) == 1 for part in parts)


@given(polynomials(("x0", "x1", "t"), 3, max_degree=3), rational_points(4))
def test_radial_substitution_commutes_with_evaluation(G, pt):
    sig = Signature(1, 2)
    lhs = evaluate(substitute_radial(G, sig), pt)
    assert lhs == evaluate(G, [pt[0], pt[1], pt[2] ** 2 + pt[3] ** 2])


@given(polynomials(V2, 2, max_degree=3))
def test_sympy_round_trip_per_blade(P):
    from oracles import from_sympy

    assert from_sympy(to_sympy(P), V2) == P
