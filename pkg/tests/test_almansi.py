import random
from fractions import Fraction

import pytest
import sympy as sp
from conftest import cached_basis
from hypothesis import given
from hypothesis import strategies as st
from oracles import poly, s_add, s_dirac, s_laplacian, s_mul, to_sympy
from strategies import ambient_polynomials

from partialslice.almansi import (
    ab_to_stem,
    almansi_ab,
    classical_almansi,
    classical_equivariance_check,
    cr2_residual,
    polyharmonic_commutator_check,
    polymonogenic_almansi,
    signed_permutation,
    starlike_almansi,
)
from partialslice.clifford import Multivector, Signature
from partialslice.diffops import dirac, laplacian
from partialslice.errors import PreconditionError
from partialslice.mvpoly import MVPolynomial, ambient_vars
from partialslice.regular import gcr_residual
from partialslice.slices import induce, paravector_poly, stem_from_ambient, x_conj_poly

S03, S13, S05 = Signature(0, 3), Signature(1, 3), Signature(0, 5)
A03 = ambient_vars(S03)


def slice_of(sig, P):
    return induce(stem_from_ambient(P, sig))


def test_ab_of_identity():
    ab = almansi_ab(slice_of(S03, paravector_poly(S03)))
    assert ab.A == poly("2*x0", A03)
    assert ab.B == poly("1", A03)
    assert ab.verified


def test_ab_of_square():
    x = paravector_poly(S03)
    ab = almansi_ab(slice_of(S03, x * x))
    assert ab.A == poly("3*x0**2 - x1**2 - x2**2 - x3**2", A03)
    assert ab.B == poly("2*x0", A03)
    assert laplacian(ab.A, S03).is_zero() and laplacian(ab.B, S03).is_zero()
    assert ab.A - x_conj_poly(S03) * ab.B == x * x
    assert ab.verified


def test_ab_of_constant():
    ab = almansi_ab(slice_of(S03, MVPolynomial.constant(A03, Multivector.blade(0b101, 3))))
    assert ab.A == MVPolynomial.constant(A03, Multivector.blade(0b101, 3))
    assert ab.B.is_zero()


def test_ab_rejects_bad_input():
    with pytest.raises(ValueError):
        almansi_ab(slice_of(Signature(0, 1), paravector_poly(Signature(0, 1))))
    with pytest.raises(ValueError):
        almansi_ab(slice_of(Signature(0, 2), paravector_poly(Signature(0, 2))))
    with pytest.raises(PreconditionError):
        almansi_ab(slice_of(S03, poly("x0**2", A03)))


def test_cr2_examples():
    x = paravector_poly(S03)
    ab = almansi_ab(slice_of(S03, x * x))
    R1, R2 = cr2_residual(ab.A, ab.B, S03)
    assert R1.is_zero() and R2.is_zero()
    R1, R2 = cr2_residual(poly("1", A03), poly("0", A03), S03)
    assert R1.is_zero() and R2.is_zero()
    for sig in (S03, S13):
        av = ambient_vars(sig)
        R1, R2 = cr2_residual(poly("0", av), poly("1", av), sig)
        assert R1 == poly(str(-(sig.p + 2)), R1.vars)
        assert R2.is_zero()


def test_cr2_requires_symmetric_inputs():
    with pytest.raises(PreconditionError):
        cr2_residual(poly("x1", A03), poly("0", A03), S03)


@pytest.mark.parametrize("sig", [S03, S13])
@given(st.data())
def test_cr2_rows_equal_gcr_of_recombined_stem(sig, data):
    """Random radial A, B: the two rows are the GCR residual of the stem of A - conj(x) B."""
    from strategies import polynomials

    from partialslice.mvpoly import g_vars, substitute_radial

    GA = data.draw(polynomials(g_vars(sig), sig.n, max_degree=3))
    GB = data.draw(polynomials(g_vars(sig), sig.n, max_degree=3))
    A, B = substitute_radial(GA, sig), substitute_radial(GB, sig)
    R1, R2 = cr2_residual(A, B, sig)
    res = gcr_residual(ab_to_stem(A, B, sig))
    assert (R1, R2) == (res.R1, res.R2)
    assert induce(ab_to_stem(A, B, sig)).ambient == A - x_conj_poly(sig) * B


def test_commutator_examples():
    assert polyharmonic_commutator_check(poly("x0**2", A03), 1, S03)
    assert polyharmonic_commutator_check(MVPolynomial.zero(ambient_vars(S13)), 2, S13)


@pytest.mark.parametrize("sig", [S03, S13])
@given(h=st.data(), m=st.sampled_from([1, 2]))
def test_commutator_lemma_random(sig, h, m):
    assert polyharmonic_commutator_check(h.draw(ambient_polynomials(sig, max_terms=5)), m, sig)


def test_commutator_against_sympy():
    h = poly("x0**3*x4 + x1**2*x2", ambient_vars(S13), mask=0b0110)
    names = ambient_vars(S13)
    xbar = {0: sp.Symbol("x0", real=True), 1: -sp.Symbol("x1", real=True)}
    lhs = s_laplacian(s_laplacian(s_mul(xbar, to_sympy(h)), names), names)
    dbar = s_dirac(to_sympy(h), range(2), conj=True)
    rhs = s_add({m: 4 * v for m, v in s_laplacian(dbar, names).items()},
                s_mul(xbar, s_laplacian(s_laplacian(to_sympy(h), names), names)))
    assert lhs == rhs
    assert polyharmonic_commutator_check(h, 2, S13)


# -- classical ------------------------------------------------------------------------------------------

def test_classical_examples():
    norm2 = poly("x0**2 + x1**2 + x2**2 + x3**2", A03)
    dec = classical_almansi(norm2, 2)
    assert dec.components == [poly("0", A03), poly("1", A03)]
    dec = classical_almansi(poly("x0**2", A03), 2)
    assert dec.components == [poly("x0**2 - (x0**2 + x1**2 + x2**2 + x3**2)/4", A03), poly("1/4", A03)]
    assert dec.unique
    harmonic = poly("x0*x1 + x2**2 - x3**2", A03, mask=0b11)
    assert classical_almansi(harmonic, 1).components == [harmonic]


def test_classical_rejects_non_polyharmonic():
    with pytest.raises(PreconditionError):
        classical_almansi(poly("x0**4", A03), 2)


@given(ambient_polynomials(S03, max_degree=5, max_terms=4))
def test_classical_reconstructs(u):
    N = 3
    dec = classical_almansi(u, N)
    norm2 = poly("x0**2 + x1**2 + x2**2 + x3**2", A03)
    total, w = MVPolynomial.zero(A03), MVPolynomial.constant(A03, 1)
    for uk in dec:
        assert laplacian(uk, S03).is_zero()
        total, w = total + w * uk, w * norm2
    assert total == u and dec.unique


@pytest.mark.parametrize("perm,signs", [((1, 0, 2), (1, 1, 1)), ((2, 0, 1), (-1, 1, -1)), ((0, 1, 2), (1, -1, 1))])
def test_classical_signed_permutation_equivariance(perm, signs):
    rng = random.Random(7)
    for _ in range(5):
        terms = {}
        for _ in range(4):
            e = [0] * 4
            for _ in range(rng.randint(0, 4)):
                e[rng.randrange(4)] += 1
            terms[tuple(e)] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        u = MVPolynomial(A03, terms)
        assert classical_equivariance_check(u, 3, S03, perm, signs)


def test_signed_permutation_action():
    u = poly("x1**2*x3 + x0*x2", A03)
    assert signed_permutation(u, S03, (1, 2, 0), (1, 1, -1)) == poly("x2**2*(-x1) + x0*x3", A03)


# -- polymonogenic ---------------------------------------------------------------------------------------

def vec_poly(n):
    vars = tuple(f"x{i}" for i in range(1, n + 1))
    return sum((MVPolynomial.variable(vars, f"x{i}", Multivector.generator(i)) for i in range(1, n + 1)),
               MVPolynomial.zero(vars))


def test_polymonogenic_examples():
    xv = vec_poly(2)
    dec = polymonogenic_almansi(xv, 2)
    assert dec.components == [MVPolynomial.zero(xv.vars), MVPolynomial.constant(xv.vars, 1)]
    mono = MVPolynomial.constant(xv.vars, Multivector.blade(0b11))
    assert polymonogenic_almansi(mono, 1).components == [mono]


def test_polymonogenic_mixed_example():
    vars = ("x1", "x2")
    u = MVPolynomial.variable(vars, "x1", Multivector.generator(1)) - MVPolynomial.variable(vars, "x2", Multivector.generator(2))
    # D u = e1 e1 - e2 e2 = 0: monogenic already
    assert dirac(u, Signature(0, 2), "dirac_underline").is_zero()
    assert polymonogenic_almansi(u, 1).components == [u]
    dec = polymonogenic_almansi(u, 2)
    assert dec.components[1].is_zero()


def test_polymonogenic_rejects():
    with pytest.raises(PreconditionError):
        polymonogenic_almansi(vec_poly(3), 1)
    with pytest.raises(ValueError):
        polymonogenic_almansi(poly("x0", ("x0",)), 1)


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_polymonogenic_reconstructs(cs):
    n = 3
    xv = vec_poly(n)
    vars = xv.vars
    # monogenic pieces, so uniqueness pins the components
    m0 = MVPolynomial.constant(vars, Multivector.blade(0b101, cs[0]))
    m1 = MVPolynomial.variable(vars, "x1", Multivector.generator(1, cs[1])) - MVPolynomial.variable(vars, "x2", Multivector.generator(2, cs[1]))
    m2 = MVPolynomial.constant(vars, Multivector.scalar(cs[2]))
    for piece in (m0, m1, m2):
        assert dirac(piece, Signature(0, n), "dirac_underline").is_zero()
    u = m0 + xv * m1 + xv * xv * m2
    dec = polymonogenic_almansi(u, 3)
    total, w = MVPolynomial.zero(vars), MVPolynomial.constant(vars, 1)
    for uk in dec:
        assert dirac(uk, Signature(0, n), "dirac_underline").is_zero()
        total, w = total + w * uk, w * xv
    assert total == u and dec.unique
    assert dec.components == [m0, m1, m2]


# -- star-like ----------------------------------------------------------------------------------------------

def test_starlike_square():
    x = paravector_poly(S03)
    dec = starlike_almansi(slice_of(S03, x * x))
    assert dec.g == [x * x]
    assert laplacian(x * x, S03) == poly("-4", A03)
    assert dec.verified


def test_starlike_constant():
    c = MVPolynomial.constant(A03, Multivector.blade(2, 5))
    assert starlike_almansi(slice_of(S03, c)).g == [c]


def test_starlike_degree_three_at_q5():
    basis = cached_basis(0, 5, 3)
    sig = S05
    norm2 = poly(" + ".join(f"x{i}**2" for i in range(6)), ambient_vars(sig))
    for f in [b for b in basis if b.ambient.degree == 3][:: 16]:
        dec = starlike_almansi(f)
        assert len(dec.g) == 2
        assert dec.g[0] + norm2 * dec.g[1] == f.ambient
        assert all(dirac(laplacian(g, sig), sig).is_zero() for g in dec.g)
        assert dec.verified
