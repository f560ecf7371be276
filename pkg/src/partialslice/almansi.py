"""Almansi-type decompositions for polynomial data.

The classical and polymonogenic decompositions are solved one homogeneous
degree at a time as exact linear systems whose matrix depends only on the
number of variables, the degree and ``N``; those factorizations are cached.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from itertools import combinations_with_replacement

from gmpy2 import mpq

from .clifford import Multivector, Signature, blade_product
from .diffops import dirac, laplacian
from .errors import PreconditionError
from .linalg import LinearSystem, SolveOperator
from .mvpoly import MVPolynomial, _grlex_key, _radial_power, ambient_vars
from .regular import gcr_residual
from .slices import (
    SliceFunction,
    StemPair,
    is_symmetric,
    norm2_poly,
    stem_form,
    x_conj_poly,
    xp_conj_poly,
)


def _monomials(nvars: int, degree: int) -> list:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, key=_grlex_key)


def _odd_q(sig: Signature) -> int:
    if sig.q % 2 == 0 or sig.q < 3:
        raise ValueError(f"Almansi decompositions need odd q >= 3, got q = {sig.q}")
    return (sig.q - 1) // 2


# -- A/B decomposition -------------------------------------------------------------

@dataclass
class ABDecomposition:
    A: MVPolynomial
    B: MVPolynomial
    m: int
    certificates: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.certificates.values())


def almansi_ab(f: SliceFunction) -> ABDecomposition:
    """``A = f_s° + conj(x_p) f_s'``, ``B = f_s'`` with every invariant certified."""
    sig = f.sig
    m = _odd_q(sig)
    if not gcr_residual(f.stem).is_zero():
        raise PreconditionError("input is not generalized partial-slice regular")
    vars = f.ambient.vars
    B = f.spherical_derivative
    A = f.spherical_value + xp_conj_poly(sig, vars) * B
    xbar = x_conj_poly(sig, f.omit_x0)
    certs = {
        "polyharmonic_A": laplacian(A, sig, m).is_zero(),
        "polyharmonic_B": laplacian(B, sig, m).is_zero(),
        "symmetric_A": is_symmetric(A, sig) is not None,
        "symmetric_B": is_symmetric(B, sig) is not None,
        "reconstruction": A - xbar * B == f.ambient,
    }
    if certs["symmetric_A"] and certs["symmetric_B"]:
        R1, R2 = cr2_residual(A, B, sig)
        certs["cr2"] = R1.is_zero() and R2.is_zero()
    else:
        certs["cr2"] = False
    return ABDecomposition(A, B, m, certs)


def cr2_residual(A: MVPolynomial, B: MVPolynomial, sig: Signature) -> tuple:
    """Both rows of the first-order system an (A, B) pair of a GSR function must satisfy.

    ``A`` and ``B`` are ambient and must be radial in the x_q block.  The rows
    are computed over the stem variables (x_p, r).
    """
    GA, GB = is_symmetric(A, sig), is_symmetric(B, sig)
    if GA is None or GB is None:
        raise PreconditionError("A and B must depend only on (x_p, |x_q|)")
    a, b = stem_form(GA, sig), stem_form(GB, sig)
    vars = a.vars
    xbar = xp_conj_poly(sig, vars)
    r = MVPolynomial.variable(vars, "r")
    row1 = dirac(a, sig, "dirac_p") - r * b.diff("r") - b.scale(sig.p + 2)
    for i in range(0 if "x0" in vars else 1, sig.p + 1):
        ei_xbar = xbar if i == 0 else xbar.lmul_blade(1 << (i - 1))
        row1 = row1 - ei_xbar * b.diff(f"x{i}")
    row2 = a.diff("r") - xbar * b.diff("r") + r * dirac(b, sig, "dirac_p_conj")
    return row1, row2


def ab_to_stem(A: MVPolynomial, B: MVPolynomial, sig: Signature) -> StemPair:
    """Stem pair of ``A - conj(x) B``: ``(a - conj(x_p) b, r b)`` from the radial stem forms."""
    GA, GB = is_symmetric(A, sig), is_symmetric(B, sig)
    if GA is None or GB is None:
        raise PreconditionError("A and B must depend only on (x_p, |x_q|)")
    a, b = stem_form(GA, sig), stem_form(GB, sig)
    r = MVPolynomial.variable(a.vars, "r")
    return StemPair(sig, a - xp_conj_poly(sig, a.vars) * b, r * b, "x0" not in a.vars)


def polyharmonic_commutator_check(h: MVPolynomial, m: int, sig: Signature) -> bool:
    """``Delta^m(conj(x_p) h) == 2m Delta^(m-1) conj(D_{x_p}) h + conj(x_p) Delta^m h``."""
    if m < 1:
        raise ValueError("m must be positive")
    xbar = xp_conj_poly(sig, h.vars)
    lhs = laplacian(xbar * h, sig, m)
    rhs = laplacian(dirac(h, sig, "dirac_p_conj"), sig, m - 1).scale(2 * m) + xbar * laplacian(h, sig, m)
    return lhs == rhs


# -- classical and polymonogenic ----------------------------------------------------------

@dataclass
class Decomposition:
    """Components ``u_0..u_{N-1}`` plus ``degree -> (rank, unknowns)`` of each solve."""

    components: list
    ranks: dict

    @property
    def unique(self) -> bool:
        return all(rk == n for rk, n in self.ranks.values())

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, k):
        return self.components[k]


@cache
def _fischer_operator(nvars: int, degree: int, N: int):
    """Solve operator for x^(d) = sum_k |x|^{2k} u_k, Delta u_k = 0, over scalar coefficients."""
    unknowns = [(k, e) for k in range(N) if degree - 2 * k >= 0 for e in _monomials(nvars, degree - 2 * k)]
    rows: dict = {}
    for j, (k, e) in enumerate(unknowns):
        for i in range(nvars):
            if e[i] >= 2:
                te = e[:i] + (e[i] - 2,) + e[i + 1 :]
                rows.setdefault(("h", k, te), {})[j] = mpq(e[i] * (e[i] - 1))
        for qe, qc in _radial_power(nvars, k):
            te = tuple(a + b for a, b in zip(e, qe))
            rows.setdefault(("s", te), {})
            rows[("s", te)][j] = rows[("s", te)].get(j, 0) + qc
    for e in _monomials(nvars, degree):
        rows.setdefault(("s", e), {})
    keys = list(rows)
    op = SolveOperator(LinearSystem(unknowns, [rows[k] for k in keys]))
    return op, unknowns, {k: i for i, k in enumerate(keys)}


def classical_almansi(u: MVPolynomial, N: int) -> Decomposition:
    """``u = sum_k |x|^{2k} u_k`` with harmonic ``u_k``; the coordinates are ``u.vars``."""
    if N < 1:
        raise ValueError("N must be positive")
    vars = u.vars
    n = len(vars)
    if not _lap(u, vars, N).is_zero():
        raise PreconditionError(f"input is not polyharmonic of degree {N}")
    comps: list = [{} for _ in range(N)]
    ranks = {}
    for d in range(u.degree + 1):
        op, unknowns, row_of = _fischer_operator(n, d, N)
        ranks[d] = (op.rank, op.ncols)
        part = u.homogeneous_part(d)
        by_blade: dict = {}
        for e, c in part.terms.items():
            for mask, v in c.coeffs.items():
                by_blade.setdefault(mask, {})[row_of[("s", e)]] = v
        for mask, b in by_blade.items():
            x = op.solve(b)
            if x is None:
                raise PreconditionError(f"no decomposition in degree {d}")
            for (k, e), v in zip(unknowns, x):
                if v:
                    comps[k].setdefault(e, {})[mask] = v
    return Decomposition([MVPolynomial._raw(vars, t) for t in comps], ranks)


def _lap(P: MVPolynomial, vars, power: int) -> MVPolynomial:
    for _ in range(power):
        nxt = MVPolynomial.zero(vars)
        for v in vars:
            nxt = nxt + P.diff(v, 2)
        P = nxt
    return P


def _underline_sig(u: MVPolynomial) -> Signature:
    n = len(u.vars)
    if u.vars != tuple(f"x{i}" for i in range(1, n + 1)):
        raise ValueError(f"expected variables x1..x{n}, got {u.vars}")
    return Signature(0, n)


def _vector_poly(sig: Signature) -> MVPolynomial:
    vars = ambient_vars(sig, omit_x0=True)
    return sum(
        (MVPolynomial.variable(vars, f"x{i}", Multivector.generator(i)) for i in range(1, sig.n + 1)),
        MVPolynomial.zero(vars),
    )


@cache
def _polymonogenic_operator(n: int, degree: int, N: int):
    sig = Signature(0, n)
    vars = ambient_vars(sig, omit_x0=True)
    xv = _vector_poly(sig)
    powers = [MVPolynomial.constant(vars, 1)]
    for _ in range(1, N):
        powers.append(powers[-1] * xv)
    unknowns = [
        (k, e, mask)
        for k in range(N)
        if degree - k >= 0
        for e in _monomials(n, degree - k)
        for mask in range(1 << n)
    ]
    rows: dict = {}
    for j, (k, e, mask) in enumerate(unknowns):
        for i in range(n):
            if e[i]:
                te = e[:i] + (e[i] - 1,) + e[i + 1 :]
                s, res = blade_product(1 << i, mask)
                key = ("h", k, te, res)
                rows.setdefault(key, {})[j] = rows.get(key, {}).get(j, 0) + s * e[i]
        mono = MVPolynomial._raw(vars, {e: {mask: mpq(1)}})
        for te, c in (powers[k] * mono).terms.items():
            for res, v in c.coeffs.items():
                rows.setdefault(("s", te, res), {})[j] = v
    for e in _monomials(n, degree):
        for mask in range(1 << n):
            rows.setdefault(("s", e, mask), {})
    rows = {k: {j: v for j, v in r.items() if v} for k, r in rows.items()}
    keys = list(rows)
    op = SolveOperator(LinearSystem(unknowns, [rows[k] for k in keys]))
    return op, unknowns, {k: i for i, k in enumerate(keys)}


def polymonogenic_almansi(u: MVPolynomial, N: int) -> Decomposition:
    """``u = sum_k x^k u_k`` with ``x = sum_i x_i e_i`` acting on the left and ``D u_k = 0``."""
    if N < 1:
        raise ValueError("N must be positive")
    sig = _underline_sig(u)
    if not dirac(u, sig, "dirac_underline", power=N).is_zero():
        raise PreconditionError(f"input is not polymonogenic of degree {N}")
    n = sig.n
    comps: list = [{} for _ in range(N)]
    ranks = {}
    for d in range(u.degree + 1):
        op, unknowns, row_of = _polymonogenic_operator(n, d, N)
        ranks[d] = (op.rank, op.ncols)
        b = {}
        for e, c in u.homogeneous_part(d).terms.items():
            for mask, v in c.coeffs.items():
                b[row_of[("s", e, mask)]] = v
        if not b:
            continue
        x = op.solve(b)
        if x is None:
            raise PreconditionError(f"no decomposition in degree {d}")
        for (k, e, mask), v in zip(unknowns, x):
            if v:
                comps[k].setdefault(e, {})[mask] = v
    return Decomposition([MVPolynomial._raw(u.vars, t) for t in comps], ranks)


# -- star-like pipeline ----------------------------------------------------------------------

@dataclass
class StarlikeDecomposition:
    g: list
    u: list
    v: list
    certificates: dict = field(default_factory=dict)
    ranks: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.certificates.values())


def starlike_almansi(f: SliceFunction) -> StarlikeDecomposition:
    """``f = sum_k |x|^{2k} g_k`` with ``g_k = u_k - conj(x) v_k`` from the A/B split."""
    sig = f.sig
    ab = almansi_ab(f)
    m = ab.m
    U = classical_almansi(ab.A, m)
    V = classical_almansi(ab.B, m)
    xbar = x_conj_poly(sig, f.omit_x0)
    g = [uk - xbar * vk for uk, vk in zip(U, V)]
    norm2 = norm2_poly(sig, f.omit_x0)
    total = MVPolynomial.zero(f.ambient.vars)
    weight = MVPolynomial.constant(f.ambient.vars, 1)
    for gk in g:
        total = total + weight * gk
        weight = weight * norm2
    certs = dict(ab.certificates)
    certs["reconstruction_starlike"] = total == f.ambient
    certs["kernel_D_laplacian"] = all(dirac(laplacian(gk, sig), sig).is_zero() for gk in g)
    certs["symmetric_components"] = all(is_symmetric(P, sig) is not None for P in list(U) + list(V))
    certs["unique"] = U.unique and V.unique
    return StarlikeDecomposition(g, list(U), list(V), certs, {"A": U.ranks, "B": V.ranks})


# -- equivariance --------------------------------------------------------------------------------

def signed_permutation(P: MVPolynomial, sig: Signature, perm, signs) -> MVPolynomial:
    """``P(T x)`` where ``T`` sends x_{p+1+i} to signs[i] * x_{p+1+perm[i]} and fixes x_p."""
    q = sig.q
    if sorted(perm) != list(range(q)) or len(signs) != q or any(s not in (1, -1) for s in signs):
        raise ValueError("perm must permute range(q) and signs must be +-1")
    idx = [P.vars.index(f"x{sig.p + 1 + i}") for i in range(q)]

    def fn(e):
        ne = list(e)
        s = 1
        for i in range(q):
            ne[idx[perm[i]]] = e[idx[i]]
            if signs[i] < 0 and e[idx[i]] % 2:
                s = -s
        return tuple(ne), s

    return P.map_exponents(fn)


def classical_equivariance_check(u: MVPolynomial, N: int, sig: Signature, perm, signs) -> bool:
    """Decomposing ``u o T`` equals composing each component of the decomposition of ``u`` with ``T``."""
    direct = classical_almansi(u, N)
    moved = classical_almansi(signed_permutation(u, sig, perm, signs), N)
    return all(signed_permutation(a, sig, perm, signs) == b for a, b in zip(direct, moved))
