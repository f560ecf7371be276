"""Stem pairs, induced slice functions and their spherical value/derivative."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations

from gmpy2 import mpq

from .clifford import Multivector, Q, Signature
from .errors import ParityError
from .mvpoly import (
    MVPolynomial,
    ambient_vars,
    g_vars,
    stem_vars,
    substitute_radial,
)


@dataclass(frozen=True)
class UnitVector:
    """Rational point on the unit sphere of R^q."""

    components: tuple

    def __post_init__(self):
        comps = tuple(Q(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if sum(c * c for c in comps) != 1:
            raise ValueError(f"{comps} is not a unit vector")

    def __neg__(self):
        return UnitVector(tuple(-c for c in self.components))

    def multivector(self, sig: Signature) -> Multivector:
        if len(self.components) != sig.q:
            raise ValueError(f"unit vector has {len(self.components)} components, q = {sig.q}")
        return Multivector.vector(self.components, offset=sig.p)


_PYTHAGOREAN = [
    (1,),
    (mpq(3, 5), mpq(4, 5)),
    (mpq(5, 13), mpq(12, 13)),
    (mpq(2, 3), mpq(2, 3), mpq(1, 3)),
    (mpq(2, 7), mpq(3, 7), mpq(6, 7)),
    (mpq(1, 2), mpq(1, 2), mpq(1, 2), mpq(1, 2)),
]


def sphere_points(q: int, per_tuple: int = 3) -> list:
    """Deterministic list of exact rational unit vectors in R^q.

    Pythagorean tuples padded with zeros to length q, a few permutations of
    each, plus a sign-flipped copy.
    """
    pts = []
    for base in _PYTHAGOREAN:
        if len(base) > q:
            continue
        padded = tuple(base) + (0,) * (q - len(base))
        for perm in sorted(set(permutations(padded)), reverse=True)[:per_tuple]:
            for cand in (perm, _flip_last_nonzero(perm)):
                u = UnitVector(cand)
                if u not in pts:
                    pts.append(u)
    return pts


def _flip_last_nonzero(comps):
    comps = list(comps)
    for i in reversed(range(len(comps))):
        if comps[i]:
            comps[i] = -comps[i]
            break
    return tuple(comps)


def sphere_pairs(q: int, count: int = 3) -> list:
    """First ``count`` distinct (omega, eta) pairs, ordered by index offset then index."""
    pts = sphere_points(q)
    n = len(pts)
    pairs = [(pts[i], pts[(i + s) % n]) for s in range(1, n + 1) for i in range(n)]
    return pairs[:count]


# -- distinguished ambient polynomials ------------------------------------------

def rho_poly(sig: Signature, omit_x0: bool = False) -> MVPolynomial:
    """|x_q|^2 = x_{p+1}^2 + ... + x_{p+q}^2."""
    vars = ambient_vars(sig, omit_x0)
    return MVPolynomial(vars, {tuple(2 if v == f"x{i}" else 0 for v in vars): 1 for i in range(sig.p + 1, sig.n + 1)})


def norm2_poly(sig: Signature, omit_x0: bool = False) -> MVPolynomial:
    """|x|^2 over every ambient coordinate."""
    vars = ambient_vars(sig, omit_x0)
    return MVPolynomial(vars, {tuple(2 if j == i else 0 for j in range(len(vars))): 1 for i in range(len(vars))})


def xq_poly(sig: Signature, omit_x0: bool = False) -> MVPolynomial:
    """The 1-vector x_q = sum_{i>p} x_i e_i."""
    vars = ambient_vars(sig, omit_x0)
    return sum(
        (MVPolynomial.variable(vars, f"x{i}", Multivector.generator(i)) for i in range(sig.p + 1, sig.n + 1)),
        MVPolynomial.zero(vars),
    )


def xp_conj_poly(sig: Signature, vars) -> MVPolynomial:
    """Conjugate paravector x0 - sum_{i=1}^p x_i e_i over ``vars``."""
    out = MVPolynomial.zero(vars)
    if "x0" in vars:
        out = out + MVPolynomial.variable(vars, "x0")
    for i in range(1, sig.p + 1):
        out = out + MVPolynomial.variable(vars, f"x{i}", Multivector.generator(i, -1))
    return out


def x_conj_poly(sig: Signature, omit_x0: bool = False) -> MVPolynomial:
    """Full conjugate paravector x0 - sum_{i=1}^n x_i e_i."""
    vars = ambient_vars(sig, omit_x0)
    return xp_conj_poly(sig, vars) - xq_poly(sig, omit_x0)


def paravector_poly(sig: Signature, omit_x0: bool = False) -> MVPolynomial:
    return x_conj_poly(sig, omit_x0).conjugate()


# -- stems ------------------------------------------------------------------------

@dataclass(frozen=True)
class StemPair:
    """``(F1, F2)`` over ``(x0..xp, r)``; F1 should be even in r, F2 odd.

    Construction does not enforce parity so residual operators can report on
    arbitrary pairs; :func:`induce` does.
    """

    sig: Signature
    F1: MVPolynomial
    F2: MVPolynomial
    omit_x0: bool = False

    def __post_init__(self):
        vars = stem_vars(self.sig, self.omit_x0)
        object.__setattr__(self, "F1", self.F1.relabel(vars))
        object.__setattr__(self, "F2", self.F2.relabel(vars))

    @property
    def vars(self) -> tuple:
        return self.F1.vars

    @property
    def degree(self) -> int:
        return max(self.F1.degree, self.F2.degree)

    def parity_violation(self):
        """``("F1"|"F2", exponent, coefficient)`` of the first offending term, else None."""
        for name, P, want in (("F1", self.F1, 0), ("F2", self.F2, 1)):
            for e, c in P.items():
                if e[-1] % 2 != want:
                    return name, e, c
        return None

    def check_parity(self) -> None:
        bad = self.parity_violation()
        if bad is not None:
            name, e, c = bad
            kind = "even" if name == "F1" else "odd"
            raise ParityError(f"{name} must be {kind} in r; offending term {c} at exponent {e}")

    def rmul(self, a: Multivector) -> StemPair:
        return StemPair(self.sig, self.F1.rmul(a), self.F2.rmul(a), self.omit_x0)

    def __add__(self, other: StemPair) -> StemPair:
        return StemPair(self.sig, self.F1 + other.F1, self.F2 + other.F2, self.omit_x0)

    def scale(self, s) -> StemPair:
        return StemPair(self.sig, self.F1.scale(s), self.F2.scale(s), self.omit_x0)

    def truncate(self, max_degree: int) -> StemPair:
        return StemPair(self.sig, self.F1.truncate(max_degree), self.F2.truncate(max_degree), self.omit_x0)

    def is_zero(self) -> bool:
        return self.F1.is_zero() and self.F2.is_zero()

    def to_json(self) -> dict:
        out = {"p": self.sig.p, "q": self.sig.q, "F1": self.F1.to_json(), "F2": self.F2.to_json()}
        if self.omit_x0:
            out["omit_x0"] = True
        return out

    @classmethod
    def from_json(cls, data: dict) -> StemPair:
        if not isinstance(data, dict):
            raise ValueError("stem pair JSON must be an object")  # noqa: TRY004
        try:
            sig = Signature(int(data["p"]), int(data["q"]))
            F1 = MVPolynomial.from_json(data["F1"])
            F2 = MVPolynomial.from_json(data["F2"])
        except KeyError as exc:
            raise ValueError(f"stem pair JSON missing {exc}") from None
        omit = bool(data.get("omit_x0", False))
        return cls(sig, F1, F2, omit)


@dataclass(frozen=True, eq=False)
class SliceFunction:
    """Slice function induced by a stem pair, with its ambient and G forms."""

    stem: StemPair
    ambient: MVPolynomial
    G1: MVPolynomial
    G2: MVPolynomial

    @property
    def sig(self) -> Signature:
        return self.stem.sig

    @property
    def omit_x0(self) -> bool:
        return self.stem.omit_x0

    @cached_property
    def spherical_value(self) -> MVPolynomial:
        return substitute_radial(self.G1, self.sig)

    @cached_property
    def spherical_derivative(self) -> MVPolynomial:
        return substitute_radial(self.G2, self.sig)

    def rmul(self, a: Multivector) -> SliceFunction:
        """Right multiplication by a constant; commutes with induction."""
        return SliceFunction(self.stem.rmul(a), self.ambient.rmul(a), self.G1.rmul(a), self.G2.rmul(a))

    def __eq__(self, other):
        if not isinstance(other, SliceFunction):
            return NotImplemented
        return self.sig == other.sig and self.ambient == other.ambient and self.stem.F1 == other.stem.F1 and self.stem.F2 == other.stem.F2

    __hash__ = None

    def to_json(self) -> dict:
        """Stem JSON plus the induced ambient polynomial (ignored when reading back)."""
        out = self.stem.to_json()
        out["ambient"] = self.ambient.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> SliceFunction:
        return induce(StemPair.from_json(data))

    def __repr__(self):
        return f"SliceFunction(p={self.sig.p}, q={self.sig.q}, f={self.ambient!r})"


def induce(stem: StemPair) -> SliceFunction:
    """Build ``f = F1 + omega F2`` as an ambient polynomial via ``(G1, G2)``."""
    stem.check_parity()
    sig, omit = stem.sig, stem.omit_x0
    gv = g_vars(sig, omit)
    G1 = stem.F1.map_exponents(lambda e: (e[:-1] + (e[-1] // 2,), 1), gv)
    G2 = stem.F2.map_exponents(lambda e: (e[:-1] + (e[-1] // 2,), 1), gv)
    ambient = substitute_radial(G1, sig) + xq_poly(sig, omit) * substitute_radial(G2, sig)
    return SliceFunction(stem, ambient, G1, G2)


def spherical_value(f: SliceFunction) -> MVPolynomial:
    return f.spherical_value


def spherical_derivative(f: SliceFunction) -> MVPolynomial:
    return f.spherical_derivative


def stem_form(G: MVPolynomial, sig: Signature) -> MVPolynomial:
    """``G(x_p, t) -> G(x_p, r^2)`` over the stem variables."""
    omit = "x0" not in G.vars
    G = G.relabel(g_vars(sig, omit))
    return G.map_exponents(lambda e: (e[:-1] + (2 * e[-1],), 1), stem_vars(sig, omit))


def is_symmetric(P: MVPolynomial, sig: Signature):
    """Return ``G`` with ``substitute_radial(G) == P`` if P depends only on (x_p, |x_q|^2), else None.

    The coefficient of t^k is pinned by the x_{p+1}^{2k} term; every other
    term must then agree with the expansion of that candidate.
    """
    omit = "x0" not in P.vars
    avars = ambient_vars(sig, omit)
    try:
        P = P.relabel(avars)
    except ValueError:
        return None
    np_ = len(avars) - sig.q
    terms: dict = {}
    for e, c in P.terms.items():
        head, tail = e[:np_], e[np_:]
        if any(tail[1:]) or tail[0] % 2:
            continue
        terms[head + (tail[0] // 2,)] = c
    G = MVPolynomial(g_vars(sig, omit), terms)
    if substitute_radial(G, sig) != P:
        return None
    return G


def stem_from_ambient(P: MVPolynomial, sig: Signature, eta: UnitVector | None = None) -> StemPair:
    """Recover ``(F1, F2)`` from an ambient slice function by restricting to the slice through ``eta``.

    ``f(x_p + r eta) = F1 + eta F2``; the even part in r is F1 and
    ``F2 = -eta * (odd part)``.
    """
    if eta is None:
        eta = UnitVector((1,) + (0,) * (sig.q - 1))
    omit = "x0" not in P.vars
    svars = stem_vars(sig, omit)
    P = P.relabel(ambient_vars(sig, omit))
    r = MVPolynomial.variable(svars, "r")
    mapping = {f"x{sig.p + 1 + k}": r.scale(c) for k, c in enumerate(eta.components)}
    restricted = P.substitute(mapping, svars)
    even = restricted.map_exponents(lambda e: (e, 1) if e[-1] % 2 == 0 else None)
    odd = restricted - even
    F2 = odd.lmul(-eta.multivector(sig))
    return StemPair(sig, even, F2, omit)


def representation_formula_check(f: SliceFunction, xp, r, omega: UnitVector, eta: UnitVector) -> bool:
    """Exact check of f(x_p + r w) = (f(x_p + r h) + f(x_p - r h))/2 + w h (f(x_p - r h) - f(x_p + r h))/2."""
    sig = f.sig
    xp = [Q(v) for v in xp]
    r = Q(r)
    nxp = sig.p if f.omit_x0 else sig.p + 1
    if len(xp) != nxp:
        raise ValueError(f"expected {nxp} paravector coordinates, got {len(xp)}")

    def at(u):
        return f.ambient.evaluate(xp + [r * c for c in u.components])

    w, h = omega.multivector(sig), eta.multivector(sig)
    plus, minus = at(eta), at(-eta)
    rhs = (plus + minus) * mpq(1, 2) + (w * h) * (minus - plus) * mpq(1, 2)
    return at(omega) == rhs
