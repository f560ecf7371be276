"""Generalized partial-slice regular (GSR) functions: bases, jets and identity checks.

Every solver here works on stems with coefficients in the subalgebra
R_p = span{e_A : A subset of {1..p}}.  The operators involved only
left-multiply by e_0..e_p (or by real scalars), and R_{p+q} is the direct sum
of the right translates R_p e_B over blades e_B of the x_q block, so the
full solution space is the span of ``g * e_B`` over the R_p solutions ``g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import prod

from gmpy2 import mpq

from .clifford import Multivector, Q, Signature
from .diffops import dirac, helmholtz_residual, laplacian, shifted_laplacian
from .errors import PreconditionError
from .linalg import LinearSystem, nullspace
from .mvpoly import MVPolynomial, _grlex_key, stem_vars, substitute_radial
from .slices import SliceFunction, StemPair, induce, rho_poly


@dataclass(frozen=True)
class GCRResidual:
    R1: MVPolynomial
    R2: MVPolynomial

    def is_zero(self) -> bool:
        return self.R1.is_zero() and self.R2.is_zero()

    def as_tuple(self) -> tuple:
        return self.R1, self.R2

    def first_nonzero(self):
        for name, R in (("R1", self.R1), ("R2", self.R2)):
            lt = R.leading_term()
            if lt is not None:
                return name, lt
        return None


def gcr_residual(stem: StemPair) -> GCRResidual:
    """``(D_{x_p} F1 - d_r F2, conj(D_{x_p}) F2 + d_r F1)``."""
    sig = stem.sig
    R1 = dirac(stem.F1, sig, "dirac_p") - stem.F2.diff("r")
    R2 = dirac(stem.F2, sig, "dirac_p_conj") + stem.F1.diff("r")
    return GCRResidual(R1, R2)


def is_gsr(stem: StemPair) -> bool:
    return stem.parity_violation() is None and gcr_residual(stem).is_zero()


def vekua_residual(stem: StemPair, lam) -> tuple:
    """``(D F1 - d_r F2 - lam F1, -D F2 + d_r F1 - lam F2)`` with ``D = sum_{i=1}^p e_i d_i``."""
    if not stem.omit_x0:
        raise PreconditionError("the Vekua-type system is posed for stems without x0")
    sig, lam = stem.sig, Q(lam)
    V1 = dirac(stem.F1, sig, "dirac_p") - stem.F2.diff("r") - stem.F1.scale(lam)
    V2 = stem.F1.diff("r") - dirac(stem.F2, sig, "dirac_p") - stem.F2.scale(lam)
    return V1, V2


# -- the shared solver --------------------------------------------------------

def _stem_monomials(sig: Signature, order: int, omit_x0: bool) -> list:
    nv = len(stem_vars(sig, omit_x0))
    exps = []
    for d in range(order + 1):
        for combo in combinations_with_replacement(range(nv), d):
            e = [0] * nv
            for i in combo:
                e[i] += 1
            exps.append(tuple(e))
    return sorted(exps, key=_grlex_key)


def _trial_unknowns(sig: Signature, order: int, omit_x0: bool) -> list:
    """(exponent, blade) pairs; the r-parity of the exponent picks F1 or F2."""
    return [(e, m) for e in _stem_monomials(sig, order, omit_x0) for m in range(1 << sig.p)]


def _unit_stem(sig, omit_x0, exp, mask) -> StemPair:
    vars = stem_vars(sig, omit_x0)
    mono = MVPolynomial._raw(vars, {exp: {mask: mpq(1)}})
    zero = MVPolynomial.zero(vars)
    if exp[-1] % 2 == 0:
        return StemPair(sig, mono, zero, omit_x0)
    return StemPair(sig, zero, mono, omit_x0)


def solve_stem_family(sig: Signature, order: int, residuals, max_row_degree: int, omit_x0: bool = False) -> list:
    """R_p-valued stems of degree <= ``order`` whose residual terms of degree <= ``max_row_degree`` vanish.

    ``residuals(stem)`` returns a tuple of polynomials, linear in the stem.
    Columns follow :func:`_trial_unknowns`; the returned stems follow the
    nullspace basis order.
    """
    unknowns = _trial_unknowns(sig, order, omit_x0)
    rows: dict = {}
    for j, (e, m) in enumerate(unknowns):
        for idx, R in enumerate(residuals(_unit_stem(sig, omit_x0, e, m))):
            for re_, c in R._t.items():
                if sum(re_) > max_row_degree:
                    continue
                for rm, v in c.items():
                    rows.setdefault((idx, re_, rm), {})[j] = v
    system = LinearSystem(unknowns, list(rows.values()))
    vars = stem_vars(sig, omit_x0)
    stems = []
    for vec in nullspace(system):
        t1: dict = {}
        t2: dict = {}
        for (e, m), v in zip(unknowns, vec):
            if v:
                (t1 if e[-1] % 2 == 0 else t2).setdefault(e, {})[m] = v
        stems.append(StemPair(sig, MVPolynomial._raw(vars, t1), MVPolynomial._raw(vars, t2), omit_x0))
    return stems


def q_blades(sig: Signature) -> list:
    """Blades e_B with B inside {p+1..p+q}, ascending."""
    return [Multivector.blade(b << sig.p) for b in range(1 << sig.q)]


def gsr_generators(sig: Signature, degree: int, omit_x0: bool = False) -> list:
    """R_p-valued GSR stems of degree <= ``degree`` (the right R_{p+q}-module generators)."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    return solve_stem_family(sig, degree, lambda s: gcr_residual(s).as_tuple(), degree, omit_x0)


def gsr_basis(sig: Signature, degree: int, omit_x0: bool = False) -> list:
    """Real basis of GSR stems of total degree <= ``degree``, induced to slice functions."""
    out = []
    for g in gsr_generators(sig, degree, omit_x0):
        f = induce(g)
        out.extend(f.rmul(b) for b in q_blades(sig))
    return out


# -- identities ------------------------------------------------------------------

def relation_check(f: SliceFunction) -> bool:
    """``D_x f == (1 - q) f_s'`` (exact; GSR input expected)."""
    sig = f.sig
    return dirac(f.ambient, sig) == f.spherical_derivative.scale(1 - sig.q)


def lemma_coefficient(q: int, k: int, part: str) -> int:
    """2^k (q-3)(q-5)...(q-2k-1) for the derivative, 2^k (q-1)(q-3)...(q-2k+1) for the value."""
    shift = 1 if part == "derivative" else -1
    return 2 ** k * prod(q - 2 * j - shift for j in range(1, k + 1))


def lemma_range(q: int, part: str) -> range:
    top = (q - 1) // 2 if part == "derivative" else (q + 1) // 2
    return range(1, top + 1)


def _t_derivative_radial(G: MVPolynomial, sig: Signature, k: int) -> MVPolynomial:
    return substitute_radial(G.diff("t", k), sig)


def laplacian_power_lemma_check(f, lam=0, sign: int = 1, k: int = 1, order: int | None = None) -> bool:
    """Check (Delta + sign lam^2)^k on the spherical derivative and value against the closed form.

    ``f`` is a SliceFunction or a parity-respecting StemPair.  With ``order``
    set, ``f`` is a jet of that order: the Helmholtz precondition and both
    identities are compared only in degrees <= order - 2 and
    <= order - 2k - 1 respectively.  Parts whose range excludes ``k`` are
    skipped; ``k`` outside both ranges is rejected.
    """
    if isinstance(f, StemPair):
        f = induce(f)
    sig = f.sig
    parts = [p for p in ("derivative", "value") if k in lemma_range(sig.q, p)]
    if not parts:
        raise ValueError(f"k = {k} outside the lemma's range for q = {sig.q}")

    def cut(P, deg):
        return P if order is None else P.truncate(deg)

    for R in helmholtz_residual(f.stem, lam, sign):
        if not cut(R, (order or 0) - 2).is_zero():
            raise PreconditionError("stems do not satisfy the Helmholtz/Klein-Gordon equation")
    ok = True
    for part in parts:
        fs, G = (f.spherical_derivative, f.G2) if part == "derivative" else (f.spherical_value, f.G1)
        lhs = shifted_laplacian(fs, sig, lam, sign, power=k)
        rhs = _t_derivative_radial(G, sig, k).scale(lemma_coefficient(sig.q, k, part))
        ok = ok and cut(lhs - rhs, (order or 0) - 2 * k - 1).is_zero()
    return ok


@dataclass
class SphericalReport:
    """Verdict per part; ``None`` marks a part that does not apply (even q for part v)."""

    parts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.parts.values())


def spherical_theorem_check(f: SliceFunction) -> SphericalReport:
    """Laplacians of the spherical value and derivative of a GSR function.

    (i)/(ii) the closed-form powers over the full k ranges, (iii) in the
    form r^2 Delta f_s' = (q-3)(D_{x_p} f_s° - f_s'), (iv) Delta f_s° =
    (1-q) conj(D_{x_p}) f_s', (v) Delta^((q+1)/2) f_s° = 0 for odd q.
    """
    sig = f.sig
    q = sig.q
    fd, fv = f.spherical_derivative, f.spherical_value
    rep = SphericalReport()

    for part, fs, G in (("i", fd, f.G2), ("ii", fv, f.G1)):
        kind = "derivative" if part == "i" else "value"
        ok = True
        cur = fs
        for k in lemma_range(q, kind):
            cur = laplacian(cur, sig)
            ok = ok and cur == _t_derivative_radial(G, sig, k).scale(lemma_coefficient(q, k, kind))
        rep.parts[part] = ok

    lap_fd = laplacian(fd, sig)
    lap_fv = laplacian(fv, sig)
    rep.parts["iii"] = rho_poly(sig, f.omit_x0) * lap_fd == (dirac(fv, sig, "dirac_p") - fd).scale(q - 3)
    rep.parts["iv"] = lap_fv == dirac(fd, sig, "dirac_p_conj").scale(1 - q)
    rep.parts["v"] = laplacian(fv, sig, (q + 1) // 2).is_zero() if q % 2 else None
    return rep


def double_factorial(n: int) -> int:
    return prod(range(n, 0, -2))


def fueter_sce(f: SliceFunction, check: bool = True) -> MVPolynomial:
    """``Delta^((q-1)/2) f / (q-1)!!``; with ``check`` the result must be monogenic."""
    sig = f.sig
    if sig.q % 2 == 0:
        raise ValueError(f"the Fueter-Sce map needs odd q, got q = {sig.q}")
    m = (sig.q - 1) // 2
    tau = laplacian(f.ambient, sig, m).scale(mpq(1, double_factorial(sig.q - 1)))
    if check and not dirac(tau, sig).is_zero():
        raise PreconditionError("Fueter-Sce image is not monogenic; is f regular?")
    return tau


def enhanced_fueter_sce_check(f: SliceFunction) -> dict:
    """``monogenic``: D Delta^m f = (1-q) Delta^m f_s' = 0; ``polyharmonic``: Delta^(m+1) f = 0."""
    sig = f.sig
    if sig.q % 2 == 0:
        raise ValueError(f"needs odd q, got q = {sig.q}")
    m = (sig.q - 1) // 2
    lap_m = laplacian(f.ambient, sig, m)
    d_lap = dirac(lap_m, sig)
    rhs = laplacian(f.spherical_derivative, sig, m).scale(1 - sig.q)
    return {
        "monogenic": d_lap.is_zero() and rhs.is_zero(),
        "polyharmonic": laplacian(lap_m, sig).is_zero(),
    }


# -- jets ----------------------------------------------------------------------------

@dataclass
class JetBasis:
    """Truncated formal solutions of the Helmholtz or Vekua-type system."""

    sig: Signature
    lam: object
    omit_x0: bool
    order: int
    elements: list
    kind: str = "vekua"
    sign: int = 1

    @property
    def valid_degree(self) -> int:
        """Highest degree in which the defining system holds exactly."""
        return self.order - (1 if self.kind == "vekua" else 2)

    def residuals(self, stem: StemPair) -> tuple:
        if self.kind == "vekua":
            return vekua_residual(stem, self.lam)
        return helmholtz_residual(stem, self.lam, self.sign)

    def satisfied(self, stem: StemPair) -> bool:
        return all(R.truncate(self.valid_degree).is_zero() for R in self.residuals(stem))

    def to_json(self) -> dict:
        out = {
            "p": self.sig.p,
            "q": self.sig.q,
            "kind": self.kind,
            "lambda": str(Q(self.lam)),
            "order": self.order,
            "omit_x0": self.omit_x0,
        }
        if self.kind != "vekua":
            out["sign"] = self.sign
        out["elements"] = [e.to_json() for e in self.elements]
        return out

    @classmethod
    def from_json(cls, data: dict) -> JetBasis:
        sig = Signature(int(data["p"]), int(data["q"]))
        return cls(
            sig,
            Q(data["lambda"]),
            bool(data["omit_x0"]),
            int(data["order"]),
            [StemPair.from_json(e) for e in data["elements"]],
            data.get("kind", "vekua"),
            int(data.get("sign", 1)),
        )


def _expand(sig, generators) -> list:
    return [g.rmul(b) for g in generators for b in q_blades(sig)]


def helmholtz_jet_basis(sig: Signature, lam, order: int, sign: int = 1, omit_x0: bool = False) -> JetBasis:
    """Stems with (Delta_stem + sign lam^2) F_j = 0 in every degree <= order - 2."""
    lam = Q(lam)
    gens = solve_stem_family(sig, order, lambda s: helmholtz_residual(s, lam, sign), order - 2, omit_x0)
    return JetBasis(sig, lam, omit_x0, order, _expand(sig, gens), "helmholtz", sign)


def vekua_jet_basis(p: int, q: int, lam, order: int) -> JetBasis:
    """Stems over (x1..xp, r) solving the Vekua-type system in every degree <= order - 1."""
    sig = Signature(p, q)
    lam = Q(lam)
    gens = solve_stem_family(sig, order, lambda s: vekua_residual(s, lam), order - 1, omit_x0=True)
    return JetBasis(sig, lam, True, order, _expand(sig, gens), "vekua")


def vekua_operator(P: MVPolynomial, sig: Signature, lam) -> MVPolynomial:
    """``(D_underline - lam)(Delta_underline + lam^2)^((q-1)/2) P``."""
    m = (sig.q - 1) // 2
    H = shifted_laplacian(P, sig, lam, power=m, base="underline")
    return dirac(H, sig, "dirac_underline") - H.scale(Q(lam))


def vekua_conclusion_check(jet: StemPair, lam, order: int) -> bool:
    """The Vekua conclusion on the induced ambient jet, in degrees <= order - q."""
    sig = jet.sig
    if sig.q % 2 == 0:
        raise PreconditionError(f"needs odd q, got q = {sig.q}")
    if order <= sig.q:
        raise ValueError(f"truncation too short: order {order} must exceed q = {sig.q}")
    f = induce(jet)
    return vekua_operator(f.ambient, sig, lam).truncate(order - sig.q).is_zero()
