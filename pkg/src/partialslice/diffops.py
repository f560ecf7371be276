"""Differential operators on MVPolynomials.

Every operator is described by an :class:`OperatorSpec` and applied with
:func:`apply`.  Dirac-type operators multiply the generator ``e_i`` onto the
coefficients from the left (default) or the right.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clifford import Q, Signature
from .errors import VariableMismatch
from .mvpoly import MVPolynomial, ambient_vars, stem_vars
from .slices import SliceFunction, StemPair, UnitVector, rho_poly, xq_poly

KINDS = (
    "dirac_p",
    "dirac_p_conj",
    "dirac_ambient",
    "dirac_ambient_conj",
    "dirac_underline",
    "laplacian_p",
    "laplacian_stem",
    "laplacian_ambient",
    "laplacian_underline",
    "d_r",
    "euler_radial",
    "shifted_laplacian",
)

_FIRST_ORDER = {"dirac_p", "dirac_p_conj", "dirac_ambient", "dirac_ambient_conj", "dirac_underline"}


@dataclass(frozen=True)
class OperatorSpec:
    """``kind`` applied ``power`` times.

    ``shifted_laplacian`` is ``Delta + sign * lam^2`` where ``base`` picks the
    Laplacian (``"ambient"``, ``"stem"`` or ``"underline"``).
    """

    kind: str
    side: str = "left"
    power: int = 1
    lam: object = None
    sign: int = 1
    base: str = "ambient"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if self.power < 1:
            raise ValueError("power must be a positive integer")
        if (self.lam is not None) != (self.kind == "shifted_laplacian"):
            raise ValueError("lam is required for, and only for, shifted_laplacian")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.lam is not None:
            object.__setattr__(self, "lam", Q(self.lam))


def _domain(kind: str, sig: Signature, base: str):
    stem = set(stem_vars(sig))
    amb = set(ambient_vars(sig))
    if kind in ("laplacian_stem", "d_r") or (kind == "shifted_laplacian" and base == "stem"):
        return stem
    if kind in ("dirac_ambient", "dirac_ambient_conj", "dirac_underline", "laplacian_ambient", "laplacian_underline") or (
        kind == "shifted_laplacian"
    ):
        return amb
    return stem | amb


def _check_domain(P: MVPolynomial, kind: str, sig: Signature, base: str) -> None:
    allowed = _domain(kind, sig, base)
    extra = [v for v in P.vars if v not in allowed]
    if extra:
        raise VariableMismatch(f"{kind} cannot act on variables {extra} for (p, q) = ({sig.p}, {sig.q})")


def _dirac_parts(kind: str, sig: Signature):
    """(variable, blade index, sign) triples for a first-order operator."""
    if kind in ("dirac_p", "dirac_p_conj"):
        hi = sig.p
    else:
        hi = sig.n
    lo = 1 if kind == "dirac_underline" else 0
    s = -1 if kind.endswith("_conj") else 1
    return [(f"x{i}", i, 1 if i == 0 else s) for i in range(lo, hi + 1)]


def _first_order(P: MVPolynomial, parts, side: str) -> MVPolynomial:
    out = MVPolynomial.zero(P.vars)
    for var, i, s in parts:
        if var not in P.vars:
            continue
        d = P.diff(var)
        if d.is_zero():
            continue
        if i == 0:
            out = out + (d if s > 0 else -d)
        else:
            mask = 1 << (i - 1)
            out = out + (d.lmul_blade(mask, s) if side == "left" else d.rmul_blade(mask, s))
    return out


def _laplacian(P: MVPolynomial, names) -> MVPolynomial:
    out = MVPolynomial.zero(P.vars)
    for v in names:
        if v in P.vars:
            out = out + P.diff(v, 2)
    return out


def _lap_vars(which: str, sig: Signature):
    if which == "p":
        return [f"x{i}" for i in range(sig.p + 1)]
    if which == "stem":
        return [f"x{i}" for i in range(sig.p + 1)] + ["r"]
    if which == "underline":
        return [f"x{i}" for i in range(1, sig.n + 1)]
    return [f"x{i}" for i in range(sig.n + 1)]


def _apply_once(op: OperatorSpec, P: MVPolynomial, sig: Signature) -> MVPolynomial:
    k = op.kind
    if k in _FIRST_ORDER:
        return _first_order(P, _dirac_parts(k, sig), op.side)
    if k == "laplacian_p":
        return _laplacian(P, _lap_vars("p", sig))
    if k == "laplacian_stem":
        return _laplacian(P, _lap_vars("stem", sig))
    if k == "laplacian_ambient":
        return _laplacian(P, _lap_vars("ambient", sig))
    if k == "laplacian_underline":
        return _laplacian(P, _lap_vars("underline", sig))
    if k == "shifted_laplacian":
        return _laplacian(P, _lap_vars(op.base, sig)) + P.scale(op.sign * op.lam * op.lam)
    if k == "d_r":
        return P.diff("r") if "r" in P.vars else MVPolynomial.zero(P.vars)
    if k == "euler_radial":
        if "r" in P.vars:
            idx = [P.vars.index("r")]
        else:
            idx = [P.vars.index(f"x{i}") for i in range(sig.p + 1, sig.n + 1) if f"x{i}" in P.vars]
        return P.map_exponents(lambda e: (e, sum(e[i] for i in idx)))
    raise AssertionError(k)


def apply(op: OperatorSpec, P: MVPolynomial, sig: Signature) -> MVPolynomial:
    """Apply ``op`` to ``P``.

    Variables of the operator's domain that ``P`` does not carry are treated
    as ones ``P`` does not depend on; variables outside the domain raise
    :class:`VariableMismatch`.
    """
    _check_domain(P, op.kind, sig, op.base)
    for _ in range(op.power):
        P = _apply_once(op, P, sig)
    return P


# shorthands used throughout the package

def dirac(P, sig, kind="dirac_ambient", side="left", power=1):
    return apply(OperatorSpec(kind, side=side, power=power), P, sig)


def laplacian(P, sig, power=1, base="ambient"):
    if power == 0:
        return P
    return apply(OperatorSpec(f"laplacian_{base}", power=power), P, sig)


def shifted_laplacian(P, sig, lam, sign=1, power=1, base="ambient"):
    if power == 0:
        return P
    if not Q(lam):
        return laplacian(P, sig, power, base)
    return apply(OperatorSpec("shifted_laplacian", power=power, lam=lam, sign=sign, base=base), P, sig)


def euler_radial(P, sig):
    return apply(OperatorSpec("euler_radial"), P, sig)


# -- checks ----------------------------------------------------------------------

def hyperbolic_check(f: SliceFunction) -> tuple:
    """Whether (r^2 Delta - (q-1) r d_r) kills F1 and maps omega F2 to -(q-1) omega F2.

    ``F1`` and ``omega F2`` are taken in ambient form (spherical value and
    ``x_q * f_s'``), so ``r^2`` is ``|x_q|^2`` and ``r d_r`` is the Euler
    operator in the ``x_q`` block.
    """
    sig = f.sig
    q1 = sig.q - 1
    rho = rho_poly(sig, f.omit_x0)

    def hyp(P):
        return rho * laplacian(P, sig) - euler_radial(P, sig).scale(q1)

    F1 = f.spherical_value
    wF2 = xq_poly(sig, f.omit_x0) * f.spherical_derivative
    return hyp(F1).is_zero(), (hyp(wF2) + wF2.scale(q1)).is_zero()


def gsm_restriction_residual(stem: StemPair, omega: UnitVector) -> MVPolynomial:
    """``(D_{x_p} + omega d_r)(F1 + omega F2)`` over ``(x_p, r)`` with ``omega`` fixed."""
    sig = stem.sig
    w = omega.multivector(sig)
    g = stem.F1 + stem.F2.lmul(w)
    return dirac(g, sig, "dirac_p") + g.diff("r").lmul(w)


def helmholtz_residual(stem: StemPair, lam=0, sign=1) -> tuple:
    sig = stem.sig
    return tuple(shifted_laplacian(F, sig, lam, sign, base="stem") for F in (stem.F1, stem.F2))

