"""Polynomials in named real variables with Multivector coefficients.

Terms are kept as ``{exponent_tuple: {blade_mask: mpq}}``; the inner dicts
are the raw coefficient form shared with :mod:`partialslice.clifford`.
Variables commute with everything, so only coefficient products are
order-sensitive.
"""

from __future__ import annotations

from functools import cache
from itertools import combinations_with_replacement
from math import factorial

from gmpy2 import mpq

from .clifford import (
    Multivector,
    Q,
    Signature,
    raw_add_into,
    raw_lmul_blade,
    raw_mul,
    raw_rmul_blade,
)


def _grlex_key(exp):
    return (sum(exp), tuple(-e for e in exp))


class MVPolynomial:
    __slots__ = ("_hash", "_t", "vars")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variable names in {self.vars}")
        t: dict = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != len(self.vars) or min(exp, default=0) < 0:
                    raise ValueError(f"bad exponent {exp} for vars {self.vars}")
                if not isinstance(coeff, Multivector):
                    coeff = Multivector.scalar(coeff)
                if coeff:
                    acc = t.setdefault(exp, {})
                    raw_add_into(acc, coeff._c)
                    if not acc:
                        del t[exp]
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, vars, t) -> MVPolynomial:
        obj = cls.__new__(cls)
        obj.vars = vars
        obj._t = t
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, vars) -> MVPolynomial:
        return cls._raw(tuple(vars), {})

    @classmethod
    def constant(cls, vars, value) -> MVPolynomial:
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): value})

    @classmethod
    def variable(cls, vars, name, coeff=1) -> MVPolynomial:
        vars = tuple(vars)
        exp = [0] * len(vars)
        exp[vars.index(name)] = 1
        return cls(vars, {tuple(exp): coeff})

    @classmethod
    def monomial(cls, vars, exp, coeff=1) -> MVPolynomial:
        return cls(vars, {tuple(exp): coeff})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return {e: Multivector._raw(dict(c)) for e, c in self._t.items()}

    def items(self):
        """Terms as ``(exponent, Multivector)`` pairs in graded-lex order."""
        for e in sorted(self._t, key=_grlex_key):
            yield e, Multivector._raw(dict(self._t[e]))

    def coefficient(self, exp) -> Multivector:
        return Multivector._raw(dict(self._t.get(tuple(exp), {})))

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self._t), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self._t), default=-1)

    def degree_in(self, name) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self._t), default=-1)

    def blades(self) -> set:
        out = set()
        for c in self._t.values():
            out.update(c)
        return out

    def is_scalar_valued(self) -> bool:
        return all(set(c) <= {0} for c in self._t.values())

    def leading_term(self):
        """First nonzero term in graded-lex order, or None."""
        for e, c in self.items():
            return e, c
        return None

    def __eq__(self, other):
        if isinstance(other, MVPolynomial):
            if self.vars == other.vars:
                return self._t == other._t
            return (self - other).is_zero()
        if isinstance(other, (int, mpq, Multivector)):
            return (self - MVPolynomial.constant(self.vars, other)).is_zero()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset((e, frozenset(c.items())) for e, c in self._t.items())))
        return self._hash

    # -- variable bookkeeping ----------------------------------------------

    def relabel(self, new_vars) -> MVPolynomial:
        """Re-express over ``new_vars``; every variable actually used must be present."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        index = {v: i for i, v in enumerate(new_vars)}
        used = [i for i, v in enumerate(self.vars) if any(e[i] for e in self._t)]
        for i in used:
            if self.vars[i] not in index:
                raise ValueError(f"variable {self.vars[i]!r} not in {new_vars}")
        slots = [(index[self.vars[i]], i) for i in used]
        t = {}
        for e, c in self._t.items():
            ne = [0] * len(new_vars)
            for j, i in slots:
                ne[j] = e[i]
            t[tuple(ne)] = dict(c)
        return MVPolynomial._raw(new_vars, t)

    def _aligned(self, other):
        if isinstance(other, MVPolynomial):
            if other.vars == self.vars:
                return other
            return other.relabel(self.vars)
        if isinstance(other, Multivector):
            return MVPolynomial.constant(self.vars, other)
        return MVPolynomial.constant(self.vars, Q(other))

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return MVPolynomial._raw(self.vars, {e: {m: -v for m, v in c.items()} for e, c in self._t.items()})

    def _combine(self, other, scale):
        other = self._aligned(other)
        t = {e: dict(c) for e, c in self._t.items()}
        for e, c in other._t.items():
            acc = t.setdefault(e, {})
            raw_add_into(acc, c, scale)
            if not acc:
                del t[e]
        return MVPolynomial._raw(self.vars, t)

    def __add__(self, other):
        return self._combine(other, 1)

    def __radd__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def scale(self, s) -> MVPolynomial:
        s = Q(s)
        if not s:
            return MVPolynomial.zero(self.vars)
        return MVPolynomial._raw(self.vars, {e: {m: v * s for m, v in c.items()} for e, c in self._t.items()})

    def lmul(self, a: Multivector) -> MVPolynomial:
        """``a * self`` for a constant multivector ``a``."""
        t = {}
        for e, c in self._t.items():
            v = raw_mul(a._c, c)
            if v:
                t[e] = v
        return MVPolynomial._raw(self.vars, t)

    def rmul(self, a: Multivector) -> MVPolynomial:
        """``self * a`` for a constant multivector ``a``."""
        t = {}
        for e, c in self._t.items():
            v = raw_mul(c, a._c)
            if v:
                t[e] = v
        return MVPolynomial._raw(self.vars, t)

    def lmul_blade(self, mask: int, scale=1) -> MVPolynomial:
        return MVPolynomial._raw(self.vars, {e: raw_lmul_blade(mask, c, scale) for e, c in self._t.items()})

    def rmul_blade(self, mask: int, scale=1) -> MVPolynomial:
        return MVPolynomial._raw(self.vars, {e: raw_rmul_blade(c, mask, scale) for e, c in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, MVPolynomial):
            other = self._aligned(other)
            t: dict = {}
            for e1, c1 in self._t.items():
                for e2, c2 in other._t.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    acc = t.setdefault(e, {})
                    raw_add_into(acc, raw_mul(c1, c2))
                    if not acc:
                        del t[e]
            return MVPolynomial._raw(self.vars, t)
        if isinstance(other, Multivector):
            return self.rmul(other)
        try:
            return self.scale(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Multivector):
            return self.lmul(other)
        try:
            return self.scale(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __pow__(self, k: int):
        out = MVPolynomial.constant(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> MVPolynomial:
        """Clifford conjugation of every coefficient (variables are real)."""
        return MVPolynomial._raw(
            self.vars, {e: Multivector._raw(c).conjugate()._c for e, c in self._t.items()}
        )

    # -- calculus and structure ---------------------------------------------

    def diff(self, name, times: int = 1) -> MVPolynomial:
        return partial_derivative(self, name, times)

    def homogeneous_parts(self) -> list:
        return homogeneous_parts(self)

    def homogeneous_part(self, k: int) -> MVPolynomial:
        return MVPolynomial._raw(self.vars, {e: dict(c) for e, c in self._t.items() if sum(e) == k})

    def truncate(self, max_degree: int) -> MVPolynomial:
        """Drop every term of total degree above ``max_degree``."""
        return MVPolynomial._raw(self.vars, {e: dict(c) for e, c in self._t.items() if sum(e) <= max_degree})

    def map_exponents(self, fn, new_vars=None) -> MVPolynomial:
        """Rebuild with ``fn(exp) -> (new_exp, scalar)``; ``None`` drops the term."""
        vars = self.vars if new_vars is None else tuple(new_vars)
        t: dict = {}
        for e, c in self._t.items():
            res = fn(e)
            if res is None:
                continue
            ne, s = res
            if not s:
                continue
            acc = t.setdefault(ne, {})
            raw_add_into(acc, c, s)
            if not acc:
                del t[ne]
        return MVPolynomial._raw(vars, t)

    def substitute(self, mapping: dict, new_vars) -> MVPolynomial:
        """Replace variables by real-valued polynomials over ``new_vars``.

        Unmapped variables must appear in ``new_vars``.  Substitutes must be
        scalar-valued so the result does not depend on factor order.
        """
        new_vars = tuple(new_vars)
        images = []
        for v in self.vars:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, MVPolynomial):
                    img = MVPolynomial.constant(new_vars, img)
                img = img.relabel(new_vars)
                if not img.is_scalar_valued():
                    raise ValueError(f"substitute for {v!r} must be scalar-valued")
            elif v in new_vars:
                img = MVPolynomial.variable(new_vars, v)
            else:
                img = None
            images.append(img)
        one = MVPolynomial.constant(new_vars, 1)
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = one if k == 0 else power(i, k - 1) * images[i]
            return powers[key]

        out = MVPolynomial.zero(new_vars)
        t: dict = {}
        for e, c in self._t.items():
            mono = one
            for i, k in enumerate(e):
                if k:
                    if images[i] is None:
                        raise ValueError(f"no image for variable {self.vars[i]!r}")
                    mono = mono * power(i, k)
            for me, mc in mono._t.items():
                acc = t.setdefault(me, {})
                raw_add_into(acc, c, mc[0])
                if not acc:
                    del t[me]
        out._t = t
        return out

    def evaluate(self, point) -> Multivector:
        return evaluate(self, point)

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [{"exp": list(e), "coeff": c.to_json()} for e, c in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> MVPolynomial:
        if not isinstance(data, dict) or "vars" not in data or "terms" not in data:
            raise ValueError("polynomial JSON needs 'vars' and 'terms'")
        terms: dict = {}
        vars = tuple(data["vars"])
        for term in data["terms"]:
            exp = tuple(term["exp"])
            if len(exp) != len(vars):
                raise ValueError(f"exponent {exp} does not match vars {vars}")
            mv = Multivector.from_json(term["coeff"])
            terms[exp] = terms.get(exp, Multivector()) + mv
        return cls(vars, terms)

    def __repr__(self):
        if not self._t:
            return "0"
        out = []
        for e, c in self.items():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            coeff = repr(c)
            if len(c) > 1:
                coeff = f"({coeff})"
            out.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(out)


def partial_derivative(P: MVPolynomial, name, times: int = 1) -> MVPolynomial:
    """Formal derivative in ``name``; a variable absent from ``P.vars`` is an error."""
    if name not in P.vars:
        raise KeyError(f"unknown variable {name!r}; polynomial vars are {P.vars}")
    i = P.vars.index(name)
    t = {}
    for e, c in P._t.items():
        k = e[i]
        if k < times:
            continue
        f = 1
        for j in range(times):
            f *= k - j
        ne = e[:i] + (k - times,) + e[i + 1:]
        t[ne] = {m: v * f for m, v in c.items()}
    return MVPolynomial._raw(P.vars, t)


def homogeneous_parts(P: MVPolynomial) -> list:
    """Nonzero homogeneous components in increasing degree."""
    by_deg: dict = {}
    for e, c in P._t.items():
        by_deg.setdefault(sum(e), {})[e] = dict(c)
    return [MVPolynomial._raw(P.vars, by_deg[d]) for d in sorted(by_deg)]


def evaluate(P: MVPolynomial, point) -> Multivector:
    if len(point) != len(P.vars):
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {len(P.vars)} vars")
    xs = [Q(v) for v in point]
    acc: dict = {}
    for e, c in P._t.items():
        s = mpq(1)
        for x, k in zip(xs, e):
            if k:
                s *= x ** k
        if s:
            raw_add_into(acc, c, s)
    return Multivector._raw(acc)


# -- variable naming ----------------------------------------------------------

def ambient_vars(sig: Signature, omit_x0: bool = False) -> tuple:
    start = 1 if omit_x0 else 0
    return tuple(f"x{i}" for i in range(start, sig.n + 1))


def stem_vars(sig: Signature, omit_x0: bool = False) -> tuple:
    start = 1 if omit_x0 else 0
    return tuple(f"x{i}" for i in range(start, sig.p + 1)) + ("r",)


def g_vars(sig: Signature, omit_x0: bool = False) -> tuple:
    start = 1 if omit_x0 else 0
    return tuple(f"x{i}" for i in range(start, sig.p + 1)) + ("t",)


@cache
def _radial_power(q: int, k: int) -> tuple:
    """Expansion of (y_1^2 + ... + y_q^2)^k as ((exp_tuple, coeff), ...)."""
    out = []
    for combo in combinations_with_replacement(range(q), k):
        beta = [0] * q
        for j in combo:
            beta[j] += 1
        coeff = factorial(k)
        for b in beta:
            coeff //= factorial(b)
        out.append((tuple(2 * b for b in beta), coeff))
    return tuple(out)


def substitute_radial(Q_: MVPolynomial, sig: Signature) -> MVPolynomial:
    """Replace ``t`` by ``x_{p+1}^2 + ... + x_{p+q}^2`` and expand.

    ``Q_`` lives over ``(x0..xp, t)`` (``x0`` may be absent); the result lives
    over the matching ambient variables.
    """
    if not Q_.vars or Q_.vars[-1] != "t":
        raise ValueError(f"expected G-form variables ending in 't', got {Q_.vars}")
    omit_x0 = "x0" not in Q_.vars
    if Q_.vars != g_vars(sig, omit_x0):
        Q_ = Q_.relabel(g_vars(sig, omit_x0))
    out_vars = ambient_vars(sig, omit_x0)
    t: dict = {}
    for e, c in Q_._t.items():
        head, k = e[:-1], e[-1]
        for qe, qc in _radial_power(sig.q, k):
            ne = head + qe
            acc = t.setdefault(ne, {})
            raw_add_into(acc, c, qc)
            if not acc:
                del t[ne]
    return MVPolynomial._raw(out_vars, t)
