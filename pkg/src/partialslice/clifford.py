"""Exact arithmetic in the real Clifford algebra R_n with e_i e_j + e_j e_i = -2 delta_ij.

Blades are stored as integer bitmasks: bit ``i - 1`` set means generator
``e_i`` is a factor.  The empty mask is the scalar unit ``e_0 = 1``.
Coefficients are ``gmpy2.mpq`` rationals, always reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

MAX_GENERATORS = 16


def Q(value) -> mpq:
    """Coerce ints, Fractions, mpq or ``"num/den"`` strings to a reduced rational."""
    if isinstance(value, str):
        value = value.strip()
    return mpq(value)


@dataclass(frozen=True)
class Signature:
    """Type (p, q) splitting of n = p + q generators."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0:
            raise ValueError(f"p must be nonnegative, got {self.p}")
        if self.q < 1:
            raise ValueError(f"q must be positive, got {self.q}")
        if self.p + self.q > MAX_GENERATORS:
            raise ValueError(f"p + q must be <= {MAX_GENERATORS}, got {self.p + self.q}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        return 1 << self.n

    def valid_mask(self, mask: int) -> bool:
        return 0 <= mask < self.dim

    def check(self, a: Multivector) -> None:
        for mask in a.coeffs:
            if not self.valid_mask(mask):
                raise ValueError(f"blade {mask:#x} outside R_{self.n}")


@lru_cache(maxsize=1 << 16)
def blade_product(a: int, b: int) -> tuple[int, int]:
    """Return ``(sign, a ^ b)`` with ``sign * e_(a^b) == e_a * e_b``.

    The sign counts the transpositions needed to merge the two ordered
    generator lists plus one factor -1 per generator shared by both blades.
    """
    swaps = 0
    x = a >> 1
    while x:
        swaps += (x & b).bit_count()
        x >>= 1
    swaps += (a & b).bit_count()
    return (-1 if swaps & 1 else 1), a ^ b


def blade_product_oracle(a: int, b: int) -> tuple[int, int]:
    """Brute-force generator-by-generator reordering (O(k^2)); used to validate ``blade_product``."""
    word = [i for i in range(MAX_GENERATORS + 1) if a >> i & 1]
    word += [i for i in range(MAX_GENERATORS + 1) if b >> i & 1]
    sign = 1
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            if word[k] > word[k + 1]:
                word[k], word[k + 1] = word[k + 1], word[k]
                sign = -sign
                changed = True
                break
            if word[k] == word[k + 1]:
                del word[k:k + 2]
                sign = -sign
                changed = True
                break
    mask = 0
    for i in word:
        mask |= 1 << i
    return sign, mask


def conj_sign(mask: int) -> int:
    """Sign of Clifford conjugation on a grade-k blade: (-1)^(k(k+1)/2)."""
    k = mask.bit_count()
    return -1 if (k * (k + 1) // 2) & 1 else 1


# raw coefficient dicts {mask: mpq}; shared with mvpoly for speed

def raw_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            s, m = blade_product(ma, mb)
            v = out.get(m, 0) + (ca * cb if s > 0 else -(ca * cb))
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def raw_add_into(acc: dict, a: dict, scale=1) -> None:
    for m, c in a.items():
        v = acc.get(m, 0) + c * scale
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def raw_lmul_blade(mask: int, a: dict, scale=1) -> dict:
    """``scale * e_mask * a``."""
    out = {}
    for m, c in a.items():
        s, r = blade_product(mask, m)
        out[r] = c * scale if s > 0 else -(c * scale)
    return out


def raw_rmul_blade(a: dict, mask: int, scale=1) -> dict:
    """``scale * a * e_mask``."""
    out = {}
    for m, c in a.items():
        s, r = blade_product(m, mask)
        out[r] = c * scale if s > 0 else -(c * scale)
    return out


class Multivector:
    """Immutable element of R_n: ``sum_A a_A e_A`` with rational ``a_A``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for m, v in coeffs.items():
                m = int(m)
                if m < 0 or m >= 1 << MAX_GENERATORS:
                    raise ValueError(f"invalid blade mask {m}")
                v = Q(v)
                if v:
                    c[m] = c.get(m, 0) + v
                    if not c[m]:
                        del c[m]
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> Multivector:
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def scalar(cls, value) -> Multivector:
        return cls({0: value})

    @classmethod
    def blade(cls, mask: int, value=1) -> Multivector:
        return cls({mask: value})

    @classmethod
    def generator(cls, i: int, value=1) -> Multivector:
        """``value * e_i``; ``i = 0`` is the scalar unit."""
        return cls({0 if i == 0 else 1 << (i - 1): value})

    @classmethod
    def vector(cls, components, offset: int = 0) -> Multivector:
        """``sum_k components[k] e_(offset + k + 1)``."""
        return cls({1 << (offset + k): v for k, v in enumerate(components)})

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    def __getitem__(self, mask: int):
        return self._c.get(mask, mpq(0))

    def __iter__(self):
        return iter(sorted(self._c.items()))

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def scalar_part(self) -> mpq:
        return self._c.get(0, mpq(0))

    def grade(self, k: int) -> Multivector:
        return Multivector._raw({m: c for m, c in self._c.items() if m.bit_count() == k})

    def max_mask(self) -> int:
        return max(self._c, default=0)

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self._c == other._c
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self._c == ({0: Q(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __neg__(self):
        return Multivector._raw({m: -c for m, c in self._c.items()})

    def __add__(self, other):
        other = _as_mv(other)
        if other is None:
            return NotImplemented
        out = dict(self._c)
        raw_add_into(out, other._c)
        return Multivector._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_mv(other)
        if other is None:
            return NotImplemented
        out = dict(self._c)
        raw_add_into(out, other._c, -1)
        return Multivector._raw(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return Multivector._raw(raw_mul(self._c, other._c))
        try:
            s = Q(other)
        except (TypeError, ValueError):
            return NotImplemented
        if not s:
            return Multivector._raw({})
        return Multivector._raw({m: c * s for m, c in self._c.items()})

    def __rmul__(self, other):
        # scalars commute
        return self.__mul__(other)

    def __truediv__(self, other):
        s = Q(other)
        return Multivector._raw({m: c / s for m, c in self._c.items()})

    def conjugate(self) -> Multivector:
        return Multivector._raw({m: c if conj_sign(m) > 0 else -c for m, c in self._c.items()})

    def norm_squared(self) -> mpq:
        return sum((c * c for c in self._c.values()), mpq(0))

    def to_json(self) -> dict:
        return {f"{m:#x}": str(c) for m, c in sorted(self._c.items())}

    @classmethod
    def from_json(cls, data: dict) -> Multivector:
        if not isinstance(data, dict):
            raise ValueError("multivector JSON must be an object")  # noqa: TRY004
        return cls({int(k, 16): Q(v) for k, v in data.items()})

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for m, c in sorted(self._c.items()):
            if m == 0:
                parts.append(str(c))
            else:
                name = "e" + "".join(str(i + 1) for i in range(MAX_GENERATORS) if m >> i & 1)
                parts.append(f"{c}*{name}")
        return " + ".join(parts)


def _as_mv(x):
    if isinstance(x, Multivector):
        return x
    try:
        return Multivector.scalar(x)
    except (TypeError, ValueError):
        return None


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def conjugate(a: Multivector) -> Multivector:
    return a.conjugate()


def norm_squared(a: Multivector) -> mpq:
    return a.norm_squared()
