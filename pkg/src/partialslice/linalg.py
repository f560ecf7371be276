"""Exact sparse Gauss-Jordan elimination over the rationals."""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .clifford import Q


@dataclass
class LinearSystem:
    """Homogeneous (or inhomogeneous, with ``rhs``) rational system.

    Each row is a sparse ``{column_index: coefficient}`` dict over
    ``unknowns``.
    """

    unknowns: list
    rows: list = field(default_factory=list)
    rhs: list | None = None

    def __post_init__(self):
        self.rows = [{int(j): Q(v) for j, v in r.items() if v} for r in self.rows]

    def add_row(self, coeffs: dict, rhs=0) -> None:
        row = {int(j): Q(v) for j, v in coeffs.items() if v}
        self.rows.append(row)
        if rhs or self.rhs is not None:
            if self.rhs is None:
                self.rhs = [mpq(0)] * (len(self.rows) - 1)
            self.rhs.append(Q(rhs))

    @property
    def ncols(self) -> int:
        return len(self.unknowns)

    def residual(self, x) -> list:
        b = self.rhs or [0] * len(self.rows)
        return [sum((v * x[j] for j, v in row.items()), mpq(0)) - bi for row, bi in zip(self.rows, b)]


def rref(rows, ncols: int):
    """Reduce sparse rows in place-free fashion.

    Pivots are only taken in columns ``< ncols``; entries at larger indices
    (augmented columns) are carried along.  Returns ``(pivot_rows, pivots,
    leftover_rows)`` where ``pivot_rows[i]`` has a 1 at column ``pivots[i]``
    and zeros in every other pivot column, and ``leftover_rows`` have no
    entries below ``ncols``.
    """
    work = [dict(r) for r in rows if r]
    # column -> indices of live rows touching it
    pivot_rows: list = []
    pivots: list = []
    for col in range(ncols):
        best = None
        for i, r in enumerate(work):
            if col in r and (best is None or len(r) < len(work[best])):
                best = i
        if best is None:
            continue
        prow = work.pop(best)
        inv = mpq(1) / prow[col]
        if inv != 1:
            prow = {j: v * inv for j, v in prow.items()}
        for group in (work, pivot_rows):
            for r in group:
                f = r.get(col)
                if f is None:
                    continue
                for j, v in prow.items():
                    nv = r.get(j, 0) - f * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        pivot_rows.append(prow)
        pivots.append(col)
        work = [r for r in work if r]
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    return [pivot_rows[i] for i in order], [pivots[i] for i in order], work


def nullspace(S: LinearSystem) -> list:
    """Basis of ``{x : A x = 0}`` from the reduced row-echelon form.

    One vector per free column, in column order, with that free variable set
    to 1 and every other free variable 0.
    """
    n = S.ncols
    prow, pivots, _ = rref(S.rows, n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        x = [mpq(0)] * n
        x[free] = mpq(1)
        for r, pc in zip(prow, pivots):
            v = r.get(free)
            if v:
                x[pc] = -v
        basis.append(x)
    return basis


def rank(S: LinearSystem) -> int:
    return len(rref(S.rows, S.ncols)[1])


def solve(S: LinearSystem):
    """Particular solution (free variables 0) and rank; solution is None if inconsistent."""
    n = S.ncols
    b = S.rhs or [mpq(0)] * len(S.rows)
    aug = []
    for row, bi in zip(S.rows, b):
        r = dict(row)
        if bi:
            r[n] = Q(bi)
        aug.append(r)
    prow, pivots, left = rref(aug, n)
    if any(r for r in left):
        return None, len(pivots)
    x = [mpq(0)] * n
    for r, pc in zip(prow, pivots):
        x[pc] = r.get(n, mpq(0))
    return x, len(pivots)


class SolveOperator:
    """Factorization of a fixed matrix reused for many right-hand sides."""

    def __init__(self, S: LinearSystem):
        n = S.ncols
        self.ncols = n
        self.nrows = len(S.rows)
        aug = []
        for i, row in enumerate(S.rows):
            r = dict(row)
            r[n + i] = mpq(1)
            aug.append(r)
        prow, self.pivots, left = rref(aug, n)
        self.rank = len(self.pivots)
        self._maps = [{j - n: v for j, v in r.items() if j >= n} for r in prow]
        self._checks = [{j - n: v for j, v in r.items()} for r in left]

    @property
    def unique(self) -> bool:
        return self.rank == self.ncols

    def solve(self, b: dict):
        """``b`` maps row index to value (missing rows are 0); returns None if inconsistent."""
        for chk in self._checks:
            if sum((v * b[i] for i, v in chk.items() if i in b), mpq(0)):
                return None
        x = [mpq(0)] * self.ncols
        for m, pc in zip(self._maps, self.pivots):
            x[pc] = sum((v * b[i] for i, v in m.items() if i in b), mpq(0))
        return x
