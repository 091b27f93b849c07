"""Exact rational simplex method with Bland's rule.

Problems are in equality form::

    minimize c.x  subject to  A x = b,  x >= 0

with ``A`` given as sparse rows (``{column: coefficient}``).  All arithmetic uses
:class:`fractions.Fraction`, so optimality and feasibility are decided exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

ZERO = Fraction(0)


class LPError(RuntimeError):
    pass


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    x: dict = field(default_factory=dict)
    pivots: int = 0


class Tableau:
    """Sparse simplex tableau kept in canonical form for the current basis."""

    def __init__(self, rows: list, rhs: list, basis: list, cost: Mapping[int, Fraction]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0
        self.set_objective(cost)

    def set_objective(self, cost: Mapping[int, Fraction]) -> None:
        self.cost = {j: Fraction(v) for j, v in cost.items() if v}
        red = dict(self.cost)
        val = ZERO
        for r, bj in enumerate(self.basis):
            cb = self.cost.get(bj, ZERO)
            if cb:
                val += cb * self.rhs[r]
                for j, a in self.rows[r].items():
                    v = red.get(j, ZERO) - cb * a
                    if v:
                        red[j] = v
                    else:
                        red.pop(j, None)
        for bj in self.basis:
            red.pop(bj, None)
        self.reduced = red
        self.value = val

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        piv = row[j]
        if piv != 1:
            inv = 1 / piv
            row = {c: a * inv for c, a in row.items()}
            self.rows[r] = row
            self.rhs[r] = self.rhs[r] * inv
        b = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(j)
            if f is None:
                continue
            for c, a in row.items():
                v = other.get(c, ZERO) - f * a
                if v:
                    other[c] = v
                else:
                    other.pop(c, None)
            self.rhs[i] -= f * b
        f = self.reduced.get(j)
        if f is not None:
            for c, a in row.items():
                v = self.reduced.get(c, ZERO) - f * a
                if v:
                    self.reduced[c] = v
                else:
                    self.reduced.pop(c, None)
            self.value += f * b
        self.basis[r] = j
        self.pivots += 1

    def run(self, allowed=None, max_pivots: int | None = None) -> str:
        """Pivot to optimality with Bland's rule; ``allowed`` filters entering columns."""
        while True:
            enter = None
            for j, d in self.reduced.items():
                if d < 0 and (allowed is None or allowed(j)) and (enter is None or j < enter):
                    enter = j
            if enter is None:
                return "optimal"
            best, leave = None, None
            for r, row in enumerate(self.rows):
                a = row.get(enter)
                if a is not None and a > 0:
                    ratio = self.rhs[r] / a
                    if best is None or ratio < best or (ratio == best and self.basis[r] < self.basis[leave]):
                        best, leave = ratio, r
            if leave is None:
                return "unbounded"
            self.pivot(leave, enter)
            if max_pivots is not None and self.pivots > max_pivots:
                raise LPError(f"pivot limit {max_pivots} exceeded")

    def solution(self) -> dict:
        return {bj: self.rhs[r] for r, bj in enumerate(self.basis) if self.rhs[r]}


def linprog_exact(c: Sequence | Mapping, rows: Sequence[Mapping], b: Sequence, basis: Sequence[int] | None = None,
                  max_pivots: int | None = None) -> LPResult:
    """Solve ``min c.x, A x = b, x >= 0`` exactly.

    If ``basis`` is given, column ``basis[r]`` must be a unit vector in row
    ``r`` with ``b[r] >= 0``; phase one is then skipped.
    """
    cost = dict(c) if isinstance(c, Mapping) else {j: v for j, v in enumerate(c)}
    cost = {j: Fraction(v) for j, v in cost.items()}
    A = [{j: Fraction(a) for j, a in row.items() if a} for row in rows]
    rhs = [Fraction(x) for x in b]
    if basis is not None:
        for r, bj in enumerate(basis):
            if rhs[r] < 0 or A[r].get(bj) != 1 or any(A[i].get(bj) for i in range(len(A)) if i != r):
                raise LPError(f"column {bj} does not give a feasible unit basis in row {r}")
        T = Tableau(A, rhs, list(basis), cost)
        status = T.run(max_pivots=max_pivots)
        if status == "unbounded":
            return LPResult("unbounded", pivots=T.pivots)
        return LPResult("optimal", T.value, T.solution(), T.pivots)

    for r in range(len(A)):
        if rhs[r] < 0:
            A[r] = {j: -a for j, a in A[r].items()}
            rhs[r] = -rhs[r]
    ncols = 1 + max([j for row in A for j in row] + list(cost) + [-1])
    art = list(range(ncols, ncols + len(A)))
    for r, row in enumerate(A):
        row[art[r]] = Fraction(1)
    T = Tableau(A, rhs, list(art), {a: 1 for a in art})
    T.run(max_pivots=max_pivots)
    if T.value != 0:
        return LPResult("infeasible", pivots=T.pivots)
    artset = set(art)
    keep = []
    for r in range(len(T.rows)):
        if T.basis[r] in artset:
            j = min((j for j in T.rows[r] if j not in artset), default=None)
            if j is None:
                continue  # redundant row
            T.pivot(r, j)
        keep.append(r)
    T.rows = [{j: a for j, a in T.rows[r].items() if j not in artset} for r in keep]
    T.rhs = [T.rhs[r] for r in keep]
    T.basis = [T.basis[r] for r in keep]
    T.set_objective(cost)
    status = T.run(allowed=lambda j: j not in artset, max_pivots=max_pivots)
    if status == "unbounded":
        return LPResult("unbounded", pivots=T.pivots)
    return LPResult("optimal", T.value, T.solution(), T.pivots)


def feasible_point(rows: Sequence[Mapping], b: Sequence) -> dict | None:
    """Some ``x >= 0`` with ``A x = b``, or ``None``."""
    res = linprog_exact({}, rows, b)
    return res.x if res.status == "optimal" else None


def in_convex_hull(point: Sequence, vertices: Sequence[Sequence]) -> bool:
    """Exact test whether ``point`` is a convex combination of ``vertices``."""
    dim = len(point)
    rows = [{j: Fraction(v[t]) for j, v in enumerate(vertices)} for t in range(dim)]
    rows.append({j: Fraction(1) for j in range(len(vertices))})
    return feasible_point(rows, [Fraction(x) for x in point] + [Fraction(1)]) is not None


__all__ = ["LPError", "LPResult", "Tableau", "feasible_point", "in_convex_hull", "linprog_exact"]
