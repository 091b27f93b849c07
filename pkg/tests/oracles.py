"""Independent reference computations used to cross-check the library."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy


def cellular_coefficients(c) -> dict:
    out: dict = {}
    for s, a in c.items():
        out[s.carrier] = out.get(s.carrier, Fraction(0)) + a
    return {k: v for k, v in out.items() if v}


def _rat(x) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def is_boundary(K, z: dict, k: int, relative: str | None = None) -> bool:
    """Rank test: is ``z`` in the span of ``∂C_{k+1}`` plus chains on the relative mark?"""
    rows = sorted(K.cells_of_dim(k))
    idx = {c: i for i, c in enumerate(rows)}
    cols = []
    for t in sorted(K.cells_of_dim(k + 1)):
        col = [0] * len(rows)
        for i, f in enumerate(K.cells[t].faces):
            col[idx[f]] += (-1) ** i
        cols.append(col)
    if relative:
        for c in sorted(K.mark(relative)):
            if c in idx:
                col = [0] * len(rows)
                col[idx[c]] = 1
                cols.append(col)
    target = [_rat(z.get(c, 0)) for c in rows]
    if not cols:
        return not any(target)
    A = sympy.Matrix(len(rows), len(cols), lambda i, j: cols[j][i])
    return A.rank() == A.row_join(sympy.Matrix(target)).rank()


def brute_geodesic(adj: dict, a, b) -> list:
    """Path between ``a`` and ``b`` by depth-first search (unique in a tree)."""
    stack = [(a, [a])]
    while stack:
        v, path = stack.pop()
        if v == b:
            return path
        for u in adj[v]:
            if u not in path:
                stack.append((u, path + [u]))
    raise ValueError("disconnected")


def common_vertices(adj: dict, verts) -> set:
    common = None
    for x, y in combinations(verts, 2):
        p = set(brute_geodesic(adj, x, y))
        common = p if common is None else common & p
    return common


def box_two_point_norm(d: int, L: int) -> Fraction:
    """``|mu * (δ_0 - δ_d)|_1`` for the uniform box ``[0, L)`` by direct counting."""
    vals: dict = {}
    for g in range(L):
        vals[g] = vals.get(g, 0) + Fraction(1, L)
        vals[g + d] = vals.get(g + d, 0) - Fraction(1, L)
    return sum(abs(v) for v in vals.values())
