"""Gluing complexes and cycles along marked subcomplexes, tree geodesics, and the
glue / subdivide / antisymmetrize / diffuse pipeline with its norm ledger."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .chains import (
    AffineSimplex, Chain, ZERO, alt, boundary, cellular, has_edge_in, l1_norm, norm_e, norm_ne, push_cells,
    simplex_in,
)
from .complex import Cell, ComplexError, DeltaComplex, rational_json, simplicial
from .diffusion import diffuse_chain, edge_swap_action
from .lp import linprog_exact
from .seminorm import ClassSpec, fundamental_cycle, l1_seminorm
from .subdivision import barycentric_defects, local_barycentric


class GluingError(ValueError):
    def __init__(self, message: str, residual: Chain | None = None):
        self.residual = residual
        super().__init__(message)


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception | str):
        self.stage = stage
        super().__init__(f"stage {stage}: {cause}")


@dataclass
class GluingMap:
    """Face-compatible bijection from the cells of ``K1.mark(source)`` onto ``K2.mark(target)``."""
    K1: DeltaComplex
    source: str
    K2: DeltaComplex
    target: str
    cells: Mapping[str, str]

    def __post_init__(self):
        self.cells = {str(a): str(b) for a, b in dict(self.cells).items()}
        Z1, Z2 = self.K1.mark(self.source), self.K2.mark(self.target)
        if set(self.cells) != set(Z1):
            raise GluingError(f"gluing map must be defined exactly on {self.source}")
        if set(self.cells.values()) != set(Z2) or len(set(self.cells.values())) != len(self.cells):
            raise GluingError(f"gluing map must be a bijection onto {self.target}")
        for a, b in self.cells.items():
            if self.K1.cell_dim(a) != self.K2.cell_dim(b):
                raise GluingError(f"{a} and {b} have different dimensions")
            fa = [self.cells[x] for x in self.K1.cells[a].faces]
            if fa != list(self.K2.cells[b].faces):
                raise GluingError(f"gluing map does not commute with the faces of {a}")

    @classmethod
    def identity(cls, K1, source, K2, target) -> "GluingMap":
        return cls(K1, source, K2, target, {c: c for c in K1.mark(source)})

    def to_json(self) -> dict:
        return {"source_mark": self.source, "target_mark": self.target,
                "cells": [[a, b] for a, b in sorted(self.cells.items())]}

    @classmethod
    def from_json(cls, K1, K2, data: Mapping) -> "GluingMap":
        try:
            return cls(K1, data.get("source_mark", "Z"), K2, data.get("target_mark", "Z"),
                       {a: b for a, b in data["cells"]})
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GluingError):
                raise
            raise GluingError(f"malformed gluing JSON: {exc}") from None


class GluedComplex(DeltaComplex):
    """Pushout of two complexes along a gluing map, with both inclusions."""

    def __init__(self, f: GluingMap):
        inv = {b: a for a, b in f.cells.items()}
        inc1 = {c: f"1:{c}" for c in f.K1.cells}
        inc2 = {c: (f"1:{inv[c]}" if c in inv else f"2:{c}") for c in f.K2.cells}
        cells = [Cell(inc1[c.id], c.dim, tuple(inc1[x] for x in c.faces)) for c in f.K1.cells.values()]
        cells += [Cell(inc2[c.id], c.dim, tuple(inc2[x] for x in c.faces))
                  for c in f.K2.cells.values() if c.id not in inv]
        Z = {inc1[c] for c in f.K1.mark(f.source)}
        rest = [inc1[c] for c in f.K1.marks.get("Y", ()) if c not in f.K1.mark(f.source)]
        rest += [inc2[c] for c in f.K2.marks.get("Y", ()) if c not in f.K2.mark(f.target)]
        super().__init__(cells, {"Z": Z}, validate=True)
        self.marks["Y"] = self.closure(rest)
        self.validate()
        self.gluing = f
        self.incl1 = inc1
        self.incl2 = inc2

    def push1(self, c: Chain) -> Chain:
        return push_cells(c, self.incl1, self)

    def push2(self, c: Chain) -> Chain:
        return push_cells(c, self.incl2, self)


def glue_complexes(K1: DeltaComplex, K2: DeltaComplex, f: GluingMap) -> GluedComplex:
    if f.K1 is not K1 or f.K2 is not K2:
        raise GluingError("gluing map refers to other complexes")
    return GluedComplex(f)


def restrict_to(c: Chain, mark: str) -> Chain:
    return c.restrict(lambda s: simplex_in(s, mark))


def gluing_target(G: GluedComplex, c1: Chain, c2: Chain) -> Chain:
    """``push1((∂c1)|Z1) + push2((∂c2)|Z2)``, the boundary ``d`` must have."""
    f = G.gluing
    return G.push1(restrict_to(boundary(c1), f.source)) + G.push2(restrict_to(boundary(c2), f.target))


def glue_cycles(G: GluedComplex, c1: Chain, c2: Chain, d: Chain | None = None) -> Chain:
    """``c3 = c1 + c2 - d`` on the glued complex; ``d`` lives on ``K1`` (in Z1) or on ``G`` (in Z)."""
    if d is None:
        d = Chain(c1.degree)
    elif d and d.complex is G.gluing.K1:
        if any(not simplex_in(s, G.gluing.source) for s in d):
            raise GluingError("d must be supported in the gluing region")
        d = G.push1(d)
    if d and any(not simplex_in(s, "Z") for s in d):
        raise GluingError("d must be supported in the gluing region")
    target = gluing_target(G, c1, c2)
    residual = boundary(d) - target
    if residual:
        raise GluingError(f"∂d misses the glued boundary by {len(residual)} terms", residual)
    c3 = G.push1(c1) + G.push2(c2) - d
    if c3.degree > 0 and any(not simplex_in(s, "Y") for s in boundary(c3)):
        raise GluingError("glued chain has boundary off the remaining boundary mark", boundary(c3))
    return c3


def solve_filling(G: DeltaComplex, target: Chain, mark: str = "Z") -> Chain:
    """A cellular chain ``d`` in ``mark`` with ``∂d = target`` and least ``l1`` norm."""
    k = target.degree + 1
    cells = sorted(c for c in G.cells_of_dim(k) if c in G.mark(mark))
    for s in target:
        if s != AffineSimplex.cell(G, s.carrier):
            raise GluingError("filling target must be cellular")
    faces = sorted({f for c in cells for f in G.cells[c].faces} | {s.carrier for s in target})
    rows_idx = {f: r for r, f in enumerate(faces)}
    rows = [dict() for _ in faces]
    for j, c in enumerate(cells):
        for i, f in enumerate(G.cells[c].faces):
            sg = 1 if i % 2 == 0 else -1
            for col, coef in ((2 * j, sg), (2 * j + 1, -sg)):
                rows[rows_idx[f]][col] = rows[rows_idx[f]].get(col, 0) + coef
    b = [ZERO] * len(faces)
    for s, a in target.items():
        b[rows_idx[s.carrier]] += a
    res = linprog_exact({j: 1 for j in range(2 * len(cells))}, rows, b)
    if res.status != "optimal":
        raise GluingError("no chain in the gluing region has the required boundary", target)
    coeffs = {c: res.x.get(2 * j, ZERO) - res.x.get(2 * j + 1, ZERO) for j, c in enumerate(cells)}
    coeffs = {c: v for c, v in coeffs.items() if v}
    return cellular(G, coeffs) if coeffs else Chain(k)


# connected sums


def _embedded_faces(K: DeltaComplex, t: str) -> dict:
    n = K.cell_dim(t)
    faces = {}
    for r in range(1, n + 1):
        for S in combinations(range(n + 1), r):
            faces[S] = K.face_of(t, S)
    if len(set(faces.values())) != len(faces):
        raise ComplexError(f"top cell {t} is not embedded; its boundary is not a sphere")
    return faces


def connected_sum(K1: DeltaComplex, K2: DeltaComplex, t1: str | None = None, t2: str | None = None,
                  matching: Mapping[str, str] | None = None) -> GluedComplex:
    """Remove a top cell from each side and glue the exposed boundary spheres.

    By default faces are matched vertex by vertex; ``matching`` overrides this
    with an explicit cell map from the faces of ``t1`` onto those of ``t2``.
    """
    n = K1.dim
    if n < 2 or K2.dim != n:
        raise ComplexError("connected sum needs two complexes of the same dimension >= 2")
    for K in (K1, K2):
        fundamental_cycle(K, n)
    t1 = t1 or sorted(K1.cells_of_dim(n))[0]
    t2 = t2 or sorted(K2.cells_of_dim(n))[0]
    f1, f2 = _embedded_faces(K1, t1), _embedded_faces(K2, t2)
    L1 = DeltaComplex([c for c in K1.cells.values() if c.id != t1], {"Z": set(f1.values())})
    L2 = DeltaComplex([c for c in K2.cells.values() if c.id != t2], {"Z": set(f2.values())})
    f = GluingMap(L1, "Z", L2, "Z", matching if matching is not None else {f1[S]: f2[S] for S in f1})
    G = GluedComplex(f)
    G.marks.pop("Y", None)
    fundamental_cycle(G, n)
    return G


# trees


@dataclass
class SimplicialTree:
    vertices: list
    edges: list
    adjacency: dict = field(init=False)

    def __post_init__(self):
        self.vertices = list(self.vertices)
        self.adjacency = {v: [] for v in self.vertices}
        for a, b in self.edges:
            if a not in self.adjacency or b not in self.adjacency or a == b:
                raise ValueError(f"bad tree edge {(a, b)}")
            self.adjacency[a].append(b)
            self.adjacency[b].append(a)
        if len(self.edges) != len(self.vertices) - 1:
            raise ValueError("a tree on n vertices has n-1 edges")
        if self.vertices and len(self._parents(self.vertices[0])) != len(self.vertices):
            raise ValueError("tree is not connected")
        self._cache: dict = {}

    def _parents(self, root) -> dict:
        par = {root: None}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if u not in par:
                    par[u] = v
                    queue.append(u)
        return par

    def geodesic(self, a, b) -> list:
        par = self._cache.get(a)
        if par is None:
            par = self._cache[a] = self._parents(a)
        path = [b]
        while path[-1] != a:
            path.append(par[path[-1]])
        return path[::-1]


@dataclass(frozen=True)
class TreeSimplex:
    tree: SimplicialTree
    vertices: tuple

    @property
    def k(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list:
        return [self.tree.geodesic(a, b) for a, b in combinations(self.vertices, 2)]


def tree_common_vertex(s: TreeSimplex):
    """The vertex lying on every edge geodesic of ``s``, or ``None``."""
    if s.k < 2:
        raise ValueError("needs a simplex of dimension >= 2")
    T = s.tree
    a, b, c = s.vertices[:3]
    on = set(T.geodesic(a, b)) & set(T.geodesic(b, c)) & set(T.geodesic(a, c))
    assert len(on) == 1, "three geodesics in a tree meet in exactly one vertex"
    m = next(iter(on))
    for x, y in combinations(s.vertices, 2):
        if m not in T.geodesic(x, y):
            return None
    return m


# pipeline


def _num(x: Fraction) -> dict:
    return {"exact": rational_json(x), "decimal": f"{float(x):.12g}"}


def _stage(name: str, c: Chain, mark: str) -> dict:
    return {"name": name, "l1": _num(l1_norm(c)), "eZ": _num(norm_e(c, mark)), "neZ": _num(norm_ne(c, mark))}


def subadditivity_pipeline(K1, K2, f: GluingMap, c1: Chain, c2: Chain, d: Chain | None = None, action=None,
                           eps=Fraction(1, 100), orient: bool = False):
    """Glue, subdivide near Z, antisymmetrize and diffuse; returns ``(chain, report)``.

    The report lists ``|.|_1``, ``|.|^{e(Z)}`` and ``|.|^{ne(Z)}`` after every
    stage, the per-stage inequalities and ``bound_ok`` for
    ``|c|_1 <= |c1|_1 + |c2|_1 + eps``.
    """
    eps = Fraction(eps)
    try:
        G = glue_complexes(K1, K2, f)
        if orient and d is None and gluing_target(G, c1, c2) and not gluing_target(G, c1, -c2):
            c2 = -c2
        if d is None:
            target = gluing_target(G, c1, c2)
            d = solve_filling(G, target) if target else None
        c3 = glue_cycles(G, c1, c2, d)
    except (GluingError, ComplexError) as exc:
        raise PipelineError("glue", exc) from exc
    mark = "Z"
    bad = {s: barycentric_defects(s, mark) for s in c3}
    bad = {s: v for s, v in bad.items() if v}
    if bad:
        s, v = next(iter(bad.items()))
        raise PipelineError("local_barycentric", f"{s!r} is not Z-barycentrically non-degenerate: {v[0]}")
    sz = local_barycentric(c3, mark)
    an = alt(sz)
    action = action or edge_swap_action(mark)
    try:
        final = diffuse_chain(an, action, eps, mark)
    except Exception as exc:
        raise PipelineError("diffuse", exc) from exc
    stages = [_stage("glue", c3, mark), _stage("local_barycentric", sz, mark), _stage("alt", an, mark),
              _stage("diffuse", final, mark)]
    checks = [
        ("|S_Z c|^ne <= |c|^ne", norm_ne(sz, mark), norm_ne(c3, mark)),
        ("|Alt c|_1 <= |c|_1", l1_norm(an), l1_norm(sz)),
        ("|Alt c|^ne <= |c|^ne", norm_ne(an, mark), norm_ne(sz, mark)),
        ("|mu*c|_1 <= |c|^ne + eps", l1_norm(final), norm_ne(an, mark) + eps),
        ("|c|_1 <= |c1|_1 + |c2|_1 + eps", l1_norm(final), l1_norm(c1) + l1_norm(c2) + eps),
    ]
    report = {
        "stages": stages,
        "checks": [{"name": n, "lhs": _num(a), "rhs": _num(b), "holds": a <= b} for n, a, b in checks],
        "eps": _num(eps),
        "inputs": {"c1": _num(l1_norm(c1)), "c2": _num(l1_norm(c2)), "d": _num(l1_norm(d) if d else ZERO)},
        "bound_ok": all(a <= b for _, a, b in checks),
        "relative_cycle": final.degree == 0 or all(simplex_in(s, "Y") for s in boundary(final)),
    }
    return final, report


def annulus(m: int = 3, prefix: str = "", marks: str = "inner") -> DeltaComplex:
    """Triangulated annulus with circles ``a0..`` (inner) and ``b0..`` (outer).

    ``Y`` holds both circles and ``Z`` the inner one.
    """
    if m < 3:
        raise ValueError("need at least 3 vertices per circle")
    a = [f"{prefix}a{i}" for i in range(m)]
    b = [f"{prefix}b{i}" for i in range(m)]
    tris = []
    for i in range(m):
        j = (i + 1) % m
        tris += [(a[i], a[j], b[i]), (a[j], b[i], b[j])]
    inner = [(a[i], a[(i + 1) % m]) for i in range(m)]
    outer = [(b[i], b[(i + 1) % m]) for i in range(m)]
    return simplicial(tris, {"Y": inner + outer, "Z": inner})


def two_annuli_toy(m: int = 3):
    """Two annuli glued along their inner circles, with relative fundamental cycles."""
    K1, K2 = annulus(m), annulus(m)
    f = GluingMap.identity(K1, "Z", K2, "Z")
    c1 = fundamental_cycle(K1, 2, "Y")
    c2 = fundamental_cycle(K2, 2, "Y")
    G = GluedComplex(f)
    if gluing_target(G, c1, c2):
        c2 = -c2
    return K1, K2, f, c1, c2


def fixed_complex_seminorm(K: DeltaComplex) -> Fraction:
    z = fundamental_cycle(K)
    return l1_seminorm(ClassSpec(K, K.dim, z)).value


__all__ = [
    "GluedComplex", "GluingError", "GluingMap", "PipelineError", "SimplicialTree", "TreeSimplex", "annulus",
    "connected_sum", "fixed_complex_seminorm", "glue_complexes", "glue_cycles", "gluing_target", "has_edge_in",
    "restrict_to", "solve_filling", "subadditivity_pipeline", "tree_common_vertex", "two_annuli_toy",
]
