"""Stars of subdivided edges in iterated barycentric subdivisions of a simplex.

In ``S^(N)Δ^n`` the top simplices containing a piece ``e'`` of an original edge
form a join ``e' ⋆ K`` with ``K`` isomorphic to ``S^(N)Δ^{n-2}``.  This module
builds both sides with exact points and produces the isomorphism explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import factorial

from .subdivision import bary, std_simplex


class EdgeStarError(ValueError):
    pass


@dataclass(frozen=True)
class SubdividedSimplex:
    """Top simplices of ``S^(N)Δ^n`` as frozensets of points.

    ``origin[p]`` is the face (a frozenset of level-``N-1`` points) whose
    barycenter created ``p``.
    """
    n: int
    N: int
    tops: tuple
    origin: dict = field(compare=False)


@lru_cache(maxsize=None)
def subdivided(n: int, N: int) -> SubdividedSimplex:
    if N == 0:
        pts = std_simplex(n)
        return SubdividedSimplex(n, 0, (frozenset(pts),), {p: frozenset({p}) for p in pts})
    prev = subdivided(n, N - 1)
    tops, origin = set(), {}
    for s in prev.tops:
        pts = sorted(s)
        for p in permutations(range(len(pts))):
            verts = []
            for i in range(len(pts)):
                face = frozenset(pts[j] for j in p[: i + 1])
                b = bary(face)
                origin.setdefault(b, face)
                verts.append(b)
            tops.add(frozenset(verts))
    return SubdividedSimplex(n, N, tuple(sorted(tops, key=sorted)), origin)


def original_subedges(N: int, n: int, edge: tuple = (0, 1)) -> list:
    """All edges of ``S^(N)Δ^n`` lying on the original edge ``edge``."""
    a, b = edge
    out = set()
    for s in subdivided(n, N).tops:
        on = [p for p in s if all(x == 0 for t, x in enumerate(p) if t not in (a, b))]
        for i in range(len(on)):
            for j in range(i + 1, len(on)):
                out.add(frozenset((on[i], on[j])))
    return sorted(out, key=sorted)


@dataclass
class EdgeStar:
    N: int
    n: int
    edge: frozenset
    star: list
    link: list
    vertex_map: dict
    simplex_map: dict
    defects: list

    @property
    def ok(self) -> bool:
        return not self.defects


def _original_edge(e: frozenset, n: int) -> tuple:
    supp = sorted({t for p in e for t, x in enumerate(p) if x != 0})
    if len(supp) != 2:
        raise EdgeStarError(f"{sorted(e)} is not a piece of an original edge of Δ^{n}")
    return tuple(supp)


def _link_and_map(N: int, n: int, e: frozenset):
    """Link of ``e`` in ``S^(N)Δ^n`` and the vertex map onto ``S^(N)Δ^{n-2}``."""
    level = subdivided(n, N)
    star = [s for s in level.tops if e <= s]
    if not star:
        raise EdgeStarError(f"{sorted(e)} is not an edge of S^{N}Δ^{n}")
    link = [s - e for s in star]
    if N == 0:
        a, b = _original_edge(e, n)
        rest = [i for i in range(n + 1) if i not in (a, b)]
        low = std_simplex(n - 2)
        phi = {}
        for i, idx in enumerate(rest):
            phi[std_simplex(n)[idx]] = low[i]
        return star, link, phi
    x, y = sorted(e)
    ox, oy = level.origin[x], level.origin[y]
    if len(ox) == 1 and len(oy) == 2 and ox <= oy:
        parent = oy
    elif len(oy) == 1 and len(ox) == 2 and oy <= ox:
        parent = ox
    else:
        raise EdgeStarError(f"{sorted(e)} is not a piece of an original edge")
    _, plink, pphi = _link_and_map(N - 1, n, parent)
    pfaces = plink
    phi = {}
    for v in {v for t in link for v in t}:
        C = level.origin[v]
        if not parent < C:
            raise EdgeStarError(f"link vertex {v} does not come from a face containing {sorted(parent)}")
        tau = C - parent
        if not any(tau <= t for t in pfaces):
            raise EdgeStarError(f"face {sorted(tau)} is not a face of the previous link")
        phi[v] = bary(pphi[u] for u in tau)
    return star, link, phi


def edge_star_decomposition(N: int, n: int, e_prime) -> EdgeStar:
    """Star of ``e_prime`` in ``S^(N)Δ^n`` with its isomorphism onto ``e' ⋆ S^(N)Δ^{n-2}``."""
    if n < 2:
        raise EdgeStarError("need n >= 2")
    e = frozenset(tuple(p) for p in e_prime)
    if len(e) != 2:
        raise EdgeStarError("an edge has two distinct endpoints")
    _original_edge(e, n)
    star, link, phi = _link_and_map(N, n, e)
    target = subdivided(n - 2, N)
    defects = []
    target_verts = {v for t in target.tops for v in t}
    link_verts = {v for t in link for v in t}
    for t in link:
        if len(t) != n - 1:
            defects.append(f"link simplex {sorted(t)} has {len(t)} vertices, expected {n - 1}")
    if set(phi) != link_verts:
        defects.append("vertex map is not defined on the whole link")
    if len(set(phi.values())) != len(phi):
        defects.append("vertex map is not injective")
    if set(phi.values()) != target_verts:
        defects.append("vertex map misses vertices of the target")
    simplex_map = {}
    for s, t in zip(star, link):
        simplex_map[s] = frozenset(phi.get(v) for v in t)
    images = set(simplex_map.values())
    if images != set(target.tops) or len(images) != len(star):
        defects.append("simplex map is not a bijection onto the target top simplices")
    if len(star) != factorial(n - 1) ** N:
        defects.append(f"star has {len(star)} simplices, expected {factorial(n - 1) ** N}")
    return EdgeStar(N, n, e, star, link, phi, simplex_map, defects)


__all__ = ["EdgeStar", "EdgeStarError", "SubdividedSimplex", "edge_star_decomposition", "original_subedges",
           "subdivided"]
