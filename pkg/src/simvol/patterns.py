"""Combinatorial Z-patterns on a simplex and the rainbow count on its barycentric subdivision.

A pattern records which vertices of ``Δ^k`` lie in Z, which edges lie in Z and,
for every face spanned by Z-vertices, which vertices of that face its barycenter
is joined to inside Z.  Vertices of ``SΔ^k`` are coloured by the path component
of Z they land in; a simplex of ``SΔ^k`` has no edge in Z exactly when its
vertices carry pairwise distinct colours.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterator, Mapping

from .chains import AffineSimplex, edge_in, z_vertices
from .subdivision import _point_cell, _segment_cell, standard_subdivision


class PatternError(ValueError):
    """The pattern violates a consistency axiom."""


def _faces(verts, min_size=2):
    verts = sorted(verts)
    return [frozenset(F) for r in range(min_size, len(verts) + 1) for F in combinations(verts, r)]


@dataclass(frozen=True)
class ZPattern:
    k: int
    z_vertices: frozenset
    z_edges: frozenset
    barycenter_colors: Mapping

    def __post_init__(self):
        object.__setattr__(self, "z_vertices", frozenset(self.z_vertices))
        object.__setattr__(self, "z_edges", frozenset(frozenset(e) for e in self.z_edges))
        object.__setattr__(self, "barycenter_colors",
                           {frozenset(F): frozenset(c) for F, c in dict(self.barycenter_colors).items()})
        object.__setattr__(self, "_classes", None)
        self.validate()

    def __hash__(self):
        return hash((self.k, self.z_vertices, self.z_edges, frozenset(self.barycenter_colors.items())))

    def classes(self) -> list:
        """Colour classes of Z-vertices: components of the Z-edge graph."""
        if self._classes is not None:
            return self._classes
        parent = {v: v for v in self.z_vertices}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for e in self.z_edges:
            a, b = sorted(e)
            parent[find(a)] = find(b)
        groups: dict = {}
        for v in sorted(self.z_vertices):
            groups.setdefault(find(v), set()).add(v)
        out = sorted((frozenset(g) for g in groups.values()), key=min)
        object.__setattr__(self, "_classes", out)
        return out

    def validate(self) -> None:
        allv = set(range(self.k + 1))
        if not self.z_vertices <= allv:
            raise PatternError(f"z_vertices {sorted(self.z_vertices)} not in 0..{self.k}")
        for e in self.z_edges:
            if len(e) != 2 or not e <= self.z_vertices:
                raise PatternError(f"Z-edge {sorted(e)} must join two Z-vertices")
        cls = self.classes()
        for C in cls:
            for e in combinations(sorted(C), 2):
                if frozenset(e) not in self.z_edges:
                    raise PatternError(f"vertices {e} are joined through Z but their edge is not in Z")
        faces = _faces(self.z_vertices)
        for F, cols in self.barycenter_colors.items():
            if F not in faces:
                raise PatternError(f"barycenter colours given for {sorted(F)}, which is not a Z-face")
        for F in faces:
            cols = self.barycenter_colors.get(F)
            if not cols:
                raise PatternError(f"barycenter of {sorted(F)} has no Z-edge to its face")
            home = [C for C in cls if cols <= C]
            if len(home) != 1:
                raise PatternError(f"barycenter of {sorted(F)} is joined to several components")
            if cols != F & home[0]:
                raise PatternError(f"barycenter of {sorted(F)} must be joined to all of {sorted(F & home[0])}")

    def colour(self, face: frozenset) -> int:
        """Component index of the barycenter of ``face`` (a vertex if ``|face| = 1``)."""
        cls = self.classes()
        probe = next(iter(face)) if len(face) == 1 else next(iter(self.barycenter_colors[face]))
        for idx, C in enumerate(cls):
            if probe in C:
                return idx
        raise PatternError(f"face {sorted(face)} is not coloured")

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "z_vertices": sorted(self.z_vertices),
            "z_edges": sorted(sorted(e) for e in self.z_edges),
            "barycenter_colors": [{"face": sorted(F), "colors": sorted(c)}
                                  for F, c in sorted(self.barycenter_colors.items(), key=lambda t: (len(t[0]), sorted(t[0])))],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ZPattern":
        try:
            return cls(int(data["k"]), data["z_vertices"], [tuple(e) for e in data["z_edges"]],
                       {frozenset(d["face"]): frozenset(d["colors"]) for d in data["barycenter_colors"]})
        except (KeyError, TypeError) as exc:
            raise PatternError(f"malformed pattern JSON: {exc}") from None

    @classmethod
    def from_simplex(cls, s: AffineSimplex, mark: str) -> "ZPattern":
        """Read the pattern of an affine simplex off the membership tests."""
        Z = s.complex.mark(mark)
        V = z_vertices(s, mark)
        edges = [(i, j) for i, j in combinations(sorted(V), 2) if edge_in(s, i, j, mark)]
        colours = {}
        for F in _faces(V):
            b = s.barycenter(sorted(F))
            if _point_cell(s, b) in Z:
                colours[F] = frozenset(i for i in F if _segment_cell(s, b, s.coords[i]) in Z)
            else:
                colours[F] = frozenset()
        return cls(s.dim, V, edges, colours)


def _flags(k: int) -> list:
    """Flags of faces of ``Δ^k`` as lists of frozensets, one per permutation."""
    return [[frozenset(p[: i + 1]) for i in range(k + 1)] for p in permutations(range(k + 1))]


def count_noedge_subdivided(pattern: ZPattern) -> int:
    """Number of simplices of ``SΔ^k`` whose ``k+1`` vertices have distinct colours."""
    if pattern.z_vertices != frozenset(range(pattern.k + 1)):
        raise PatternError("counting needs every vertex in Z")
    col = {F: pattern.colour(F) for F in _faces(range(pattern.k + 1), 1)}
    return sum(1 for fl in _flags(pattern.k) if len({col[F] for F in fl}) == pattern.k + 1)


def count_by_subdivision(pattern: ZPattern) -> int:
    """The same count, read off the explicit subdivided simplices of ``SΔ^k``."""
    k = pattern.k
    total = 0
    for pts, _ in standard_subdivision(k):
        faces = [frozenset(t for t, x in enumerate(p) if x != 0) for p in pts]
        if len({pattern.colour(F) for F in faces}) == k + 1:
            total += 1
    return total


def set_partitions(items: list) -> Iterator[list]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _make(k: int, classes: list, choice: Mapping) -> ZPattern:
    edges = [e for C in classes for e in combinations(sorted(C), 2)]
    return ZPattern(k, range(k + 1), edges, {F: F & choice[F] for F in choice})


def all_patterns(k: int, classes: list | None = None) -> Iterator[ZPattern]:
    """Every valid all-Z pattern on ``Δ^k`` (optionally with fixed colour classes)."""
    parts = [classes] if classes is not None else list(set_partitions(list(range(k + 1))))
    faces = _faces(range(k + 1))
    for part in parts:
        part = [frozenset(C) for C in part]
        options = [[C for C in part if C & F] for F in faces]
        for pick in product(*options):
            yield _make(k, part, dict(zip(faces, pick)))


def random_pattern(k: int, rng: random.Random, classes: list | None = None) -> ZPattern:
    if classes is None:
        classes = rng.choice(list(set_partitions(list(range(k + 1)))))
    part = [frozenset(C) for C in classes]
    choice = {F: rng.choice([C for C in part if C & F]) for F in _faces(range(k + 1))}
    return _make(k, part, choice)


def expected_count(pattern: ZPattern) -> int:
    return 0 if pattern.z_edges else 1


def top_reduced_patterns(k: int, rng: random.Random, fillers: int = 1) -> Iterator[ZPattern]:
    """Edge-free patterns with the top barycenter coloured ``k``, every colouring of
    the faces of the facet opposite ``k`` enumerated, other faces filled at random.

    A rainbow flag must end with that facet, so these patterns exercise every
    colouring the count can depend on, up to the symmetric group action.
    """
    facet = frozenset(range(k))
    singles = [frozenset({i}) for i in range(k + 1)]
    inner = _faces(facet)
    outer = [F for F in _faces(range(k + 1)) if not F <= facet and len(F) < k + 1]
    top = frozenset(range(k + 1))
    for pick in product(*[[C for C in singles if C & F] for F in inner]):
        for _ in range(fillers):
            choice = dict(zip(inner, pick))
            for F in outer:
                choice[F] = rng.choice([C for C in singles if C & F])
            choice[top] = frozenset({k})
            yield _make(k, singles, choice)


__all__ = [
    "PatternError", "ZPattern", "all_patterns", "count_by_subdivision", "count_noedge_subdivided",
    "expected_count", "random_pattern", "set_partitions", "top_reduced_patterns",
]
