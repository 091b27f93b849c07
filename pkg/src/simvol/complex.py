"""Finite Delta-complexes with face maps and marked subcomplexes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence


class ComplexError(ValueError):
    """Raised when complex data violates the Delta-set axioms."""


class UnknownMark(KeyError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or an integer literal; decimals are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, (list, tuple)) and len(text) == 2:
        return Fraction(int(text[0]), int(text[1]))
    s = str(text).strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"decimal input {text!r} rejected; use p/q")
    if "/" in s:
        p, q = s.split("/")
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def rational_json(x: Fraction) -> list:
    x = Fraction(x)
    return [x.numerator, x.denominator]


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    faces: tuple


class DeltaComplex:
    """A finite graded cell catalog with face maps ``face(c, i)``.

    ``marks`` maps a name (conventionally ``"Y"`` or ``"Z"``) to a face-closed
    set of cell ids.
    """

    def __init__(self, cells: Iterable[Cell], marks: Mapping[str, Iterable[str]] | None = None,
                 validate: bool = True):
        self.cells: dict[str, Cell] = {}
        for c in cells:
            if c.id in self.cells:
                raise ComplexError(f"duplicate cell id {c.id!r}")
            self.cells[c.id] = Cell(str(c.id), int(c.dim), tuple(str(f) for f in c.faces))
        self.by_dim: dict[int, list[str]] = {}
        for cid, c in self.cells.items():
            self.by_dim.setdefault(c.dim, []).append(cid)
        self.marks: dict[str, frozenset] = {k: frozenset(str(x) for x in v) for k, v in (marks or {}).items()}
        self._face_of: dict = {}
        self._verts: dict = {}
        self._embeddings: dict = {}
        self._components: dict = {}
        if validate:
            self.validate()

    # basic queries

    @property
    def dim(self) -> int:
        return max(self.by_dim) if self.by_dim else -1

    def cells_of_dim(self, k: int) -> list[str]:
        return list(self.by_dim.get(k, []))

    def cell_dim(self, cid: str) -> int:
        return self.cells[cid].dim

    def face(self, cid: str, i: int) -> str:
        return self.cells[cid].faces[i]

    def mark(self, name: str) -> frozenset:
        try:
            return self.marks[name]
        except KeyError:
            raise UnknownMark(name) from None

    def __len__(self):
        return len(self.cells)

    def __repr__(self):
        counts = [len(self.by_dim.get(k, [])) for k in range(self.dim + 1)]
        return f"DeltaComplex(f-vector={counts}, marks={sorted(self.marks)})"

    def validate(self) -> None:
        for c in self.cells.values():
            if c.dim < 0:
                raise ComplexError(f"cell {c.id} has negative dimension")
            if c.dim == 0:
                if c.faces:
                    raise ComplexError(f"0-cell {c.id} must have no faces")
                continue
            if len(c.faces) != c.dim + 1:
                raise ComplexError(f"cell {c.id} of dim {c.dim} needs {c.dim + 1} faces")
            for f in c.faces:
                if f not in self.cells:
                    raise ComplexError(f"cell {c.id} refers to unknown face {f!r}")
                if self.cells[f].dim != c.dim - 1:
                    raise ComplexError(f"face {f} of {c.id} has wrong dimension")
            if c.dim >= 2:
                for i, j in combinations(range(c.dim + 1), 2):
                    if self.face(self.face(c.id, j), i) != self.face(self.face(c.id, i), j - 1):
                        raise ComplexError(f"face identity fails on {c.id} for i={i}, j={j}")
        for name, ids in self.marks.items():
            for cid in ids:
                if cid not in self.cells:
                    raise ComplexError(f"mark {name} refers to unknown cell {cid!r}")
                for f in self.cells[cid].faces:
                    if f not in ids:
                        raise ComplexError(f"mark {name} is not face-closed at {cid}")

    # faces spanned by vertex subsets

    def face_of(self, cid: str, indices: Sequence[int]) -> str:
        """Cell of the face of ``cid`` spanned by the sorted vertex ``indices``."""
        key = (cid, tuple(indices))
        hit = self._face_of.get(key)
        if hit is not None:
            return hit
        idx = list(indices)
        cur = cid
        d = self.cells[cid].dim
        while len(idx) < d + 1:
            missing = max(set(range(d + 1)) - set(idx))
            cur = self.face(cur, missing)
            idx = [i if i < missing else i - 1 for i in idx]
            d -= 1
        self._face_of[key] = cur
        return cur

    def vertices(self, cid: str) -> tuple:
        hit = self._verts.get(cid)
        if hit is None:
            d = self.cells[cid].dim
            hit = tuple(self.face_of(cid, (i,)) for i in range(d + 1))
            self._verts[cid] = hit
        return hit

    def embeddings(self, cid: str, face_id: str) -> list:
        """All vertex-index tuples of ``cid`` spanning the cell ``face_id``."""
        key = (cid, face_id)
        hit = self._embeddings.get(key)
        if hit is None:
            d = self.cells[cid].dim
            m = self.cells[face_id].dim
            hit = [s for s in combinations(range(d + 1), m + 1) if self.face_of(cid, s) == face_id]
            self._embeddings[key] = hit
        return hit

    def closure(self, ids: Iterable[str]) -> frozenset:
        out, stack = set(), list(ids)
        while stack:
            c = stack.pop()
            if c in out:
                continue
            out.add(c)
            stack.extend(self.cells[c].faces)
        return frozenset(out)

    def components(self, name: str) -> dict:
        """Map each cell of mark ``name`` to a path-component label."""
        if name in self._components:
            return self._components[name]
        ids = self.mark(name)
        parent = {}

        def find(x):
            while parent.setdefault(x, x) != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in sorted(ids):
            vs = self.vertices(c)
            for v in vs:
                find(v)
            for v in vs[1:]:
                parent[find(v)] = find(vs[0])
        comp = {c: find(self.vertices(c)[0]) for c in ids}
        self._components[name] = comp
        return comp

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(v) for k, v in self.by_dim.items())

    def with_marks(self, marks: Mapping[str, Iterable[str]]) -> "DeltaComplex":
        merged = dict(self.marks)
        merged.update({k: frozenset(v) for k, v in marks.items()})
        return DeltaComplex(self.cells.values(), merged, validate=True)

    # serialization

    def to_json(self) -> dict:
        return {
            "dims": [len(self.by_dim.get(k, [])) for k in range(self.dim + 1)],
            "cells": [{"id": c.id, "dim": c.dim, "faces": list(c.faces)} for c in self.cells.values()],
            "marks": {k: sorted(v) for k, v in sorted(self.marks.items())},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DeltaComplex":
        try:
            cells = [Cell(str(c["id"]), int(c["dim"]), tuple(str(f) for f in c.get("faces", ())))
                     for c in data["cells"]]
        except (KeyError, TypeError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from None
        marks = {k: [str(x) for x in v] for k, v in data.get("marks", {}).items()}
        K = cls(cells, marks)
        dims = data.get("dims")
        if dims is not None and list(dims) != [len(K.by_dim.get(k, [])) for k in range(K.dim + 1)]:
            raise ComplexError("'dims' does not match the cell list")
        return K


# constructions

def _label(verts) -> str:
    return ",".join(str(v) for v in verts)


def simplicial(simplices: Iterable[Sequence], marks: Mapping[str, Iterable[Sequence]] | None = None) -> DeltaComplex:
    """Delta-complex of an ordered simplicial complex.

    Each simplex is a collection of vertex labels; the vertex order of a cell is
    the sorted order of its labels.  Marks are given as lists of simplices and
    are closed under faces.
    """
    all_faces: set = set()
    for s in simplices:
        s = tuple(sorted(s))
        for r in range(1, len(s) + 1):
            all_faces.update(combinations(s, r))
    cells = []
    for s in sorted(all_faces, key=lambda t: (len(t), t)):
        faces = tuple(_label(s[:i] + s[i + 1:]) for i in range(len(s))) if len(s) > 1 else ()
        cells.append(Cell(_label(s), len(s) - 1, faces))
    mk = {}
    for name, items in (marks or {}).items():
        closed = set()
        for s in items:
            s = tuple(sorted(s))
            for r in range(1, len(s) + 1):
                closed.update(_label(f) for f in combinations(s, r))
        mk[name] = closed
    return DeltaComplex(cells, mk)


def standard_simplex(n: int, marks: Mapping[str, Iterable[Sequence]] | None = None) -> DeltaComplex:
    return simplicial([tuple(range(n + 1))], marks)


def simplex_boundary(n: int, marks=None) -> DeltaComplex:
    """The boundary of the standard ``n``-simplex (all proper faces)."""
    return simplicial(list(combinations(range(n + 1), n)), marks)


def top_cell(K: DeltaComplex) -> str:
    tops = K.cells_of_dim(K.dim)
    if len(tops) != 1:
        raise ComplexError("complex does not have a unique top cell")
    return tops[0]
