"""Affine singular simplices and exact-rational chains on a Delta-complex.

A singular simplex is modelled by an ordered tuple of barycentric points inside
one carrier cell.  Simplices are stored in canonical form: the carrier is the
smallest face containing all vertices and coordinates are taken in that face,
so two descriptions of the same affine map compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .complex import ComplexError, DeltaComplex, UnknownMark, parse_rational, rational_json

ZERO = Fraction(0)
ONE = Fraction(1)


class DegreeUnderflow(ValueError):
    """Boundary of a 0-chain requested."""


class CarrierError(ValueError):
    """Simplices cannot be placed in a common carrier cell."""


def _support(coords) -> tuple:
    return tuple(i for i, x in enumerate(coords) if x != 0)


@dataclass(frozen=True)
class BaryPoint:
    """Canonical point: the cell of its minimal supporting face, strictly positive coords."""
    cell: str
    coords: tuple

    @classmethod
    def make(cls, K: DeltaComplex, cell: str, coords: Sequence) -> "BaryPoint":
        coords = tuple(Fraction(x) for x in coords)
        if len(coords) != K.cell_dim(cell) + 1:
            raise ValueError(f"point in {cell} needs {K.cell_dim(cell) + 1} coordinates")
        if any(x < 0 for x in coords) or sum(coords) != 1:
            raise ValueError(f"coordinates {coords} are not barycentric")
        supp = _support(coords)
        if len(supp) < len(coords):
            cell = K.face_of(cell, supp)
            coords = tuple(coords[i] for i in supp)
        return cls(cell, coords)


class AffineSimplex:
    """An affine simplex ``[p_0, ..., p_k]`` inside a carrier cell."""

    __slots__ = ("complex", "carrier", "coords", "_hash")

    def __init__(self, K: DeltaComplex, carrier: str, coords: tuple):
        self.complex = K
        self.carrier = carrier
        self.coords = coords
        self._hash = hash((carrier, coords))

    @classmethod
    def make(cls, K: DeltaComplex, carrier: str, vertices: Sequence[Sequence], check: bool = True) -> "AffineSimplex":
        n = K.cell_dim(carrier) + 1
        verts = tuple(tuple(Fraction(x) for x in v) for v in vertices)
        if check:
            for v in verts:
                if len(v) != n:
                    raise ValueError(f"vertex {v} has {len(v)} coordinates, carrier {carrier} needs {n}")
                if any(x < 0 for x in v) or sum(v) != 1:
                    raise ValueError(f"vertex {v} is not a barycentric point")
        used = sorted({i for v in verts for i, x in enumerate(v) if x != 0})
        if len(used) < n:
            carrier = K.face_of(carrier, used)
            verts = tuple(tuple(v[i] for i in used) for v in verts)
        return cls(K, carrier, verts)

    @classmethod
    def cell(cls, K: DeltaComplex, cid: str) -> "AffineSimplex":
        """The characteristic simplex of a cell."""
        n = K.cell_dim(cid) + 1
        return cls(K, cid, tuple(tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __eq__(self, other):
        return (isinstance(other, AffineSimplex) and self._hash == other._hash
                and self.carrier == other.carrier and self.coords == other.coords)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        pts = "; ".join(",".join(str(x) for x in v) for v in self.coords)
        return f"<{self.carrier}: {pts}>"

    def sort_key(self):
        return (0, self.carrier, self.coords)

    def face(self, i: int) -> "AffineSimplex":
        if self.dim == 0:
            raise DegreeUnderflow("a point has no faces")
        return AffineSimplex.make(self.complex, self.carrier, self.coords[:i] + self.coords[i + 1:], check=False)

    def point(self, i: int) -> BaryPoint:
        return BaryPoint.make(self.complex, self.carrier, self.coords[i])

    def points(self) -> list:
        return [self.point(i) for i in range(self.dim + 1)]

    def edge(self, i: int, j: int) -> "AffineSimplex":
        return AffineSimplex.make(self.complex, self.carrier, (self.coords[i], self.coords[j]), check=False)

    def edge_cell(self, i: int, j: int) -> str:
        """Carrier of the affine edge from vertex ``i`` to vertex ``j``."""
        a, b = self.coords[i], self.coords[j]
        used = tuple(t for t in range(len(a)) if a[t] != 0 or b[t] != 0)
        return self.complex.face_of(self.carrier, used)

    def barycenter(self, indices: Iterable[int] | None = None) -> tuple:
        idx = list(range(self.dim + 1)) if indices is None else list(indices)
        m = len(idx)
        return tuple(sum((self.coords[i][t] for i in idx), ZERO) / m for t in range(len(self.coords[0])))

    def with_vertices(self, vertices: Sequence[Sequence]) -> "AffineSimplex":
        """New simplex in the same carrier (coordinates of this carrier)."""
        return AffineSimplex.make(self.complex, self.carrier, vertices, check=False)

    def push(self, local_vertices: Sequence[Sequence]) -> "AffineSimplex":
        """Image under this simplex of a simplex given in standard coordinates."""
        n = len(self.coords[0])
        out = []
        for x in local_vertices:
            out.append(tuple(sum((x[i] * self.coords[i][t] for i in range(len(x)) if x[i]), ZERO)
                             for t in range(n)))
        return AffineSimplex.make(self.complex, self.carrier, out, check=False)

    def lifted(self, carrier: str) -> tuple:
        """Vertex coordinates of this simplex expressed in the cell ``carrier``."""
        if carrier == self.carrier:
            return self.coords
        K = self.complex
        embs = K.embeddings(carrier, self.carrier)
        if not embs:
            raise CarrierError(f"{self.carrier} is not a face of {carrier}")
        if len(embs) > 1:
            raise CarrierError(f"{self.carrier} sits in {carrier} in several ways; embedding is ambiguous")
        emb = embs[0]
        n = K.cell_dim(carrier) + 1
        out = []
        for v in self.coords:
            w = [ZERO] * n
            for t, i in enumerate(emb):
                w[i] = v[t]
            out.append(tuple(w))
        return tuple(out)


def common_carrier(simplices: Sequence, carrier: str | None = None) -> str:
    """A cell containing every simplex as a face in a unique way."""
    if carrier is not None:
        return carrier
    K = simplices[0].complex
    own = sorted({s.carrier for s in simplices}, key=lambda c: -K.cell_dim(c))
    low = max(K.cell_dim(c) for c in own)
    rest = sorted((c for c in K.cells if K.cell_dim(c) > low), key=lambda c: (K.cell_dim(c), c))
    for cand in own + rest:
        try:
            for s in simplices:
                s.lifted(cand)
            return cand
        except CarrierError:
            continue
    raise CarrierError("simplices have no common carrier; pass one explicitly")


class Chain:
    """Finitely supported map simplex -> Fraction with no zero coefficients."""

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms: Mapping | Iterable = ()):
        if degree < 0:
            raise DegreeUnderflow("chains have non-negative degree")
        self.degree = degree
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for s, a in items:
            if s.dim != degree:
                raise ValueError(f"simplex of dim {s.dim} in a degree {degree} chain")
            acc[s] = acc.get(s, ZERO) + Fraction(a)
        self._terms = {s: a for s, a in acc.items() if a != 0}

    @classmethod
    def of(cls, simplex, coeff=1) -> "Chain":
        return cls(simplex.dim, [(simplex, coeff)])

    @classmethod
    def _raw(cls, degree: int, terms: dict) -> "Chain":
        c = cls.__new__(cls)
        c.degree = degree
        c._terms = {s: a for s, a in terms.items() if a != 0}
        return c

    def __getitem__(self, s) -> Fraction:
        return self._terms.get(s, ZERO)

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    @property
    def support(self) -> frozenset:
        return frozenset(self._terms)

    @property
    def complex(self):
        for s in self._terms:
            return s.complex
        return None

    def _combine(self, other: "Chain", sign: int) -> "Chain":
        if not isinstance(other, Chain):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError(f"cannot add chains of degree {self.degree} and {other.degree}")
        acc = dict(self._terms)
        for s, a in other._terms.items():
            acc[s] = acc.get(s, ZERO) + sign * a
        return Chain._raw(self.degree, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Chain._raw(self.degree, {s: -a for s, a in self._terms.items()})

    def __mul__(self, k):
        k = Fraction(k)
        return Chain._raw(self.degree, {s: k * a for s, a in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    def __repr__(self):
        body = " + ".join(f"{a}*{s!r}" for s, a in self.sorted_items()[:6])
        more = "" if len(self) <= 6 else f" + ... ({len(self)} terms)"
        return f"Chain[{self.degree}]({body or '0'}{more})"

    def restrict(self, pred: Callable) -> "Chain":
        return Chain._raw(self.degree, {s: a for s, a in self._terms.items() if pred(s)})

    def map(self, f: Callable) -> "Chain":
        """Linear extension of ``f`` (simplex -> Chain)."""
        out: dict = {}
        deg = None
        for s, a in self._terms.items():
            img = f(s)
            deg = img.degree
            for t, b in img._terms.items():
                out[t] = out.get(t, ZERO) + a * b
        if deg is None:
            return None
        return Chain._raw(deg, out)

    @property
    def l1(self) -> Fraction:
        return l1_norm(self)


def zero(degree: int) -> Chain:
    return Chain(degree)


def linear(c: Chain, f: Callable, degree: int) -> Chain:
    """Apply the linear extension of ``f`` and fix the degree of the empty case."""
    out = c.map(f)
    return Chain(degree) if out is None else out


# core operators

def boundary(c: Chain) -> Chain:
    if c.degree == 0:
        raise DegreeUnderflow("boundary of a 0-chain")
    out: dict = {}
    for s, a in c.items():
        for i in range(s.dim + 1):
            f = s.face(i)
            out[f] = out.get(f, ZERO) + (a if i % 2 == 0 else -a)
    return Chain._raw(c.degree - 1, out)


def face_chain(c: Chain, i: int) -> Chain:
    """``sum c(s) * d_i s`` (a single face map extended linearly)."""
    if c.degree == 0:
        raise DegreeUnderflow("face of a 0-chain")
    out: dict = {}
    for s, a in c.items():
        f = s.face(i)
        out[f] = out.get(f, ZERO) + a
    return Chain._raw(c.degree - 1, out)


def l1_norm(c: Chain) -> Fraction:
    return sum((abs(a) for _, a in c.items()), ZERO)


def perm_sign(p: Sequence[int]) -> int:
    seen, sign = [False] * len(p), 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def compose(rho: Sequence[int], pi: Sequence[int]) -> tuple:
    """The permutation ``rho o pi`` (apply ``pi`` first)."""
    return tuple(rho[pi[i]] for i in range(len(pi)))


def permute(s: AffineSimplex, pi: Sequence[int]):
    """Act by ``pi``: vertex ``i`` of ``s`` moves to position ``pi[i]``.

    Returns ``(pi . s, sign(pi))``; this is a left action, so
    ``permute(permute(s, pi), rho) == permute(s, compose(rho, pi))``.
    """
    if sorted(pi) != list(range(s.dim + 1)):
        raise ValueError(f"{pi} is not a permutation of {{0..{s.dim}}}")
    new = [None] * (s.dim + 1)
    for i, v in enumerate(s.coords):
        new[pi[i]] = v
    return AffineSimplex(s.complex, s.carrier, tuple(new)), perm_sign(pi)


def alt(c: Chain) -> Chain:
    """Signed average over all vertex permutations."""
    k = c.degree
    if k == 0:
        return c
    w = Fraction(1, factorial(k + 1))
    perms = [(p, perm_sign(p)) for p in permutations(range(k + 1))]
    out: dict = {}
    for s, a in c.items():
        for p, sg in perms:
            new = [None] * (k + 1)
            for i, v in enumerate(s.coords):
                new[p[i]] = v
            t = AffineSimplex(s.complex, s.carrier, tuple(new))
            out[t] = out.get(t, ZERO) + sg * w * a
    return Chain._raw(k, out)


# membership and selectors

def point_in(K: DeltaComplex, p: BaryPoint, mark: str) -> bool:
    return p.cell in K.mark(mark)


def vertex_in(s: AffineSimplex, i: int, mark: str) -> bool:
    v = s.coords[i]
    supp = _support(v)
    return s.complex.face_of(s.carrier, supp) in s.complex.mark(mark)


def simplex_in(s: AffineSimplex, mark: str) -> bool:
    return s.carrier in s.complex.mark(mark)


def edge_in(s: AffineSimplex, i: int, j: int, mark: str) -> bool:
    return s.edge_cell(i, j) in s.complex.mark(mark)


def has_edge_in(s: AffineSimplex, mark: str) -> bool:
    Z = s.complex.mark(mark)
    return any(s.edge_cell(i, j) in Z for i, j in combinations(range(s.dim + 1), 2))


def z_vertices(s: AffineSimplex, mark: str) -> frozenset:
    Z = s.complex.mark(mark)
    K = s.complex
    return frozenset(i for i, v in enumerate(s.coords) if K.face_of(s.carrier, _support(v)) in Z)


@dataclass(frozen=True)
class EdgeSelector:
    """``n``: not contained in the mark; ``e``: some edge in it; ``ne``: no edge in it."""
    kind: str
    subcomplex: str

    def __post_init__(self):
        if self.kind not in ("n", "e", "ne"):
            raise ValueError(f"selector kind must be n, e or ne, not {self.kind!r}")

    def matches(self, s: AffineSimplex) -> bool:
        if self.kind == "n":
            return not simplex_in(s, self.subcomplex)
        hit = has_edge_in(s, self.subcomplex)
        return hit if self.kind == "e" else not hit


def restricted_norm(c: Chain, sel: EdgeSelector, K: DeltaComplex | None = None) -> Fraction:
    K = K or c.complex
    if K is not None:
        K.mark(sel.subcomplex)
    return sum((abs(a) for s, a in c.items() if sel.matches(s)), ZERO)


def norm_e(c: Chain, mark: str) -> Fraction:
    return restricted_norm(c, EdgeSelector("e", mark))


def norm_ne(c: Chain, mark: str) -> Fraction:
    return restricted_norm(c, EdgeSelector("ne", mark))


def is_Z_nondegenerate(s: AffineSimplex, mark: str) -> bool:
    pts = [s.point(i) for i in sorted(z_vertices(s, mark))]
    return len(set(pts)) == len(pts)


def chain_is_Z_nondegenerate(c: Chain, mark: str) -> bool:
    return all(is_Z_nondegenerate(s, mark) for s in c)


def cellular(K: DeltaComplex, coeffs: Mapping[str, object]) -> Chain:
    """Chain of characteristic simplices ``sum a_c * c``."""
    items = [(AffineSimplex.cell(K, cid), Fraction(a)) for cid, a in coeffs.items()]
    if not items:
        raise ValueError("empty cellular chain needs an explicit degree; use Chain(k)")
    return Chain(items[0][0].dim, items)


def push_cells(c: Chain, cell_map: Mapping[str, str], target: DeltaComplex) -> Chain:
    """Push a chain forward along a face-compatible cell map."""
    out: dict = {}
    for s, a in c.items():
        t = AffineSimplex.make(target, cell_map[s.carrier], s.coords, check=False)
        out[t] = out.get(t, ZERO) + a
    return Chain._raw(c.degree, out)


# JSON

def chain_to_json(c: Chain) -> dict:
    terms = []
    for s, a in c.sorted_items():
        if not isinstance(s, AffineSimplex):
            raise TypeError("only affine chains serialize to JSON")
        terms.append({"carrier": s.carrier,
                      "vertices": [[rational_json(x) for x in v] for v in s.coords],
                      "coeff": rational_json(a)})
    return {"degree": c.degree, "terms": terms}


def chain_from_json(K: DeltaComplex, data: Mapping) -> Chain:
    try:
        deg = int(data["degree"])
        items = []
        for t in data["terms"]:
            if str(t["carrier"]) not in K.cells:
                raise ComplexError(f"unknown carrier {t['carrier']!r}")
            verts = [[parse_rational(x) for x in v] for v in t["vertices"]]
            items.append((AffineSimplex.make(K, str(t["carrier"]), verts), parse_rational(t["coeff"])))
    except (KeyError, TypeError) as exc:
        raise ComplexError(f"malformed chain JSON: {exc}") from None
    return Chain(deg, items)


__all__ = [
    "AffineSimplex", "BaryPoint", "Chain", "CarrierError", "DegreeUnderflow", "EdgeSelector", "UnknownMark",
    "alt", "boundary", "cellular", "compose", "face_chain", "has_edge_in", "is_Z_nondegenerate", "l1_norm",
    "norm_e", "norm_ne", "perm_sign", "permute", "push_cells", "restricted_norm", "simplex_in", "vertex_in",
    "z_vertices", "chain_to_json", "chain_from_json", "common_carrier", "linear", "zero",
]
