"""Partial boundaries, cone operators, (local) barycentric subdivision and chain homotopies.

Every operator here is functorial: its value on an affine simplex ``s`` is the
push-forward along ``s`` of a chain on the standard simplex, and that standard
chain depends only on the dimension and on which vertices of ``s`` lie in the
relevant mark.  Standard chains are plain dicts ``{tuple_of_points: coeff}`` in
barycentric coordinates of the standard simplex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable

from .chains import (
    AffineSimplex, Chain, DegreeUnderflow, ONE, ZERO, common_carrier, z_vertices,
)

# standard-simplex chains


def std_vertex(n: int, i: int) -> tuple:
    return tuple(ONE if t == i else ZERO for t in range(n + 1))


def std_simplex(n: int) -> tuple:
    return tuple(std_vertex(n, i) for i in range(n + 1))


def bary(points: Iterable[tuple]) -> tuple:
    pts = list(points)
    m = len(pts)
    return tuple(sum((p[t] for p in pts), ZERO) / m for t in range(len(pts[0])))


def loc_add(acc: dict, terms, scale=ONE) -> dict:
    items = terms.items() if isinstance(terms, dict) else terms
    for s, a in items:
        v = acc.get(s, ZERO) + scale * a
        if v:
            acc[s] = v
        else:
            acc.pop(s, None)
    return acc


def loc_boundary(terms) -> dict:
    out: dict = {}
    items = terms.items() if isinstance(terms, dict) else terms
    for s, a in items:
        if len(s) == 1:
            raise DegreeUnderflow("boundary of a 0-chain")
        for i in range(len(s)):
            loc_add(out, [(s[:i] + s[i + 1:], a if i % 2 == 0 else -a)])
    return out


def loc_cone(terms, apex: tuple) -> dict:
    items = terms.items() if isinstance(terms, dict) else terms
    return {(apex,) + s: a for s, a in items if a}


def loc_face_push(terms, j: int) -> dict:
    """Push forward along the inclusion of the ``j``-th face ``Δ^{n-1} -> Δ^n``."""
    items = terms.items() if isinstance(terms, dict) else terms
    return {tuple(p[:j] + (ZERO,) + p[j:] for p in s): a for s, a in items}


def pull_pattern(W: frozenset, j: int) -> frozenset:
    """Vertex pattern of the ``j``-th face of a simplex with pattern ``W``."""
    return frozenset(i if i < j else i - 1 for i in W if i != j)


@lru_cache(maxsize=None)
def _sw_face(n: int, W: frozenset, F: tuple) -> tuple:
    pts = tuple(std_vertex(n, i) for i in F)
    hit = [i for i in F if i in W]
    if len(F) == 1 or not hit:
        return ((pts, ONE),)
    inner: dict = {}
    for pos, i in enumerate(F):
        if i in W:
            loc_add(inner, _sw_face(n, W, F[:pos] + F[pos + 1:]), ONE if pos % 2 == 0 else -ONE)
    apex = bary(std_vertex(n, i) for i in hit)
    return tuple(loc_cone(inner, apex).items())


def standard_local_subdivision(n: int, W: frozenset) -> tuple:
    """``S_W`` of the standard ``n``-simplex, as ``((points, coeff), ...)``."""
    return _sw_face(n, frozenset(W), tuple(range(n + 1)))


def standard_subdivision(n: int, W: frozenset = frozenset()) -> tuple:
    return _sw_face(n, frozenset(range(n + 1)), tuple(range(n + 1)))


def standard_identity(n: int, W: frozenset = frozenset()) -> tuple:
    return ((std_simplex(n), ONE),)


# functorial operators


@dataclass(frozen=True)
class ChainOperator:
    """A functorial chain operator given by its values on standard simplices.

    ``standard(n, W)`` returns the image of the standard ``n``-simplex whose
    vertices ``W`` lie in ``mark``; with ``mark=None`` the pattern is empty.
    """
    name: str
    shift: int
    standard: Callable[[int, frozenset], tuple] = field(compare=False)
    mark: str | None = None

    def pattern(self, s: AffineSimplex) -> frozenset:
        return z_vertices(s, self.mark) if self.mark is not None else frozenset()

    def on_simplex(self, s: AffineSimplex) -> Chain:
        out: dict = {}
        for pts, a in self.standard(s.dim, self.pattern(s)):
            t = s.push(pts)
            out[t] = out.get(t, ZERO) + a
        return Chain._raw(s.dim + self.shift, out)

    def __call__(self, c: Chain) -> Chain:
        out: dict = {}
        for s, a in c.items():
            for pts, b in self.standard(s.dim, self.pattern(s)):
                t = s.push(pts)
                out[t] = out.get(t, ZERO) + a * b
        return Chain._raw(c.degree + self.shift, out)


IDENTITY = ChainOperator("Id", 0, standard_identity)
BARYCENTRIC = ChainOperator("S", 0, standard_subdivision)


def local_barycentric_operator(mark: str) -> ChainOperator:
    return ChainOperator(f"S_{mark}", 0, standard_local_subdivision, mark)


def barycentric(c: Chain) -> Chain:
    """Classical barycentric subdivision."""
    return BARYCENTRIC(c)


def local_barycentric(c: Chain, mark: str) -> Chain:
    """Subdivide only near ``mark``: the identity on simplices with no vertex in it."""
    if c.complex is not None:
        c.complex.mark(mark)
    return local_barycentric_operator(mark)(c)


def iterated_barycentric(c: Chain, times: int) -> Chain:
    for _ in range(times):
        c = barycentric(c)
    return c


# partial boundary and cones


def _vertex_predicate(W) -> Callable[[AffineSimplex, int], bool]:
    if isinstance(W, str):
        return lambda s, i: i in z_vertices(s, W)
    if callable(W):
        return lambda s, i: bool(W(s.point(i)))
    pts = frozenset(W)
    return lambda s, i: s.point(i) in pts


def partial_boundary(c: Chain, W) -> Chain:
    """Alternating sum of the faces that drop a vertex in ``W``.

    ``W`` is a mark name, a set of :class:`BaryPoint`, or a predicate on points.
    """
    if c.degree == 0:
        raise DegreeUnderflow("partial boundary of a 0-chain")
    inW = _vertex_predicate(W)
    out: dict = {}
    for s, a in c.items():
        for i in range(s.dim + 1):
            if inW(s, i):
                f = s.face(i)
                out[f] = out.get(f, ZERO) + (a if i % 2 == 0 else -a)
    return Chain._raw(c.degree - 1, out)


def cone(c: Chain, apex: Iterable, carrier: str) -> Chain:
    """Prepend ``apex`` (coordinates in ``carrier``) as vertex 0 of every simplex."""
    apex = tuple(Fraction(x) for x in apex)
    out: dict = {}
    for s, a in c.items():
        t = AffineSimplex.make(s.complex, carrier, (apex,) + s.lifted(carrier), check=False)
        out[t] = out.get(t, ZERO) + a
    return Chain._raw(c.degree + 1, out)


def cone_bW(c: Chain, W, face: AffineSimplex) -> Chain:
    """Cone with apex the barycenter of the vertices of ``face`` lying in ``W``."""
    inW = _vertex_predicate(W)
    hit = [i for i in range(face.dim + 1) if inW(face, i)]
    if not hit:
        raise ValueError(f"face {face!r} has no vertex in W")
    return cone(c, face.barycenter(hit), face.carrier)


def cone_center(c: Chain, carrier: str | None = None) -> Chain:
    """Cone from the barycenter of the carrier cell."""
    if not c:
        return Chain(c.degree + 1)
    carrier = common_carrier(list(c), carrier)
    n = c.complex.cell_dim(carrier) + 1
    return cone(c, [Fraction(1, n)] * n, carrier)


# chain homotopy


class OperatorError(ValueError):
    """The operator fails a hypothesis of the homotopy construction."""


def _check_chain_map(T: ChainOperator, max_degree: int) -> None:
    if dict(T.standard(0, frozenset())) != {(std_vertex(0, 0),): ONE} or \
            dict(T.standard(0, frozenset({0}))) != {(std_vertex(0, 0),): ONE}:
        raise OperatorError(f"{T.name} is not the identity in degree 0")
    for n in range(1, max_degree + 1):
        for r in range(n + 2):
            for W in combinations(range(n + 1), r):
                W = frozenset(W)
                lhs = loc_boundary(T.standard(n, W))
                rhs: dict = {}
                for j in range(n + 1):
                    loc_add(rhs, loc_face_push(T.standard(n - 1, pull_pattern(W, j)), j),
                            ONE if j % 2 == 0 else -ONE)
                if lhs != rhs:
                    raise OperatorError(f"{T.name} is not a chain map on Δ^{n} with pattern {sorted(W)}")


def chain_homotopy_to_identity(T: ChainOperator, max_degree: int) -> ChainOperator:
    """Functorial ``P`` with ``∂P + P∂ = T - Id`` in degrees ``<= max_degree``.

    ``P_0 = 0`` and ``P_n(Δ^n) = c_n(T(Δ^n) - Δ^n - P_{n-1}(∂Δ^n))`` where
    ``c_n`` cones from the barycenter of ``Δ^n``.
    """
    if T.shift != 0:
        raise OperatorError("only degree-preserving operators are homotopic to the identity")
    _check_chain_map(T, max_degree)
    memo: dict = {}

    def P(n: int, W: frozenset) -> tuple:
        if n > max_degree:
            raise OperatorError(f"homotopy was built for degrees <= {max_degree}")
        key = (n, W)
        if key in memo:
            return memo[key]
        if n == 0:
            memo[key] = ()
            return ()
        body: dict = {}
        loc_add(body, T.standard(n, W))
        loc_add(body, standard_identity(n), -ONE)
        for j in range(n + 1):
            loc_add(body, loc_face_push(P(n - 1, pull_pattern(W, j)), j), -ONE if j % 2 == 0 else ONE)
        out = tuple(loc_cone(body, bary(std_simplex(n))).items())
        memo[key] = out
        return out

    return ChainOperator(f"P[{T.name}]", 1, P, T.mark)


def homotopy_defect(P: ChainOperator, T: ChainOperator, c: Chain) -> Chain:
    """``∂P(c) + P(∂c) - T(c) + c``; zero exactly when the homotopy identity holds."""
    from .chains import boundary
    lhs = boundary(P(c))
    if c.degree > 0:
        lhs = lhs + P(boundary(c))
    return lhs - T(c) + c


# Z-barycentric non-degeneracy


def _point_cell(s: AffineSimplex, coords: tuple) -> str:
    return s.complex.face_of(s.carrier, tuple(t for t, x in enumerate(coords) if x != 0))


def _segment_cell(s: AffineSimplex, a: tuple, b: tuple) -> str:
    return s.complex.face_of(s.carrier, tuple(t for t in range(len(a)) if a[t] != 0 or b[t] != 0))


def barycentric_defects(s: AffineSimplex, mark: str) -> list:
    """Failures of Z-barycentric non-degeneracy, empty when ``s`` satisfies it.

    Checked conditions, with ``V`` the vertices of ``s`` lying in the mark:

    * barycenters of the faces spanned by subsets of ``V`` are pairwise distinct;
    * each such barycenter (faces of size >= 2) lies in the mark and is joined
      to some vertex of its face by an edge inside the mark;
    * every edge of ``s`` or of its barycentric subdivision whose endpoints lie
      in one path component of the mark is itself inside the mark.
    """
    K = s.complex
    Z = K.mark(mark)
    comp = K.components(mark)
    V = sorted(z_vertices(s, mark))
    out = []
    seen: dict = {}
    for r in range(1, len(V) + 1):
        for F in combinations(V, r):
            b = s.barycenter(F)
            if b in seen:
                out.append(f"faces {list(seen[b])} and {list(F)} share a barycenter")
            seen.setdefault(b, F)
            if r >= 2:
                if _point_cell(s, b) not in Z:
                    out.append(f"barycenter of face {list(F)} is not in {mark}")
                elif not any(_segment_cell(s, b, s.coords[i]) in Z for i in F):
                    out.append(f"barycenter of face {list(F)} has no edge in {mark} to its face")
    # edges of the subdivision: barycenters of nested faces, including the original edges
    faces = [F for r in range(1, s.dim + 2) for F in combinations(range(s.dim + 1), r)]
    bc = {F: s.barycenter(F) for F in faces}
    pairs = [(F, G) for F in faces for G in faces if set(F) < set(G)]
    pairs += [((i,), (j,)) for i, j in combinations(range(s.dim + 1), 2)]
    for F, G in pairs:
        a, b = bc[F], bc[G]
        ca, cb = _point_cell(s, a), _point_cell(s, b)
        if ca in Z and cb in Z and comp[ca] == comp[cb] and a != b and _segment_cell(s, a, b) not in Z:
            out.append(f"edge between barycenters of {list(F)} and {list(G)} joins one component "
                       f"of {mark} but leaves it")
    return out


def is_Z_barycentrically_nondegenerate(s: AffineSimplex, mark: str) -> bool:
    return not barycentric_defects(s, mark)


def ne_survivors(s: AffineSimplex, mark: str) -> int:
    """Number of simplices of ``S_Z(s)`` with no edge in the mark."""
    from .chains import has_edge_in
    return sum(1 for t in local_barycentric(Chain.of(s), mark) if not has_edge_in(t, mark))


__all__ = [
    "BARYCENTRIC", "IDENTITY", "ChainOperator", "OperatorError", "barycentric", "barycentric_defects", "cone",
    "cone_bW", "cone_center", "chain_homotopy_to_identity", "homotopy_defect", "is_Z_barycentrically_nondegenerate",
    "iterated_barycentric", "local_barycentric", "local_barycentric_operator", "ne_survivors", "partial_boundary",
    "standard_identity", "standard_local_subdivision", "standard_subdivision",
]
