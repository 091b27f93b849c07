"""Affine joins and the pole operators on an equatorial disk model.

The model is the standard ``(d+1)``-simplex with south pole ``e_0``, north pole
``e_{d+1}`` and equatorial disk ``{x : x_0 = x_{d+1}}``; the center is the
midpoint of the two poles.  ``β(σ) = [S, N, σ]`` cones twice from the poles.
``η(σ)`` is the union of the two cones ``S⋆σ`` and ``N⋆σ`` glued along ``σ``;
it is not affine, so it is represented by :class:`EtaSimplex` through its face
maps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chains import AffineSimplex, CarrierError, Chain, ONE, ZERO, boundary, common_carrier
from .complex import DeltaComplex, standard_simplex, top_cell
from .lp import in_convex_hull


def join_simplices(a: AffineSimplex, b: AffineSimplex, carrier: str | None = None) -> AffineSimplex:
    """``a ⋆ b``: the vertices of ``a`` followed by those of ``b``."""
    if a.complex is not b.complex:
        raise CarrierError("simplices live in different complexes")
    carrier = common_carrier([a, b], carrier)
    return AffineSimplex.make(a.complex, carrier, a.lifted(carrier) + b.lifted(carrier), check=False)


def join(a, b, carrier: str | None = None) -> Chain:
    """Bilinear join of simplices or chains; degree ``deg a + deg b + 1``."""
    ca = a if isinstance(a, Chain) else Chain.of(a)
    cb = b if isinstance(b, Chain) else Chain.of(b)
    out: dict = {}
    for s, x in ca.items():
        for t, y in cb.items():
            j = join_simplices(s, t, carrier)
            out[j] = out.get(j, ZERO) + x * y
    return Chain._raw(ca.degree + cb.degree + 1, out)


class EquatorialModel:
    """Standard ``(d+1)``-simplex with two poles and an equatorial ``d``-disk."""

    def __init__(self, d: int):
        if d < 0:
            raise ValueError("disk dimension must be >= 0")
        self.d = d
        self.complex: DeltaComplex = standard_simplex(d + 1)
        self.carrier = top_cell(self.complex)
        n = d + 2
        self.south = tuple(ONE if i == 0 else ZERO for i in range(n))
        self.north = tuple(ONE if i == n - 1 else ZERO for i in range(n))
        self.center = tuple(Fraction(1, 2) if i in (0, n - 1) else ZERO for i in range(n))

    def in_disk(self, p) -> bool:
        return p[0] == p[-1]

    def simplex(self, points) -> AffineSimplex:
        pts = [tuple(Fraction(x) for x in p) for p in points]
        for p in pts:
            if not self.in_disk(p):
                raise ValueError(f"point {p} is not in the equatorial disk")
        return AffineSimplex.make(self.complex, self.carrier, pts)

    def coords(self, s) -> tuple:
        if s.complex is not self.complex:
            raise CarrierError("simplex does not live in this equatorial model")
        return s.lifted(self.carrier)

    def check(self, s: AffineSimplex) -> None:
        for p in self.coords(s):
            if not self.in_disk(p):
                raise ValueError(f"{s!r} leaves the equatorial disk")

    def pole_simplex(self, *points) -> AffineSimplex:
        return AffineSimplex.make(self.complex, self.carrier, points, check=False)


@dataclass(frozen=True)
class EtaSimplex:
    """``η(base)``: vertex 0 at the south pole, vertex 1 at the north pole."""
    model: EquatorialModel
    base: AffineSimplex

    @property
    def dim(self) -> int:
        return self.base.dim + 1

    @property
    def complex(self) -> DeltaComplex:
        return self.model.complex

    def __hash__(self):
        return hash(("eta", self.base))

    def __eq__(self, other):
        return isinstance(other, EtaSimplex) and other.model is self.model and other.base == self.base

    def __repr__(self):
        return f"η{self.base!r}"

    def sort_key(self):
        return (1,) + self.base.sort_key()

    def face(self, i: int):
        m = self.model
        rest = m.coords(self.base)[1:]
        if i == 0:
            return m.pole_simplex(m.north, *rest)
        if i == 1:
            return m.pole_simplex(m.south, *rest)
        return eta_simplex(m, self.base.face(i - 1))

    def pieces(self) -> list:
        """Vertex lists of the two affine cones making up the image."""
        m = self.model
        pts = m.coords(self.base)
        return [(m.south,) + pts, (m.north,) + pts]

    def meets(self, point) -> bool:
        return any(in_convex_hull(point, piece) for piece in self.pieces())


def eta_simplex(model: EquatorialModel, base: AffineSimplex):
    """``η(base)``, an affine simplex ``[S, N, ...]`` when the first vertex of ``base`` is the center."""
    model.check(base)
    pts = model.coords(base)
    if pts[0] == model.center:
        return model.pole_simplex(model.south, model.north, *pts[1:])
    return EtaSimplex(model, base)


def beta(c: Chain, model: EquatorialModel) -> Chain:
    """``β(σ) = [S, N, σ]``; raises the degree by two."""
    out: dict = {}
    for s, a in c.items():
        model.check(s)
        t = model.pole_simplex(model.south, model.north, *model.coords(s))
        out[t] = out.get(t, ZERO) + a
    return Chain._raw(c.degree + 2, out)


def beta_of_boundary(c: Chain, model: EquatorialModel) -> Chain:
    """``β(∂c)``, with the augmented boundary on 0-chains (``β`` of a point's
    empty face is the pole segment ``[S, N]``)."""
    if c.degree > 0:
        return beta(boundary(c), model)
    total = sum((a for _, a in c.items()), ZERO)
    return Chain(1, [(model.pole_simplex(model.south, model.north), total)])


def eta(c: Chain, model: EquatorialModel) -> Chain:
    out: dict = {}
    for s, a in c.items():
        t = eta_simplex(model, s)
        out[t] = out.get(t, ZERO) + a
    return Chain._raw(c.degree + 1, out)


def meets_point(s, point, model: EquatorialModel) -> bool:
    """Whether the image of ``s`` (affine or ``η``) contains ``point`` of the model."""
    if isinstance(s, EtaSimplex):
        return s.meets(point)
    return in_convex_hull(point, model.coords(s))


__all__ = ["EquatorialModel", "EtaSimplex", "beta", "beta_of_boundary", "eta", "eta_simplex", "join", "join_simplices", "meets_point"]
