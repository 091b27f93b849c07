"""Barycentric subdivision of a whole Δ-complex, with chains carried along.

A cell of ``sd(K)`` is a strictly decreasing flag ``F_0 ⊋ F_1 ⊋ ... ⊋ F_k``
of vertex subsets of a cell ``d`` of ``K`` with ``F_0`` all of ``d``; its
vertex ``j`` is the barycenter of ``F_j``.  That is exactly the vertex order
produced by :func:`barycentric`, so subdivided cellular chains map to cellular
chains of ``sd(K)`` term by term.
"""
from __future__ import annotations

from fractions import Fraction

from .chains import AffineSimplex, Chain, ZERO, cellular
from .complex import Cell, ComplexError, DeltaComplex
from .subdivision import barycentric


def _flag_id(d: str, flag) -> str:
    return f"{d}[{'/'.join(','.join(map(str, F)) for F in flag)}]"


def _flags(m: int):
    """Decreasing flags starting at ``(0..m)``, shortest first."""
    out = [((tuple(range(m + 1)),))]
    frontier = list(out)
    while frontier:
        nxt = []
        for fl in frontier:
            last = fl[-1]
            if len(last) == 1:
                continue
            n = len(last)
            for mask in range(1, 2 ** n - 1):
                nxt.append(fl + (tuple(last[i] for i in range(n) if mask >> i & 1),))
        out += nxt
        frontier = nxt
    return out


def subdivide_complex(K: DeltaComplex) -> DeltaComplex:
    cells = []
    for d in K.cells:
        m = K.cell_dim(d)
        for fl in _flags(m):
            cid = _flag_id(d, fl)
            k = len(fl) - 1
            faces = []
            for i in range(k + 1 if k else 0):
                if i == 0:
                    F1 = fl[1]
                    sub = K.face_of(d, F1)
                    pos = {v: t for t, v in enumerate(F1)}
                    faces.append(_flag_id(sub, tuple(tuple(pos[v] for v in F) for F in fl[1:])))
                else:
                    faces.append(_flag_id(d, fl[:i] + fl[i + 1:]))
            cells.append(Cell(cid, k, tuple(faces)))
    marks = {name: {c.id for c in cells if _carrier(c.id) in ids} for name, ids in K.marks.items()}
    return DeltaComplex(cells, marks)


def _carrier(cid: str) -> str:
    return cid[: cid.rindex("[")]


def flag_cell(s: AffineSimplex) -> str:
    """The cell of ``sd(K)`` whose characteristic simplex is ``s``."""
    flag = []
    for p in s.coords:
        F = tuple(t for t, x in enumerate(p) if x)
        if any(p[t] != Fraction(1, len(F)) for t in F):
            raise ComplexError(f"{s!r} has a vertex that is not a face barycenter")
        flag.append(F)
    n = len(s.coords[0])
    if flag[0] != tuple(range(n)) or any(not set(b) < set(a) for a, b in zip(flag, flag[1:])):
        raise ComplexError(f"{s!r} is not a decreasing flag simplex")
    return _flag_id(s.carrier, flag)


def subdivide_chain(c: Chain, target: DeltaComplex) -> Chain:
    """Image of a cellular chain under ``S``, as a cellular chain of ``target = sd(K)``."""
    coeffs: dict = {}
    for s, a in barycentric(c).items():
        cid = flag_cell(s)
        coeffs[cid] = coeffs.get(cid, ZERO) + a
    coeffs = {k: v for k, v in coeffs.items() if v}
    return cellular(target, coeffs) if coeffs else Chain(c.degree)


def iterate_subdivision(K: DeltaComplex, c: Chain | None, times: int):
    """``(sd^N K, S^N c)``; ``c`` may be ``None``."""
    for _ in range(times):
        L = subdivide_complex(K)
        c = subdivide_chain(c, L) if c is not None else None
        K = L
    return K, c


__all__ = ["flag_cell", "iterate_subdivision", "subdivide_chain", "subdivide_complex"]
