"""Seeded random instances for property suites and tests."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .chains import AffineSimplex, Chain
from .complex import DeltaComplex, standard_simplex, top_cell
from .groups import FiniteGroup, regular_action, translation_action
from .subdivision import barycentric_defects


def random_mark(n: int, rng: random.Random, p: float = 0.3) -> list:
    """Vertex tuples of a random face-closed subcomplex of ``Δ^n``."""
    faces = [F for r in range(1, n + 1) for F in combinations(range(n + 1), r)]
    chosen = [F for F in faces if rng.random() < p]
    closed = {G for F in chosen for r in range(1, len(F) + 1) for G in combinations(F, r)}
    return sorted(closed, key=lambda F: (len(F), F))


def marked_simplex(n: int, rng: random.Random, p: float = 0.3) -> DeltaComplex:
    """``Δ^n`` with a random mark ``Z``."""
    return standard_simplex(n, {"Z": random_mark(n, rng, p)})


def random_point(n: int, rng: random.Random, max_den: int = 4) -> tuple:
    """A barycentric point of ``Δ^n``: a vertex, a face barycenter or a random rational point."""
    u = rng.random()
    if u < 0.35:
        i = rng.randrange(n + 1)
        return tuple(Fraction(int(t == i)) for t in range(n + 1))
    if u < 0.7:
        F = rng.sample(range(n + 1), rng.randint(2, n + 1))
        return tuple(Fraction(1, len(F)) if t in F else Fraction(0) for t in range(n + 1))
    w = [rng.randint(0, max_den) for _ in range(n + 1)]
    if not any(w):
        w[rng.randrange(n + 1)] = 1
    s = sum(w)
    return tuple(Fraction(x, s) for x in w)


def random_simplex(K: DeltaComplex, k: int, rng: random.Random, carrier: str | None = None) -> AffineSimplex:
    carrier = carrier or top_cell(K)
    n = K.cell_dim(carrier)
    return AffineSimplex.make(K, carrier, [random_point(n, rng) for _ in range(k + 1)])


def random_chain(K: DeltaComplex, k: int, rng: random.Random, terms: int = 3, carrier: str | None = None) -> Chain:
    items = []
    for _ in range(rng.randint(1, terms)):
        a = Fraction(rng.randint(-6, 6) or 1, rng.randint(1, 4))
        items.append((random_simplex(K, k, rng, carrier), a))
    return Chain(k, items)


def random_vertex_simplex(K: DeltaComplex, k: int, rng: random.Random) -> AffineSimplex:
    """Simplex whose points are vertices or face barycenters of the top cell."""
    carrier = top_cell(K)
    n = K.cell_dim(carrier)
    pts = []
    for _ in range(k + 1):
        if rng.random() < 0.75:
            i = rng.randrange(n + 1)
            pts.append(tuple(Fraction(int(t == i)) for t in range(n + 1)))
        else:
            F = rng.sample(range(n + 1), rng.randint(2, n + 1))
            pts.append(tuple(Fraction(1, len(F)) if t in F else Fraction(0) for t in range(n + 1)))
    return AffineSimplex.make(K, carrier, pts)


def random_nondegenerate_chain(rng: random.Random, max_dim: int = 3, terms: int = 3, attempts: int = 400):
    """A chain of Z-barycentrically non-degenerate simplices on a randomly marked simplex."""
    for _ in range(attempts):
        n = rng.randint(1, max_dim)
        K = marked_simplex(n, rng, 0.35)
        items = []
        for _ in range(terms * 8):
            s = random_vertex_simplex(K, rng.randint(1, n), rng) if rng.random() < 0.5 else \
                random_vertex_simplex(K, n, rng)
            if not barycentric_defects(s, "Z"):
                items.append(s)
            if len(items) >= terms:
                break
        if items:
            k = items[0].dim
            same = [s for s in items if s.dim == k]
            return Chain(k, [(s, Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 3))) for s in same])
    raise RuntimeError("no non-degenerate sample found")


def random_finite_group(rng: random.Random, max_order: int = 60) -> FiniteGroup:
    kind = rng.randrange(4)
    if kind == 0:
        return FiniteGroup.cyclic(rng.randint(1, max_order))
    if kind == 1:
        return FiniteGroup.symmetric(rng.randint(2, 4))
    if kind == 2:
        n = rng.randint(2, max_order // 2)
        rot = [(i + 1) % n for i in range(n)]
        ref = [(-i) % n for i in range(n)]
        return FiniteGroup.from_permutations([rot, ref])
    a, b = rng.randint(2, 6), rng.randint(2, 6)
    while a * b > max_order:
        a, b = rng.randint(2, 6), rng.randint(2, 6)
    m = a + b
    ca = [(i + 1) % a if i < a else i for i in range(m)]
    cb = [i if i < a else a + (i - a + 1) % b for i in range(m)]
    return FiniteGroup.from_permutations([ca, cb])


def random_action(rng: random.Random):
    """A transitive action (``Z``, ``Z^2`` or a finite group on itself) with its point sampler."""
    kind = rng.randrange(3)
    if kind < 2:
        d = kind + 1
        A = translation_action(d)
        span = 3 if d == 1 else 2

        def pt():
            return tuple(rng.randint(-span, span) for _ in range(d))
        return A, pt
    G = random_finite_group(rng)
    A = regular_action(G)
    return A, lambda: rng.choice(G.elements)


def random_function(rng: random.Random, point, size: int = 4, zero_sum: bool | None = None) -> dict:
    f: dict = {}
    for _ in range(rng.randint(1, size)):
        x = point()
        f[x] = f.get(x, Fraction(0)) + Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    f = {x: a for x, a in f.items() if a}
    if zero_sum is None:
        zero_sum = rng.random() < 0.5
    if zero_sum and f:
        x = point()
        f[x] = f.get(x, Fraction(0)) - sum(f.values())
        f = {x: a for x, a in f.items() if a}
    return f


def random_tree(rng: random.Random, n: int):
    """Random labelled tree on ``n`` vertices built by random attachment."""
    from .gluing import SimplicialTree
    order = list(range(n))
    rng.shuffle(order)
    edges = [(order[i], order[rng.randrange(i)]) for i in range(1, n)]
    return SimplicialTree(list(range(n)), edges)


__all__ = [
    "marked_simplex", "random_action", "random_chain", "random_finite_group", "random_function", "random_mark",
    "random_nondegenerate_chain", "random_point", "random_simplex", "random_tree", "random_vertex_simplex",
]
