"""Finitely generated amenable groups, probability measures and actions on points."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

ZERO = Fraction(0)


class GroupError(ValueError):
    pass


class FreeAbelianGroup:
    """``Z^d`` with elements as int tuples and generators ``±e_i``."""

    kind = "Zd"

    def __init__(self, d: int):
        if d < 1:
            raise GroupError("Z^d needs d >= 1")
        self.d = d
        self.identity = (0,) * d
        self.generators = [tuple(s if j == i else 0 for j in range(d)) for i in range(d) for s in (1, -1)]

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def word_length(self, g) -> int:
        return sum(abs(a) for a in g)

    def element(self, x):
        g = (int(x),) if isinstance(x, int) else tuple(int(a) for a in x)
        if len(g) != self.d:
            raise GroupError(f"{x!r} is not an element of Z^{self.d}")
        return g

    def __eq__(self, other):
        return isinstance(other, FreeAbelianGroup) and other.d == self.d

    def __hash__(self):
        return hash(("Zd", self.d))

    def __repr__(self):
        return f"Z^{self.d}"

    def to_json(self) -> dict:
        return {"kind": "Zd", "d": self.d}


class FiniteGroup:
    """A finite group given by its multiplication table on ``0..n-1``."""

    kind = "finite"

    def __init__(self, table: Sequence[Sequence[int]], generators: Iterable[int] | None = None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(self.table)
        self.order = n
        if n == 0 or any(len(r) != n or any(not 0 <= x < n for x in r) for r in self.table):
            raise GroupError("multiplication table must be a square table on 0..n-1")
        ids = [e for e in range(n) if all(self.table[e][g] == g and self.table[g][e] == g for g in range(n))]
        if not ids:
            raise GroupError("table has no identity")
        self.identity = ids[0]
        self._inv = {}
        for g in range(n):
            hs = [h for h in range(n) if self.table[g][h] == self.identity]
            if len(hs) != 1 or self.table[hs[0]][g] != self.identity:
                raise GroupError(f"element {g} has no two-sided inverse")
            self._inv[g] = hs[0]
        T = self.table
        for a, b, c in product(range(n), repeat=3):
            if T[T[a][b]][c] != T[a][T[b][c]]:
                raise GroupError(f"table is not associative at ({a}, {b}, {c})")
        gens = sorted(set(generators)) if generators is not None else [g for g in range(n) if g != self.identity]
        gens = sorted(set(gens) | {self._inv[g] for g in gens})
        self.generators = gens
        self._lengths = self._bfs()
        if len(self._lengths) != n:
            raise GroupError("generators do not generate the group")

    @classmethod
    def from_permutations(cls, perms: Iterable[Sequence[int]]) -> "FiniteGroup":
        """Group generated by permutations (tuple ``p`` maps ``i`` to ``p[i]``)."""
        gens = [tuple(p) for p in perms]
        m = len(gens[0])
        ident = tuple(range(m))
        elems, queue = [ident], deque([ident])
        index = {ident: 0}
        while queue:
            g = queue.popleft()
            for s in gens:
                h = tuple(s[g[i]] for i in range(m))
                if h not in index:
                    index[h] = len(elems)
                    elems.append(h)
                    queue.append(h)
        table = [[index[tuple(a[b[i]] for i in range(m))] for b in elems] for a in elems]
        return cls(table, [index[s] for s in gens])

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls([[(a + b) % n for b in range(n)] for a in range(n)], [1] if n > 1 else [])

    @classmethod
    def symmetric(cls, m: int) -> "FiniteGroup":
        if m < 2:
            return cls([[0]])
        swap = (1, 0) + tuple(range(2, m))
        cycle = tuple(range(1, m)) + (0,)
        return cls.from_permutations([swap, cycle])

    def _bfs(self) -> dict:
        dist = {self.identity: 0}
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = self.table[s][g]
                if h not in dist:
                    dist[h] = dist[g] + 1
                    queue.append(h)
        return dist

    @property
    def elements(self) -> list:
        return list(range(self.order))

    def mul(self, g, h):
        return self.table[g][h]

    def inv(self, g):
        return self._inv[g]

    def word_length(self, g) -> int:
        return self._lengths[g]

    def element(self, x):
        g = int(x)
        if not 0 <= g < self.order:
            raise GroupError(f"{x!r} is not an element of this group")
        return g

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and other.table == self.table

    def __hash__(self):
        return hash(("finite", self.table))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def to_json(self) -> dict:
        return {"kind": "finite", "table": [list(r) for r in self.table], "generators": list(self.generators)}


class DirectSum:
    """Finite direct sum; elements are tuples of component elements."""

    kind = "sum"

    def __init__(self, components: Sequence):
        if not components:
            raise GroupError("direct sum needs at least one component")
        self.components = tuple(components)
        self.identity = tuple(G.identity for G in self.components)
        self.generators = []
        for i, G in enumerate(self.components):
            for s in G.generators:
                g = list(self.identity)
                g[i] = s
                self.generators.append(tuple(g))

    def mul(self, g, h):
        return tuple(G.mul(a, b) for G, a, b in zip(self.components, g, h))

    def inv(self, g):
        return tuple(G.inv(a) for G, a in zip(self.components, g))

    def word_length(self, g) -> int:
        return sum(G.word_length(a) for G, a in zip(self.components, g))

    def element(self, x):
        if len(x) != len(self.components):
            raise GroupError(f"{x!r} has the wrong number of components")
        return tuple(G.element(a) for G, a in zip(self.components, x))

    def __eq__(self, other):
        return isinstance(other, DirectSum) and other.components == self.components

    def __hash__(self):
        return hash(("sum", self.components))

    def __repr__(self):
        return " + ".join(repr(G) for G in self.components)

    def to_json(self) -> dict:
        return {"kind": "sum", "components": [G.to_json() for G in self.components]}


def group_from_json(data: Mapping):
    kind = data.get("kind")
    if kind == "Zd":
        return FreeAbelianGroup(int(data["d"]))
    if kind == "finite":
        return FiniteGroup(data["table"], data.get("generators"))
    if kind == "sum":
        return DirectSum([group_from_json(c) for c in data["components"]])
    raise GroupError(f"unknown group kind {kind!r}")


# measures


@dataclass(frozen=True)
class Measure:
    """Finitely supported probability measure on a group."""
    group: object
    weights: Mapping = field(compare=False)

    def __post_init__(self):
        w = {g: Fraction(a) for g, a in dict(self.weights).items() if a}
        if any(a < 0 for a in w.values()):
            raise GroupError("measure weights must be non-negative")
        if sum(w.values(), ZERO) != 1:
            raise GroupError("measure weights must sum to 1")
        object.__setattr__(self, "weights", w)

    def __eq__(self, other):
        return isinstance(other, Measure) and self.group == other.group and self.weights == other.weights

    def __hash__(self):
        return hash((self.group, frozenset(self.weights.items())))

    @property
    def support(self) -> list:
        return list(self.weights)

    def __len__(self):
        return len(self.weights)


def delta(G, g=None) -> Measure:
    return Measure(G, {G.identity if g is None else g: 1})


def uniform(G, elements: Iterable) -> Measure:
    els = list(dict.fromkeys(elements))
    w = Fraction(1, len(els))
    return Measure(G, {g: w for g in els})


def convolve(mu: Measure, nu: Measure) -> Measure:
    """``(mu * nu)(g) = sum_{ab = g} mu(a) nu(b)``."""
    if mu.group != nu.group:
        raise GroupError("measures live on different groups")
    G = mu.group
    out: dict = {}
    for a, x in mu.weights.items():
        for b, y in nu.weights.items():
            g = G.mul(a, b)
            out[g] = out.get(g, ZERO) + x * y
    return Measure(G, out)


def translate_left(G, g, weights: Mapping) -> dict:
    """``(g.m)(h) = m(g^{-1} h)`` for a signed weight function ``m``."""
    return {G.mul(g, h): a for h, a in weights.items()}


def l1(weights: Mapping) -> Fraction:
    return sum((abs(a) for a in weights.values()), ZERO)


def generator_defect(mu: Measure) -> Fraction:
    """``max_s |mu - s.mu|_1`` over the generators."""
    G = mu.group
    best = ZERO
    for s in G.generators:
        shifted = translate_left(G, s, mu.weights)
        diff = dict(mu.weights)
        for h, a in shifted.items():
            diff[h] = diff.get(h, ZERO) - a
        best = max(best, l1(diff))
    return best


# actions


class ActionError(ValueError):
    pass


@dataclass
class GroupAction:
    """A group acting on hashable points.

    ``transporter(x, y)`` returns some ``g`` with ``act(g, x) == y`` or ``None``.
    If omitted it is computed by breadth-first search along generators, which
    requires every orbit to be finite.
    """
    group: object
    act: Callable[[object, Hashable], Hashable]
    points: Sequence | None = None
    transporter: Callable | None = None
    name: str = "action"

    def __post_init__(self):
        self._root: dict = {}
        self._words: dict = {}

    def orbit_words(self, x, limit: int = 100000) -> dict:
        """Points of the orbit of ``x``, each with an element carrying a fixed root to it."""
        root = self._root.get(x)
        if root is not None:
            return self._words[root]
        G = self.group
        words = {x: G.identity}
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for s in G.generators:
                z = self.act(s, y)
                if z not in words:
                    words[z] = G.mul(s, words[y])
                    queue.append(z)
                    if len(words) > limit:
                        raise ActionError(f"orbit of {x!r} exceeds {limit} points; supply a transporter")
        for y in words:
            self._root[y] = x
        self._words[x] = words
        return words

    def transport(self, x, y):
        if self.transporter is not None:
            return self.transporter(x, y)
        words = self.orbit_words(x)
        if y not in words:
            return None
        G = self.group
        return G.mul(words[y], G.inv(words[x]))

    def check(self, points: Iterable | None = None, elements: Iterable | None = None) -> None:
        """Verify ``e.x = x`` and ``(gh).x = g.(h.x)`` on the given data."""
        G = self.group
        pts = list(points if points is not None else (self.points or []))
        els = list(elements if elements is not None else G.generators)
        for x in pts:
            if self.act(G.identity, x) != x:
                raise ActionError(f"identity moves {x!r}")
            for g in els:
                for h in els:
                    if self.act(G.mul(g, h), x) != self.act(g, self.act(h, x)):
                        raise ActionError(f"action law fails for {g!r}, {h!r} at {x!r}")

    def to_json(self) -> dict:
        if self.points is None:
            raise ActionError("only actions on an explicit finite point set serialize")
        G = self.group
        table = [[g, x, self.act(g, x)] for g in G.generators for x in self.points]
        return {"group": G.to_json(), "points": list(self.points), "act": table}


def translation_action(d: int) -> GroupAction:
    """``Z^d`` acting on itself by translation."""
    G = FreeAbelianGroup(d)
    return GroupAction(G, lambda g, x: G.mul(g, x), transporter=lambda x, y: G.mul(y, G.inv(x)), name="translation")


def scaled_translation(factor: int) -> GroupAction:
    """``Z`` acting on ``Z`` by ``g.x = x + factor*g`` (``factor`` orbits)."""
    G = FreeAbelianGroup(1)

    def transporter(x, y):
        diff = y[0] - x[0]
        return (diff // factor,) if diff % factor == 0 else None

    return GroupAction(G, lambda g, x: (x[0] + factor * g[0],), transporter=transporter, name=f"translation by {factor}")


def regular_action(G: FiniteGroup) -> GroupAction:
    return GroupAction(G, lambda g, x: G.mul(g, x), points=G.elements, name="left multiplication")


def table_action(G, points: Sequence, table: Iterable) -> GroupAction:
    """Action given by ``[g, x, y]`` rows for the generators, extended along words."""
    pts = [_hashable(p) for p in points]
    gen_map: dict = {}
    for g, x, y in table:
        gen_map[(_hashable(G.element(g)), _hashable(x))] = _hashable(y)
    for s in G.generators:
        for x in pts:
            if (s, x) not in gen_map:
                raise ActionError(f"action table lacks generator {s!r} on point {x!r}")

    def act(g, x):
        if (g, x) in gen_map:
            return gen_map[(g, x)]
        if g == G.identity:
            return x
        raise ActionError(f"element {g!r} is not a generator; use words")

    A = GroupAction(G, act, points=pts, name="table")
    if isinstance(G, FiniteGroup):
        words = _finite_words(G)
        full = {}
        for g, word in words.items():
            for x in pts:
                y = x
                for s in reversed(word):
                    y = gen_map[(s, y)]
                full[(g, x)] = y
        A.act = lambda g, x: full[(g, x)]
        A.check(pts, G.elements)
    return A


def _finite_words(G: FiniteGroup) -> dict:
    words = {G.identity: ()}
    queue = deque([G.identity])
    while queue:
        g = queue.popleft()
        for s in G.generators:
            h = G.mul(s, g)
            if h not in words:
                words[h] = (s,) + words[g]
                queue.append(h)
    return words


def _hashable(x):
    if isinstance(x, list):
        return tuple(_hashable(a) for a in x)
    return x


def action_from_json(data: Mapping) -> GroupAction:
    G = group_from_json(data["group"])
    if data.get("act") == "translation":
        if not isinstance(G, FreeAbelianGroup):
            raise ActionError("translation action needs a Z^d group")
        return translation_action(G.d)
    return table_action(G, data["points"], data["act"])


__all__ = [
    "ActionError", "DirectSum", "FiniteGroup", "FreeAbelianGroup", "GroupAction", "GroupError", "Measure",
    "action_from_json", "convolve", "delta", "generator_defect", "group_from_json", "l1", "regular_action",
    "scaled_translation", "table_action", "translate_left", "translation_action", "uniform",
]
