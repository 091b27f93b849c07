"""Følner measures and diffusion of finitely supported functions along group orbits."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import ceil, lcm
from typing import Mapping

from .chains import Chain, ZERO, has_edge_in, permute
from .groups import (
    ActionError, DirectSum, FiniteGroup, FreeAbelianGroup, GroupAction, GroupError, Measure, convolve, delta,
    generator_defect, l1, translate_left, uniform,
)

BOX_LIMIT = 4_000_000


class DiffusionError(RuntimeError):
    """The search schedule did not reach the required bound."""


class NotTransitive(ValueError):
    pass


class OrbitSumError(ValueError):
    def __init__(self, orbit, total):
        self.orbit = orbit
        self.total = total
        super().__init__(f"orbit {orbit!r} has coefficient sum {total}, cancellation needs 0")


def push(mu: Measure, f: Mapping, action: GroupAction) -> dict:
    """``(mu * f)(x) = sum_g mu(g) f(g^{-1} x)``."""
    if mu.group != action.group:
        raise GroupError("measure and action use different groups")
    if not f:
        return {}
    dm = lcm(*(w.denominator for w in mu.weights.values()))
    df = lcm(*(Fraction(a).denominator for a in f.values()))
    mi = [(g, w.numerator * (dm // w.denominator)) for g, w in mu.weights.items()]
    fi = [(y, Fraction(a).numerator * (df // Fraction(a).denominator)) for y, a in f.items()]
    acc: dict = {}
    act = action.act
    for g, w in mi:
        for y, a in fi:
            x = act(g, y)
            acc[x] = acc.get(x, 0) + w * a
    D = dm * df
    return {x: Fraction(v, D) for x, v in acc.items() if v}


def box_measure(G, L: int) -> Measure:
    """Uniform on ``[0, L)^d`` in every free abelian part, uniform on finite parts."""
    if isinstance(G, FreeAbelianGroup):
        if L ** G.d > BOX_LIMIT:
            raise DiffusionError(f"box of side {L} in Z^{G.d} exceeds {BOX_LIMIT} elements")
        return uniform(G, product(range(L), repeat=G.d))
    if isinstance(G, FiniteGroup):
        return uniform(G, G.elements)
    if isinstance(G, DirectSum):
        parts = [box_measure(H, L) for H in G.components]
        w: dict = {(): Fraction(1)}
        for m in parts:
            w = {g + (h,): a * b for g, a in w.items() for h, b in m.weights.items()}
        return Measure(G, w)
    raise GroupError(f"no Følner construction for {G!r}")


def folner_side(eps: Fraction) -> int:
    return ceil(Fraction(2) / Fraction(eps))


def folner_measure(G, eps) -> Measure:
    """Measure whose shift by every generator moves it by at most ``eps`` in ``l1``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    return box_measure(G, folner_side(eps))


def orbit_sums(f: Mapping, action: GroupAction) -> list:
    """Orbits meeting ``supp f`` (as sorted point lists) with the sum of ``f`` over each."""
    reps: list = []
    for x in sorted((x for x, a in f.items() if a), key=repr):
        for r in reps:
            if action.transport(r[0], x) is not None:
                r[1].append(x)
                break
        else:
            reps.append((x, [x]))
    return [(pts, sum((Fraction(f[p]) for p in pts), ZERO)) for _, pts in reps]


def _max_distance(points: list, action: GroupAction) -> int:
    G = action.group
    best = 0
    for x, y in combinations(points, 2):
        g = action.transport(x, y)
        if g is None:
            raise NotTransitive(f"{x!r} and {y!r} lie in different orbits; use multi_orbit_diffuse")
        best = max(best, G.word_length(g))
    return best


def gromov_diffuse(f: Mapping, action: GroupAction, eps, max_doublings: int = 16) -> Measure:
    """``mu`` with ``|mu * f|_1 <= eps + |sum f|`` for ``f`` supported in one orbit."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    G = action.group
    f = {x: Fraction(a) for x, a in f.items() if a}
    target = eps + abs(sum(f.values(), ZERO))
    pts = sorted(f, key=repr)
    dist = _max_distance(pts, action)
    if l1(f) <= target:
        return delta(G)
    L = folner_side(eps / (l1(f) * dist + 1))
    for _ in range(max_doublings + 1):
        mu = box_measure(G, L)
        if l1(push(mu, f, action)) <= target:
            return mu
        if isinstance(G, FiniteGroup):
            break
        L *= 2
    raise DiffusionError(f"no measure reached |mu*f|_1 <= {target} (last box side {L})")


def multi_orbit_diffuse(f: Mapping, action: GroupAction, eps) -> Measure:
    """Sequential diffusion with budget ``eps/N`` per orbit; ``mu = mu_N * ... * mu_1``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    G = action.group
    orbits = orbit_sums(f, action)
    mu = delta(G)
    cur = {x: Fraction(a) for x, a in f.items() if a}
    if not orbits:
        return mu
    share = eps / len(orbits)
    for pts, _ in orbits:
        members = _orbit_members(pts, cur, action)
        part = {x: cur[x] for x in members}
        mk = gromov_diffuse(part, action, share)
        if len(mk) > 1 or mk.support != [G.identity]:
            cur = push(mk, cur, action)
            mu = convolve(mk, mu)
    bound = eps + sum((abs(t) for _, t in orbits), ZERO)
    if l1(push(mu, f, action)) > bound:
        raise DiffusionError("combined measure misses the orbit-sum bound")
    return mu


def _orbit_members(pts: list, cur: Mapping, action: GroupAction) -> list:
    r = pts[0]
    return [x for x in cur if x == r or action.transport(r, x) is not None]


@dataclass(frozen=True)
class InequalityCheck:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def __bool__(self):
        return self.holds


def amenable_inequality_check(rho: Mapping, mu: Measure, eps) -> InequalityCheck:
    """Compare ``|rho . mu|_1`` with ``eps * |rho|_1 * max |g_i|`` for a zero-sum ``rho``."""
    eps = Fraction(eps)
    G = mu.group
    rho = {g: Fraction(a) for g, a in rho.items() if a}
    if sum(rho.values(), ZERO) != 0:
        raise ValueError("coefficients of rho must sum to zero")
    if generator_defect(mu) > eps:
        raise ValueError(f"measure has generator defect {generator_defect(mu)} > {eps}")
    out: dict = {}
    for g, a in rho.items():
        for h, w in translate_left(G, g, mu.weights).items():
            out[h] = out.get(h, ZERO) + a * w
    lhs = l1(out)
    rhs = eps * l1(rho) * max((G.word_length(g) for g in rho), default=0)
    return InequalityCheck(lhs, rhs)


def chain_function(c: Chain, mark: str) -> tuple:
    """Split ``c`` into its ``e(mark)`` part (a dict) and its ``ne(mark)`` part (a chain)."""
    e, ne = {}, {}
    for s, a in c.items():
        (e if has_edge_in(s, mark) else ne)[s] = a
    return e, Chain._raw(c.degree, ne)


def diffuse_chain(c: Chain, action: GroupAction, eps, mark: str = "Z", return_measure: bool = False):
    """Diffuse the ``e(mark)`` coefficients of ``c``; ``|result|_1 <= |c|^{ne} + eps``."""
    eps = Fraction(eps)
    e, ne = chain_function(c, mark)
    G = action.group
    for s in e:
        for g in G.generators:
            if not has_edge_in(action.act(g, s), mark):
                raise ActionError(f"action moves {s!r} out of e({mark})")
    for pts, total in orbit_sums(e, action):
        if total != 0:
            raise OrbitSumError(pts, total)
    mu = multi_orbit_diffuse(e, action, eps)
    moved = push(mu, e, action)
    out = dict(ne.items())
    for s, a in moved.items():
        out[s] = out.get(s, ZERO) + a
    res = Chain._raw(c.degree, out)
    if res.l1 > ne.l1 + eps:
        raise DiffusionError("diffused chain exceeds |c|^ne + eps")
    return (res, mu) if return_measure else res


def _swap_key(s, mark: str):
    best = None
    for i, j in combinations(range(s.dim + 1), 2):
        if s.edge_cell(i, j) in s.complex.mark(mark):
            key = (tuple(sorted((s.coords[i], s.coords[j]))), (i, j))
            if best is None or key < best:
                best = key
    return best


def edge_swap_action(mark: str = "Z") -> GroupAction:
    """``Z/2`` acting on simplices by swapping the endpoints of the least Z-edge.

    The least edge is chosen by its pair of endpoint points, so the swap is an
    involution; simplices without Z-edges are fixed.
    """
    G = FiniteGroup.cyclic(2)

    def swap(s):
        best = _swap_key(s, mark)
        if best is None:
            return s
        i, j = best[1]
        p = list(range(s.dim + 1))
        p[i], p[j] = j, i
        return permute(s, p)[0]

    def act(g, s):
        if g == 0:
            return s
        t = swap(s)
        if swap(t) != s:
            raise ActionError(f"edge swap is not an involution on {s!r}")
        return t

    return GroupAction(G, act, name=f"edge swap in {mark}")


__all__ = [
    "DiffusionError", "InequalityCheck", "NotTransitive", "OrbitSumError", "amenable_inequality_check",
    "box_measure", "chain_function", "diffuse_chain", "edge_swap_action", "folner_measure", "folner_side",
    "gromov_diffuse", "multi_orbit_diffuse", "orbit_sums", "push",
]
