"""Seeded property suites behind ``simvol verify``.

Every property is a function ``(rng, max_dim) -> None`` that raises
``AssertionError`` with a description on failure.  A suite runs each of its
properties ``trials`` times (exhaustive properties run once) and collects the
outcome per property.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Callable

from .chains import (
    AffineSimplex, Chain, EdgeSelector, alt, boundary, compose, face_chain, has_edge_in, l1_norm, norm_e, norm_ne,
    permute, restricted_norm,
)
from .complex import simplex_boundary, standard_simplex
from .diffusion import (
    amenable_inequality_check, box_measure, gromov_diffuse, multi_orbit_diffuse, orbit_sums, push,
)
from .edgestar import edge_star_decomposition, original_subedges
from .gluing import (
    TreeSimplex, connected_sum, fixed_complex_seminorm, subadditivity_pipeline, tree_common_vertex,
    two_annuli_toy,
)
from .groups import FreeAbelianGroup, generator_defect, l1, scaled_translation, translation_action, uniform
from .joins import EquatorialModel, beta, beta_of_boundary, eta, eta_simplex, meets_point
from .lp import in_convex_hull
from .patterns import count_by_subdivision, count_noedge_subdivided, expected_count, random_pattern
from .sampling import (
    marked_simplex, random_action, random_chain, random_function, random_nondegenerate_chain, random_tree,
)
from .seminorm import ClassSpec, fundamental_cycle, l1_seminorm, verify_certificate
from .subdivision import (
    BARYCENTRIC, IDENTITY, barycentric, chain_homotopy_to_identity, homotopy_defect,
    local_barycentric, local_barycentric_operator, partial_boundary, standard_local_subdivision, standard_subdivision,
)


@dataclass
class PropertyResult:
    name: str
    trials: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials, "pass": self.passed, "failures": self.failures[:5]}


@dataclass(frozen=True)
class Property:
    name: str
    check: Callable
    exhaustive: bool = False


def _eq(a, b, what: str):
    assert a == b, f"{what}: {a!r} != {b!r}"


def _le(a, b, what: str):
    assert a <= b, f"{what}: {a} > {b}"


# core


def _chain(rng, max_dim, low=0):
    n = rng.randint(max(1, low), max(1, max_dim))
    K = marked_simplex(n, rng)
    return random_chain(K, rng.randint(low, n), rng)


def prop_dd(rng, max_dim):
    c = _chain(rng, max_dim + 1, 2)
    _eq(boundary(boundary(c)), Chain(c.degree - 2), "∂∂c")


def prop_alt_chain_map(rng, max_dim):
    c = _chain(rng, max_dim, 1)
    _eq(alt(boundary(c)), boundary(alt(c)), "Alt∂ vs ∂Alt")


def prop_alt_idempotent(rng, max_dim):
    c = _chain(rng, max_dim)
    a = alt(c)
    _eq(alt(a), a, "Alt Alt")


def prop_alt_norms(rng, max_dim):
    c = _chain(rng, max_dim)
    a = alt(c)
    _le(l1_norm(a), l1_norm(c), "|Alt c|_1")
    _le(norm_ne(a, "Z"), norm_ne(c, "Z"), "|Alt c|^ne")


def prop_norm_partition(rng, max_dim):
    c = _chain(rng, max_dim)
    d = random_chain(next(iter(c)).complex, c.degree, rng)
    _eq(norm_e(c, "Z") + norm_ne(c, "Z"), l1_norm(c), "e + ne")
    _le(restricted_norm(c, EdgeSelector("n", "Z")), l1_norm(c), "|c|^n")
    _le(l1_norm(c + d), l1_norm(c) + l1_norm(d), "triangle inequality")


def prop_permute_composition(rng, max_dim):
    K = marked_simplex(3, rng)
    s = next(iter(random_chain(K, 3, rng, terms=1)))
    pi = tuple(rng.sample(range(4), 4))
    rho = tuple(rng.sample(range(4), 4))
    t, e1 = permute(s, pi)
    u, e2 = permute(t, rho)
    v, e3 = permute(s, compose(rho, pi))
    _eq((u, e1 * e2), (v, e3), "permute composition")


CORE = [
    Property("boundary squares to zero", prop_dd),
    Property("Alt is a chain map", prop_alt_chain_map),
    Property("Alt is idempotent", prop_alt_idempotent),
    Property("Alt does not increase l1 or ne norms", prop_alt_norms),
    Property("e/ne partition and triangle inequality", prop_norm_partition),
    Property("permutation composition law", prop_permute_composition),
]


# subdivision


def prop_claims(rng, max_dim):
    c = _chain(rng, max_dim + 1, 2)
    _eq(partial_boundary(partial_boundary(c, "Z"), "Z"), Chain(c.degree - 2), "∂_W∂_W")
    _eq(boundary(partial_boundary(c, "Z")), -partial_boundary(boundary(c), "Z"), "∂∂_W + ∂_W∂")


def prop_S_chain_map(rng, max_dim):
    c = _chain(rng, max_dim, 1)
    _eq(boundary(barycentric(c)), barycentric(boundary(c)), "∂S vs S∂")


def prop_SZ_chain_map(rng, max_dim):
    c = _chain(rng, max_dim, 1)
    _eq(boundary(local_barycentric(c, "Z")), local_barycentric(boundary(c), "Z"), "∂S_Z vs S_Z∂")


def prop_SZ_ne_norm(rng, max_dim):
    c = random_nondegenerate_chain(rng, max_dim)
    sz = local_barycentric(c, "Z")
    _le(norm_ne(sz, "Z"), norm_ne(c, "Z"), "|S_Z c|^ne")
    for s in c:
        survivors = sum(1 for t in local_barycentric(Chain.of(s), "Z") if not has_edge_in(t, "Z"))
        _eq(survivors, 0 if has_edge_in(s, "Z") else 1, f"ne survivors of {s!r}")


def prop_SZ_bijection(rng, max_dim):
    """``τ -> τ_W`` maps ``supp S_W Δ^k`` bijectively onto ``supp S Δ^k_W``."""
    for k in range(max_dim + 1):
        for r in range(1, k + 2):
            for W in combinations(range(k + 1), r):
                W = frozenset(W)
                src = [pts for pts, _ in standard_local_subdivision(k, W)]
                img = []
                for pts in src:
                    img.append(tuple(p for p in pts if all(p[t] == 0 for t in range(k + 1) if t not in W)))
                Wl = sorted(W)
                target = {tuple(tuple(q[Wl.index(t)] if t in W else Fraction(0) for t in range(k + 1)) for q in pts)
                          for pts, _ in standard_subdivision(len(W) - 1)}
                _eq(len(set(img)), len(src), f"τ -> τ_W injective on Δ^{k}, W={sorted(W)}")
                _eq(set(img), target, f"τ_W image on Δ^{k}, W={sorted(W)}")


def prop_homotopy(rng, max_dim):
    for T in (IDENTITY, BARYCENTRIC, local_barycentric_operator("Z")):
        P = chain_homotopy_to_identity(T, max_dim)
        for n in range(max_dim + 1):
            for Z in _all_marks(n):
                K = standard_simplex(n, {"Z": Z})
                c = Chain.of(AffineSimplex.cell(K, list(K.cells_of_dim(n))[0]))
                _eq(homotopy_defect(P, T, c), Chain(n), f"∂P + P∂ - {T.name} + Id on Δ^{n} with Z={Z}")


def _all_marks(n: int):
    """Marks spanned by a vertex subset, one per subset (functoriality covers the rest)."""
    out = []
    for r in range(n + 2):
        for W in combinations(range(n + 1), r):
            out.append([F for q in range(1, r + 1) for F in combinations(W, q)])
    return out


def prop_counting(rng, max_dim):
    k = rng.randint(1, min(3, max(1, max_dim)))
    p = random_pattern(k, rng)
    got = count_noedge_subdivided(p)
    _eq(got, expected_count(p), f"colour count for {p.to_json()}")
    _eq(count_by_subdivision(p), got, "count by explicit subdivision")


def prop_edge_star(rng, max_dim):
    for N in (1, 2):
        for n in range(2, min(max_dim, 4) + 1):
            for e in original_subedges(N, n):
                es = edge_star_decomposition(N, n, e)
                assert es.ok, f"edge star N={N} n={n}: {es.defects[:2]}"
                _eq(len(es.star), factorial(n - 1) ** N, "star size")


def _disk_point(model: EquatorialModel, rng) -> tuple:
    d = model.d
    if rng.random() < 0.15:
        return model.center
    w = [rng.randint(0, 3) for _ in range(d + 1)]
    if not any(w):
        w[0] = 1
    mid, t = w[:d], w[d]
    s = sum(mid) + 2 * t
    return (Fraction(t, s),) + tuple(Fraction(x, s) for x in mid) + (Fraction(t, s),)


def random_equatorial_chain(rng, degree: int, model: EquatorialModel | None = None, terms: int = 3) -> Chain:
    model = model or EquatorialModel(rng.randint(max(1, degree), 3))
    items = []
    for _ in range(rng.randint(1, terms)):
        items.append((model.simplex([_disk_point(model, rng) for _ in range(degree + 1)]),
                      Fraction(rng.randint(-4, 4) or 1, rng.randint(1, 3))))
    return Chain(degree, items)


def prop_beta_eta(rng, max_dim):
    deg = rng.randint(0, 2)
    model = EquatorialModel(rng.randint(max(1, deg), 3))
    c = random_equatorial_chain(rng, deg, model)
    b = beta(c, model)
    _eq(b.degree, c.degree + 2, "deg β")
    _eq(boundary(b), face_chain(b, 0) - face_chain(b, 1) + beta_of_boundary(c, model), "∂β identity")
    _eq(len(b), len(c), "β injective")
    e = eta(c, model)
    _eq(e.degree, c.degree + 1, "deg η")
    _eq(len(e), len(c), "η support count")
    if deg >= 1:
        d0 = face_chain(c, 0)
        _eq(face_chain(e, 0), face_chain(beta(d0, model), 0), "∂₀η = ∂₀β∂₀")
        _eq(face_chain(e, 1), face_chain(beta(d0, model), 1), "∂₁η = ∂₁β∂₀")
        for i in range(2, deg + 2):
            _eq(face_chain(e, i), eta(face_chain(c, i - 1), model), f"∂_{i}η = η∂_{i - 1}")
        rest = boundary(c) - d0
        glob = boundary(e) + eta(rest, model) - (boundary(beta(d0, model)) - beta_of_boundary(d0, model))
        _eq(glob, Chain(deg), "global η identity")
    for s in c:
        if not in_convex_hull(model.center, model.coords(s)):
            assert not meets_point(eta_simplex(model, s), model.center, model), f"η{s!r} meets the center"


SUBDIVISION = [
    Property("partial boundary claims", prop_claims),
    Property("S is a chain map", prop_S_chain_map),
    Property("S_Z is a chain map", prop_SZ_chain_map),
    Property("S_Z ne-norm bound and survivor count", prop_SZ_ne_norm),
    Property("τ -> τ_W bijection", prop_SZ_bijection, exhaustive=True),
    Property("chain homotopies for Id, S, S_Z", prop_homotopy, exhaustive=True),
    Property("counting lemma on random patterns", prop_counting),
    Property("edge-star decomposition", prop_edge_star, exhaustive=True),
    Property("β and η identities", prop_beta_eta),
]


# diffusion


def prop_push(rng, max_dim):
    A, pt = random_action(rng)
    f = random_function(rng, pt)
    G = A.group
    mu = box_measure(G, rng.randint(1, 4)) if isinstance(G, FreeAbelianGroup) else uniform(G, rng.sample(
        G.elements, rng.randint(1, len(G.elements))))
    g = push(mu, f, A)
    _le(l1(g), l1(f), "|mu*f|_1")
    _eq(sum(g.values(), Fraction(0)), sum(f.values(), Fraction(0)), "orbit sum")


def prop_gromov(rng, max_dim):
    A, pt = random_action(rng)
    f = random_function(rng, pt, size=3)
    eps = Fraction(1, rng.randint(2, 8))
    mu = gromov_diffuse(f, A, eps)
    _le(l1(push(mu, f, A)), eps + abs(sum(f.values(), Fraction(0))), "gromov bound")


def prop_multi_orbit(rng, max_dim):
    m = rng.randint(2, 3)
    A = scaled_translation(m)
    f = random_function(rng, lambda: (rng.randint(-4, 4),), size=5)
    eps = Fraction(1, rng.randint(2, 6))
    mu = multi_orbit_diffuse(f, A, eps)
    bound = eps + sum((abs(t) for _, t in orbit_sums(f, A)), Fraction(0))
    _le(l1(push(mu, f, A)), bound, "multi-orbit bound")


def prop_amenable(rng, max_dim):
    d = rng.randint(1, 2)
    G = FreeAbelianGroup(d)
    L = rng.randint(2, 12 if d == 2 else 40)
    mu = box_measure(G, L)
    rho = {}
    for _ in range(rng.randint(1, 3)):
        g = tuple(rng.randint(-3, 3) for _ in range(d))
        rho[g] = rho.get(g, Fraction(0)) + Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    h = tuple(rng.randint(-3, 3) for _ in range(d))
    rho[h] = rho.get(h, Fraction(0)) - sum(rho.values(), Fraction(0))
    assert amenable_inequality_check(rho, mu, generator_defect(mu)), "amenable inequality"


def prop_folner(rng, max_dim):
    d = rng.randint(1, 2)
    L = rng.randint(1, 30 if d == 1 else 12)
    _eq(generator_defect(box_measure(FreeAbelianGroup(d), L)), Fraction(2, L), "box defect")


def prop_two_point(rng, max_dim):
    d = rng.randint(1, 6)
    L = rng.randint(d, 40)
    A = translation_action(1)
    a = rng.randint(-5, 5)
    g = push(box_measure(A.group, L), {(a,): 1, (a + d,): -1}, A)
    _eq(l1(g), Fraction(2 * d, L), "two-point diffusion")


DIFFUSION = [
    Property("push contracts l1 and keeps sums", prop_push),
    Property("Gromov diffusion bound", prop_gromov),
    Property("multi-orbit bound", prop_multi_orbit),
    Property("amenable inequality", prop_amenable),
    Property("Følner box defect 2/L", prop_folner),
    Property("two-point diffusion 2d/L", prop_two_point),
]


# lp


def lp_instances():
    """Small complexes with a known class: ``(name, complex, degree, cycle, relative)``."""
    from .gluing import annulus
    from .complex import Cell, DeltaComplex, _label, simplicial
    S2 = simplex_boundary(3)
    out = [("∂Δ³", S2, 2, fundamental_cycle(S2), None)]
    D = standard_simplex(3)
    top = list(D.cells_of_dim(3))[0]
    out.append(("solid Δ³", D, 2, boundary(Chain.of(AffineSimplex.cell(D, top))), None))
    # S^3 minus two open tetrahedra that share the triangle 123, which is kept
    shell = simplicial([F for F in combinations(range(5), 4) if F not in ((0, 1, 2, 3), (1, 2, 3, 4))] + [(1, 2, 3)])
    hole = [((1, 2, 3), 1), ((0, 2, 3), -1), ((0, 1, 3), 1), ((0, 1, 2), -1)]
    out.append(("S²×I", shell, 2, _cellular(shell, {_label(v): a for v, a in hole}), None))
    A = annulus(3)
    out.append(("annulus rel ∂", A, 2, fundamental_cycle(A, 2, "Y"), "Y"))
    T = DeltaComplex([Cell("v", 0, ()), Cell("a", 1, ("v", "v")), Cell("b", 1, ("v", "v")),
                      Cell("c", 1, ("v", "v")), Cell("U", 2, ("b", "c", "a")), Cell("L", 2, ("a", "c", "b"))])
    out.append(("torus", T, 1, _cellular(T, {"a": 1}), None))
    return out


def _cellular(K, coeffs):
    from .chains import cellular
    return cellular(K, coeffs)


def _random_upper(rng, K, k):
    cells = sorted(K.cells_of_dim(k + 1))
    if not cells:
        return None
    coeffs = {c: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for c in rng.sample(cells, min(3, len(cells)))}
    coeffs = {c: a for c, a in coeffs.items() if a}
    return _cellular(K, coeffs) if coeffs else None


def prop_lp_invariance(rng, max_dim):
    name, K, k, z, rel = rng.choice(lp_instances())
    query = ClassSpec(K, k, z, rel)
    base = l1_seminorm(query)
    assert verify_certificate(base, query), f"certificate fails on {name}"
    y = _random_upper(rng, K, k)
    z2 = z + boundary(y) if y is not None else z
    lam = Fraction(rng.randint(-5, 5) or 2, rng.randint(1, 4))
    for w, expect in ((z2, base.value), (z * lam, abs(lam) * base.value)):
        s = ClassSpec(K, k, w, rel)
        cert = l1_seminorm(s)
        assert verify_certificate(cert, s), f"certificate fails on perturbed {name}"
        _eq(cert.value, expect, f"value on {name}")
    _le(base.value, l1_norm(z), "value <= |z|_1")


LP = [Property("seminorm invariance, homogeneity and certificates", prop_lp_invariance)]


# gluing


def brute_common_vertices(s: TreeSimplex) -> set:
    common = None
    for x, y in combinations(s.vertices, 2):
        path = set(s.tree.geodesic(x, y))
        common = path if common is None else common & path
    return common


def prop_tree(rng, max_dim):
    T = random_tree(rng, rng.randint(1, 50))
    k = rng.randint(2, max(2, max_dim + 1))
    s = TreeSimplex(T, tuple(rng.choice(T.vertices) for _ in range(k + 1)))
    brute = brute_common_vertices(s)
    assert len(brute) <= 1, f"{len(brute)} common vertices"
    got = tree_common_vertex(s)
    _eq(got, next(iter(brute)) if brute else None, "common vertex")


def prop_pipeline(rng, max_dim):
    m = rng.randint(3, 5)
    K1, K2, f, c1, c2 = two_annuli_toy(m)
    eps = Fraction(1, rng.randint(2, 200))
    _, report = subadditivity_pipeline(K1, K2, f, c1, c2, eps=eps)
    assert report["bound_ok"], "pipeline bound"
    bad = [c["name"] for c in report["checks"] if not c["holds"]]
    assert not bad, f"ledger fails: {bad}"


def prop_consum(rng, max_dim):
    S = simplex_boundary(3)
    G = connected_sum(S, S)
    _eq([len(G.cells_of_dim(i)) for i in range(3)], [5, 9, 6], "f-vector")
    _eq(fixed_complex_seminorm(G), 6, "seminorm")


GLUING = [
    Property("tree common vertex", prop_tree),
    Property("two-annuli pipeline", prop_pipeline),
    Property("connected sum of tetrahedron boundaries", prop_consum, exhaustive=True),
]

SUITES = {"core": CORE, "subdivision": SUBDIVISION, "diffusion": DIFFUSION, "lp": LP, "gluing": GLUING}


def run_suite(name: str, trials: int = 20, seed: int = 0, max_dim: int = 3) -> list:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for n in names:
        for i, prop in enumerate(SUITES[n]):
            rng = random.Random(f"{seed}:{n}:{i}")
            count = 1 if prop.exhaustive else trials
            res = PropertyResult(f"{n}: {prop.name}", count)
            for t in range(count):
                try:
                    prop.check(rng, max_dim)
                except AssertionError as exc:
                    res.failures.append(f"trial {t}: {exc}")
            results.append(res)
    return results


__all__ = ["Property", "PropertyResult", "SUITES", "brute_common_vertices", "lp_instances", "random_equatorial_chain",
           "run_suite"]
