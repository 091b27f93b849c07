from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import box_two_point_norm
from simvol.chains import AffineSimplex, Chain, l1_norm
from simvol.complex import standard_simplex
from simvol.diffusion import (
    DiffusionError, NotTransitive, OrbitSumError, amenable_inequality_check, box_measure, diffuse_chain,
    edge_swap_action, folner_measure, gromov_diffuse, multi_orbit_diffuse, orbit_sums, push,
)
from simvol.groups import (
    ActionError, DirectSum, FiniteGroup, FreeAbelianGroup, GroupError, Measure, action_from_json, convolve, delta,
    generator_defect, group_from_json, l1, regular_action, scaled_translation, table_action, translation_action,
    uniform,
)
from simvol.sampling import random_finite_group

F = Fraction


def random_measure(G, rng):
    els = rng.sample(G.elements, rng.randint(1, min(4, len(G.elements))))
    raw = [rng.randint(1, 5) for _ in els]
    return Measure(G, {g: F(w, sum(raw)) for g, w in zip(els, raw)})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_convolution_laws(seed):
    rng = random.Random(seed)
    G = random_finite_group(rng, 24)
    a, b, c = (random_measure(G, rng) for _ in range(3))
    assert convolve(delta(G), a) == a == convolve(a, delta(G))
    assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))
    g, h = rng.choice(G.elements), rng.choice(G.elements)
    assert convolve(delta(G, g), delta(G, h)) == delta(G, G.mul(g, h))


def test_measure_validation():
    G = FiniteGroup.cyclic(3)
    with pytest.raises(GroupError):
        Measure(G, {0: F(1, 2)})
    with pytest.raises(GroupError):
        Measure(G, {0: 2, 1: -1})
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1], [1, 1]])


def test_push_examples():
    A = translation_action(1)
    mu = uniform(A.group, [(0,), (1,)])
    assert push(mu, {(0,): 1}, A) == {(0,): F(1, 2), (1,): F(1, 2)}
    assert push(mu, {(0,): 1, (1,): -1}, A) == {(0,): F(1, 2), (2,): F(-1, 2)}
    assert push(delta(A.group), {(5,): 3}, A) == {(5,): 3}
    G = FiniteGroup.cyclic(4)
    assert push(box_measure(G, 1), {0: 1, 2: -1}, regular_action(G)) == {}


def test_folner_boxes():
    Z = FreeAbelianGroup(1)
    mu = folner_measure(Z, F(1, 2))
    assert sorted(mu.support) == [(0,), (1,), (2,), (3,)]
    assert generator_defect(mu) == F(1, 2)
    Z2 = FreeAbelianGroup(2)
    mu = folner_measure(Z2, F(1, 5))
    assert len(mu) == 100 and generator_defect(mu) == F(1, 5)
    with pytest.raises(ValueError):
        folner_measure(Z, 0)


@pytest.mark.parametrize("d,L", [(1, 1), (1, 5), (3, 3), (3, 10), (7, 20)])
def test_two_point_box(d, L):
    A = translation_action(1)
    got = l1(push(box_measure(A.group, L), {(0,): 1, (d,): -1}, A))
    assert got == box_two_point_norm(d, L) == F(2 * d, L)


def test_two_point_box_short_side():
    # with L < d the translates do not overlap and nothing cancels
    A = translation_action(1)
    assert l1(push(box_measure(A.group, 2), {(0,): 1, (5,): -1}, A)) == box_two_point_norm(5, 2) == 2


def test_gromov_examples():
    A = translation_action(1)
    eps = F(1, 10)
    f = {(0,): 1, (4,): -1}
    mu = gromov_diffuse(f, A, eps)
    assert l1(push(mu, f, A)) <= eps
    assert gromov_diffuse({(3,): 1}, A, eps) == delta(A.group)
    assert gromov_diffuse({}, A, eps) == delta(A.group)
    with pytest.raises(NotTransitive):
        gromov_diffuse({(0,): 1, (1,): -1}, scaled_translation(2), eps)


def test_gromov_finite_group_cancels():
    G = FiniteGroup.symmetric(3)
    A = regular_action(G)
    f = {G.elements[0]: F(2), G.elements[3]: F(-2)}
    assert l1(push(gromov_diffuse(f, A, F(1, 100)), f, A)) == 0


def test_multi_orbit():
    A = scaled_translation(2)
    f = {(0,): 1, (6,): -1, (1,): 2, (3,): -1}
    sums = dict((tuple(p), t) for p, t in orbit_sums(f, A))
    assert sums == {((0,), (6,)): 0, ((1,), (3,)): 1}
    eps = F(1, 4)
    mu = multi_orbit_diffuse(f, A, eps)
    assert l1(push(mu, f, A)) <= eps + 1


def test_orbit_sums_against_residues():
    rng = random.Random(11)
    for _ in range(50):
        m = rng.randint(1, 4)
        f = {(rng.randint(-9, 9),): F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(6)}
        f = {x: a for x, a in f.items() if a}
        brute: dict = {}
        for x, a in f.items():
            brute[x[0] % m] = brute.get(x[0] % m, 0) + a
        got = {pts[0][0] % m: t for pts, t in orbit_sums(f, scaled_translation(m))}
        assert got == brute


def test_amenable_examples():
    Z = FreeAbelianGroup(1)
    for L in (2, 5, 17):
        mu = box_measure(Z, L)
        chk = amenable_inequality_check({(0,): 1, (3,): -1}, mu, F(2, L))
        assert chk.holds and chk.rhs == F(2, L) * 2 * 3
    with pytest.raises(ValueError):
        amenable_inequality_check({(0,): 1}, box_measure(Z, 3), F(2, 3))
    with pytest.raises(ValueError):
        amenable_inequality_check({(0,): 1, (1,): -1}, box_measure(Z, 3), F(1, 3))


def test_box_limit():
    with pytest.raises(DiffusionError):
        box_measure(FreeAbelianGroup(3), 10 ** 4)


def _edge_module():
    K = standard_simplex(2, {"Z": [(0, 1)]})
    v = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    s = AffineSimplex.make(K, "0,1,2", [v[0], v[1], v[2]])
    t = AffineSimplex.make(K, "0,1,2", [v[1], v[0], v[2]])
    u = AffineSimplex.make(K, "0,1,2", [v[2], v[2], (0, F(1, 2), F(1, 2))])
    return K, s, t, u


def test_edge_swap_action_is_involution():
    K, s, t, u = _edge_module()
    A = edge_swap_action("Z")
    assert A.act(1, s) == t and A.act(1, t) == s
    assert A.act(1, u) == u and A.act(0, s) == s


def test_diffuse_chain_cancels_orbits():
    K, s, t, u = _edge_module()
    c = Chain(2, [(s, 1), (t, -1), (u, F(3, 2))])
    out = diffuse_chain(c, edge_swap_action("Z"), F(1, 50))
    assert out == Chain.of(u, F(3, 2))
    assert l1_norm(out) <= F(3, 2) + F(1, 50)


def test_diffuse_chain_rejects_nonzero_orbit_sum():
    K, s, t, u = _edge_module()
    with pytest.raises(OrbitSumError):
        diffuse_chain(Chain.of(s), edge_swap_action("Z"), F(1, 10))


def test_action_json():
    A = action_from_json({"group": {"kind": "Zd", "d": 1}, "act": "translation"})
    assert A.act((2,), (3,)) == (5,)
    G = FiniteGroup.cyclic(2)
    B = table_action(G, ["a", "b"], [[1, "a", "b"], [1, "b", "a"]])
    assert B.act(1, "a") == "b"
    C = action_from_json(B.to_json())
    assert C.act(1, "b") == "a"
    with pytest.raises(ActionError):
        table_action(G, ["a", "b"], [[1, "a", "b"]])
    with pytest.raises(ActionError):
        action_from_json({"group": G.to_json(), "act": "translation"})


def test_group_json_round_trip():
    for G in (FreeAbelianGroup(2), FiniteGroup.symmetric(3), DirectSum([FreeAbelianGroup(1), FiniteGroup.cyclic(3)])):
        assert group_from_json(G.to_json()) == G
    with pytest.raises(GroupError):
        group_from_json({"kind": "free"})


def test_direct_sum_box():
    G = DirectSum([FreeAbelianGroup(1), FiniteGroup.cyclic(3)])
    mu = box_measure(G, 4)
    assert len(mu) == 12 and generator_defect(mu) == F(1, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_push_is_contraction(seed):
    rng = random.Random(seed)
    G = random_finite_group(rng, 30)
    A = regular_action(G)
    f = {rng.choice(G.elements): F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(4)}
    mu = random_measure(G, rng)
    g = push(mu, f, A)
    assert l1(g) <= l1(f)
    assert sum(g.values(), F(0)) == sum(f.values(), F(0))
