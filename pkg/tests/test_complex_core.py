from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from simvol.chains import (
    AffineSimplex, Chain, DegreeUnderflow, EdgeSelector, alt, boundary, cellular, chain_from_json, chain_to_json,
    compose, is_Z_nondegenerate, l1_norm, norm_e, norm_ne, permute, restricted_norm,
)
from simvol.complex import Cell, ComplexError, DeltaComplex, UnknownMark, parse_rational, simplex_boundary, \
    standard_simplex
from simvol.sampling import marked_simplex, random_chain

F = Fraction


@pytest.mark.parametrize("text,value", [("3/4", F(3, 4)), ("-2", F(-2)), (" 1/100 ", F(1, 100)), ([6, 8], F(3, 4)),
                                        (5, F(5))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e-3", "abc", "1/0"])
def test_parse_rational_rejects(text):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(text)


def test_bad_face_identity_raises():
    cells = [Cell("a", 0, ()), Cell("b", 0, ()), Cell("c", 0, ()),
             Cell("ab", 1, ("b", "a")), Cell("bc", 1, ("c", "b")), Cell("ac", 1, ("c", "a")),
             # faces listed in the wrong order: d1 d0 should equal d0 d1 shifted
             Cell("t", 2, ("ab", "ac", "bc"))]
    with pytest.raises(ComplexError, match="face identity"):
        DeltaComplex(cells)


@pytest.mark.parametrize("cells,msg", [
    ([Cell("a", 0, ("x",))], "no faces"),
    ([Cell("a", 0, ()), Cell("e", 1, ("a",))], "needs 2 faces"),
    ([Cell("a", 0, ()), Cell("e", 1, ("a", "z"))], "unknown face"),
])
def test_validation_errors(cells, msg):
    with pytest.raises(ComplexError, match=msg):
        DeltaComplex(cells)


def test_mark_must_be_face_closed():
    K = standard_simplex(1)
    with pytest.raises(ComplexError, match="face-closed"):
        DeltaComplex(K.cells.values(), {"Z": ["0,1"]})
    with pytest.raises(UnknownMark):
        K.mark("Z")


def test_complex_json_round_trip():
    K = simplex_boundary(3, {"Z": [(0, 1)]})
    L = DeltaComplex.from_json(K.to_json())
    assert L.cells == K.cells and L.marks == K.marks


def test_boundary_of_edge():
    K = standard_simplex(1)
    e = AffineSimplex.cell(K, "0,1")
    assert boundary(Chain.of(e)) == Chain.of(AffineSimplex.cell(K, "1")) - Chain.of(AffineSimplex.cell(K, "0"))


def test_sphere_fundamental_cycle_closes():
    K = simplex_boundary(3)
    z = cellular(K, {"1,2,3": 1, "0,2,3": -1, "0,1,3": 1, "0,1,2": -1})
    assert len(z) == 4
    assert not boundary(z)
    # 12 face terms cancel in pairs
    assert sum(1 for s in z for _ in range(3)) == 12


def test_boundary_of_point_raises():
    K = standard_simplex(0)
    with pytest.raises(DegreeUnderflow):
        boundary(Chain.of(AffineSimplex.cell(K, "0")))


def test_l1_norm_and_alt():
    K = standard_simplex(2)
    s = AffineSimplex.cell(K, "0,1,2")
    t = AffineSimplex.make(K, "0,1,2", [(1, 0, 0), (0, 1, 0), (F(1, 3), F(1, 3), F(1, 3))])
    assert l1_norm(2 * Chain.of(s) - 3 * Chain.of(t)) == 5
    a = alt(Chain.of(s))
    assert len(a) == 6 and l1_norm(a) == 1
    assert all(abs(c) == F(1, 6) for _, c in a.items())
    p = (1, 0, 0)
    assert not alt(Chain.of(AffineSimplex.make(K, "0,1,2", [p, p])))


def test_canonical_carrier():
    K = standard_simplex(2)
    s = AffineSimplex.make(K, "0,1,2", [(1, 0, 0), (0, 1, 0)])
    assert s == AffineSimplex.cell(K, "0,1")


def test_selectors_one_marked_edge():
    K = standard_simplex(2, {"Z": [(0, 1)]})
    s = Chain.of(AffineSimplex.cell(K, "0,1,2"), F(-3, 2))
    assert norm_e(s, "Z") == l1_norm(s) == F(3, 2)
    assert norm_ne(s, "Z") == 0
    assert restricted_norm(s, EdgeSelector("n", "Z")) == F(3, 2)
    with pytest.raises(ValueError):
        EdgeSelector("x", "Z")


def test_selectors_partition():
    rng = random.Random(4)
    for _ in range(50):
        K = marked_simplex(rng.randint(1, 3), rng)
        c = random_chain(K, rng.randint(0, K.dim), rng)
        assert norm_e(c, "Z") + norm_ne(c, "Z") == l1_norm(c)


def test_permute_example():
    K = standard_simplex(2)
    s = AffineSimplex.cell(K, "0,1,2")
    t, sign = permute(s, (1, 0, 2))
    assert sign == -1
    assert t.coords == (s.coords[1], s.coords[0], s.coords[2])
    with pytest.raises(ValueError):
        permute(s, (0, 0, 1))


def test_permute_composition_exhaustive_s4():
    K = standard_simplex(3)
    s = AffineSimplex.cell(K, "0,1,2,3")
    for pi in permutations(range(4)):
        a, sa = permute(s, pi)
        for rho in permutations(range(4)):
            b, sb = permute(a, rho)
            c, sc = permute(s, compose(rho, pi))
            assert b == c and sa * sb == sc


def test_z_nondegenerate():
    K = standard_simplex(2, {"Z": [(0, 1)]})
    v0, v1, v2 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert is_Z_nondegenerate(AffineSimplex.make(K, "0,1,2", [v0, v1, v2]), "Z")
    assert not is_Z_nondegenerate(AffineSimplex.make(K, "0,1,2", [v0, v0, v2]), "Z")
    # repeated vertex outside Z does not matter
    assert is_Z_nondegenerate(AffineSimplex.make(K, "0,1,2", [v0, v2, v2]), "Z")


def test_chain_json_round_trip():
    rng = random.Random(9)
    for _ in range(20):
        K = marked_simplex(3, rng)
        c = random_chain(K, rng.randint(0, 3), rng)
        assert chain_from_json(K, chain_to_json(c)) == c


def test_chain_json_rejects_unknown_carrier():
    K = standard_simplex(1)
    with pytest.raises(ComplexError):
        chain_from_json(K, {"degree": 0, "terms": [{"carrier": "9", "vertices": [[[1, 1]]], "coeff": [1, 1]}]})


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_dd_zero(seed, n):
    rng = random.Random(seed)
    K = marked_simplex(n, rng)
    c = random_chain(K, n, rng)
    if n >= 2:
        assert not boundary(boundary(c))
    assert alt(boundary(c)) == boundary(alt(c))
    assert l1_norm(alt(c)) <= l1_norm(c)
    assert alt(alt(c)) == alt(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_chain_arithmetic(seed):
    rng = random.Random(seed)
    K = marked_simplex(2, rng)
    a, b = random_chain(K, 1, rng), random_chain(K, 1, rng)
    assert (a + b) - b == a
    assert l1_norm(a + b) <= l1_norm(a) + l1_norm(b)
    assert boundary(a + b) == boundary(a) + boundary(b)
    lam = F(rng.randint(-5, 5), rng.randint(1, 5))
    assert l1_norm(a * lam) == abs(lam) * l1_norm(a)


def test_euler_characteristic_sphere():
    assert simplex_boundary(3).euler_characteristic() == 2
    assert all(len(simplex_boundary(3).cells_of_dim(k)) == len(list(combinations(range(4), k + 1)))
               for k in range(3))
