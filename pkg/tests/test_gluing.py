from __future__ import annotations

import random
from fractions import Fraction

import pytest

from oracles import common_vertices
from simvol.chains import AffineSimplex, Chain, alt, boundary, l1_norm
from simvol.complex import simplex_boundary, simplicial, standard_simplex
from simvol.diffusion import chain_function, edge_swap_action, orbit_sums
from simvol.gluing import (
    GluingError, GluingMap, PipelineError, SimplicialTree, TreeSimplex, annulus, connected_sum,
    fixed_complex_seminorm, glue_complexes, glue_cycles, gluing_target, solve_filling, subadditivity_pipeline,
    tree_common_vertex, two_annuli_toy,
)
from simvol.groups import FiniteGroup, GroupAction
from simvol.refine import iterate_subdivision, subdivide_chain, subdivide_complex
from simvol.sampling import random_tree
from simvol.seminorm import ClassSpec, fundamental_cycle, l1_seminorm
from simvol.subdivision import local_barycentric

F = Fraction


def fvector(K):
    return [len(K.cells_of_dim(k)) for k in range(K.dim + 1)]


def test_glue_annuli_euler_characteristic():
    K1, K2 = annulus(3), annulus(3)
    G = glue_complexes(K1, K2, GluingMap.identity(K1, "Z", K2, "Z"))
    Z = K1.closure(K1.mark("Z"))
    chi_z = sum((-1) ** K1.cell_dim(c) for c in Z)
    assert G.euler_characteristic() == K1.euler_characteristic() + K2.euler_characteristic() - chi_z == 0
    assert fvector(G) == [9, 21, 12]
    # remaining boundary: the two outer circles
    assert len([c for c in G.mark("Y") if G.cell_dim(c) == 1]) == 6


def test_glue_along_empty_mark_is_disjoint_union():
    K1 = simplex_boundary(2, {"Z": []})
    K2 = simplex_boundary(2, {"Z": []})
    G = glue_complexes(K1, K2, GluingMap(K1, "Z", K2, "Z", {}))
    assert fvector(G) == [6, 6]
    assert not G.mark("Z")


def test_glue_two_tetrahedra_along_a_face():
    K1 = standard_simplex(3, {"Z": [(0, 1, 2)]})
    K2 = standard_simplex(3, {"Z": [(0, 1, 2)]})
    G = glue_complexes(K1, K2, GluingMap.identity(K1, "Z", K2, "Z"))
    assert fvector(G) == [5, 9, 7, 2]


def test_invalid_gluing_maps():
    K1 = standard_simplex(1, {"Z": [(0,), (1,)]})
    K2 = standard_simplex(1, {"Z": [(0,)]})
    with pytest.raises(GluingError, match="bijection"):
        GluingMap(K1, "Z", K2, "Z", {"0": "0", "1": "0"})
    with pytest.raises(GluingError, match="exactly"):
        GluingMap(K1, "Z", K1, "Z", {"0": "0"})
    A = standard_simplex(1, {"Z": [(0, 1)]})
    with pytest.raises(GluingError, match="commute"):
        GluingMap(A, "Z", A, "Z", {"0": "1", "1": "0", "0,1": "0,1"})
    B = standard_simplex(2, {"Z": [(0,), (1,), (2,)]})
    with pytest.raises(GluingError, match="dimensions"):
        GluingMap(A, "Z", B, "Z", {"0": "0", "1": "1", "0,1": "2"})
    with pytest.raises(GluingError):
        GluingMap.from_json(A, A, {"cells": "nonsense"})


def test_gluing_map_json_round_trip():
    K1, K2 = annulus(3), annulus(3)
    f = GluingMap.identity(K1, "Z", K2, "Z")
    assert GluingMap.from_json(K1, K2, f.to_json()).cells == f.cells


def test_glue_cycles_without_correction():
    K1, K2, f, c1, c2 = two_annuli_toy(3)
    G = glue_complexes(K1, K2, f)
    assert not gluing_target(G, c1, c2)
    c3 = glue_cycles(G, c1, c2)
    assert l1_norm(c3) == 12
    assert all(s.carrier in G.mark("Y") for s in boundary(c3))


def test_glue_cycles_reports_residual():
    K1, K2, f, c1, c2 = two_annuli_toy(3)
    G = glue_complexes(K1, K2, f)
    with pytest.raises(GluingError) as info:
        glue_cycles(G, c1, -c2)
    assert info.value.residual == -gluing_target(G, c1, -c2)
    # an honest filling of the mismatch does not exist inside a circle
    with pytest.raises(GluingError):
        solve_filling(G, gluing_target(G, c1, -c2))


def test_solve_filling_finds_least_chain():
    P = simplicial([(0, 1), (1, 2)], {"Z": [(0, 1), (1, 2)]})
    target = Chain.of(AffineSimplex.cell(P, "2")) - Chain.of(AffineSimplex.cell(P, "0"))
    d = solve_filling(P, target)
    assert boundary(d) == target and l1_norm(d) == 2


def test_connected_sum_of_tetrahedron_boundaries():
    S = simplex_boundary(3)
    G = connected_sum(S, S)
    assert fvector(G) == [5, 9, 6]
    # without 3-cells the class norm is the number of triangles
    assert fixed_complex_seminorm(G) == 6 == 4 + 4 - 2


def test_connected_sum_top_cell_count():
    K, _ = iterate_subdivision(simplex_boundary(3), None, 1)
    S = simplex_boundary(3)
    G = connected_sum(K, S)
    assert len(G.cells_of_dim(2)) == 24 + 4 - 2
    assert G.euler_characteristic() == 2


def test_tree_examples():
    path = SimplicialTree(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert tree_common_vertex(TreeSimplex(path, ("a", "b", "c"))) == "b"
    star = SimplicialTree(["o", 1, 2, 3], [("o", 1), ("o", 2), ("o", 3)])
    assert tree_common_vertex(TreeSimplex(star, (1, 2, 3))) == "o"
    assert tree_common_vertex(TreeSimplex(star, (2, 2, 2))) == 2
    long = SimplicialTree(list(range(5)), [(i, i + 1) for i in range(4)])
    assert tree_common_vertex(TreeSimplex(long, (0, 4, 2, 3))) is None
    with pytest.raises(ValueError):
        tree_common_vertex(TreeSimplex(path, ("a", "c")))
    with pytest.raises(ValueError):
        SimplicialTree([1, 2, 3], [(1, 2)])


def test_tree_against_brute_force():
    rng = random.Random(21)
    for _ in range(100):
        T = random_tree(rng, rng.randint(1, 30))
        verts = tuple(rng.choice(T.vertices) for _ in range(rng.randint(3, 5)))
        brute = common_vertices(T.adjacency, verts)
        assert len(brute) <= 1
        assert tree_common_vertex(TreeSimplex(T, verts)) == (next(iter(brute)) if brute else None)


def test_pipeline_on_two_annuli():
    K1, K2, f, c1, c2 = two_annuli_toy(3)
    final, report = subadditivity_pipeline(K1, K2, f, c1, c2, eps=F(1, 100))
    assert report["bound_ok"]
    assert all(c["holds"] for c in report["checks"])
    assert [s["name"] for s in report["stages"]] == ["glue", "local_barycentric", "alt", "diffuse"]
    assert l1_norm(final) <= 12 + F(1, 100)


def test_pipeline_with_empty_gluing_keeps_norm():
    K1 = simplex_boundary(2, {"Z": []})
    K2 = simplex_boundary(2, {"Z": []})
    c1, c2 = fundamental_cycle(K1), fundamental_cycle(K2)
    f = GluingMap(K1, "Z", K2, "Z", {})
    final, report = subadditivity_pipeline(K1, K2, f, c1, c2)
    G = glue_complexes(K1, K2, f)
    assert final == alt(G.push1(c1) + G.push2(c2))
    assert l1_norm(final) == l1_norm(c1) + l1_norm(c2)
    assert report["relative_cycle"]


def test_pipeline_reports_failing_stage():
    K1, K2, f, c1, c2 = two_annuli_toy(3)
    with pytest.raises(PipelineError, match="stage glue"):
        subadditivity_pipeline(K1, K2, f, c1, -c2)
    frozen = GroupAction(FiniteGroup.cyclic(2), lambda g, s: s, name="trivial")
    with pytest.raises(PipelineError, match="stage diffuse") as info:
        subadditivity_pipeline(K1, K2, f, c1, c2, action=frozen)
    assert info.value.stage == "diffuse"


def test_orbit_sums_vanish_after_alt():
    K1, K2, f, c1, c2 = two_annuli_toy(4)
    G = glue_complexes(K1, K2, f)
    c = alt(local_barycentric(glue_cycles(G, c1, c2), "Z"))
    e, _ = chain_function(c, "Z")
    assert e and all(t == 0 for _, t in orbit_sums(e, edge_swap_action("Z")))


def test_subdivision_of_complexes():
    S = simplex_boundary(3)
    K = subdivide_complex(S)
    assert fvector(K) == [14, 36, 24]
    z = subdivide_chain(fundamental_cycle(S), K)
    assert not boundary(z) and len(z) == 24
    assert l1_seminorm(ClassSpec(K, 2, z)).value == 24
    K2, z2 = iterate_subdivision(S, fundamental_cycle(S), 2)
    assert len(K2.cells_of_dim(2)) == 144 and len(z2) == 144
    assert subdivide_complex(standard_simplex(3)).euler_characteristic() == 1


def test_subdivision_keeps_marks():
    A = annulus(3)
    K = subdivide_complex(A)
    z = subdivide_chain(fundamental_cycle(A, 2, "Y"), K)
    assert all(s.carrier in K.mark("Y") for s in boundary(z))
    assert len([c for c in K.mark("Z") if K.cell_dim(c) == 1]) == 6


def test_connected_sum_with_explicit_matching():
    S = simplex_boundary(3)
    t = "0,1,2"
    # rotate the removed triangle: 0 -> 1 -> 2 -> 0 on the second copy
    rot = {"0": "1", "1": "2", "2": "0", "0,1": "1,2", "1,2": "0,2", "0,2": "0,1"}
    with pytest.raises(GluingError):
        connected_sum(S, S, t, t, matching=rot)  # a rotation does not respect the vertex order
    ident = {c: c for c in ("0", "1", "2", "0,1", "0,2", "1,2")}
    assert fvector(connected_sum(S, S, t, t, matching=ident)) == [5, 9, 6]
