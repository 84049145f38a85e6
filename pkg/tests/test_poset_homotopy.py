from itertools import combinations
import random

from hypothesis import given, strategies as st
import pytest

from alcove_pieces.affine_weyl import affine_weyl_group
from alcove_pieces.bcomplex import build_truncated_B
from alcove_pieces.pieces import newton_from_values
from alcove_pieces.poset_homotopy import (Poset, SimplicialComplex, build_Dn, build_Dn_J,
                                          dset_of_truncation, face_poset, is_acyclic,
                                          is_weak_elementary_expansion, nerve,
                                          rational_homology, realize_dset, sd, subdivide,
                                          verify_collapse, whitehead_collapse)
from alcove_pieces.verify import random_pair


def test_poset_basics():
    P = Poset("abc", relations=[("a", "b"), ("b", "c")])
    assert P.less("a", "c") and not P.less("c", "a")
    assert P.minimal() == ["a"]
    with pytest.raises(ValueError):
        Poset("ab", relations=[("a", "b"), ("b", "a")])


def test_subdivision_sizes():
    D2 = build_Dn(2)
    assert len(D2) == 7
    assert len(sd(D2)) == 25
    tri = SimplicialComplex([frozenset({0, 1, 2})])
    assert len(subdivide(tri)) == 7 + 12 + 6
    assert rational_homology(subdivide(tri)) == [1, 0, 0]


def test_homology_controls():
    hollow = SimplicialComplex([frozenset(e) for e in combinations(range(3), 2)])
    assert rational_homology(hollow) == [1, 1]
    sphere = SimplicialComplex([frozenset(f) for f in combinations(range(4), 3)])
    assert rational_homology(sphere) == [1, 0, 1]
    two_points = SimplicialComplex([frozenset({0}), frozenset({1})])
    assert rational_homology(two_points) == [2]
    assert not is_acyclic(hollow)
    # D_n contains the empty set, so its nerve is a cone
    assert is_acyclic(nerve(build_Dn(2)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dn_j_acyclic(n):
    for k in range(1, n + 1):
        for J in combinations(range(n + 1), k):
            assert is_acyclic(nerve(build_Dn_J(n, J)))
    with pytest.raises(ValueError):
        build_Dn_J(n, range(n + 1))


def test_weak_elementary_expansion():
    D1 = build_Dn(1)
    ok, zero = is_weak_elementary_expansion(D1, [frozenset({0})])
    assert ok and zero == frozenset()
    ok, _ = is_weak_elementary_expansion(D1, [])
    assert not ok


def test_face_poset_nerve_is_subdivision():
    K = SimplicialComplex([frozenset({0, 1, 2}), frozenset({2, 3})])
    assert nerve(face_poset(K)) == subdivide(K)


def test_dset_realization_of_truncation():
    G = affine_weyl_group("A1:sc")
    B = build_truncated_B(G, newton_from_values(G, [0]), 3)
    fibers, trans = dset_of_truncation(B)
    tot, K = realize_dset(fibers, trans)
    assert len(tot) == len(B.facets)
    assert rational_homology(K) == [1, 0]       # a tree
    B1 = build_truncated_B(G, newton_from_values(G, [1]), 2)
    _, K1 = realize_dset(*dset_of_truncation(B1))
    assert rational_homology(K1) == [1, 1]      # a cycle


def test_realize_dset_rejects_bad_maps():
    a, b = frozenset(), frozenset({0})
    with pytest.raises(ValueError):
        realize_dset({a: ["x"], b: ["y"]}, {(a, b): {"x": "z"}})


@given(st.integers(0, 10 ** 6))
def test_whitehead_collapse_random(seed):
    Y, Z = random_pair(random.Random(seed))
    seq = whitehead_collapse(Y, Z)
    target = subdivide(subdivide(Z))
    ok, bad, hist = verify_collapse(seq.start, seq, target, betti=True)
    assert ok, bad
    assert all(h == hist[0] for h in hist)


def test_verify_collapse_rejects_non_free_face():
    tri = SimplicialComplex([frozenset({0, 1, 2})])
    edge = frozenset({0, 1})
    ok, bad, _ = verify_collapse(tri, [(frozenset({0}), edge)], tri)
    assert not ok and bad == 0
    ok, bad, _ = verify_collapse(tri, [(edge, frozenset({0, 1, 2}))],
                                 SimplicialComplex([frozenset({0, 2}), frozenset({1, 2})]))
    assert ok


def test_collapse_requires_subcomplex():
    Y = SimplicialComplex([frozenset({0, 1})])
    with pytest.raises(ValueError):
        whitehead_collapse(Y, SimplicialComplex([frozenset({2})]))


def test_appendix_examples():
    assert len(build_Dn_J(1, [0])) == 1
    assert len(build_Dn_J(2, [0])) == 5
    assert sorted(map(sorted, build_Dn_J(2, [0, 1]).elements)) == [[0, 2], [1, 2], [2]]


def test_collapse_triangle_to_vertex():
    Y = SimplicialComplex([frozenset({0, 1, 2})])
    Z = SimplicialComplex([frozenset({0})])
    seq = whitehead_collapse(Y, Z)
    ok, _, hist = verify_collapse(seq.start, seq, subdivide(subdivide(Z)), betti=True)
    assert ok and all(h[0] == 1 and not any(h[1:]) for h in hist)
    assert whitehead_collapse(Z, Z).steps == []


def test_constant_singleton_dset():
    D = build_Dn(2)
    fibers = {J: ["x"] for J in D.elements}
    trans = {(J, K): {"x": "x"} for J in D.elements for K in D.elements if J < K}
    tot, K = realize_dset(fibers, trans)
    assert len(tot) == len(D)
    assert is_acyclic(K)
    assert len(realize_dset({}, {})[0]) == 0
