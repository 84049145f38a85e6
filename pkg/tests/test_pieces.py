from fractions import Fraction

from hypothesis import given, strategies as st
import pytest

from alcove_pieces.affine_weyl import NotFiniteType, affine_weyl_group
from alcove_pieces.bcomplex import build_truncated_B
from alcove_pieces.pieces import (E_Jw, Flat, NotMinimal, alcove_flat, bedard_from_min_rep,
                                  coarse_type_leq, conj_class, delta, enumerate_classes, geq_J,
                                  is_quasi_reduced, is_reduced, is_straight, j_type,
                                  max_stable_subset, newton_from_values, newton_point, omega_act,
                                  sigma_J, twisted_classes)
from alcove_pieces.root_datum import dominant_representative

TYPES = ["A1:sc", "A2:sc", "C2:sc"]


def labels(G, J, L):
    return [p.label for _, p in enumerate_classes(G, frozenset(J), L)]


def test_enumeration_examples():
    G = affine_weyl_group("A1:sc")
    assert labels(G, set(), 0) == ["1/{}"]
    assert labels(G, {1}, 1) == ["1/{s1}", "1/{s1}", "s0/{s1}"]
    assert labels(G, set(), 2) == ["1/{}", "s1/{}", "s0/{}", "s1s0/{}", "s0s1/{}"]
    H = affine_weyl_group("A1:ad")
    assert labels(H, set(), 0) == ["1/{}", "om1/{}"]


def test_sigma_class_example():
    G = affine_weyl_group("A1:sc")
    J = frozenset({1})
    s0 = G.parse("s0")
    assert conj_class(G, J, s0) == {s0, G.parse("s1 s0 s1")}
    assert sigma_J(G, J, G.parse("s1 s0 s1")).label == "s0/{s1}"
    with pytest.raises(NotFiniteType):
        sigma_J(G, {0, 1}, s0)


@pytest.mark.parametrize("spec", TYPES)
def test_type_of_piece(spec):
    G = affine_weyl_group(spec)
    for J in G.finite_type_subsets():
        for u in G.elements_up_to(5):
            if not G.has_no_left_descent_in(J, u):
                continue
            p = bedard_from_min_rep(G, J, u)
            assert p.K == max_stable_subset(G, J, u)
            E = E_Jw(G, J, u)
            assert p.j_type == frozenset(E.image(G, g) for g in G.parabolic(J))
            assert E.contains(alcove_flat(G, J))
            assert E.image(G, u) == E


@pytest.mark.parametrize("spec", TYPES)
def test_delta_monotone(spec):
    G = affine_weyl_group(spec)
    subsets = G.finite_type_subsets()
    for J in subsets:
        for u in G.elements_up_to(5):
            if not G.has_no_left_descent_in(J, u):
                continue
            p = bedard_from_min_rep(G, J, u)
            for Jp in subsets:
                if J < Jp:
                    q = delta(G, Jp, p)
                    assert q.length <= p.length
                    assert coarse_type_leq(G, q.coarse_type, p.coarse_type)
                    if is_reduced(G, p, Jp):
                        assert is_quasi_reduced(G, p, Jp)


@pytest.mark.parametrize("spec,nu,L", [("A1:sc", [0], 4), ("A1:sc", [1], 4), ("A2:sc", [0, 0], 3),
                                       ("A2:sc", [1, 1], 4), ("C2:sc", [1, 1], 5)])
def test_enumeration_routes_agree(spec, nu, L):
    G = affine_weyl_group(spec)
    nt = newton_from_values(G, nu)
    B = build_truncated_B(G, nt, L)
    via_classes = set()
    for J in G.finite_type_subsets():
        for _, p in enumerate_classes(G, J, L):
            if p.newton == nt and p.length <= L:
                via_classes.add(p)
    assert via_classes == set(B.facets)


@pytest.mark.parametrize("spec", TYPES)
def test_twisted_classes_are_conjugacy_fibers(spec):
    G = affine_weyl_group(spec)
    for J in G.finite_type_subsets():
        for u in G.elements_up_to(3):
            if not G.has_no_left_descent_in(J, u):
                continue
            K = bedard_from_min_rep(G, J, u).K
            classes = twisted_classes(G, K, u)
            WK = G.parabolic(K)
            assert sorted(len(c) for c in classes) and sum(len(c) for c in classes) == len(WK)
            where = {y: k for k, c in enumerate(classes) for y in c}
            for y in WK:
                orbit = conj_class(G, K, G.multiply(u, y))
                for yp in WK:
                    assert (where[y] == where[yp]) == (G.multiply(u, yp) in orbit)


def test_newton_points():
    G = affine_weyl_group("A2:sc")
    t = G.translation_element((1, -2))
    dom, _ = dominant_representative(G.datum, (1, -2))
    assert newton_point(G, t).nu == tuple(Fraction(x) for x in dom)
    assert is_straight(G, t)
    assert not is_straight(G, G.parse("s1"))
    H = affine_weyl_group("A1:ad")
    om = H.omega_group[1]
    assert newton_point(H, om.rep).omega == om
    assert newton_point(H, H.parse("s1 om1")).render(H) == "(1/2;om1)"


def test_bedard_rejects_non_minimal():
    G = affine_weyl_group("A2:sc")
    with pytest.raises(NotMinimal):
        bedard_from_min_rep(G, {1}, G.parse("s1"))


@pytest.mark.parametrize("spec", ["A1:ad", "A2:ad"])
def test_omega_action_on_pieces(spec):
    G = affine_weyl_group(spec)
    for J in G.finite_type_subsets():
        for u in G.elements_up_to(3):
            if not G.has_no_left_descent_in(J, u):
                continue
            p = bedard_from_min_rep(G, J, u)
            assert omega_act(G, G.omega_group[0], p) == p
            for om in G.omega_group:
                q = omega_act(G, om, p)
                assert q.length == p.length and len(q.J) == len(p.J)


def test_geq_J():
    G = affine_weyl_group("A1:sc")
    J = frozenset({1})
    one, s0 = G.identity, G.parse("s0")
    assert geq_J(G, J, s0, one, 3)
    assert geq_J(G, J, s0, s0, 3)
    assert not geq_J(G, J, one, s0, 3)
    with pytest.raises(ValueError):
        geq_J(G, J, G.parse("s0 s1 s0 s1"), one, 3)


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(-3, 3))
def test_flat_operations(normal, c):
    if not any(normal):
        return
    F = Flat.from_equations([normal], [c], 2)
    assert F.dim == 1
    p = F.point()
    assert F.contains_point(p)
    for d in F.direction():
        assert F.contains_point(tuple(a + 3 * b for a, b in zip(p, d)))
    assert F.intersect(F) == F
    assert Flat.from_equations([], [], 2).contains(F)
