from itertools import product

from hypothesis import given, strategies as st
import pytest

from alcove_pieces import _pykernels, kernels
from alcove_pieces.affine_weyl import (AffineWeylElement, DatumMismatch, NotFiniteType,
                                       affine_weyl_group)
from alcove_pieces.root_datum import dominant_representative, pair_two_rho

TYPES = ["A1:sc", "A1:ad", "A2:sc", "A2:ad", "C2:sc", "G2:sc"]

# frozen from the breadth-first oracle below
LEVEL_SIZES = {
    "A2:sc": [1, 3, 6, 9, 12, 15, 18],
    "C2:sc": [1, 3, 5, 8, 11, 13, 16],
    "A1:ad": [2, 4, 4, 4, 4, 4, 4],
}


def bfs_levels(G, L):
    levels = [{om.rep for om in G.omega_group}]
    seen = set(levels[0])
    for _ in range(L):
        nxt = {G.multiply(s, x) for x in levels[-1] for s in G.simples} - seen
        seen |= nxt
        levels.append(nxt)
    return levels


@pytest.mark.parametrize("spec", TYPES)
def test_length_equals_word_distance(spec):
    G = affine_weyl_group(spec)
    levels = bfs_levels(G, 5)
    for k, lev in enumerate(levels):
        assert {G.length(x) for x in lev} <= {k}
        assert set(G.elements_of_length(k)) == lev
    if spec in LEVEL_SIZES:
        assert [len(lev) for lev in bfs_levels(G, 6)] == LEVEL_SIZES[spec]


@pytest.mark.parametrize("spec", ["A2:sc", "C2:sc", "G2:sc", "A2:ad"])
def test_translation_length(spec):
    G = affine_weyl_group(spec)
    for lam in product(range(-4, 5), repeat=G.rank):
        dom, _ = dominant_representative(G.datum, lam)
        assert G.length(G.translation_element(lam)) == pair_two_rho(G.datum, dom)


@pytest.mark.parametrize("spec,size", [("A1:sc", 1), ("A1:ad", 2), ("A2:ad", 3), ("C2:ad", 2),
                                       ("G2:sc", 1), ("A1:ad x A1:ad", 4)])
def test_omega_matches_box_scan(spec, size):
    G = affine_weyl_group(spec)
    scan = set()
    for lam in product((-1, 0, 1), repeat=G.rank):
        t = G.translation_element(lam)
        for w in G.datum.weyl_group:
            x = G.multiply(t, G.finite_element(w.matrix))
            if G.length(x) == 0:
                scan.add(x)
    reps = [om.rep for om in G.omega_group]
    assert set(reps) == scan and len(reps) == size
    assert reps[0] == G.identity
    for om in G.omega_group:
        assert sorted(om.perm) == list(G.nodes)


@pytest.mark.parametrize("spec", TYPES)
@given(data=st.data())
def test_reduced_words_and_rendering(spec, data):
    G = affine_weyl_group(spec)
    w = data.draw(st.sampled_from(G.elements_up_to(6)))
    word, om = G.reduced_word(w)
    assert len(word) == G.length(w)
    assert G.from_word(word, om) == w
    assert G.parse(G.render(w)) == w
    assert G.parse(G.word_string(w)) == w
    assert G.inverse(G.inverse(w)) == w
    assert G.multiply(w, G.inverse(w)) == G.identity


@pytest.mark.parametrize("spec", ["A2:sc", "C2:sc"])
@given(data=st.data())
def test_action_is_compatible_with_multiplication(spec, data):
    G = affine_weyl_group(spec)
    elems = G.elements_up_to(5)
    a, b = data.draw(st.sampled_from(elems)), data.draw(st.sampled_from(elems))
    x = tuple(data.draw(st.fractions(-3, 3, max_denominator=7)) for _ in range(G.rank))
    assert G.act_on_apartment(G.multiply(a, b), x) == \
        G.act_on_apartment(a, G.act_on_apartment(b, x))


def _reflections(G, radius):
    return {G.conjugate(x, s) for x in G.elements_up_to(radius) for s in G.simples}


@pytest.mark.parametrize("spec", ["A2:sc", "C2:sc", "A1:ad"])
def test_bruhat_matches_reflection_order(spec):
    G = affine_weyl_group(spec)
    L = 4
    elems = G.elements_up_to(L)
    refl = _reflections(G, L)
    below = {w: {w} for w in elems}
    for w in elems:
        for t in refl:
            u = G.multiply(w, t)
            if G.length(u) < G.length(w):
                below[w] |= below[u]
    for w in elems:
        for u in elems:
            assert G.bruhat_leq(u, w) == (u in below[w])


@pytest.mark.parametrize("spec", ["A2:sc", "C2:sc"])
@given(data=st.data())
def test_double_coset_representatives(spec, data):
    G = affine_weyl_group(spec)
    subsets = G.finite_type_subsets()
    J = data.draw(st.sampled_from(subsets))
    Jp = data.draw(st.sampled_from(subsets))
    w = data.draw(st.sampled_from(G.elements_up_to(5)))
    coset = {G.multiply(a, w, b) for a in G.parabolic(Jp) for b in G.parabolic(J)}
    rep = G.min_double_coset_rep(J, Jp, w)
    assert rep in coset
    m = min(G.length(x) for x in coset)
    assert [x for x in coset if G.length(x) == m] == [rep]
    left = G.min_left_coset_rep(J, w)
    assert G.has_no_left_descent_in(J, left)
    assert left in {G.multiply(a, w) for a in G.parabolic(J)}


def test_finite_type_and_errors():
    G = affine_weyl_group("A2:sc")
    assert not G.is_finite_type({0, 1, 2})
    assert len(G.finite_type_subsets()) == 7
    with pytest.raises(NotFiniteType):
        G.parabolic(frozenset({0, 1, 2}))
    H = affine_weyl_group("C2:sc")
    with pytest.raises(DatumMismatch):
        G.multiply(G.identity, AffineWeylElement((0,), (1,)))
    with pytest.raises(ValueError):
        H.node("s7")
    assert len(H.parabolic(frozenset({1, 2}))) == 8


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_kernels_agree(m, t1, t2):
    G = affine_weyl_group("C2:sc")
    a = tuple(m)
    assert kernels.mul(tuple(t1), a, tuple(t2), a, 2) == \
        _pykernels.mul(tuple(t1), a, tuple(t2), a, 2)
    w = G.datum.weyl_group[abs(sum(m)) % 8]
    flat = tuple(x for row in w.matrix for x in row)
    assert kernels.im_length(tuple(t1), flat, G._roots_flat, G._p, 2) == \
        _pykernels.im_length(tuple(t1), flat, G._roots_flat, G._p, 2)
