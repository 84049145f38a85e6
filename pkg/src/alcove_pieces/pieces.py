"""Combinatorial J-pieces, the map sigma_J and the data attached to a piece.

A piece u/J is recorded by its minimal representative u in ^J W~ (no
left descent in J) together with its Bedard sequence (J_n, J'_n, u_n).
Functions take the affine Weyl group G as first argument; results are
cached per group.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from . import linalg
from .affine_weyl import AffineWeylElement, NotFiniteType, OmegaElement
from .root_datum import dominant_representative, pair_two_rho


class NotMinimal(ValueError):
    pass


# --------------------------------------------------------------------- flats

class Flat(NamedTuple):
    """An affine subspace {x : A x = b}, stored as the RREF of [A | b]."""
    eqs: tuple
    ambient: int

    @classmethod
    def from_equations(cls, rows, rhs, ambient):
        aug = [list(r) + [c] for r, c in zip(rows, rhs)]
        if not aug:
            return cls((), ambient)
        red, piv = linalg.rref(aug, ambient + 1)
        if ambient in piv:
            raise ValueError("empty intersection")
        return cls(tuple(red), ambient)

    @property
    def dim(self):
        return self.ambient - len(self.eqs)

    @property
    def matrix(self):
        return [row[:-1] for row in self.eqs]

    @property
    def rhs(self):
        return [row[-1] for row in self.eqs]

    def point(self):
        if not self.eqs:
            return tuple(Fraction(0) for _ in range(self.ambient))
        return linalg.solve(self.matrix, self.rhs)

    def direction(self):
        return linalg.nullspace(self.matrix, self.ambient)

    def contains_point(self, x):
        return all(linalg.dot(row[:-1], x) == row[-1] for row in self.eqs)

    def contains(self, other):
        p = other.point()
        if not self.contains_point(p):
            return False
        a = self.matrix
        return all(linalg.dot(row, d) == 0 for d in other.direction() for row in a)

    def intersect(self, other):
        rows = self.matrix + other.matrix
        return Flat.from_equations(rows, self.rhs + other.rhs, self.ambient)

    def image(self, G, g):
        """g(F) for g in W~."""
        if not self.eqs:
            return self
        minv = G.finite_matrix(G.inverse(g))
        a = self.matrix
        am = [linalg.vecmat(row, minv) for row in a]
        rhs = [bi + linalg.dot(row, g.translation) for bi, row in zip(self.rhs, am)]
        return Flat.from_equations(am, rhs, self.ambient)


def root_flat(G, root):
    cov, c = root
    return Flat.from_equations([cov], [-c], G.rank)


@lru_cache(maxsize=None)
def alcove_flat(G, K):
    """A(K): the common zero set of the affine simple roots in K."""
    rows = [G.affine_roots[i][0] for i in sorted(K)]
    rhs = [-G.affine_roots[i][1] for i in sorted(K)]
    return Flat.from_equations(rows, rhs, G.rank)


# ----------------------------------------------------------------- newton

@dataclass(frozen=True)
class EnhancedNewtonPoint:
    nu: tuple          # dominant rational coweight in Lambda coordinates
    omega: OmegaElement

    def coroot_coords(self, G):
        """nu written in the basis of simple coroots."""
        c = [list(col) for col in G.datum.simple_coroots]
        return linalg.solve(linalg.transpose(c), self.nu)

    def render(self, G):
        co = ",".join(str(x) for x in self.coroot_coords(G))
        return f"({co};{self.omega})"


def newton_point(G, w):
    m = G.finite_order(w)
    lam = G.power(w, m).translation
    nu, _ = dominant_representative(G.datum, [Fraction(x, m) for x in lam])
    return EnhancedNewtonPoint(tuple(nu), G.omega_component(w))


def is_straight(G, w):
    nu = newton_point(G, w).nu
    straight = G.length(w) == pair_two_rho(G.datum, nu)
    m = G.finite_order(w)
    lw = G.length(w)
    additive = all(G.length(G.power(w, k)) == k * lw for k in range(1, 2 * m + 1))
    assert straight == additive, "straightness oracle disagrees with the length criterion"
    return straight


def newton_from_values(G, nu_coroot, omega_index=0):
    """Build an enhanced Newton point from simple-coroot coordinates."""
    d = G.datum
    nu = [Fraction(0)] * G.rank
    for c, co in zip(nu_coroot, d.simple_coroots):
        for i in range(G.rank):
            nu[i] += Fraction(c) * co[i]
    return EnhancedNewtonPoint(tuple(nu), G.omega_group[omega_index])


# ------------------------------------------------------------------- pieces

@dataclass(frozen=True)
class CoarseType:
    rep: frozenset


@dataclass(frozen=True)
class Piece:
    J: frozenset
    u: AffineWeylElement
    bedard: tuple = field(compare=False)
    K: frozenset = field(compare=False)
    j_type: frozenset = field(compare=False, repr=False)
    coarse_type: CoarseType = field(compare=False)
    newton: EnhancedNewtonPoint = field(compare=False)
    length: int = field(compare=False)
    label: str = field(compare=False)

    def __str__(self):
        return self.label


def piece_label(G, J, u):
    return G.word_string(u, sep="") + "/" + G.subset_string(J)


@lru_cache(maxsize=None)
def conj_class(G, J, w):
    """The W_J-conjugacy class of w."""
    return frozenset(G.conjugate(g, w) for g in G.parabolic(J))


def _next_subsets(G, Jprev, x):
    xinv = G.inverse(x)
    Jn, Jpn = set(), set()
    for i in Jprev:
        s = G.simples[i]
        a = G.reflection_node(G.multiply(xinv, s, x))
        if a is not None and a in Jprev:
            Jn.add(i)
        b = G.reflection_node(G.multiply(x, s, xinv))
        if b is not None and b in Jprev:
            Jpn.add(i)
    return frozenset(Jn), frozenset(Jpn)


def _sigma_sequence(G, J, w):
    c = conj_class(G, J, w)
    u0 = G.min_double_coset_rep(J, J, w)
    seq = [(J, J, u0)]
    x = u0
    Jprev = J
    while True:
        Jn, Jpn = _next_subsets(G, Jprev, x)
        if Jn == Jprev:
            assert Jpn == Jprev
            return tuple(seq), x, Jn
        y = next(y for y in G.parabolic(Jprev) if G.multiply(x, y) in c)
        un = G.min_double_coset_rep(Jn, Jpn, y)
        seq.append((Jn, Jpn, un))
        x = G.multiply(x, un)
        Jprev = Jn


_SIGMA = {}


def sigma_J(G, J, w, cache=True):
    """The piece sigma_J(class of w).

    With ``cache=False`` the Bedard sequence is recomputed from w itself,
    which is what the well-definedness checks need.
    """
    J = frozenset(J)
    if not G.is_finite_type(J):
        raise NotFiniteType(f"{G.subset_string(J)} is not of finite type")
    if not cache:
        seq, u, K = _sigma_sequence(G, J, w)
        return make_piece(G, J, u, seq, K)
    key = (G, J, w)
    hit = _SIGMA.get(key)
    if hit is not None:
        return hit
    seq, u, K = _sigma_sequence(G, J, w)
    p = make_piece(G, J, u, seq, K)
    for v in conj_class(G, J, w):
        _SIGMA[(G, J, v)] = p
    return p


def bedard_from_min_rep(G, J, u):
    """Factor u in ^J W~ as u_0 u_1 ... u_m along its Bedard sequence."""
    J = frozenset(J)
    if not G.has_no_left_descent_in(J, u):
        raise NotMinimal("u is not minimal in W_J u")
    u0 = G.min_double_coset_rep(J, J, u)
    seq = [(J, J, u0)]
    x = u0
    rem = G.multiply(G.inverse(u0), u)
    Jprev = J
    while True:
        Jn, Jpn = _next_subsets(G, Jprev, x)
        if Jn == Jprev:
            if rem != G.identity:
                raise NotMinimal("factorization did not terminate at the identity")
            break
        un = G.min_double_coset_rep(Jn, Jpn, rem)
        seq.append((Jn, Jpn, un))
        x = G.multiply(x, un)
        rem = G.multiply(G.inverse(un), rem)
        Jprev = Jn
    assert x == u
    return make_piece(G, J, u, tuple(seq), Jprev)


def I_of(G, J, u):
    return bedard_from_min_rep(G, J, u).K


def max_stable_subset(G, J, u):
    """Largest K in J with Ad(u) K = K, by direct iteration."""
    K = set(J)
    uinv = G.inverse(u)
    while True:
        keep = {i for i in K if G.reflection_node(G.multiply(u, G.simples[i], uinv)) in K}
        if keep == K:
            return frozenset(K)
        K = keep


def make_piece(G, J, u, seq, K):
    J, K = frozenset(J), frozenset(K)
    return Piece(J=J, u=u, bedard=seq, K=K, j_type=j_type(G, J, K),
                 coarse_type=coarse_type(G, K), newton=newton_point(G, u),
                 length=G.length(u), label=piece_label(G, J, u))


def delta(G, Jp, p):
    Jp = frozenset(Jp)
    if not p.J <= Jp:
        raise ValueError("delta needs J contained in J'")
    return sigma_J(G, Jp, p.u)


def is_quasi_reduced(G, p, Jp):
    return G.length(p.u) == G.length(delta(G, Jp, p).u)


def is_reduced(G, p, Jp):
    q = delta(G, Jp, p)
    return G.length(p.u) == G.length(q.u) and p.coarse_type == q.coarse_type


def omega_act(G, om, p):
    J2 = frozenset(om.perm[i] for i in p.J)
    u2 = G.conjugate(om.rep, p.u)
    return bedard_from_min_rep(G, J2, u2)


# -------------------------------------------------------------------- types

@lru_cache(maxsize=None)
def j_type(G, J, K):
    """The W_J-orbit of A(K), as a frozenset of flats."""
    F = alcove_flat(G, frozenset(K))
    return frozenset(F.image(G, g) for g in G.parabolic(frozenset(J)))


@lru_cache(maxsize=None)
def _coroot_basis(G):
    return linalg.transpose(G.datum.simple_coroots)


def flat_contains_up_to_Wa(G, big, small):
    """Is there v in W^a with v(small) contained in big?"""
    if small.dim > big.dim:
        return False
    p = small.point()
    dirs = small.direction()
    a = big.matrix
    if not a:
        return True
    C = _coroot_basis(G)
    aC = linalg.matmul(a, C)
    for w in G.datum.weyl_group:
        wd = [linalg.matvec(w.matrix, d) for d in dirs]
        if any(linalg.dot(row, v) != 0 for v in wd for row in a):
            continue
        wp = linalg.matvec(w.matrix, p)
        rhs = [bi - linalg.dot(row, wp) for bi, row in zip(big.rhs, a)]
        if linalg.has_integer_solution(aC, rhs):
            return True
    return False


@lru_cache(maxsize=None)
def _coarse_classes(G):
    subsets = G.finite_type_subsets()
    rep = {}
    for K in subsets:
        if K in rep:
            continue
        FK = alcove_flat(G, K)
        for K2 in subsets:
            if K2 in rep:
                continue
            F2 = alcove_flat(G, K2)
            if F2.dim == FK.dim and flat_contains_up_to_Wa(G, FK, F2):
                rep[K2] = K
    return rep


def coarse_type(G, K):
    return CoarseType(_coarse_classes(G)[frozenset(K)])


@lru_cache(maxsize=None)
def coarse_type_leq(G, a, b):
    """[E_a] <= [E_b], i.e. some W^a-translate of E_a lies in E_b."""
    return flat_contains_up_to_Wa(G, alcove_flat(G, b.rep), alcove_flat(G, a.rep))


def coarse_type_string(G, t):
    return G.subset_string(t.rep)


# ---------------------------------------------------------------------- E_Jw

@lru_cache(maxsize=None)
def _root_hyperplanes(G, J):
    out = set()
    for g in G.parabolic(J):
        for j in J:
            out.add(root_flat(G, G.push_root(g, G.affine_roots[j])))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _relevant_flats_over(G, J):
    hyper = _root_hyperplanes(G, J)
    full = Flat((), G.rank)
    flats = {full}
    frontier = [full]
    while frontier:
        nxt = []
        for F in frontier:
            for H in hyper:
                I = F.intersect(H)
                if I not in flats:
                    flats.add(I)
                    nxt.append(I)
        frontier = nxt
    return tuple(flats)


def E_Jw(G, J, w):
    """The minimal w-stable relevant affine subspace containing A(J)."""
    J = frozenset(J)
    G._require_finite(J)
    stable = [F for F in _relevant_flats_over(G, J) if F.image(G, w) == F]
    E = stable[0]
    for F in stable[1:]:
        E = E.intersect(F)
    assert E in stable
    return E


# ------------------------------------------------------------ enumeration

def enumerate_classes(G, J, L):
    """(representative, piece) per W_J-class meeting length <= L, canonical order."""
    J = frozenset(J)
    seen = set()
    out = []
    for e in G.elements_up_to(L):
        if e in seen:
            continue
        c = conj_class(G, J, e)
        seen |= c
        rep = min(c, key=G.key)
        out.append((rep, sigma_J(G, J, rep)))
    out.sort(key=lambda t: G.key(t[0]))
    return out


def geq_J(G, J, u, up, bound):
    """u >=_J u': some W_J-conjugate of u' lies Bruhat-below u."""
    if G.length(u) > bound:
        raise ValueError("length of u exceeds the bound")
    return any(G.bruhat_leq(v, u) for v in conj_class(G, frozenset(J), up))


def twisted_classes(G, K, u):
    """Partition W_K into classes y ~ z y u z^-1 u^-1, so that u y ~ u y' iff W_K-conjugate."""
    uinv = G.inverse(u)
    WK = G.parabolic(K)
    left = set(WK)
    classes = []
    while left:
        y = min(left, key=G.key)
        cls = set()
        for z in WK:
            v = G.multiply(z, y, u, G.inverse(z), uinv)
            cls.add(v)
        classes.append(frozenset(cls))
        left -= cls
    return classes
