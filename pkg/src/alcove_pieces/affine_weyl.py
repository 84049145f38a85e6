"""The extended affine Weyl group W~ = Lambda x| W acting on the apartment.

An element t_lambda w acts by x -> lambda + w x.  Affine simple
reflections are the finite simple reflections plus, for each irreducible
factor, the reflection in the wall theta = 1 of the fundamental alcove.
"""
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
import re
from typing import NamedTuple

from . import linalg
from .kernels import act as _act, im_length as _im_length, mul as _mul
from .root_datum import FiniteWeylElement, RootDatum, parse_datum_spec


class DatumMismatch(ValueError):
    pass


class NotFiniteType(ValueError):
    pass


class AffineWeylElement(NamedTuple):
    """t_lambda w.  ``finite`` is the matrix of w on Lambda, flattened row-major."""
    translation: tuple
    finite: tuple


@dataclass(frozen=True)
class OmegaElement:
    index: int
    rep: AffineWeylElement
    perm: tuple   # node i -> node perm[i], from omega s_i omega^-1 = s_perm[i]

    @property
    def is_identity(self):
        return self.index == 0

    def __str__(self):
        return f"om{self.index}"


def _flat(m):
    return tuple(x for row in m for x in row)


def _unflat(m, r):
    return tuple(tuple(m[i * r:(i + 1) * r]) for i in range(r))


class AffineWeylGroup:
    def __init__(self, datum):
        if isinstance(datum, str):
            datum = parse_datum_spec(datum)
        self.datum: RootDatum = datum
        r = self.rank = datum.rank
        self._roots_flat = tuple(x for b in datum.positive_roots for x in b)
        self._p = tuple(datum.two_rho_vee)
        self.identity = AffineWeylElement((0,) * r, _flat(linalg.identity(r)))
        self._weyl_index = {_flat(w.matrix): k for k, w in enumerate(datum.weyl_group)}
        self._weyl_inverse = {}
        for w in datum.weyl_group:
            inv = linalg.as_int_matrix(linalg.inverse(w.matrix))
            self._weyl_inverse[_flat(w.matrix)] = _flat(inv)

        names, roots, gens, factor_of = [], [], [], []
        single = len(datum.factors) == 1
        for k, fac in enumerate(datum.factors):
            names.append("s0" if single else f"s0_{k + 1}")
            roots.append((tuple(-x for x in fac.highest_root), 1))
            s_theta = datum.reflection_matrix(fac.highest_root)
            gens.append(AffineWeylElement(tuple(fac.highest_coroot), _flat(s_theta)))
            factor_of.append(k)
        for i in range(r):
            names.append(f"s{i + 1}")
            roots.append((tuple(datum.simple_roots[i]), 0))
            gens.append(AffineWeylElement((0,) * r, _flat(datum.simple_reflections[i])))
            factor_of.append(next(k for k, f in enumerate(datum.factors) if i in f.nodes))
        self.node_names = tuple(names)
        self.affine_roots = tuple(roots)
        self.simples = tuple(gens)
        self.node_factor = tuple(factor_of)
        self.nodes = tuple(range(len(names)))
        self._node_of_name = {n: i for i, n in enumerate(names)}
        self._node_of_reflection = {g: i for i, g in enumerate(gens)}
        self._omega = None
        self._levels = None

    # ------------------------------------------------------------------ basics
    def _check(self, *elts):
        for e in elts:
            if len(e.translation) != self.rank:
                raise DatumMismatch("element belongs to a different root datum")

    def multiply(self, a, b, *more):
        self._check(a, b)
        r = self.rank
        out = AffineWeylElement(*_mul(a.translation, a.finite, b.translation, b.finite, r))
        for c in more:
            self._check(c)
            out = AffineWeylElement(*_mul(out.translation, out.finite, c.translation, c.finite, r))
        return out

    def mul(self, *elts):
        out = elts[0]
        for e in elts[1:]:
            out = self.multiply(out, e)
        return out

    def inverse(self, a):
        minv = self._weyl_inverse[a.finite]
        r = self.rank
        t = tuple(-sum(minv[i * r + k] * a.translation[k] for k in range(r)) for i in range(r))
        return AffineWeylElement(t, minv)

    def conjugate(self, g, w):
        """g w g^-1."""
        return self.multiply(self.multiply(g, w), self.inverse(g))

    def power(self, a, k):
        out = self.identity
        if k < 0:
            a, k = self.inverse(a), -k
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def length(self, a):
        return _im_length(a.translation, a.finite, self._roots_flat, self._p, self.rank)

    def translation_element(self, lam):
        lam = tuple(lam)
        if any(Fraction(x).denominator != 1 for x in lam):
            raise ValueError("translation must lie in the coweight lattice")
        return AffineWeylElement(tuple(int(x) for x in lam), self.identity.finite)

    def finite_element(self, matrix):
        if isinstance(matrix, FiniteWeylElement):
            matrix = matrix.matrix
        return AffineWeylElement((0,) * self.rank, _flat(matrix))

    def finite_part(self, a):
        m = _unflat(a.finite, self.rank)
        return self.datum.weyl_group[self._weyl_index[a.finite]] if a.finite in self._weyl_index \
            else FiniteWeylElement(m)

    def finite_matrix(self, a):
        return _unflat(a.finite, self.rank)

    def finite_order(self, a):
        m = a.finite
        cur = m
        k = 1
        ident = self.identity.finite
        r = self.rank
        while cur != ident:
            cur = _mul((0,) * r, cur, (0,) * r, m, r)[1]
            k += 1
        return k

    def act_on_apartment(self, a, x):
        x = tuple(x)
        return _act(a.translation, a.finite, x, self.rank)

    def key(self, a):
        """Canonical order: (length, translation, finite-part index)."""
        return (self.length(a), a.translation, self._weyl_index[a.finite])

    def sort(self, elts):
        return sorted(elts, key=self.key)

    # ------------------------------------------------------------ affine roots
    def affine_root_value(self, node, x):
        cov, c = self.affine_roots[node]
        return linalg.dot(cov, x) + c

    def in_fundamental_alcove(self, x, closed=False):
        vals = [self.affine_root_value(i, x) for i in self.nodes]
        return all(v >= 0 for v in vals) if closed else all(v > 0 for v in vals)

    def push_root(self, g, root):
        """The affine function root o g^-1, i.e. the image of the root under g."""
        cov, c = root
        ginv = self.inverse(g)
        m = _unflat(ginv.finite, self.rank)
        new_cov = linalg.vecmat(cov, m)
        return tuple(new_cov), c + linalg.dot(cov, ginv.translation)

    def reflection_node(self, a):
        """The node i with a = s_i, or None."""
        return self._node_of_reflection.get(a)

    def node(self, name):
        try:
            return self._node_of_name[name]
        except KeyError:
            raise ValueError(f"unknown simple reflection {name!r}") from None

    def vertex(self, node):
        """The vertex of the fundamental alcove opposite to the wall of ``node``."""
        d = self.datum
        x = [Fraction(0)] * self.rank
        fac = d.factors[self.node_factor[node]]
        if node < len(d.factors):
            return tuple(x)
        i = node - len(d.factors)
        m = fac.marks[fac.nodes.index(i)]
        return tuple(Fraction(v) / m for v in d.fundamental_coweight(i))

    # ---------------------------------------------------------- descents, words
    def left_descents(self, a):
        la = self.length(a)
        return [i for i, s in enumerate(self.simples) if self.length(self.multiply(s, a)) < la]

    def right_descents(self, a):
        la = self.length(a)
        return [i for i, s in enumerate(self.simples) if self.length(self.multiply(a, s)) < la]

    def _reduce(self, a):
        word = []
        while True:
            la = self.length(a)
            if la == 0:
                return tuple(word), a
            for i, s in enumerate(self.simples):
                b = self.multiply(s, a)
                if self.length(b) < la:
                    word.append(i)
                    a = b
                    break

    def reduced_word(self, a):
        """(word, omega) with a = s_word[0] ... s_word[-1] * omega.rep."""
        word, rest = self._reduce(a)
        return word, self.omega_of_length_zero(rest)

    def from_word(self, word, omega=None):
        out = self.identity
        for i in word:
            out = self.multiply(out, self.simples[i])
        if omega is not None:
            out = self.multiply(out, omega.rep if isinstance(omega, OmegaElement) else omega)
        return out

    # -------------------------------------------------------------------- Omega
    @property
    def omega_group(self):
        if self._omega is None:
            self._omega = self._build_omega()
        return self._omega

    def _build_omega(self):
        r = self.rank
        gens = []
        for j in range(r):
            e = tuple(int(i == j) for i in range(r))
            gens.append(self._reduce(self.translation_element(e))[1])
        elems = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.multiply(x, g)
                if y not in elems:
                    elems.add(y)
                    queue.append(y)
        ordered = [self.identity] + sorted((e for e in elems if e != self.identity), key=self.key)
        out = []
        for k, rep in enumerate(ordered):
            inv = self.inverse(rep)
            perm = []
            for s in self.simples:
                n = self.reflection_node(self.multiply(rep, s, inv))
                assert n is not None
                perm.append(n)
            out.append(OmegaElement(k, rep, tuple(perm)))
        return tuple(out)

    def omega_of_length_zero(self, a):
        for om in self.omega_group:
            if om.rep == a:
                return om
        raise ValueError("element does not have length zero")

    def omega_component(self, a):
        return self.omega_of_length_zero(self._reduce(a)[1])

    def omega_by_index(self, k):
        return self.omega_group[k]

    # --------------------------------------------------------------- rendering
    def word_string(self, a, sep=" "):
        word, om = self.reduced_word(a)
        toks = [self.node_names[i] for i in word]
        if not om.is_identity:
            toks.append(str(om))
        return sep.join(toks) if toks else "1"

    def render(self, a):
        """The form "t[l1,l2]*s1 s2" with a reduced word for the finite part."""
        fw = self.finite_part(a).word
        lam = ",".join(str(x) for x in a.translation)
        word = " ".join(f"s{i + 1}" for i in fw)
        return f"t[{lam}]·{word}" if word else f"t[{lam}]"

    _T_RE = re.compile(r"^t\[([^\]]*)\]\s*(?:[·*.]\s*(.*))?$")

    def parse(self, text):
        """Parse either "t[...]·finite word" or an affine word such as "s0 s1 om1"."""
        text = text.strip()
        m = self._T_RE.match(text)
        if m:
            lam = tuple(int(x) for x in m.group(1).split(",") if x.strip())
            if len(lam) != self.rank:
                raise DatumMismatch("translation has the wrong rank")
            out = self.translation_element(lam)
            for tok in (m.group(2) or "").split():
                i = int(tok.lstrip("s")) - 1
                if not 0 <= i < self.rank or not tok.startswith("s"):
                    raise ValueError(f"bad finite reflection {tok!r}")
                out = self.multiply(out, self.finite_element(self.datum.simple_reflections[i]))
            return out
        out = self.identity
        toks = text.replace("·", " ").replace("*", " ").split()
        for tok in toks:
            if tok == "1":
                continue
            if tok.startswith("om"):
                out = self.multiply(out, self.omega_group[int(tok[2:])].rep)
            else:
                out = self.multiply(out, self.simples[self.node(tok)])
        return out

    def subset_string(self, J):
        return "{" + ",".join(self.node_names[i] for i in sorted(J)) + "}"

    def parse_subset(self, text):
        text = text.strip().strip("{}")
        if not text:
            return frozenset()
        return frozenset(self.node(t) for t in re.split(r"[,\s]+", text) if t)

    # ------------------------------------------------------------- enumeration
    def elements_up_to(self, L):
        """All elements of length <= L in canonical order."""
        if self._levels is None:
            self._levels = [sorted((om.rep for om in self.omega_group), key=self.key)]
        while len(self._levels) <= L:
            k = len(self._levels)
            nxt = set()
            for x in self._levels[-1]:
                for s in self.simples:
                    y = self.multiply(s, x)
                    if y not in nxt and self.length(y) == k:
                        nxt.add(y)
            self._levels.append(sorted(nxt, key=self.key))
        return [x for lev in self._levels[:L + 1] for x in lev]

    def elements_of_length(self, k):
        self.elements_up_to(k)
        return list(self._levels[k])

    # ------------------------------------------------------------- parabolics
    def is_finite_type(self, J):
        J = set(J)
        for k in range(len(self.datum.factors)):
            fac_nodes = {i for i in self.nodes if self.node_factor[i] == k}
            if fac_nodes <= J:
                return False
        return True

    def finite_type_subsets(self):
        n = len(self.nodes)
        out = []
        for bits in product((0, 1), repeat=n):
            J = frozenset(i for i in range(n) if bits[i])
            if self.is_finite_type(J):
                out.append(J)
        out.sort(key=lambda J: (len(J), sorted(J)))
        return out

    def _require_finite(self, *Js):
        for J in Js:
            if not self.is_finite_type(J):
                raise NotFiniteType(f"{self.subset_string(J)} is not of finite type")

    def parabolic(self, J):
        J = frozenset(J)
        return self._parabolic(J)

    @lru_cache(maxsize=None)
    def _parabolic(self, J):
        self._require_finite(J)
        elems = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for i in J:
                y = self.multiply(x, self.simples[i])
                if y not in elems:
                    elems.add(y)
                    queue.append(y)
        return tuple(sorted(elems, key=self.key))

    def min_double_coset_rep(self, J, Jp, w):
        """The minimal element of W_Jp w W_J."""
        self._require_finite(J, Jp)
        while True:
            lw = self.length(w)
            for i in sorted(Jp):
                y = self.multiply(self.simples[i], w)
                if self.length(y) < lw:
                    w = y
                    break
            else:
                for i in sorted(J):
                    y = self.multiply(w, self.simples[i])
                    if self.length(y) < lw:
                        w = y
                        break
                else:
                    return w

    def min_left_coset_rep(self, J, w):
        """The minimal element of W_J w, i.e. the representative in ^J W~."""
        return self.min_double_coset_rep(frozenset(), J, w)

    def min_right_coset_rep(self, J, w):
        return self.min_double_coset_rep(J, frozenset(), w)

    def has_no_left_descent_in(self, J, w):
        lw = self.length(w)
        return all(self.length(self.multiply(self.simples[i], w)) > lw for i in J)

    # ------------------------------------------------------------------ Bruhat
    @lru_cache(maxsize=None)
    def lower_interval(self, b):
        """{a : a <= b} via subwords of a reduced word of b."""
        word, om = self.reduced_word(b)
        cur = {self.identity}
        for i in word:
            s = self.simples[i]
            cur |= {self.multiply(x, s) for x in cur}
        return frozenset(self.multiply(x, om.rep) for x in cur)

    def bruhat_leq(self, a, b, bound=None):
        if bound is not None and self.length(b) > bound:
            raise ValueError("length of b exceeds the stated bound")
        if self.length(a) > self.length(b):
            return False
        return a in self.lower_interval(b)


@lru_cache(maxsize=None)
def affine_weyl_group(spec):
    """Cached group for a datum spec string."""
    return AffineWeylGroup(parse_datum_spec(spec))
