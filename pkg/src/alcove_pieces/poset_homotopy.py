"""Finite posets, simplicial complexes, subdivision, expansions and collapses.

Contractibility is tested through rational homology plus connectedness
(reduced Betti numbers all zero), which is the strongest oracle we can run
mechanically at this scale.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


class Poset:
    """A finite poset on hashable labels.

    Either ``leq(a, b)`` or a list of ``relations`` (a < b pairs, closed
    transitively) must be given.
    """

    def __init__(self, elements, leq=None, relations=()):
        self.elements = list(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        n = len(self.elements)
        less = set()
        if leq is not None:
            for i, a in enumerate(self.elements):
                for j, b in enumerate(self.elements):
                    if i != j and leq(a, b):
                        less.add((i, j))
        for a, b in relations:
            less.add((self.index[a], self.index[b]))
        # transitive closure
        up = [set() for _ in range(n)]
        for i, j in less:
            up[i].add(j)
        changed = True
        while changed:
            changed = False
            for i in range(n):
                new = set(up[i])
                for j in up[i]:
                    new |= up[j]
                if new != up[i]:
                    up[i] = new
                    changed = True
        for i in range(n):
            if i in up[i]:
                raise ValueError("relation has a cycle")
        self._up = up

    def __len__(self):
        return len(self.elements)

    def less(self, a, b):
        return self.index[b] in self._up[self.index[a]]

    def leq(self, a, b):
        return a == b or self.less(a, b)

    def above(self, a):
        return [self.elements[j] for j in sorted(self._up[self.index[a]])]

    def minimal(self, subset=None):
        subset = list(self.elements if subset is None else subset)
        return [a for a in subset if not any(self.less(b, a) for b in subset if b != a)]

    def subposet(self, subset):
        subset = [e for e in self.elements if e in set(subset)]
        return Poset(subset, leq=self.less)

    def is_up_closed(self, subset):
        s = set(subset)
        return all(b in s for a in s for b in self.above(a))

    def chains(self):
        """All nonempty chains, as tuples of labels in increasing order."""
        out = []
        n = len(self.elements)

        def extend(chain, last):
            out.append(tuple(self.elements[i] for i in chain))
            for j in sorted(self._up[last]):
                extend(chain + [j], j)

        for i in range(n):
            extend([i], i)
        return out


class SimplicialComplex:
    """A finite abstract simplicial complex; simplices are frozensets of vertices."""

    def __init__(self, simplices=()):
        faces = set()
        for s in simplices:
            s = frozenset(s)
            if not s or s in faces:
                continue
            items = sorted(s, key=sort_key)
            for k in range(1, len(items) + 1):
                for c in combinations(items, k):
                    faces.add(frozenset(c))
        self.simplices = frozenset(faces)

    @classmethod
    def from_closed(cls, simplices):
        out = cls()
        out.simplices = frozenset(simplices)
        return out

    @property
    def vertices(self):
        return sorted({v for s in self.simplices for v in s}, key=sort_key)

    @property
    def dim(self):
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def facets(self):
        by_size = sorted(self.simplices, key=len, reverse=True)
        out = []
        for s in by_size:
            if not any(s < t for t in out):
                out.append(s)
        return out

    def faces(self, k):
        return [s for s in self.simplices if len(s) == k + 1]

    def is_subcomplex_of(self, other):
        return self.simplices <= other.simplices

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __len__(self):
        return len(self.simplices)


def nerve(P):
    return SimplicialComplex.from_closed(frozenset(frozenset(c) for c in P.chains()))


def sd(P):
    """Poset of nonempty chains; c <= c' iff c' is part of c."""
    chains = [frozenset(c) for c in P.chains()]
    return Poset(chains, leq=lambda a, b: b < a)


def face_poset(K):
    return Poset(sorted(K.simplices, key=sort_key),
                 leq=lambda a, b: a < b)


def subdivide(K):
    """Barycentric subdivision: vertices are simplices of K, simplices are flags."""
    simp = sorted(K.simplices, key=len)
    out = set()

    def extend(flag, top):
        out.add(frozenset(flag))
        for t in simp:
            if len(t) > len(top) and top < t:
                extend(flag + [t], t)

    for s in simp:
        extend([s], s)
    return SimplicialComplex.from_closed(frozenset(out))


# ------------------------------------------------------------------ homology

def sort_key(v):
    """A total order on vertex labels, including nested frozensets."""
    if isinstance(v, frozenset):
        return (2, len(v), sorted(sort_key(x) for x in v))
    if isinstance(v, tuple):
        return (1, len(v), [sort_key(x) for x in v])
    return (0, repr(type(v)), v)


def _rank(cols):
    """Rank over Q of a sparse matrix given as a list of {row: value} columns."""
    pivots = {}
    r = 0
    for col in cols:
        col = {i: Fraction(v) for i, v in col.items() if v}
        while col:
            low = max(col)
            if low not in pivots:
                pivots[low] = col
                r += 1
                break
            other = pivots[low]
            f = col[low] / other[low]
            for i, v in other.items():
                nv = col.get(i, 0) - f * v
                if nv:
                    col[i] = nv
                else:
                    col.pop(i, None)
    return r


def rational_homology(K, top_dim=None):
    """Betti numbers b_0..b_top over Q."""
    if top_dim is None:
        top_dim = max(K.dim, 0)
    vid = {v: i for i, v in enumerate(sorted({v for s in K.simplices for v in s}, key=sort_key))}
    by_dim = [[] for _ in range(top_dim + 2)]
    for simplex in K.simplices:
        k = len(simplex) - 1
        if k <= top_dim + 1:
            by_dim[k].append(tuple(sorted(vid[v] for v in simplex)))
    index = [{t: i for i, t in enumerate(sorted(faces))} for faces in by_dim]
    ranks = [0] * (top_dim + 3)
    for k in range(1, top_dim + 2):
        cols = []
        for t in by_dim[k]:
            cols.append({index[k - 1][t[:i] + t[i + 1:]]: (-1) ** i for i in range(len(t))})
        ranks[k] = _rank(cols)
    return [len(by_dim[k]) - ranks[k] - ranks[k + 1] for k in range(top_dim + 1)]


def betti_string(b):
    return ",".join(str(x) for x in b)


def is_acyclic(K):
    """Q-acyclic and connected, i.e. the Betti numbers of a point."""
    if not K.simplices:
        return False
    b = rational_homology(K)
    return b[0] == 1 and not any(b[1:])


# --------------------------------------------------------------- expansions

def build_Dn(n):
    """Proper subsets of [n] = {0..n} under inclusion."""
    full = range(n + 1)
    subsets = [frozenset(c) for k in range(n + 1) for c in combinations(full, k)]
    return Poset(subsets, leq=lambda a, b: a < b)


def build_Dn_J(n, J):
    J = frozenset(J)
    if not J or not J < frozenset(range(n + 1)):
        raise ValueError("J must be a nonempty proper subset of [n]")
    D = build_Dn(n)
    return D.subposet([s for s in D.elements if not s <= J])


def is_weak_elementary_expansion(P, sub):
    """(ok, witness): P \\ sub has a unique minimal element 0 and sub_{>0} is up-closed and acyclic."""
    sub = set(sub)
    rest = [e for e in P.elements if e not in sub]
    mins = P.minimal(rest)
    if len(mins) != 1:
        return False, None
    zero = mins[0]
    if any(not P.leq(zero, e) for e in rest):
        return False, zero
    above = [e for e in P.elements if e in sub and P.less(zero, e)]
    if not above or not P.is_up_closed(above):
        return False, zero
    return is_acyclic(nerve(P.subposet(above))), zero


# ------------------------------------------------------------------ D-sets

def realize_dset(fibers, transitions):
    """Tot of a D-set given by fibers {J: elements} and maps {(J, J'): {x: y}}.

    Returns (Tot poset on pairs (J, x), its nerve).
    """
    keys = list(fibers)
    for (J, Jp), m in transitions.items():
        if not J < Jp:
            raise ValueError("transition maps must go from J to a strictly larger J'")
        if set(m) != set(fibers[J]) or not set(m.values()) <= set(fibers[Jp]):
            raise ValueError("transition map does not match the fibers")
    for (J, Jp), m in transitions.items():
        for (K, Kp), m2 in transitions.items():
            if K == Jp and (J, Kp) in transitions:
                direct = transitions[(J, Kp)]
                if any(direct[x] != m2[m[x]] for x in m):
                    raise ValueError("transition maps do not compose")
    elements = [(J, x) for J in keys for x in fibers[J]]
    rel = []
    for (J, Jp), m in transitions.items():
        for x, y in m.items():
            rel.append(((J, x), (Jp, y)))
    tot = Poset(elements, relations=rel)
    return tot, nerve(tot)


def dset_of_truncation(B):
    """The D-set data (fibers, transitions) of a truncated B complex."""
    fibers = {}
    for p in B.facets:
        fibers.setdefault(p.J, []).append(p.label)
    trans = {}
    for i, j in B.order:
        p, q = B.facets[i], B.facets[j]
        trans.setdefault((p.J, q.J), {})[p.label] = q.label
    return fibers, trans


# ------------------------------------------------------------------ collapse

@dataclass
class CollapseSequence:
    start: SimplicialComplex
    steps: list            # (tau, sigma) pairs
    end: SimplicialComplex


def closed_star(K, Z):
    zv = {v for s in Z.simplices for v in s}
    touching = [s for s in K.simplices if s & zv]
    return SimplicialComplex.from_closed(
        frozenset(f for s in touching for f in _all_faces(s)) | Z.simplices)


def _all_faces(s):
    items = list(s)
    return [frozenset(c) for k in range(1, len(items) + 1) for c in combinations(items, k)]


def _vertex_order(K):
    return {v: i for i, v in enumerate(sorted({v for s in K.simplices for v in s}, key=sort_key))}


def whitehead_collapse(Y, Z):
    """Collapse the closed star of sd^2 Z in sd^2 Y onto sd^2 Z."""
    if not Z.is_subcomplex_of(Y):
        raise ValueError("Z is not a subcomplex of Y")
    Y1, Z1 = subdivide(Y), subdivide(Z)
    Y2, Z2 = subdivide(Y1), subdivide(Z1)
    U = closed_star(Y2, Z2)
    vid = _vertex_order(U)

    def key(s):
        chain = sorted(s, key=len)
        carrier = chain[-1]
        outside = sum(1 for v in chain if v not in Z1.simplices)
        return (-len(carrier), sorted(vid_c(c) for c in carrier), -len(s), -outside,
                sorted(vid[v] for v in s))

    cid = _vertex_order(Y1)

    def vid_c(c):
        return cid[c]

    cur = set(U.simplices)
    cofaces = {s: set() for s in cur}
    for s in cur:
        for v in s:
            f = s - {v}
            if f:
                cofaces[f].add(s)
    order = sorted((s for s in cur if s not in Z2.simplices), key=key)
    steps = []
    zs = Z2.simplices
    while len(cur) > len(zs):
        done = False
        for sigma in order:
            if sigma not in cur or cofaces[sigma]:
                continue
            free = [sigma - {v} for v in sigma if len(sigma) > 1]
            free = [t for t in free if t not in zs and cofaces[t] == {sigma}]
            if not free:
                continue
            tau = min(free, key=key)
            steps.append((tau, sigma))
            for g in (sigma, tau):
                cur.discard(g)
                for v in g:
                    f = g - {v}
                    if f:
                        cofaces[f].discard(g)
            done = True
            break
        if not done:
            raise RuntimeError("collapse got stuck")
    return CollapseSequence(U, steps, Z2)


def is_free_face(simplices, tau):
    """The unique maximal simplex properly containing tau, or None."""
    above = [s for s in simplices if tau < s]
    if not above:
        return None
    top = max(above, key=len)
    if all(s <= top for s in above):
        return top
    return None


def verify_collapse(start, seq, expected_end, betti=False):
    """(ok, index of first failing step or None, betti vectors if requested)."""
    steps = seq.steps if isinstance(seq, CollapseSequence) else seq
    cur = set(start.simplices)
    history = []
    if betti:
        history.append(rational_homology(SimplicialComplex.from_closed(frozenset(cur)), 3))
    for k, (tau, sigma) in enumerate(steps):
        if tau not in cur or sigma not in cur or not tau < sigma:
            return False, k, history
        if is_free_face(cur, tau) != sigma:
            return False, k, history
        cur -= {g for g in cur if tau <= g <= sigma}
        if betti:
            history.append(rational_homology(SimplicialComplex.from_closed(frozenset(cur)), 3))
    if cur != set(expected_end.simplices):
        return False, len(steps), history
    return True, None, history
