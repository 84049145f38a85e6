"""Reduced root data, finite Weyl groups and the invariant form.

Everything lives in the coweight lattice Lambda = X_*(T), written in a
fixed integer basis.  Coweights are column vectors, roots are covectors
(rows).  A simple reflection acts on coweights by
``x -> x - <alpha_i, x> alpha_i^vee``.
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
import re

from . import linalg


class RootDatumError(ValueError):
    pass


def _chain(n):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def cartan_matrix_of(series, rank):
    """Cartan matrix with entries a[i][j] = <alpha_i, alpha_j^vee>, Bourbaki numbering."""
    s = series.upper()
    n = rank
    if s == "A" and n >= 1:
        return _chain(n)
    if s == "B" and n >= 2:
        a = _chain(n)
        a[n - 2][n - 1] = -2
        return a
    if s == "C" and n >= 2:
        a = _chain(n)
        a[n - 1][n - 2] = -2
        return a
    if s == "D" and n >= 4:
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    if s == "E" and n in (6, 7, 8):
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        edges = [(0, 2), (1, 3), (2, 3), (3, 4)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in edges:
            a[i][j] = a[j][i] = -1
        return a
    if s == "F" and n == 4:
        a = _chain(4)
        a[1][2] = -2
        return a
    if s == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise RootDatumError(f"unknown Cartan type {series}{rank}")


@dataclass(frozen=True)
class FiniteWeylElement:
    matrix: tuple
    word: tuple = field(default=(), compare=False)

    def __repr__(self):
        w = " ".join(f"s{i + 1}" for i in self.word) or "1"
        return f"FiniteWeylElement({w})"


@dataclass(frozen=True)
class Factor:
    series: str
    rank: int
    isogeny: str
    nodes: tuple          # global indices of the finite simple roots of this factor
    highest_root: tuple   # covector in Lambda coordinates
    highest_coroot: tuple
    marks: tuple          # coefficients of the highest root in the simple roots

    @property
    def label(self):
        return f"{self.series}{self.rank}"


class RootDatum:
    """A semisimple root datum, possibly a product of irreducible ones.

    ``basis`` has as columns the basis of Lambda written in fundamental
    coweight coordinates.
    """

    def __init__(self, cartan, basis, factors, label):
        self.label = label
        self.rank = len(cartan)
        self.cartan_matrix = tuple(tuple(r) for r in cartan)
        self.coweight_lattice = tuple(tuple(r) for r in basis)
        self.factors = tuple(factors)
        a = self.cartan_matrix
        r = self.rank
        # alpha_i in Lambda coordinates is row i of the basis matrix
        self.simple_roots = tuple(tuple(int(x) for x in basis[i]) for i in range(r))
        binv = linalg.inverse(basis)
        cor = []
        for j in range(r):
            col = linalg.matvec(binv, [a[i][j] for i in range(r)])
            if any(Fraction(x).denominator != 1 for x in col):
                raise RootDatumError("coroot lattice is not contained in the coweight lattice")
            cor.append(tuple(int(x) for x in col))
        self.simple_coroots = tuple(cor)
        self._check_cartan()
        self._build_roots()

    def _check_cartan(self):
        for i, al in enumerate(self.simple_roots):
            for j, co in enumerate(self.simple_coroots):
                if linalg.dot(al, co) != self.cartan_matrix[i][j]:
                    raise RootDatumError("basis does not reproduce the Cartan matrix")

    def _build_roots(self):
        r = self.rank
        start = [(self.simple_roots[i], self.simple_coroots[i]) for i in range(r)]
        seen = set(start)
        queue = deque(start)
        while queue:
            beta, cob = queue.popleft()
            for i in range(r):
                al, co = self.simple_roots[i], self.simple_coroots[i]
                c = linalg.dot(beta, co)
                nb = tuple(b - c * x for b, x in zip(beta, al))
                d = linalg.dot(al, cob)
                nc = tuple(b - d * x for b, x in zip(cob, co))
                if (nb, nc) not in seen:
                    seen.add((nb, nc))
                    queue.append((nb, nc))
        sinv = linalg.inverse(self.simple_roots)
        pos = []
        for beta, cob in seen:
            coeffs = linalg.vecmat(beta, sinv)
            if all(c >= 0 for c in coeffs):
                pos.append((tuple(int(c) for c in coeffs), beta, cob))
        pos.sort(key=lambda t: (sum(t[0]), t[0]))
        self.positive_root_coefficients = tuple(p[0] for p in pos)
        self.positive_roots = tuple(p[1] for p in pos)
        self.positive_coroots = tuple(p[2] for p in pos)
        self.coroot_of = {b: c for b, c in seen}
        self.two_rho = tuple(sum(col) for col in zip(*self.positive_roots))
        self.two_rho_vee = tuple(sum(col) for col in zip(*self.positive_coroots))

    @property
    def roots(self):
        return self.positive_roots + tuple(tuple(-x for x in b) for b in self.positive_roots)

    @cached_property
    def simple_reflections(self):
        """Integer matrices S_i = 1 - alpha_i^vee alpha_i acting on Lambda."""
        r = self.rank
        out = []
        for al, co in zip(self.simple_roots, self.simple_coroots):
            out.append(tuple(tuple(int(i == j) - co[i] * al[j] for j in range(r)) for i in range(r)))
        return tuple(out)

    def reflection_matrix(self, beta):
        co = self.coroot_of[tuple(beta)]
        r = self.rank
        return tuple(tuple(int(i == j) - co[i] * beta[j] for j in range(r)) for i in range(r))

    @cached_property
    def invariant_form(self):
        """Sum of beta^T beta over all roots, rescaled per factor so short coroots have norm 2."""
        r = self.rank
        form = [[Fraction(0)] * r for _ in range(r)]
        for fac in self.factors:
            nodes = set(fac.nodes)
            fr = [b for b, c in zip(self.positive_roots, self.positive_root_coefficients)
                  if any(c[i] for i in nodes)]
            part = [[sum(Fraction(b[i] * b[j]) for b in fr) for j in range(r)] for i in range(r)]
            cors = [self.coroot_of[b] for b in fr]
            short = min(linalg.bilinear(part, c, c) for c in cors)
            scale = Fraction(2) / short
            for i in range(r):
                for j in range(r):
                    form[i][j] += part[i][j] * scale
        return tuple(tuple(row) for row in form)

    @cached_property
    def weyl_group(self):
        """All elements of W as integer matrices, sorted by (length, matrix)."""
        r = self.rank
        ident = linalg.identity(r)
        words = {ident: ()}
        queue = deque([ident])
        while queue:
            m = queue.popleft()
            for i, s in enumerate(self.simple_reflections):
                n = linalg.matmul(s, m)
                if n not in words:
                    words[n] = (i,) + words[m]
                    queue.append(n)
        elems = sorted(words, key=lambda m: (len(words[m]), m))
        return tuple(FiniteWeylElement(m, words[m]) for m in elems)

    @cached_property
    def weyl_index(self):
        return {w.matrix: k for k, w in enumerate(self.weyl_group)}

    def finite_length(self, matrix):
        """Number of positive roots sent to negative roots by the matrix."""
        p = linalg.matvec(matrix, self.two_rho_vee)
        return sum(1 for b in self.positive_roots if linalg.dot(b, p) < 0)

    def fundamental_coweight(self, i):
        """The fundamental coweight varpi_i^vee in Lambda coordinates (rational)."""
        e = [int(k == i) for k in range(self.rank)]
        return linalg.matvec(linalg.inverse(self.coweight_lattice), e)

    def in_lattice(self, v):
        return all(Fraction(x).denominator == 1 for x in v)

    def __repr__(self):
        return f"RootDatum({self.label})"


def _block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


_ISOGENY = {"sc": "sc", "simply-connected": "sc", "simply_connected": "sc",
            "ad": "ad", "adjoint": "ad"}


def build_root_datum(series, rank=None, isogeny="sc"):
    """Build a root datum.

    ``series`` is either a letter (with ``rank``) or a list of
    ``(series, rank, isogeny)`` triples for a product.
    """
    if isinstance(series, (list, tuple)):
        comps = [(s, n, iso) for s, n, iso in series]
    else:
        comps = [(series, rank, isogeny)]
    cartans, bases, factors, labels = [], [], [], []
    offset = 0
    for s, n, iso in comps:
        a = cartan_matrix_of(s, n)
        key = _ISOGENY.get(str(iso).lower())
        if key is None:
            if isinstance(iso, (list, tuple)):
                basis, key = [list(r) for r in iso], "custom"
            else:
                raise RootDatumError(f"unknown isogeny {iso!r}")
        elif key == "sc":
            basis = a
        else:
            basis = linalg.identity(n)
        cartans.append(a)
        bases.append(basis)
        labels.append(f"{s.upper()}{n}:{key}")
        factors.append((s.upper(), n, key, tuple(range(offset, offset + n))))
        offset += n
    datum = RootDatum(_block_diag(cartans), _block_diag(bases), [], "x".join(labels))
    facs = []
    for s, n, key, nodes in factors:
        best = None
        for c, b, cob in zip(datum.positive_root_coefficients, datum.positive_roots,
                             datum.positive_coroots):
            if any(c[i] for i in range(datum.rank) if i not in nodes):
                continue
            if best is None or sum(c) > sum(best[0]):
                best = (c, b, cob)
        facs.append(Factor(s, n, key, nodes, best[1], best[2], tuple(best[0][i] for i in nodes)))
    datum.factors = tuple(facs)
    return datum


_SPEC_RE = re.compile(r"^([A-Ga-g])(\d+)(?::(sc|ad))?$", re.IGNORECASE)


def parse_datum_spec(text):
    """Parse strings like "A1:sc", "a2:ad", "G2" or "A1:sc x A1:ad"."""
    parts = [p.strip() for p in re.split(r"\s*[x*]\s*(?=[A-Ga-g]\d)", text.strip()) if p.strip()]
    if not parts:
        raise RootDatumError(f"empty root datum spec {text!r}")
    comps = []
    for p in parts:
        m = _SPEC_RE.match(p)
        if not m:
            raise RootDatumError(f"cannot parse root datum spec {p!r}")
        comps.append((m.group(1).upper(), int(m.group(2)), (m.group(3) or "sc").lower()))
    return build_root_datum(comps)


def dominant_representative(d, v):
    """Return (v+, w) with v+ dominant and w v = v+."""
    v = tuple(Fraction(x) for x in v)
    word = []
    while True:
        for i, al in enumerate(d.simple_roots):
            if linalg.dot(al, v) < 0:
                c = linalg.dot(al, v)
                v = tuple(x - c * y for x, y in zip(v, d.simple_coroots[i]))
                word.append(i)
                break
        else:
            break
    m = linalg.identity(d.rank)
    for i in word:
        m = linalg.matmul(d.simple_reflections[i], m)
    # word was applied left to right, so w = s_{ik} ... s_{i1}
    return v, FiniteWeylElement(m, tuple(reversed(word)))


def pair_two_rho(d, nu):
    return Fraction(linalg.dot(d.two_rho, nu))
