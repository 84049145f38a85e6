"""Truncations of the complex B_nu, downward subsets, charts and the He-Nie flow.

B is handled through its facet poset (pieces with a fixed enhanced Newton
point) and through apartment charts (E, w).  On a chart the function
f(x) = |x - w x|^2 is a convex quadratic, so its gradient flow is solved in
closed form: the linear part H of the gradient is self-adjoint with
eigenvalues in {0, 2, 4, 6, 8} (w has finite order), and the flow line is
x(q) = x_c + sum_k q^(lambda_k / 2) P_k (x - x_c) with q = e^(2t), t <= 0.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
import random

from . import linalg
from .pieces import (Flat, bedard_from_min_rep, coarse_type_leq, delta, sigma_J)
from .root_datum import pair_two_rho


# ------------------------------------------------------------- truncations

@dataclass
class TruncatedBComplex:
    group: object
    nu_tilde: object
    L: int
    facets: tuple
    order: frozenset          # strict pairs (i, j): facets[i] < facets[j]
    essential: tuple

    @property
    def base_length(self):
        return pair_two_rho(self.group.datum, self.nu_tilde.nu)

    def index(self, p):
        return self.facets.index(p)

    def by_size(self):
        """Facets grouped by |J|."""
        out = {}
        for p in self.facets:
            out.setdefault(len(p.J), []).append(p)
        return out

    def labels(self, essential_only=False):
        return {p.label for p, e in zip(self.facets, self.essential) if e or not essential_only}


def _facet_key(G, p):
    return (len(p.J), sorted(p.J), G.key(p.u))


def build_truncated_B(G, nu_tilde, L):
    """All pieces with enhanced Newton point nu_tilde and length <= L."""
    base = pair_two_rho(G.datum, nu_tilde.nu)
    if L < base:
        raise ValueError("length bound is below <2 rho, nu>")
    facets = []
    elems = G.elements_up_to(L)
    for J in G.finite_type_subsets():
        for u in elems:
            if G.has_no_left_descent_in(J, u):
                p = bedard_from_min_rep(G, J, u)
                if p.newton == nu_tilde:
                    facets.append(p)
    facets.sort(key=lambda p: _facet_key(G, p))
    index = {p: k for k, p in enumerate(facets)}
    order = set()
    subsets = G.finite_type_subsets()
    for k, p in enumerate(facets):
        for Jp in subsets:
            if p.J < Jp:
                q = delta(G, Jp, p)
                order.add((k, index[q]))
    essential = tuple(p.length == base for p in facets)
    return TruncatedBComplex(G, nu_tilde, L, tuple(facets), frozenset(order), essential)


def essential_part(B):
    return [p for p, e in zip(B.facets, B.essential) if e]


def is_sub_dset(B, S):
    """Closed under the transition maps delta."""
    S = set(S)
    for i, j in B.order:
        if B.facets[i] in S and B.facets[j] not in S:
            return False
    return True


def is_downward(B, S):
    G = B.group
    S = set(S)
    if not S <= set(B.facets):
        return False
    if not set(essential_part(B)) <= S:
        return False
    if not is_sub_dset(B, S):
        return False
    for p in B.facets:
        if p in S:
            continue
        for q in S:
            if p.length <= q.length and coarse_type_leq(G, p.coarse_type, q.coarse_type):
                return False
    return True


@dataclass
class DownwardSpec:
    nu_tilde: object
    cuts: tuple               # (n, CoarseType) pairs
    facets: frozenset


def downward_spec(B, cuts):
    """The essential part together with S_{<=(n, [E])} for each cut."""
    G = B.group
    chosen = set(essential_part(B))
    for n, t in cuts:
        if n > B.L:
            raise ValueError("cut exceeds the truncation bound")
        for p in B.facets:
            if p.length <= n and coarse_type_leq(G, p.coarse_type, t):
                chosen.add(p)
    return DownwardSpec(B.nu_tilde, tuple(cuts), frozenset(chosen))


def full_type(G):
    from .pieces import coarse_type
    return coarse_type(G, frozenset())


# ------------------------------------------------------------------ charts

class NotStable(ValueError):
    pass


@dataclass
class ApartmentChart:
    """(E, w): E = point + span(basis); w acts on coordinates y by y -> R y + c."""
    group: object
    point: tuple
    basis: tuple
    w_bar: tuple
    w_shift: tuple
    provenance: object = None
    _gram: tuple = field(default=None, repr=False)
    _flow: tuple = field(default=None, repr=False)
    _henie: tuple = field(default=None, repr=False)

    def __post_init__(self):
        r = len(self.point)
        self._unit = self.basis == tuple(tuple(int(i == j) for j in range(r)) for i in range(r))

    @property
    def dim(self):
        return len(self.basis)

    @property
    def is_full(self):
        return self.dim == self.group.rank

    @property
    def gram(self):
        if self._gram is None:
            F = self.group.datum.invariant_form
            self._gram = tuple(tuple(linalg.bilinear(F, u, v) for v in self.basis)
                               for u in self.basis)
        return self._gram

    def coords(self, x):
        d = [xi - pi for xi, pi in zip(x, self.point)]
        if self._unit:
            return tuple(Fraction(v) for v in d)
        if not self.basis:
            if any(d):
                raise ValueError("point is not on the chart")
            return ()
        y = linalg.solve(linalg.transpose(self.basis), d)
        if y is None:
            raise ValueError("point is not on the chart")
        return y

    def ambient(self, y):
        if self._unit:
            return tuple(Fraction(p + v) for p, v in zip(self.point, y))
        out = list(self.point)
        for yi, b in zip(y, self.basis):
            out = [o + yi * bi for o, bi in zip(out, b)]
        return tuple(Fraction(v) for v in out)

    def apply_coords(self, y):
        return tuple(a + b for a, b in zip(linalg.matvec(self.w_bar, y), self.w_shift))

    def apply(self, x):
        return self.ambient(self.apply_coords(self.coords(x)))

    def contains(self, x):
        try:
            self.coords(x)
        except ValueError:
            return False
        return True

    def flat(self):
        # equations: vectors orthogonal (in the plain dot product) to the basis
        r = self.group.rank
        normals = linalg.nullspace(list(self.basis), r) if self.basis else \
            [tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)]
        rhs = [linalg.dot(nv, self.point) for nv in normals]
        return Flat.from_equations(normals, rhs, r)


def _combine(basis, y):
    r = len(basis[0])
    out = [Fraction(0)] * r
    for yi, b in zip(y, basis):
        for k in range(r):
            out[k] += yi * b[k]
    return tuple(out)


def chart_from_element(G, w):
    r = G.rank
    basis = tuple(tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r))
    m = G.finite_matrix(w)
    R = tuple(tuple(Fraction(x) for x in row) for row in m)
    c = tuple(Fraction(x) for x in w.translation)
    return ApartmentChart(G, tuple(Fraction(0) for _ in range(r)), basis, R, c, w)


def chart_restrict(chart, E):
    """Restrict a chart to a w-stable affine subspace E (a Flat) contained in its domain."""
    G = chart.group
    p = E.point()
    dirs = E.direction()
    if not chart.contains(p) or any(not _in_span(chart.basis, d) for d in dirs):
        raise NotStable("subspace is not contained in the chart")
    wp = chart.apply(p)
    if not E.contains_point(wp):
        raise NotStable("subspace is not stable under w")
    lin = []
    for d in dirs:
        img = _combine(chart.basis, linalg.matvec(chart.w_bar, _span_coords(chart.basis, d)))
        if not all(linalg.dot(row, img) == 0 for row in E.matrix):
            raise NotStable("subspace is not stable under w")
        lin.append(_span_coords(dirs, img) if dirs else ())
    R = linalg.transpose(lin) if dirs else ()
    shift = tuple(a - b for a, b in zip(wp, p))
    c = _span_coords(dirs, shift) if dirs else ()
    return ApartmentChart(G, tuple(p), tuple(dirs), tuple(tuple(r) for r in R), tuple(c),
                          chart.provenance)


def _span_coords(basis, v):
    return linalg.solve(linalg.transpose(basis), v)


def _in_span(basis, v):
    if not basis:
        return not any(v)
    return _span_coords(basis, v) is not None


# -------------------------------------------------------- He-Nie function

def _minus_one(R):
    n = len(R)
    return tuple(tuple(R[i][j] - (1 if i == j else 0) for j in range(n)) for i in range(n))


def _common(values):
    values = [Fraction(v) for v in values]
    D = lcm(*(v.denominator for v in values)) if values else 1
    return D, [int(v * D) for v in values]


def _henie_unit(chart, x):
    # d = x - w(x) = (1 - R) y - c with y = x - point; scaled to integers
    if chart._henie is None:
        M = _minus_one(chart.w_bar)
        E, flat = _common([-v for row in M for v in row] + list(chart.w_shift))
        r = len(M)
        Fd, Fi = _common(v for row in chart.group.datum.invariant_form for v in row)
        chart._henie = (E, [flat[i * r:(i + 1) * r] for i in range(r)], flat[r * r:],
                        [Fi[i * r:(i + 1) * r] for i in range(r)], Fd)
    E, Mi, Ci, Fi, Fd = chart._henie
    D, Y = _common(a - b for a, b in zip(x, chart.point))
    v = [sum(m * y for m, y in zip(row, Y)) - D * c for row, c in zip(Mi, Ci)]
    q = sum(vj * sum(f * vk for f, vk in zip(row, v)) for vj, row in zip(v, Fi))
    return Fraction(q, (E * D) ** 2 * Fd)


def henie_value(chart, x):
    if chart._unit:
        return _henie_unit(chart, x)
    F = chart.group.datum.invariant_form
    x = tuple(Fraction(v) for v in x)
    d = [a - b for a, b in zip(x, chart.apply(x))]
    return linalg.bilinear(F, d, d)


def _grad_coords(chart, y):
    """2 G^-1 (R - 1)^T G ((R - 1) y + c), in chart coordinates."""
    if not chart.basis:
        return ()
    A = _minus_one(chart.w_bar)
    G = chart.gram
    v = [a + b for a, b in zip(linalg.matvec(A, y), chart.w_shift)]
    rhs = linalg.matvec(linalg.transpose(A), linalg.matvec(G, v))
    g = linalg.solve(G, rhs)
    return tuple(2 * x for x in g)


def henie_gradient(chart, x):
    """The gradient as an ambient vector (tangent to E)."""
    y = chart.coords(tuple(Fraction(v) for v in x))
    g = _grad_coords(chart, y)
    if not g:
        return tuple(Fraction(0) for _ in range(chart.group.rank))
    return _combine(chart.basis, g)


def _hessian_half(chart):
    """M = G^-1 A^T G A; the gradient is 2 (M y + G^-1 A^T G c)."""
    A = _minus_one(chart.w_bar)
    G = chart.gram
    Ginv = linalg.inverse(G)
    return linalg.matmul(Ginv, linalg.matmul(linalg.transpose(A), linalg.matmul(G, A)))


@dataclass(frozen=True)
class CriticalSet:
    point: tuple      # ambient
    basis: tuple      # ambient directions


def _critical_coords(chart):
    n = chart.dim
    A = _minus_one(chart.w_bar)
    G = chart.gram
    At_G = linalg.matmul(linalg.transpose(A), G)
    lhs = linalg.matmul(At_G, A)
    rhs = [-x for x in linalg.matvec(At_G, chart.w_shift)]
    y0 = linalg.solve(lhs, rhs)
    assert y0 is not None
    ker = linalg.nullspace(lhs, n)
    return y0, ker


def critical_set(chart):
    if not chart.basis:
        return CriticalSet(tuple(chart.point), ())
    y0, ker = _critical_coords(chart)
    return CriticalSet(chart.ambient(y0), tuple(_combine(chart.basis, k) for k in ker))


_EIGEN = (0, 2, 4, 6, 8)


def spectral_projectors(chart):
    """{lambda: P_lambda} for the linear part H = 2 M of the gradient."""
    n = chart.dim
    H = [[2 * x for x in row] for row in _hessian_half(chart)]
    present = []
    for lam in _EIGEN:
        shifted = [[H[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        if linalg.rank(shifted) < n:
            present.append(lam)
    proj = {}
    ident = linalg.identity(n)
    for lam in present:
        P = [list(map(Fraction, row)) for row in ident]
        for mu in present:
            if mu == lam:
                continue
            factor = [[(H[i][j] - (mu if i == j else 0)) / Fraction(lam - mu) for j in range(n)]
                      for i in range(n)]
            P = [list(r) for r in linalg.matmul(P, factor)]
        proj[lam] = tuple(tuple(r) for r in P)
    total = [[sum(proj[l][i][j] for l in proj) for j in range(n)] for i in range(n)]
    if total != [list(map(Fraction, r)) for r in ident]:
        raise ArithmeticError("gradient operator has eigenvalues outside {0,2,4,6,8}")
    return proj


def _flow_terms(chart, x, cache):
    y = chart.coords(tuple(Fraction(v) for v in x))
    proj, yc = cache if cache is not None else (spectral_projectors(chart),
                                                _critical_coords(chart)[0])
    d = [a - b for a, b in zip(y, yc)]
    return yc, [(lam // 2, linalg.matvec(P, d)) for lam, P in proj.items()]


def _flow_at(chart, yc, terms, q):
    out = list(yc)
    for k, pd in terms:
        if k > 0 and q == 0:
            continue
        scale = Fraction(q) ** k
        out = [o + scale * v for o, v in zip(out, pd)]
    return chart.ambient(out)


def flow_point(chart, x, q, _cache=None):
    """The point Phi_t(x) with q = exp(2t) in [0, 1]; q = 0 is the limit."""
    if not chart.basis:
        chart.coords(tuple(Fraction(v) for v in x))
        return chart.ambient(())
    return _flow_at(chart, *_flow_terms(chart, x, _cache), q)


def flow_path(chart, x, steps):
    """Exact points x(q_k), q_k = (N - k)/N for k = 0..N (the last is the limit)."""
    if not chart.basis:
        return [flow_point(chart, x, 0)] * (steps + 1)
    if chart._flow is None:
        chart._flow = (spectral_projectors(chart), _critical_coords(chart)[0])
    yc, terms = _flow_terms(chart, x, chart._flow)
    return [_flow_at(chart, yc, terms, Fraction(steps - k, steps)) for k in range(steps + 1)]


def euler_flow(chart, x, step=1 / 64, nsteps=10 ** 4):
    """Floating point explicit Euler for dx/dt = -grad f (i.e. t -> -infinity)."""
    import numpy as np
    y = np.array([float(v) for v in chart.coords(tuple(Fraction(v) for v in x))])
    if y.size == 0:
        return tuple(float(v) for v in chart.point)
    A = np.array(_minus_one(chart.w_bar), dtype=float)
    G = np.array(chart.gram, dtype=float)
    c = np.array([float(v) for v in chart.w_shift])
    Ginv_AtG = np.linalg.solve(G, A.T @ G)
    for _ in range(nsteps):
        y = y - step * 2 * Ginv_AtG @ (A @ y + c)
    basis = np.array(chart.basis, dtype=float)
    return tuple(np.array([float(v) for v in chart.point]) + basis.T @ y)


def flow_limit(chart, x, check=True):
    """Limit of the flow as t -> -infinity, with the piece of its facet."""
    if not chart.is_full:
        raise ValueError("flow_limit needs a chart on the whole apartment")
    lim = flow_point(chart, x, 0)
    p = facet_of_point(chart, lim)
    if check:
        G = chart.group
        base = pair_two_rho(G.datum, p.newton.nu)
        assert p.length == base, "flow limit is not in the essential part"
    return lim, p


# --------------------------------------------------------- facet of a point

def fold_into_alcove(G, x):
    """(y, z) with y in W^a, z in the closed fundamental alcove and x = y z."""
    y, X, D = _fold_scaled(G, x)
    return y, tuple(Fraction(v, D) for v in X)


def _fold_scaled(G, x):
    D, X = _common(x)
    # work with X = D x, which is integral; the affine root (a, k) becomes a.X + k D
    X = tuple(X)
    r = G.rank
    refl = [(tuple(D * t for t in s.translation), s.finite) for s in G.simples]
    roots = G.affine_roots
    y = G.identity
    while True:
        for i in G.nodes:
            cov, c = roots[i]
            if sum(a * b for a, b in zip(cov, X)) + c * D < 0:
                t, m = refl[i]
                X = tuple(t[j] + sum(m[j * r + k] * X[k] for k in range(r)) for j in range(r))
                y = G.multiply(y, G.simples[i])
                break
        else:
            return y, X, D


def facet_of_point(chart, x):
    """The piece sigma_J(y^-1 w y), where y F_J is the facet containing x."""
    if not chart.is_full or chart.provenance is None:
        raise ValueError("facet_of_point needs a chart (A, w) on the whole apartment")
    G = chart.group
    y, X, D = _fold_scaled(G, x)
    roots = G.affine_roots
    J = frozenset(i for i in G.nodes
                  if sum(a * b for a, b in zip(roots[i][0], X)) + roots[i][1] * D == 0)
    w = chart.provenance
    return sigma_J(G, J, G.multiply(G.inverse(y), w, y))


def sample_facet(G, y, J, rng, count):
    """``count`` rational points in the open facet y F_J (perturbed barycenters)."""
    J = frozenset(J)
    pts = []
    for _ in range(count):
        x = [Fraction(0)] * G.rank
        for k in range(len(G.datum.factors)):
            free = [i for i in G.nodes if G.node_factor[i] == k and i not in J]
            wts = [1 + Fraction(rng.randint(-7, 7), 16) for _ in free]
            tot = sum(wts)
            for i, wt in zip(free, wts):
                v = G.vertex(i)
                x = [a + wt / tot * b for a, b in zip(x, v)]
        pts.append(G.act_on_apartment(y, tuple(x)))
    return pts


# ---------------------------------------------------------- verification

@dataclass
class FlowRecord:
    chart: str
    sample: tuple
    limit: tuple
    limit_piece: str
    violations: list


@dataclass
class ContractionReport:
    records: list
    checked_points: int = 0

    @property
    def violations(self):
        return [(r, v) for r in self.records for v in r.violations]

    @property
    def ok(self):
        return not self.violations


def _check_path(chart, path, base, member):
    """Violations along an exact flow path; member(piece) decides spec membership."""
    G = chart.group
    out = []
    vals = [henie_value(chart, x) for x in path]
    lim = path[-1]
    if any(henie_gradient(chart, lim)):
        out.append("limit is not critical")
    crit = vals[-1]
    for a, b in zip(vals, vals[1:]):
        if a != crit and not b < a:
            out.append("f does not decrease along the flow")
            break
    pieces = [facet_of_point(chart, x) for x in path]
    if pieces[-1].length != base:
        out.append(f"limit facet {pieces[-1].label} is not essential")
    for x, p in zip(path, pieces):
        if not member(p):
            out.append(f"flow leaves the spec at facet {p.label}")
            break
    return out, pieces


def verify_contraction(B, spec, samples=5, steps=8, seed=0):
    G = B.group
    rng = random.Random(seed)
    base = B.base_length
    report = ContractionReport([])
    for p in sorted(spec.facets, key=lambda p: _facet_key(G, p)):
        chart = chart_from_element(G, p.u)
        for x in sample_facet(G, G.identity, p.J, rng, samples):
            assert facet_of_point(chart, x) == p
            path = flow_path(chart, x, steps)
            viol, pieces = _check_path(chart, path, base, lambda q: q in spec.facets)
            report.checked_points += len(path)
            report.records.append(FlowRecord(f"(A,{G.word_string(p.u)})", tuple(x), path[-1],
                                             pieces[-1].label, viol))
    return report


def verify_charts(G, max_len, radius=3, samples=5, steps=8, seed=0, extra=3):
    """Flow checks on every chart (A, w) with l(w) <= max_len.

    Facets y F_J with l(y) <= radius are sampled; a facet whose piece has
    length <= n is in S_{<=(n, [A])}, and the flow from it must stay there
    for every n in (<2 rho, nu>, <2 rho, nu> + extra].
    """
    rng = random.Random(seed)
    report = ContractionReport([])
    subsets = G.finite_type_subsets()
    affine = [y for y in G.elements_up_to(radius) if G.omega_component(y).is_identity]
    for w in G.elements_up_to(max_len):
        chart = chart_from_element(G, w)
        nu = sigma_J(G, frozenset(), w).newton
        base = pair_two_rho(G.datum, nu.nu)
        cuts = [base + k for k in range(1, extra + 1)]
        seen = set()
        for J in subsets:
            for y in affine:
                y0 = G.min_right_coset_rep(J, y)
                if (J, y0) in seen:
                    continue
                seen.add((J, y0))
                start = sigma_J(G, J, G.multiply(G.inverse(y0), w, y0))
                if start.length > cuts[-1]:
                    continue
                for x in sample_facet(G, y0, J, rng, samples):
                    path = flow_path(chart, x, steps)
                    viol, pieces = _check_path(chart, path, base, lambda q: True)
                    if any(q.newton != nu for q in pieces):
                        viol.append("enhanced Newton point changes along the chart")
                    top = max(q.length for q in pieces)
                    for n in cuts:
                        if start.length <= n < top:
                            viol.append(f"flow leaves S_<=({n},[A]) at length {top}")
                    report.checked_points += len(path)
                    report.records.append(FlowRecord(f"(A,{G.word_string(w)})", tuple(x),
                                                     path[-1], pieces[-1].label, viol))
    return report
