"""The acceptance suite: twelve checks shared by the command line and the tests.

Each check returns a list of failure messages (empty means pass) and a
few summary lines.  Runtime limits are part of a check's verdict.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import random
import time

from .affine_weyl import affine_weyl_group
from .bcomplex import (NotStable, build_truncated_B, chart_from_element, chart_restrict,
                       essential_part, henie_gradient, henie_value, verify_charts)
from .dual_invariants import (load_pair_tables, match_tables, orbit_count_union_find,
                              orbit_series, split_pairs)
from .pieces import (E_Jw, bedard_from_min_rep, delta, newton_from_values, newton_point,
                     sigma_J)
from .poset_homotopy import (SimplicialComplex, build_Dn, build_Dn_J, is_acyclic,
                             is_weak_elementary_expansion, nerve, rational_homology, sort_key,
                             subdivide, verify_collapse, whitehead_collapse)
from .root_datum import pair_two_rho

PIECE_TYPES = ("A1:sc", "A2:sc", "C2:sc")
FLOW_TYPES = ("A1:sc", "A2:sc")
SHIPPED_PAIRS = ("SL2/PGL2", "SL3/PGL3", "SL4/PGL4", "Sp4/SO5", "G2/G2")


@dataclass
class SuiteConfig:
    seed: int = 0
    samples: int = 5
    tables: object = None


@dataclass
class CriterionResult:
    number: int
    key: str
    title: str
    failures: list
    summary: list
    seconds: float
    limit: object = None

    @property
    def within_limit(self):
        return self.limit is None or self.seconds < self.limit

    @property
    def ok(self):
        return not self.failures and self.within_limit

    def line(self):
        verdict = "PASS" if self.ok else "FAIL"
        lim = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        return f"[{verdict}] {self.number:2d} {self.key}: {self.title}{lim}"


# --------------------------------------------------------------------- 1, 2

def _graph(B):
    """(vertices, edges as vertex pairs) of a one-dimensional truncation."""
    verts = [k for k, p in enumerate(B.facets) if len(p.J) == 1]
    edges = []
    for k, p in enumerate(B.facets):
        if not p.J:
            ends = sorted(j for i, j in B.order if i == k)
            edges.append(tuple(ends))
    return verts, edges


def _is_tree(verts, edges):
    if len(edges) != len(verts) - 1:
        return False
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            v = parent[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def check_sl2(cfg):
    G = affine_weyl_group("A1:sc")
    fails, summary = [], []
    B1 = build_truncated_B(G, newton_from_values(G, [1]), 2)
    verts, edges = _graph(B1)
    want = {"s0s1/{}", "s1s0/{}", "s1s0/{s0}", "s0s1/{s1}"}
    if B1.labels() != want:
        fails.append(f"nu=1 facets {sorted(B1.labels())}")
    if len(verts) != 2 or len(edges) != 2 or any(set(e) != set(verts) for e in edges):
        fails.append("nu=1 truncation is not a cycle on two vertices")
    summary.append(f"nu=1 L=2: {len(verts)} vertices, {len(edges)} edges")

    B0 = build_truncated_B(G, newton_from_values(G, [0]), 3)
    verts, edges = _graph(B0)
    if len(verts) != 6 or len(edges) != 5 or any(len(e) != 2 for e in edges):
        fails.append(f"nu=0 truncation has {len(verts)} vertices and {len(edges)} edges")
    elif not _is_tree(verts, edges):
        fails.append("nu=0 truncation is not a tree")
    want0 = {"1/{}", "s0/{}", "s1/{}", "s0s1s0/{}", "s1s0s1/{}",
             "1/{s0}", "1/{s1}", "s1/{s0}", "s0/{s1}", "s1s0s1/{s0}", "s0s1s0/{s1}"}
    if B0.labels() != want0:
        fails.append(f"nu=0 facets {sorted(B0.labels())}")
    ess = {p.label for p in essential_part(B0)}
    if ess != {"1/{}", "1/{s0}", "1/{s1}"}:
        fails.append(f"essential part {sorted(ess)}")
    summary.append(f"nu=0 L=3: {len(verts)} vertices, {len(edges)} edges, "
                   f"essential {sorted(ess)}")
    return fails, summary


def check_pgl2(cfg):
    G = affine_weyl_group("A1:ad")
    fails, summary = [], []
    seen = set()
    for w in G.elements_up_to(4):
        nt = newton_point(G, w)
        (c,) = nt.coroot_coords(G)
        seen.add((c, nt.omega.index))
    want = {(Fraction(n, 2), n % 2) for n in range(5)} | {(Fraction(0), 1)}
    if seen != want:
        fails.append(f"Newton values {sorted(seen)}")
    summary.append("Newton values " + ", ".join(f"({c},om{k})" for c, k in sorted(seen)))
    B = build_truncated_B(G, newton_from_values(G, [0], 1), 1)
    want_b = {"om1/{}", "om1/{s0}", "om1/{s1}"}
    if B.labels() != want_b:
        fails.append(f"(0,om1) facets {sorted(B.labels())}")
    verts, edges = _graph(B)
    if len(verts) != 2 or edges != [tuple(verts)]:
        fails.append("(0,om1) truncation is not a single edge")
    if B.labels(essential_only=True) != want_b:
        fails.append(f"essential part {sorted(B.labels(essential_only=True))}")
    summary.append(f"(0,om1) L=1: {sorted(B.labels())}")
    return fails, summary


# ------------------------------------------------------------------ 3 to 6

def check_sigma(cfg):
    rng = random.Random(cfg.seed)
    fails, summary = [], []
    for spec in PIECE_TYPES:
        G = affine_weyl_group(spec)
        subsets = G.finite_type_subsets()
        elems = G.elements_up_to(8)
        for k in range(500):
            J = subsets[k % len(subsets)]
            w = rng.choice(elems)
            gens = sorted(J)
            word = [rng.choice(gens) for _ in range(rng.randint(0, 6))] if gens else []
            wp = G.conjugate(G.from_word(word), w)
            a = sigma_J(G, J, w, cache=False)
            b = sigma_J(G, J, wp, cache=False)
            if a != b:
                fails.append(f"{spec} J={G.subset_string(J)} w={G.render(w)}: "
                             f"{a.label} != {b.label}")
        summary.append(f"{spec}: 500 pairs over {len(subsets)} subsets")
    return fails, summary


def check_bedard(cfg):
    fails, summary = [], []
    for spec in PIECE_TYPES:
        G = affine_weyl_group(spec)
        count = 0
        for J in G.finite_type_subsets():
            for u in G.elements_up_to(6):
                if not G.has_no_left_descent_in(J, u):
                    continue
                count += 1
                p = bedard_from_min_rep(G, J, u)
                prod = G.mul(G.identity, *(s[2] for s in p.bedard))
                if prod != u:
                    fails.append(f"{spec} {p.label}: sequence product {G.render(prod)}")
                q = sigma_J(G, J, u, cache=False)
                if q.u != u:
                    fails.append(f"{spec} {p.label}: sigma_J gives {q.label}")
        summary.append(f"{spec}: {count} minimal representatives")
    return fails, summary


def _pieces_up_to(G, L):
    """Pieces sigma_J(w) for all finite type J and all w of length <= L."""
    out = {}
    for J in G.finite_type_subsets():
        for w in G.elements_up_to(L):
            out[(J, w)] = sigma_J(G, J, w)
    return out


def check_delta(cfg):
    fails, summary = [], []
    for spec in PIECE_TYPES:
        G = affine_weyl_group(spec)
        subsets = G.finite_type_subsets()
        table = _pieces_up_to(G, 6)
        checks = 0
        for (J, w), p in table.items():
            for Jp in subsets:
                if not J < Jp:
                    continue
                checks += 1
                if sigma_J(G, Jp, w) != delta(G, Jp, p):
                    fails.append(f"{spec} {p.label} -> {G.subset_string(Jp)}: projection")
                for Jpp in subsets:
                    if Jp < Jpp and delta(G, Jpp, delta(G, Jp, p)) != delta(G, Jpp, p):
                        fails.append(f"{spec} {p.label}: delta does not compose")
        summary.append(f"{spec}: {len(set(table.values()))} pieces, {checks} projections")
    return fails, summary


def check_newton(cfg):
    fails, summary = [], []
    for spec in PIECE_TYPES:
        G = affine_weyl_group(spec)
        straight = 0
        for J in G.finite_type_subsets():
            for u in G.elements_up_to(6):
                if not G.has_no_left_descent_in(J, u):
                    continue
                p = bedard_from_min_rep(G, J, u)
                for y in G.parabolic(p.K):
                    if newton_point(G, G.multiply(u, y)) != p.newton:
                        fails.append(f"{spec} {p.label}: Newton point moves under W_K")
                        break
        for w in G.elements_up_to(6):
            nu = newton_point(G, w).nu
            bound = pair_two_rho(G.datum, nu)
            lw = G.length(w)
            if lw < bound:
                fails.append(f"{spec} {G.render(w)}: length below <2rho,nu>")
            m = G.finite_order(w)
            additive = all(G.length(G.power(w, k)) == k * lw for k in range(1, 2 * m + 1))
            if (lw == bound) != additive:
                fails.append(f"{spec} {G.render(w)}: equality and straightness disagree")
            straight += additive
        summary.append(f"{spec}: {straight} straight elements of length <= 6")
    return fails, summary


# --------------------------------------------------------------------- 7, 8

def _fd_gradient(chart, x, h=1e-3):
    out = []
    for i in range(len(x)):
        xp = list(x)
        xm = list(x)
        xp[i] += Fraction(h)
        xm[i] -= Fraction(h)
        out.append((float(henie_value(chart, xp)) - float(henie_value(chart, xm))) / (2 * h))
    return out


def _euclid_gradient(G, g):
    """Ambient gradient -> coordinate partial derivatives (form times vector)."""
    F = G.datum.invariant_form
    return [float(sum(F[i][j] * g[j] for j in range(len(g)))) for i in range(len(g))]


def check_gradient(cfg):
    rng = random.Random(cfg.seed)
    fails, summary = [], []
    for spec in PIECE_TYPES:
        G = affine_weyl_group(spec)
        elems = G.elements_up_to(6)
        worst = 0.0
        for _ in range(100):
            w = rng.choice(elems)
            chart = chart_from_element(G, w)
            x = tuple(Fraction(rng.randint(-400, 400), 100) for _ in range(G.rank))
            exact = _euclid_gradient(G, henie_gradient(chart, x))
            fd = _fd_gradient(chart, x)
            err = max(abs(a - b) for a, b in zip(exact, fd))
            scale = max(1.0, max(abs(a) for a in exact))
            worst = max(worst, err / scale)
        if worst >= 1e-8:
            fails.append(f"{spec}: finite-difference relative error {worst:.3e}")
        restricted = 0
        for J in G.finite_type_subsets():
            for w in elems[:40]:
                E = E_Jw(G, J, w)
                try:
                    sub = chart_restrict(chart_from_element(G, w), E)
                except NotStable:
                    fails.append(f"{spec}: E_J,w not stable under w")
                    continue
                full = chart_from_element(G, w)
                p = E.point()
                for d in E.direction():
                    c = Fraction(rng.randint(-5, 5), 7)
                    p = tuple(a + c * b for a, b in zip(p, d))
                if henie_gradient(sub, p) != henie_gradient(full, p):
                    fails.append(f"{spec} J={G.subset_string(J)} w={G.render(w)}: "
                                 "restricted gradient differs")
                restricted += 1
        summary.append(f"{spec}: worst relative error {worst:.1e}, "
                       f"{restricted} restriction checks")
    return fails, summary


def check_flow(cfg):
    fails, summary = [], []
    for spec in FLOW_TYPES:
        G = affine_weyl_group(spec)
        rep = verify_charts(G, 6, samples=cfg.samples, seed=cfg.seed)
        for rec, v in rep.violations[:20]:
            fails.append(f"{spec} {rec.chart} at {rec.sample}: {v}")
        summary.append(f"{spec}: {len(rep.records)} flows, {rep.checked_points} points, "
                       f"{len(rep.violations)} violations")
    return fails, summary


# -------------------------------------------------------------------- 9, 10

def check_appendix(cfg):
    fails, summary = [], []
    count = 0
    for n in range(1, 5):
        full = range(n + 1)
        for k in range(1, n + 1):
            for J in combinations(full, k):
                count += 1
                K = nerve(build_Dn_J(n, J))
                b = rational_homology(K)
                if b[0] != 1 or any(b[1:]):
                    fails.append(f"n={n} J={set(J)}: betti {b}")
    summary.append(f"{count} pairs (n, J) acyclic and connected")
    ok, zero = is_weak_elementary_expansion(build_Dn(1), [frozenset({0})])
    if not ok:
        fails.append("{{0}} in D_1 is not a weak elementary expansion")
    hollow = SimplicialComplex([frozenset(e) for e in ((0, 1), (1, 2), (0, 2))])
    b = rational_homology(hollow)
    if tuple(b[:2]) != (1, 1):
        fails.append(f"hollow triangle betti {b}")
    if is_acyclic(hollow):
        fails.append("hollow triangle reported acyclic")
    summary.append(f"hollow triangle betti {tuple(b[:2])}")
    return fails, summary


def random_pair(rng):
    """A random complex Y on at most 8 vertices and a subcomplex Z."""
    n = rng.randint(3, 8)
    simp = [frozenset(rng.sample(range(n), 3)) for _ in range(rng.randint(0, 3))]
    simp += [frozenset(rng.sample(range(n), 2)) for _ in range(rng.randint(1, 4))]
    simp += [frozenset({v}) for v in range(n)]
    Y = SimplicialComplex(simp)
    Z = SimplicialComplex(rng.sample(sorted(Y.simplices, key=sort_key), rng.randint(1, 3)))
    return Y, Z


def check_collapse(cfg):
    rng = random.Random(cfg.seed)
    fails, summary = [], []
    steps = 0
    for k in range(10):
        Y, Z = random_pair(rng)
        seq = whitehead_collapse(Y, Z)
        target = subdivide(subdivide(Z))
        ok, bad, hist = verify_collapse(seq.start, seq, target, betti=True)
        if not ok:
            fails.append(f"pair {k}: collapse fails at step {bad}")
        if any(h != hist[0] for h in hist):
            fails.append(f"pair {k}: Betti numbers change along the collapse")
        if hist and hist[-1] != rational_homology(target, 3):
            fails.append(f"pair {k}: end homology differs from sd^2 Z")
        steps += len(seq.steps)
    summary.append(f"10 pairs, {steps} elementary collapses")
    return fails, summary


# -------------------------------------------------------------------- 11, 12

def check_dual(cfg):
    fails, summary = [], []
    pairs = split_pairs(load_pair_tables(cfg.tables))
    for name in SHIPPED_PAIRS:
        if name not in pairs:
            fails.append(f"{name}: missing from tables")
            continue
        chi, c = pairs[name]
        if not chi or not c:
            fails.append(f"{name}: one side is empty")
            continue
        rep = match_tables(chi, c, 3)
        if not rep.ok:
            fails.extend(f"{name}: {line.strip()}" for line in rep.lines()
                         if "FAIL" in line or "orphan" in line)
        summary.append(f"{name}: {len(rep.matching)} matched, dim-sum {rep.chi_dim_sum}, "
                       f"pi1 {rep.expected_count}")
    a1 = [p for p in pairs.get("SL2/PGL2", ([], []))[0] if p.rank == 1]
    if not a1 or orbit_series(a1[0], 3).N != (1, 5, 13, 25):
        fails.append("A1 principal block series is not (1, 5, 13, 25)")
    return fails, summary


def _bfs_levels(G, L):
    """Elements by word distance from Omega, without using any length function."""
    levels = [{om.rep for om in G.omega_group}]
    seen = set(levels[0])
    for _ in range(L):
        nxt = set()
        for x in levels[-1]:
            for s in G.simples:
                y = G.multiply(s, x)
                if y not in seen:
                    nxt.add(y)
        seen |= nxt
        levels.append(nxt)
    return levels


def check_oracles(cfg):
    fails, summary = [], []
    for spec in PIECE_TYPES + ("A1:ad", "A2:ad"):
        G = affine_weyl_group(spec)
        levels = _bfs_levels(G, 6)
        for k, lev in enumerate(levels):
            bad = [x for x in lev if G.length(x) != k]
            if bad:
                fails.append(f"{spec}: {len(bad)} elements at distance {k} with other length")
        if set().union(*levels) != set(G.elements_up_to(6)):
            fails.append(f"{spec}: enumeration differs from breadth-first search")
        summary.append(f"{spec}: level sizes {[len(lev) for lev in levels]}")
    records = load_pair_tables(cfg.tables)
    n = 0
    for p in records:
        if p.rank > 2:
            continue
        n += 1
        if orbit_series(p, 3).N != orbit_count_union_find(p, 3):
            fails.append(f"{p.pair} {p.label}: Burnside and union-find disagree")
    summary.append(f"{n} records with rank <= 2 checked by union-find")
    return fails, summary


CRITERIA = (
    (1, "sl2", "SL2 truncations and essential part", check_sl2, 1.0),
    (2, "pgl2", "PGL2 Newton values and the omega edge", check_pgl2, 1.0),
    (3, "sigma", "sigma_J is constant on W_J-classes", check_sigma, 30.0),
    (4, "bedard", "Bedard sequences recover minimal representatives", check_bedard, None),
    (5, "delta", "delta is compatible with class projection", check_delta, None),
    (6, "newton", "Newton points and the length bound", check_newton, None),
    (7, "gradient", "gradient formula and chart restriction", check_gradient, None),
    (8, "flow", "flow limits and downward specs", check_flow, 60.0),
    (9, "appendix", "acyclicity of D_n^J and expansions", check_appendix, None),
    (10, "collapse", "Whitehead collapses onto sd^2 Z", check_collapse, None),
    (11, "dual", "dual pair matching", check_dual, 30.0),
    (12, "oracles", "length and orbit-count oracles", check_oracles, None),
)


def select(only=None):
    if not only:
        return list(CRITERIA)
    keys = {k.strip() for k in only.split(",") if k.strip()}
    chosen = [c for c in CRITERIA if c[1] in keys or str(c[0]) in keys]
    unknown = keys - {c[1] for c in CRITERIA} - {str(c[0]) for c in CRITERIA}
    if unknown:
        raise ValueError(f"unknown criteria {', '.join(sorted(unknown))}")
    return chosen


def run_criterion(entry, cfg):
    number, key, title, fn, limit = entry
    start = time.perf_counter()
    try:
        failures, summary = fn(cfg)
    except FileNotFoundError as exc:
        failures, summary = [f"missing data file: {exc.filename}"], []
    except Exception as exc:  # a crash is a failed criterion, reported not raised
        failures, summary = [f"{type(exc).__name__}: {exc}"], []
    return CriterionResult(number, key, title, failures, summary,
                           time.perf_counter() - start, limit)


def run_suite(cfg=None, only=None):
    cfg = cfg or SuiteConfig()
    return [run_criterion(entry, cfg) for entry in select(only)]
