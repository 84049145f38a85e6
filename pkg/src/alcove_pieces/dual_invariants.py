"""Dual pair tables and graded fingerprints of their invariant rings.

A record is a lattice Z^r with a finite group W given by integer
generators.  The fingerprint of a record counts W-orbits of lattice pairs
inside growing W-stable regions and averages the exterior powers of the
representation.  Two tables are matched by comparing fingerprints.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from math import isqrt
import os

from . import linalg
from .root_datum import parse_datum_spec

CLOSURE_CEILING = 10000
_FIELDS = ("side", "pair", "group", "index", "rank", "order", "generators")


class TableError(ValueError):
    pass


class NonFiniteGroup(TableError):
    pass


def _ident(r):
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def group_closure(gens, r, ceiling=CLOSURE_CEILING):
    """All elements of the group generated by ``gens``, identity first."""
    one = _ident(r)
    seen = {one: None}
    order = [one]
    k = 0
    while k < len(order):
        m = order[k]
        k += 1
        for g in gens:
            n = linalg.matmul(g, m)
            if n not in seen:
                seen[n] = None
                order.append(n)
                if len(order) > ceiling:
                    raise NonFiniteGroup(f"group closure exceeded {ceiling} elements")
    return tuple(order)


@dataclass(frozen=True)
class PairDatum:
    side: str
    pair: str
    group_label: str
    index_label: int
    rank: int
    generators: tuple
    group_order: int
    provenance: tuple = field(default=(), compare=False)

    @property
    def label(self):
        return f"{self.side}={self.index_label}"

    @property
    def elements(self):
        return _elements(self.generators, self.rank)

    def is_signed_permutation(self):
        for g in self.generators:
            for row in g:
                if sum(1 for x in row if x) != 1 or any(abs(x) > 1 for x in row):
                    return False
        return True


_GROUP_CACHE = {}


def _elements(gens, r):
    key = (gens, r)
    if key not in _GROUP_CACHE:
        _GROUP_CACHE[key] = group_closure(gens, r)
    return _GROUP_CACHE[key]


def _parse_matrix(text, r, where):
    rows = [row.strip() for row in text.split(";")]
    try:
        m = tuple(tuple(int(x) for x in row.split(",")) for row in rows)
    except ValueError:
        raise TableError(f"{where}: bad matrix entry in {text!r}") from None
    if len(m) != r or any(len(row) != r for row in m):
        raise TableError(f"{where}: matrix {text!r} is not {r}x{r}")
    if abs(linalg.det(m)) != 1:
        raise TableError(f"{where}: matrix {text!r} is not a lattice automorphism")
    return m


def _make_record(fields, comments, where):
    missing = [f for f in _FIELDS if f not in fields]
    if missing:
        raise TableError(f"{where}: missing fields {', '.join(missing)}")
    side = fields["side"]
    if side not in ("chi", "c"):
        raise TableError(f"{where}: side must be chi or c, got {side!r}")
    try:
        rank, order, index = int(fields["rank"]), int(fields["order"]), int(fields["index"])
    except ValueError:
        raise TableError(f"{where}: rank, order and index must be integers") from None
    if rank < 0:
        raise TableError(f"{where}: negative rank")
    text = fields["generators"].strip()
    gens = tuple(_parse_matrix(g, rank, where) for g in text.split("|")) if text and rank else ()
    if text and rank == 0:
        raise TableError(f"{where}: rank 0 record with generators")
    size = len(group_closure(gens, rank))
    if size != order:
        raise TableError(f"{where}: generators give a group of order {size}, stated {order}")
    return PairDatum(side, fields["pair"], fields["group"], index, rank, gens, order,
                     tuple(comments))


def parse_pair_tables(text, name="<tables>"):
    records = []
    fields, comments, pending, start = {}, [], [], None

    def flush():
        nonlocal fields, start
        if fields:
            records.append(_make_record(fields, comments[:], f"{name}:{start}"))
        fields, start = {}, None

    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            flush()
            continue
        if line.startswith("#"):
            if fields:
                comments.append(line[1:].strip())
            else:
                pending.append(line[1:].strip())
            continue
        if ":" not in line:
            raise TableError(f"{name}:{num}: expected 'key: value', got {line!r}")
        if not fields:
            comments[:] = pending
            pending = []
            start = num
        key, value = line.split(":", 1)
        key = key.strip()
        if key not in _FIELDS:
            raise TableError(f"{name}:{num}: unknown field {key!r}")
        if key in fields:
            raise TableError(f"{name}:{num}: repeated field {key!r}")
        fields[key] = value.strip()
    flush()
    return records


def default_table_path():
    env = os.environ.get("ALCOVE_PIECES_TABLES")
    if env:
        return os.path.join(env, "pair_tables.txt") if os.path.isdir(env) else env
    return str(resources.files("alcove_pieces") / "data" / "pair_tables.txt")


def load_pair_tables(source=None):
    """Load records from a path (default: the shipped tables)."""
    path = default_table_path() if source is None else os.fspath(source)
    if os.path.isdir(path):
        path = os.path.join(path, "pair_tables.txt")
    with open(path, encoding="utf-8") as fh:
        return parse_pair_tables(fh.read(), os.path.basename(path))


def split_pairs(records):
    """Group records by pair name: {pair: (chi records, c records)}."""
    out = {}
    for p in records:
        chi, c = out.setdefault(p.pair, ([], []))
        (chi if p.side == "chi" else c).append(p)
    return out


def pi1_order(group_label):
    """Order of the fundamental group of the datum, as the lattice index of the coroots."""
    d = parse_datum_spec(group_label)
    return abs(linalg.det(d.cartan_matrix)) // abs(linalg.det(d.coweight_lattice))


# ---------------------------------------------------------------- fingerprints

@dataclass(frozen=True)
class Region:
    kind: str              # "box" or "ball"
    form: tuple = ()       # the invariant form Q for balls
    unit: int = 0          # minimum of Q on nonzero lattice points

    def describe(self):
        if self.kind == "box":
            return "box"
        return f"ball(mu={self.unit})"


def invariant_form(elements, r):
    q = [[0] * r for _ in range(r)]
    for g in elements:
        for i in range(r):
            for j in range(r):
                q[i][j] += sum(g[k][i] * g[k][j] for k in range(r))
    return tuple(tuple(row) for row in q)


def _qform(q, x):
    return sum(q[i][j] * x[i] * x[j] for i in range(len(x)) for j in range(len(x)))


def _ellipsoid(q, bound):
    """Integer points x with x^T q x <= bound."""
    r = len(q)
    if r == 0:
        return [()]
    qinv = linalg.inverse(q)
    box = []
    for i in range(r):
        v = Fraction(bound) * qinv[i][i]
        box.append(isqrt(v.numerator // v.denominator))
    return [x for x in product(*(range(-b, b + 1) for b in box)) if _qform(q, x) <= bound]


def choose_region(p):
    if p.is_signed_permutation():
        return Region("box")
    q = invariant_form(p.elements, p.rank)
    cap = min(q[i][i] for i in range(p.rank))
    unit = min(_qform(q, x) for x in _ellipsoid(q, cap) if any(x))
    return Region("ball", q, unit)


def region_points(p, region, k):
    r = p.rank
    if region.kind == "box":
        return list(product(range(-k, k + 1), repeat=r))
    return _ellipsoid(region.form, k * k * region.unit)


def char_poly_plus(g):
    """Coefficients of det(1 + t g), lowest degree first (sums of principal minors)."""
    r = len(g)
    out = [0] * (r + 1)
    out[0] = 1
    for mask in range(1, 1 << r):
        idx = [i for i in range(r) if mask >> i & 1]
        out[len(idx)] += linalg.det([[g[i][j] for j in idx] for i in idx])
    return [int(x) for x in out]


@dataclass(frozen=True)
class OrbitSeries:
    N: tuple
    e: tuple
    region: str
    alternating_ok: bool
    d: tuple = ()

    def render(self):
        return (f"N=({','.join(map(str, self.N))}) e=({','.join(map(str, self.e))}) "
                f"region={self.region}")


def _fixed_count(g, pts):
    r = len(g)
    c = 0
    for x in pts:
        if all(sum(g[i][j] * x[j] for j in range(r)) == x[i] for i in range(r)):
            c += 1
    return c


def orbit_series(p, R, with_d=False):
    """Burnside counts of W-orbits on pairs in regions k = 0..R and the exterior vector."""
    if R < 0:
        raise ValueError("R must be nonnegative")
    elems = p.elements
    n = len(elems)
    region = choose_region(p)
    polys = [char_poly_plus(g) for g in elems]
    e = tuple(Fraction(sum(c[j] for c in polys), n) for j in range(p.rank + 1))
    if any(x.denominator != 1 for x in e):
        raise ArithmeticError("non-integral exterior invariant dimension")
    e = tuple(int(x) for x in e)
    alt = sum((-1) ** k * x for k, x in enumerate(e))
    dets = Fraction(sum(linalg.det([[int(i == j) - g[i][j] for j in range(p.rank)]
                                   for i in range(p.rank)]) for g in elems), n)
    N, d = [], []
    for k in range(R + 1):
        pts = region_points(p, region, k)
        fix = [_fixed_count(g, pts) for g in elems]
        total = Fraction(sum(f * f for f in fix), n)
        if total.denominator != 1:
            raise ArithmeticError("non-integral Burnside count")
        N.append(int(total))
        if with_d:
            d.append(tuple(int(Fraction(sum(f * f * c[j] for f, c in zip(fix, polys)), n))
                           for j in range(p.rank + 1)))
    return OrbitSeries(tuple(N), e, region.describe(), alt == dets, tuple(d))


def orbit_count_union_find(p, R):
    """Orbit counts on pairs by explicit union-find over region points."""
    region = choose_region(p)
    out = []
    for k in range(R + 1):
        pts = region_points(p, region, k)
        pairs = [(x, y) for x in pts for y in pts]
        index = {xy: i for i, xy in enumerate(pairs)}
        parent = list(range(len(pairs)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        act = lambda g, v: tuple(sum(g[i][j] * v[j] for j in range(p.rank))
                                 for i in range(p.rank))
        for (x, y), i in index.items():
            for g in p.generators:
                j = index[(act(g, x), act(g, y))]
                a, b = find(i), find(j)
                if a != b:
                    parent[a] = b
        out.append(len({find(i) for i in range(len(pairs))}))
    return tuple(out)


def fingerprint(p, R):
    s = orbit_series(p, R)
    return (p.rank, s.N, s.e, p.group_order)


def _fingerprint_job(args):
    return fingerprint(*args)


def fingerprints(records, R, workers=None):
    jobs = [(p, R) for p in records]
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_fingerprint_job, jobs))
    return [fingerprint(p, R) for p in records]


# -------------------------------------------------------------------- matching

@dataclass
class MatchReport:
    pair: str
    chi_dim_sum: int
    c_dim_sum: int
    chi_count: int
    c_count: int
    expected_count: object
    matching: list            # (chi record, c record)
    orphans: list             # records without partner
    R: int

    @property
    def dim_sum_ok(self):
        return self.chi_dim_sum == self.c_dim_sum

    @property
    def count_ok(self):
        ok = self.chi_count == self.c_count
        if self.expected_count is not None:
            ok = ok and self.chi_count == self.expected_count
        return ok

    @property
    def ok(self):
        return self.dim_sum_ok and self.count_ok and not self.orphans

    def lines(self):
        out = [f"pair {self.pair} R={self.R}",
               f"  dim-sum chi={self.chi_dim_sum} c={self.c_dim_sum} "
               f"{'ok' if self.dim_sum_ok else 'FAIL'}",
               f"  count chi={self.chi_count} c={self.c_count} pi1={self.expected_count} "
               f"{'ok' if self.count_ok else 'FAIL'}"]
        for a, b in self.matching:
            out.append(f"  match {a.label} <-> {b.label}")
        for o in self.orphans:
            out.append(f"  orphan {o.side} {o.group_label} {o.label}")
        out.append(f"  {'ok' if self.ok else 'FAIL'}")
        return out


def match_tables(chi, c, R=3, workers=None):
    """Match chi-side records to c-side records by fingerprint."""
    pair = (chi or c)[0].pair if (chi or c) else ""
    expected = pi1_order(c[0].group_label) if c else None
    fc = fingerprints(chi, R, workers)
    fd = fingerprints(c, R, workers)
    free = list(range(len(c)))
    matching, orphans = [], []
    for i, a in enumerate(chi):
        cands = [j for j in free if fd[j] == fc[i]]
        if not cands:
            orphans.append(a)
            continue
        same = [j for j in cands if c[j].index_label == a.index_label]
        j = (same or cands)[0]
        free.remove(j)
        matching.append((a, c[j]))
    orphans.extend(c[j] for j in free)
    return MatchReport(pair, sum(2 * p.rank for p in chi), sum(2 * p.rank for p in c),
                       len(chi), len(c), expected, matching, orphans, R)


@dataclass
class FingerprintBlock:
    record: PairDatum
    series: OrbitSeries

    def lines(self):
        s = self.series
        out = [f"{self.record.side} {self.record.group_label} {self.record.label} "
               f"r={self.record.rank} |W|={self.record.group_order} {s.render()}"]
        for k, row in enumerate(s.d):
            out.append(f"  d[{k}]=({','.join(map(str, row))})")
        return out


def endomorphism_fingerprint(table, R):
    """Per-record orbit series with the bigraded dims d[k][j]."""
    return [FingerprintBlock(p, orbit_series(p, R, with_d=True)) for p in table]
