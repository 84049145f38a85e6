"""Command line front end: piece tables, B-complex reports, the acceptance suite."""
import argparse
from fractions import Fraction
import os
import sys

from .affine_weyl import affine_weyl_group
from .bcomplex import build_truncated_B, downward_spec, full_type, verify_contraction
from .dual_invariants import TableError, endomorphism_fingerprint, load_pair_tables, \
    match_tables, split_pairs
from .pieces import coarse_type_string, enumerate_classes, newton_from_values
from .root_datum import RootDatumError, pair_two_rho
from .verify import SuiteConfig, run_criterion, select
from . import kernels

TABLES_ENV = "ALCOVE_PIECES_TABLES"


class UsageError(Exception):
    pass


def _header(cmd, args, extra=()):
    lines = [f"# alcove-pieces {cmd}"]
    if getattr(args, "type", None):
        lines.append(f"# type {args.type}")
    lines.append(f"# seed {args.seed}")
    lines.extend(f"# {e}" for e in extra)
    return lines


def _group(args):
    if not args.type:
        raise UsageError("a root datum is required, e.g. A1:sc")
    try:
        return affine_weyl_group(args.type)
    except RootDatumError as exc:
        raise UsageError(str(exc)) from None


def _subset(G, text):
    if text is None:
        return frozenset()
    try:
        J = G.parse_subset(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not G.is_finite_type(J):
        raise UsageError(f"{G.subset_string(J)} is not of finite type")
    return J


def _nonneg(name, value):
    if value is not None and value < 0:
        raise UsageError(f"--{name} must be nonnegative")
    return value


def cmd_pieces(args):
    G = _group(args)
    J = _subset(G, args.J)
    L = _nonneg("max-len", args.max_len)
    rows = []
    for rep, p in enumerate_classes(G, J, L):
        rows.append((G.word_string(rep, sep=""), p.label, str(p.length), p.newton.render(G),
                     G.subset_string(p.K), coarse_type_string(G, p.coarse_type)))
    head = ("class", "piece", "length", "newton", "K", "type")
    widths = [max(len(r[i]) for r in rows + [head]) for i in range(len(head))]
    out = _header("pieces", args, [f"J {G.subset_string(J)}", f"max-len {L}",
                                   f"classes {len(rows)}"])
    for r in [head] + rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return out, True


def _parse_nu(text, rank):
    try:
        vals = [Fraction(v) for v in text.split(",")] if text else [Fraction(0)] * rank
    except ValueError:
        raise UsageError(f"cannot parse --nu {text!r}") from None
    if len(vals) != rank:
        raise UsageError(f"--nu needs {rank} simple-coroot coordinates")
    return vals


def cmd_bcomplex(args):
    G = _group(args)
    nu = _parse_nu(args.nu, G.rank)
    if not 0 <= args.omega < len(G.omega_group):
        raise UsageError(f"--omega must be in 0..{len(G.omega_group) - 1}")
    nt = newton_from_values(G, nu, args.omega)
    base = pair_two_rho(G.datum, nt.nu)
    L = _nonneg("L", args.L if args.L is not None else int(base) + 2)
    try:
        B = build_truncated_B(G, nt, L)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = _header("bcomplex", args, [f"newton {nt.render(G)}", f"L {L}",
                                     f"base length {base}"])
    shown = [k for k, e in enumerate(B.essential) if e or not args.essential_only]
    nodes = sum(1 for k in shown if len(B.facets[k].J) == G.rank)
    out.append(f"facets {len(shown)}" + (" (essential only)" if args.essential_only else ""))
    for k in shown:
        p = B.facets[k]
        tag = " essential" if B.essential[k] else ""
        out.append(f"  [{k}] {p.label} dim={G.rank - len(p.J)} length={p.length}{tag}")
    out.append(f"nodes {nodes} top-dimensional {sum(1 for k in shown if not B.facets[k].J)}")
    keep = set(shown)
    out.append("transitions")
    for i, j in sorted(B.order):
        if i in keep and j in keep:
            out.append(f"  {B.facets[i].label} -> {B.facets[j].label}")
    ok = True
    cuts = [n for n in range(int(base) + 1, min(int(base) + 3, L) + 1)]
    for n in cuts:
        spec = downward_spec(B, [(n, full_type(G))])
        rep = verify_contraction(B, spec, samples=args.samples, seed=args.seed)
        ok = ok and rep.ok
        out.append(f"flow n={n}: {len(spec.facets)} facets, {len(rep.records)} samples, "
                   f"{len(rep.violations)} violations")
        for rec, v in rep.violations[:10]:
            out.append(f"  ! {rec.chart}: {v}")
    return out, ok


def _tables_source(args):
    return args.tables or os.environ.get(TABLES_ENV) or None


def cmd_dual(args):
    try:
        records = load_pair_tables(_tables_source(args))
    except FileNotFoundError as exc:
        raise UsageError(f"missing table file {exc.filename}") from None
    except TableError as exc:
        raise UsageError(str(exc)) from None
    R = _nonneg("max-len", args.max_len if args.max_len is not None else 3)
    out = _header("dual", args, [f"R {R}", f"records {len(records)}"])
    ok = True
    for name, (chi, c) in split_pairs(records).items():
        if not chi or not c:
            out.append(f"pair {name}: one side is empty")
            ok = False
            continue
        rep = match_tables(chi, c, R)
        ok = ok and rep.ok
        out.extend(rep.lines())
        for block in endomorphism_fingerprint(chi + c, R):
            out.extend("  " + line for line in block.lines())
    return out, ok


def cmd_verify(args):
    cfg = SuiteConfig(seed=args.seed, samples=args.samples, tables=_tables_source(args))
    try:
        chosen = select(args.only)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = _header("verify", args, [f"samples {args.samples}", f"criteria {len(chosen)}"])
    timing = []
    ok = True
    for entry in chosen:
        res = run_criterion(entry, cfg)
        ok = ok and res.ok
        out.append(res.line())
        out.extend(f"    {line}" for line in res.summary)
        out.extend(f"    ! {line}" for line in res.failures[:20])
        if not res.within_limit:
            out.append(f"    ! exceeded the time limit of {res.limit:g}s")
        timing.append(f"{res.number:2d} {res.key}: {res.seconds:.2f}s")
    failed = sum(1 for line in out if line.startswith("[FAIL]"))
    out.append(f"{len(chosen) - failed} passed, {failed} failed")
    args._timing = timing
    return out, ok


def build_parser():
    p = argparse.ArgumentParser(prog="alcove-pieces",
                                description="Affine Weyl group pieces, B complexes and checks.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("type_pos", nargs="?", metavar="TYPE", help="root datum, e.g. A2:sc")
    common.add_argument("--type", dest="type_opt", help="root datum, e.g. 'A1:sc x A1:ad'")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=5)
    common.add_argument("--out", help="write the report to this file")
    common.add_argument("--tables", help="pair table file or directory (default: $%s)" % TABLES_ENV)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pieces", parents=[common], help="table of pieces u/J")
    sp.add_argument("--J", default="", help="finite type subset, e.g. 's1' or 's0,s2'")
    sp.add_argument("--max-len", type=int, default=2)
    sp.set_defaults(func=cmd_pieces)

    sb = sub.add_parser("bcomplex", parents=[common], help="truncated B complex and flow checks")
    sb.add_argument("--nu", default=None, help="Newton point in simple-coroot coordinates")
    sb.add_argument("--omega", type=int, default=0)
    sb.add_argument("--L", type=int, default=None)
    sb.add_argument("--essential-only", action="store_true")
    sb.set_defaults(func=cmd_bcomplex)

    sd = sub.add_parser("dual", parents=[common], help="dual pair fingerprints and matching")
    sd.add_argument("--max-len", type=int, default=3, help="fingerprint radius R")
    sd.set_defaults(func=cmd_dual)

    sv = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    sv.add_argument("--only", help="comma separated criterion keys or numbers")
    sv.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.type_pos and args.type_opt and args.type_pos != args.type_opt:
        parser.error("conflicting root data given positionally and with --type")
    args.type = args.type_opt or args.type_pos
    if args.samples < 0:
        parser.error("--samples must be nonnegative")
    try:
        lines, ok = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    for line in getattr(args, "_timing", []):
        print(f"time {line}", file=sys.stderr)
    if args.command == "verify":
        print(f"kernel backend: {kernels.BACKEND}", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
