"""Command-line entry point.

    relclass order-one --max-dim 6 --format csv
    relclass bounds --q 2 --weights 1,0.7,0.2
    relclass enumerate --q 2 --g 3 --limit 10
    relclass search geometric --q 2 --d 2..7 --filters all --curve-data PATH --out DIR
    relclass search constant --q 2 --d 2..3
    relclass search q34
    relclass ingest --from FILE [--export OUT]
    relclass verify tables --which geometric-bounds --data DIR

Exit codes: 0 success, 1 verification mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(s: str) -> tuple:
    """'2..7' -> (2, ..., 7); '2,3' -> (2, 3); '4' -> (4,)."""
    try:
        if ".." in s:
            a, b = s.split("..")
            lo, hi = int(a), int(b)
            if lo > hi:
                raise ValueError
            return tuple(range(lo, hi + 1))
        return tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {s!r}; use A..B or A,B,C") from None


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


def _emit(rows: Sequence[dict], fmt: str, out=None, cols=None):
    from .report import format_table

    out = out or sys.stdout
    cols = list(cols or (rows[0] if rows else []))
    if fmt == "csv":
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
    elif fmt == "json":
        for r in rows:
            out.write(json.dumps({c: r[c] for c in cols}) + "\n")
    else:
        out.write(format_table(rows, cols) + "\n")


# ------------------------------------------------------------ order-one

ORDER_ONE_COLS = ["label", "n", "T2", "T4", "T8", "T16", "T2+T4", "excess_4dp"]


def cmd_order_one(args) -> int:
    from .order_one import catalog_rows, enumerate_order_one

    rows = catalog_rows(enumerate_order_one(args.max_dim, args.q))
    cols = ORDER_ONE_COLS + (["excess"] if args.exact else [])
    _emit(rows, args.format, cols=cols)
    if args.out:
        from .report import write_catalog
        write_catalog(rows, args.out, "json" if args.format == "json" else "csv")
    return EXIT_OK


# --------------------------------------------------------------- bounds

def cmd_bounds(args) -> int:
    from . import lp_bounds as LP

    dp = LP.DoublyPositive.parse(args.weights)
    if args.refined:
        b = LP.refined_weights(args.q, dp, args.refined)
    else:
        b = LP.oesterle_bound(args.q, dp)
    print(f"q = {args.q}  x = ({', '.join(str(v) for v in dp.x)})")
    print(f"slope     = {b.slope}  ~ {float(b.slope):.6f}")
    print(f"intercept = {b.intercept}  ~ {float(b.intercept):.6f}")
    for d, w in enumerate(b.weights, start=1):
        print(f"w_{d}       = {w}  ~ {float(w):.6f}")
    ok = True
    if args.refined and args.q == 2:
        pub = LP.PUBLISHED_REFINED
        ok &= _cmp("slope", b.slope, pub["slope"])
        ok &= _cmp("intercept", b.intercept, pub["intercept"])
        for d, (w, p) in enumerate(zip(b.weights, pub["weights"]), start=1):
            ok &= _cmp(f"w_{d}", w, p, dominate=True)
    elif not args.refined and args.q in LP.PUBLISHED_FIRST:
        s, c = LP.PUBLISHED_FIRST[args.q]
        ok &= _cmp("slope", b.slope, s)
        ok &= _cmp("intercept", b.intercept, c)
    if args.plot:
        from .report import plot_bounds
        plot_bounds(args.q, args.plot)
    return EXIT_OK if ok or not args.check else EXIT_MISMATCH


def _cmp(name, exact, published, dominate=False) -> bool:
    """Published constants are upper bounds (weights: lower bounds) within 1e-3."""
    close = abs(float(exact) - float(published)) <= 1e-3
    side = (exact >= published) if dominate else (exact <= published)
    tag = "ok" if close and side else "MISMATCH"
    rel = ">=" if dominate else "<="
    print(f"  {name}: exact {float(exact):.6f} {rel} published {float(published)}: {tag}")
    return close and side


# ------------------------------------------------------------ enumerate

def cmd_enumerate(args) -> int:
    from .enumeration import enumerate_real_weil
    from .weil import point_counts, real_to_weil, traces

    depth = args.depth or max(args.g, 1)
    n = 0
    for h in enumerate_real_weil(args.q, args.g, threads=_threads(args)):
        W = real_to_weil(h)
        rec = {"q": args.q, "g": args.g, "label": W.label, "real": list(h.coeffs),
               "coeffs": list(W.coeffs), "traces": list(traces(W, depth).values),
               "counts": list(point_counts(W, depth).values)}
        sys.stdout.write(json.dumps(rec) + "\n")
        n += 1
        if args.limit and n >= args.limit:
            break
    return EXIT_OK


# --------------------------------------------------------------- search

def _filters(name: str):
    from .cover_filters import FilterConfig
    return FilterConfig.lemma_level() if name == "lemma" else FilterConfig.all()


def _curve_data(args):
    from . import lmfdb
    if not args.curve_data:
        return None
    p = Path(args.curve_data)
    store = lmfdb.load_dir(p, offline=args.offline) if p.is_dir() else lmfdb.bulk_load(p, offline=args.offline)
    return store


def cmd_search(args) -> int:
    from . import search as S

    if args.mode == "constant":
        res = S.constant_search(qs=args.q or (2, 3, 4), ds=args.d or (2, 3, 4, 5),
                                gs=args.g or (1, 2, 3, 4), curve_data=_curve_data(args))
        rows = [{"q": q, "d": d, "g": g, "C": W.label} for q, d, g, W in res]
        _emit(rows, args.format, cols=["q", "d", "g", "C"])
        if args.out:
            from .report import write_constant
            write_constant(res, args.out)
        return EXIT_OK

    if args.mode == "q34":
        o = S.q34_geometric_search(curve_data=_curve_data(args))
        for name in ("d2", "dbig", "dropped_by_filters", "dropped_by_curve_data", "unverifiable", "surviving"):
            print(f"{name}: {' '.join('(%s)' % ','.join(map(str, k)) for k in getattr(o, name))}")
        rows = [r.row() for k in sorted(o.reports) for r in o.reports[k].results]
        if args.out:
            from .report import write_search
            write_search(o.reports, args.out, stem="q34", figures=args.report)
        elif rows:
            _emit(rows, args.format, cols=S.GEOMETRIC_COLUMNS)
        return EXIT_OK

    q = (args.q or (2,))[0]
    spec = S.SearchSpec(q=q, ds=args.d or (2, 3, 4, 5, 6, 7), g_range=_span(args.g),
                        gp_range=_span(args.gp), cfg=_filters(args.filters),
                        curve_data=_curve_data(args), allow_unproven=args.allow_unproven,
                        threads=_threads(args))
    scenarios = None
    if args.allow_unproven and args.g and args.gp:
        scenarios = [S.custom_scenario(q, d, g, gp, allow_unproven=True)
                     for d in spec.ds for g in args.g for gp in args.gp
                     if S.CF.rh_delta(d, g, gp) is not None]
        print("# not proven complete: scenarios outside the proven ranges", file=sys.stderr)
    reports = S.geometric_search(spec, scenarios)
    pairs = S.all_pairs(reports)
    if args.out:
        from .report import write_search
        written = write_search(reports, args.out, fmt="json" if args.format == "json" else "csv",
                               figures=args.report)
        for k, p in written.items():
            print(f"{k}: {p}", file=sys.stderr)
    else:
        _emit([p.row() for p in pairs], args.format, cols=S.GEOMETRIC_COLUMNS)
    print(f"# {len(pairs)} pairs in {len(S.surviving_scenarios(reports))} of {len(reports)} scenarios",
          file=sys.stderr)
    return EXIT_OK


def _span(t):
    return (min(t), max(t)) if t else None


# --------------------------------------------------------------- ingest

def cmd_ingest(args) -> int:
    from . import lmfdb

    store = lmfdb.CurveStore(offline=args.offline, cache_dir=args.cache_dir)
    if args.from_path:
        p = Path(args.from_path)
        store.update(lmfdb.load_dir(p) if p.is_dir() else lmfdb.bulk_load(p))
    status = EXIT_OK
    for label in (args.fetch or "").split(","):
        label = label.strip()
        if not label:
            continue
        try:
            r = store.fetch_isogeny(label)
            print(json.dumps(r.to_json(), sort_keys=True))
        except lmfdb.UnknownLabel:
            print(f"{label}: unknown (no source covers it)", file=sys.stderr)
            status = EXIT_MISMATCH
    if args.export:
        store.cache_export(args.export)
    cov = ", ".join(f"q={q} g={g}" for q, g in sorted(store.coverage()))
    print(f"# {len(store)} records; coverage: {cov or 'none'}", file=sys.stderr)
    return status


# --------------------------------------------------------------- verify

def _read_csv(path) -> List[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _diff(name: str, want: set, got: set) -> int:
    miss, extra = sorted(want - got), sorted(got - want)
    for r in miss:
        print(f"- {r}")
    for r in extra:
        print(f"+ {r}")
    ok = not miss and not extra
    print(f"{name}: expected {len(want)}, got {len(got)}, missing {len(miss)}, extra {len(extra)}: "
          f"{'match' if ok else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify(args) -> int:
    from . import lmfdb
    from . import search as S

    data = lmfdb.DATA_DIR
    golden = Path(args.against) if args.against else None
    which = args.which
    if which == "order-one":
        from .order_one import catalog_rows, enumerate_order_one
        got = {tuple(str(r[c]) for c in ORDER_ONE_COLS) for r in catalog_rows(enumerate_order_one(6, 2))}
        want = {tuple(r[c] for c in ORDER_ONE_COLS) for r in _read_csv(golden or data / "order_one_table.csv")}
        return _diff(which, want, got)
    if which == "constant":
        got = {(str(q), str(d), str(g), W.label) for q, d, g, W in S.constant_search(curve_data=_store(args))}
        want = {(r["q"], r["d"], r["g"], r["C"]) for r in _read_csv(golden or data / "constant_table.csv")}
        return _diff(which, want, got)
    if which == "q34":
        o = S.q34_geometric_search(curve_data=_store(args))
        ref = json.loads((golden or data / "q34_scenarios.json").read_text())
        st = _diff("q34 d=2", {tuple(t) for t in ref["d2_qggp"]}, {(k[0], k[2], k[3]) for k in o.d2})
        st |= _diff("q34 d>2", {tuple(t) for t in ref["dbig_dggp"]}, {k[1:] for k in o.dbig})
        drop = {tuple(t) for t in ref["drop_out_qdggp"]}
        got = drop & set(o.dropped_by_filters)
        st |= _diff("q34 drop-outs", drop, got)
        return st
    # geometric-bounds
    spec = S.SearchSpec(curve_data=_store(args), threads=_threads(args))
    pairs = S.all_pairs(S.geometric_search(spec))
    got = {(str(p.d), str(p.g), str(p.gp), p.A_label, _c_key(p)) for p in pairs}
    want = {(r["d"], r["g"], r["gp"], r["A"], r["C"]) for r in _read_csv(golden or data / "geometric_bounds.csv")}
    return _diff(which, want, got)


def _c_key(p) -> str:
    # genus >= 7 rows are keyed by the first seven point counts of C
    return p.C_label if p.g < 7 else " ".join(str(n) for n in p.C_counts[:7])


def _store(args):
    from . import lmfdb
    if args.no_curve_data:
        return None
    if args.data:
        return lmfdb.load_dir(args.data, offline=args.offline)
    return lmfdb.curve_fixture()


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="relclass", description=__doc__.split("\n")[0])
    top.add_argument("--threads", type=int, default=0, help="worker processes (default: all cores)")
    top.add_argument("--offline", action=argparse.BooleanOptionalAction, default=True,
                     help="never touch the network (default on)")
    sub = top.add_subparsers(dest="cmd", required=True, metavar="COMMAND")
    fmt = dict(choices=("csv", "json", "table"), default="table")

    p = sub.add_parser("order-one", help="simple order-one abelian varieties over F_q")
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--format", **fmt)
    p.add_argument("--exact", action="store_true", help="also print the exact excess")
    p.add_argument("--out", help="directory for CSV/JSON and a figure")
    p.set_defaults(func=cmd_order_one)

    p = sub.add_parser("bounds", help="exact linear point-count bounds from a weight vector")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--weights", default="1,0.7,0.2", help="x_1,...,x_k (comma separated rationals)")
    p.add_argument("--refined", type=int, metavar="DMAX", default=0,
                   help="also compute place weights for degrees 1..DMAX")
    p.add_argument("--check", action="store_true", help="exit 1 when a published constant is not matched")
    p.add_argument("--plot", metavar="PNG", help="plot the bound lines against the tabulated maxima")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("enumerate", help="stream real Weil polynomials as JSON lines")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--depth", type=int, default=0, help="number of traces/counts per line (default g)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("search", help="constant, geometric (q = 2) or q = 3, 4 searches")
    p.add_argument("mode", choices=("constant", "geometric", "q34"))
    p.add_argument("--q", type=parse_range)
    p.add_argument("--d", type=parse_range)
    p.add_argument("--g", type=parse_range)
    p.add_argument("--gp", type=parse_range)
    p.add_argument("--filters", choices=("all", "lemma"), default="all")
    p.add_argument("--curve-data", help="JSON-lines file or directory of curve facts")
    p.add_argument("--out", help="output directory (tables, summary, figures)")
    p.add_argument("--report", action=argparse.BooleanOptionalAction, default=True,
                   help="render figures next to the tables")
    p.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    p.add_argument("--allow-unproven", action="store_true",
                   help="run scenarios outside the proven ranges (no completeness claim)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("ingest", help="load, fetch and export isogeny-class records")
    p.add_argument("--from", dest="from_path", help="JSON-lines file or directory")
    p.add_argument("--fetch", help="comma separated labels to serve")
    p.add_argument("--export", help="write all records as sorted JSON lines")
    p.add_argument("--cache-dir", help="cache directory (default $%s)" % "RELCLASS_CACHE_DIR")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("verify", help="compare computed tables against golden files")
    p.add_argument("what", choices=("tables",))
    p.add_argument("--which", choices=("order-one", "geometric-bounds", "constant", "q34"),
                   default="geometric-bounds")
    p.add_argument("--data", help="directory of curve-fact JSON lines (default: shipped fixtures)")
    p.add_argument("--against", help="golden file (default: shipped table)")
    p.add_argument("--no-curve-data", action="store_true", help="run without curve-existence data")
    p.set_defaults(func=cmd_verify)
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError) as e:
        print(f"relclass {args.cmd}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
