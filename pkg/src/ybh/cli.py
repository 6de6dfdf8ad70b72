"""Command-line entry point: ``ybh <command> ...``.

Exit status: 0 on success, 1 when a verification fails, 2 on bad usage,
3 on a corrupted cache artifact.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import chainmaps, conjectures
from .cache import Cache, CacheCorruption, default_cache_dir, matrix_to_json
from .complex import (
    Final,
    Full,
    SpecError,
    boundary,
    format_spec,
    parse_spec,
    verify_boundary_squared,
    verify_precubic,
)
from .counting import format_rank_table, rank_table
from .homology import (
    HomologyModule,
    assemble_decomposition,
    closed_form_H3,
    closed_form_H4,
)
from .pipeline import JobConfig, cached_boundary, cached_snf, compute_homology
from .ring import format_poly
from .smith import snf_integer, snf_polyQ
from .ybop import verify_column_unital, verify_ybe

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CORRUPT = 0, 1, 2, 3


def _at(args):
    return None if args.at_y is None else args.at_y ** 2


def _cache(args):
    return None if args.no_cache else Cache(args.cache_dir)


def _emit(args, text=None, obj=None, csv=None):
    if args.format == "json" and obj is not None:
        print(json.dumps(obj, indent=2, sort_keys=True))
    elif args.format == "csv" and csv is not None:
        print(csv)
    else:
        print(text if text is not None else json.dumps(obj, indent=2, sort_keys=True))


def _check_lines(results):
    ok = True
    lines = []
    for name, passed in results:
        lines.append(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok = ok and passed
    return ok, "\n".join(lines)


# -- commands ----------------------------------------------------------------------

def cmd_verify(args):
    ms = [args.m] if args.m is not None else list(range(1, args.max_m + 1))
    results = []
    for m in ms:
        results.append((f"YBE R_({m})", verify_ybe(m)))
        results.append((f"column unital R_({m})", verify_column_unital(m)))
    for m in ms:
        if m > 3:
            continue
        for n in range(2, args.max_n + 1):
            results.append((f"d^2 = 0 full:m={m} n={n}", verify_boundary_squared(Full(m), n)))
            results.append((f"precubic full:m={m} n={n}", verify_precubic(Full(m), n)))
    for m in ms:
        for n in range(2, args.max_n + 1):
            results.append((f"d^2 = 0 final:m={m} n={n}", verify_boundary_squared(Final(m), n)))
    ok, text = _check_lines(results)
    _emit(args, text, {"results": [{"check": n, "passed": p} for n, p in results]})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_maps(args):
    # --m / --n restrict every family of checks to that alphabet size / degree
    def keep(m=None, n=None):
        return ((args.m is None or m is None or m == args.m)
                and (args.n is None or n is None or n == args.n))

    results = []
    for m in range(1, 4):
        for n in range(1, 6):
            if keep(m, n):
                results.append((f"tau duality m={m} n={n}", chainmaps.verify_tau_duality(m, n)))
    if args.m is not None and args.n is not None and args.n >= 2:
        results.append((f"d^2 = 0 full:m={args.m} n={args.n}",
                        verify_boundary_squared(Full(args.m), args.n)))
        results.append((f"precubic full:m={args.m} n={args.n}",
                        verify_precubic(Full(args.m), args.n)))
    pairs = [(2, 0, range(1, 5)), (3, 0, range(1, 5)), (3, 1, range(1, 5)),
             (4, 1, (4,)), (4, 2, (4,))]
    for m, u, degrees in pairs:
        for n in degrees:
            if keep(m, n):
                results.append((f"splitting pair m={m} u={u} n={n}", chainmaps.verify_split(m, u, n)))
    for n in range(1, 5):
        if not keep(None, n):
            continue
        results.append((f"g f = id, n={n}",
                        chainmaps.is_left_inverse(chainmaps.COR_G, chainmaps.COR_F, n)))
        results.append((f"g' f = id, n={n}",
                        chainmaps.is_left_inverse(chainmaps.COR_G_PRIME, chainmaps.COR_F, n)))
        results.append((f"face naturality of f, n={n}",
                        chainmaps.verify_letter_map_naturality(chainmaps.COR_F, n)))
    if keep(3, 3):
        for k in (2, 3):
            results.append((f"gap map k={k}", chainmaps.verify_gap_map(3, k, 3)))
    if not results:
        raise ValueError("no checks match the given --m/--n")
    ok, text = _check_lines(results)
    _emit(args, text, {"results": [{"check": n, "passed": p} for n, p in results]})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_boundary(args):
    spec = parse_spec(args.spec)
    cache = _cache(args)
    A = cached_boundary(spec, args.n, cache) if cache else boundary(spec, args.n)
    at = _at(args)
    if at is not None:
        A = A.evaluate(at)
    obj = matrix_to_json(A)
    obj["spec"] = format_spec(spec)
    obj["n"] = args.n
    csv_lines = ["row,col,value"] + [f"{i},{j},{v}" for i, j, v in obj["entries"]]
    text = [f"{format_spec(spec)} d_{args.n}: {A.nrows} x {A.ncols}, {A.nnz()} nonzero"]
    text += [f"  ({i}, {j}) {v}" for i, j, v in obj["entries"]]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(obj, fh, indent=1)
        text = text[:1] + [f"  written to {args.out}"]
    _emit(args, "\n".join(text), obj, "\n".join(csv_lines))
    return EXIT_OK


def _entry_text(d):
    if isinstance(d, int):
        return str(d)
    return format_poly(d.coeffs)


def cmd_snf(args):
    spec = parse_spec(args.spec)
    at = _at(args)
    cache = _cache(args)
    if cache:
        dec = cached_snf(spec, args.n, at, cache)
    else:
        A = boundary(spec, args.n)
        dec = snf_polyQ(A) if at is None else snf_integer(A.evaluate(at), at=at)
    diag = [_entry_text(d) for d in dec.diagonal]
    obj = {"spec": format_spec(spec), "n": args.n, "domain": dec.domain, "at": at,
           "shape": [dec.nrows, dec.ncols], "rank": dec.rank, "diagonal": diag,
           "certified_over_Zt": dec.certified_over_Zt, "residual_ok": dec.residual_ok}
    counts = {}
    for d in diag:
        counts[d] = counts.get(d, 0) + 1
    text = [f"{format_spec(spec)} d_{args.n} over {dec.domain}: {dec.nrows} x {dec.ncols}, rank {dec.rank}"]
    text += [f"  {d} ×{c}" for d, c in counts.items()]
    if at is None:
        text.append(f"  certified over Z[t]: {dec.certified_over_Zt}")
    _emit(args, "\n".join(text), obj, "\n".join(["entry,count"] + [f"{d},{c}" for d, c in counts.items()]))
    return EXIT_OK


def _homology_text(h: HomologyModule):
    lines = [h.notation()]
    if h.torsion:
        lines.append("torsion: " + h.torsion_text())
    if h.at is None and not h.certified:
        lines.append("(uncertified over Z[t])")
    return "\n".join(lines)


def cmd_homology(args):
    cfg = JobConfig(args.spec, args.n, _at(args), args.cache_dir, args.format)
    cache = _cache(args)
    h, _ = compute_homology(cfg.complex, cfg.n, cfg.at, cache)
    obj = h.to_json()
    obj.update({"spec": cfg.spec, "n": cfg.n, "notation": h.notation()})
    _emit(args, _homology_text(h), obj)
    return EXIT_OK


def _cell(job):
    spec_text, n, at, cache_dir, use_cache = job
    cache = Cache(cache_dir) if use_cache else None
    h, _ = compute_homology(parse_spec(spec_text), n, at, cache)
    return h.to_json()


def _run_cells(args, jobs):
    payload = [(spec, n, _at(args), args.cache_dir, not args.no_cache) for spec, n in jobs]
    if args.threads > 1 and len(payload) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_cell, payload))
    else:
        results = [_cell(p) for p in payload]
    return {key: HomologyModule.from_json(r) for key, r in zip(jobs, results)}


def cmd_table1(args):
    jobs = [(f"final:m={m}", n) for m in range(1, args.max_m + 1)
            for n in range(1, args.max_n + 1)]
    cells = _run_cells(args, jobs)
    grid = {(m, n): cells[f"final:m={m}", n] for m in range(1, args.max_m + 1)
            for n in range(1, args.max_n + 1)}
    header = ["m\\n"] + [f"H_{n}" for n in range(1, args.max_n + 1)]
    rows = [[str(m)] + [grid[m, n].notation() for n in range(1, args.max_n + 1)]
            for m in range(1, args.max_m + 1)]
    width = max(len(c) for r in rows + [header] for c in r)
    text = "\n".join(" ".join(c.rjust(width) for c in r) for r in [header] + rows)
    csv = "\n".join(",".join(f'"{c}"' if "," in c else c for c in r) for r in [header] + rows)
    obj = {"cells": [{"m": m, "n": n, **grid[m, n].to_json(), "notation": grid[m, n].notation()}
                     for (m, n) in sorted(grid)]}
    _emit(args, text, obj, csv)
    return EXIT_OK


def cmd_hn(args):
    n, m = args.n, args.m
    top = min(m, n + 1)
    cells = _run_cells(args, [(f"final:m={j}", n) for j in range(1, top + 1)])
    initial = {j: cells[f"final:m={j}", n] for j in range(1, top + 1)}
    total = assemble_decomposition(m, n, initial)
    checks = {}
    if _at(args) is None and n in (3, 4):
        closed = closed_form_H3(m) if n == 3 else closed_form_H4(m)
        checks["closed_form"] = closed == total
    obj = {"m": m, "n": n, "at": _at(args), "module": total.to_json(),
           "notation": total.notation(),
           "initial": {j: h.notation() for j, h in initial.items()}, **checks}
    lines = [f"H_{n}(C^{m}) = {total.notation()}"]
    lines += [f"  H_{n}(C^{j}f) = {h.notation()}" for j, h in initial.items()]
    if checks:
        lines.append(f"  closed form agrees: {checks['closed_form']}")
    _emit(args, "\n".join(lines), obj)
    return EXIT_OK if checks.get("closed_form", True) else EXIT_FAIL


def cmd_ranks(args):
    if args.csv:
        args.format = "csv"
    table = rank_table(args.max_n, args.max_m)
    obj = {"values": [{"n": n, "m": m, "u": u, "rank": v} for (n, m, u), v in sorted(table.items())]}
    _emit(args, format_rank_table(table, args.max_n, args.max_m), obj,
          format_rank_table(table, args.max_n, args.max_m, csv=True))
    return EXIT_OK


CONJECTURE_PARAMS = {
    "free-rank": {"max_n", "max_m"},
    "fibonacci": {"max_n"},
    "h5": {"j", "corroborate_at"},
    "h5-formula": {"max_m"},
    "kunneth": {"m", "split", "n"},
    "mfl": {"m", "cap", "n"},
    "torsion": {"max_n", "max_m"},
    "h6": {"max_j"},
}


def cmd_conjecture(args):
    cache = _cache(args)
    name = args.name
    p = args.params
    unknown = sorted(set(p) - CONJECTURE_PARAMS[name])
    if unknown:
        raise ValueError(f"unknown parameter(s) for {name}: {', '.join(unknown)}; "
                         f"expected {', '.join(sorted(CONJECTURE_PARAMS[name]))}")
    if name == "free-rank":
        rep = conjectures.check_free_rank(p.get("max_n", 4), p.get("max_m", 5), _at(args), cache)
    elif name == "fibonacci":
        rep = conjectures.check_fibonacci_m2(p.get("max_n", 6), _at(args), cache)
    elif name == "h5":
        rep = conjectures.check_h5(p.get("j", 2), p.get("corroborate_at"), cache)
    elif name == "h5-formula":
        rep = conjectures.check_h5_formula(p.get("max_m", 12))
    elif name == "kunneth":
        rep = conjectures.check_kunneth(p.get("m", 3), p.get("split", 1), p.get("n", 4),
                                        _at(args), cache)
    elif name == "mfl":
        at = _at(args) if args.at_y is not None else 4
        rep = conjectures.check_mfl_split(p.get("m", 2), p.get("cap", 1), p.get("n", 4), at, cache)
    elif name == "torsion":
        at = _at(args) if args.at_y is not None else 4
        rep = conjectures.observe_torsion_degrees(p.get("max_n", 5), p.get("max_m", 4), at, cache)
    elif name == "h6":
        at = _at(args) if args.at_y is not None else 4
        rep = conjectures.run_h6_job(p.get("max_j", 3), at, cache or Cache(args.cache_dir),
                                     log=lambda s: print(s, file=sys.stderr))
    else:  # argparse restricts the choices
        raise AssertionError(name)
    print(rep.dumps())
    return EXIT_OK


def cmd_cache(args):
    cache = Cache(args.cache_dir)
    removed = cache.gc()
    _emit(args, f"removed {len(removed)} file(s) from {cache.root}" +
          "".join(f"\n  {r}" for r in removed), {"root": str(cache.root), "removed": removed})
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def _param(text):
    key, eq, val = text.partition("=")
    if not eq:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.replace("-", "_"), int(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of {key} must be an integer") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--cache-dir", default=None,
                        help=f"artifact cache (default $YBH_CACHE_DIR or {default_cache_dir()})")
    common.add_argument("--no-cache", action="store_true", help="compute without reading or writing the cache")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--at-y", type=int, default=None, metavar="Y",
                        help="work over Z at t = Y^2 instead of symbolically over Z[t]")

    parser = argparse.ArgumentParser(prog="ybh", description="Homology of the HOMFLYPT Yang-Baxter operators R_(m).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="YBE, column unitality, d^2 = 0, precubic identities")
    p.add_argument("--m", type=int, default=None, help="check only this alphabet size")
    p.add_argument("--max-m", type=int, default=3)
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-maps", parents=[common], help="duality, splitting maps, letter-map naturality")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_verify_maps)

    for name, func, helptext in (("boundary", cmd_boundary, "boundary matrix d_n"),
                                 ("snf", cmd_snf, "Smith normal form of d_n"),
                                 ("homology", cmd_homology, "H_n of a complex")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--spec", required=True, help="e.g. final:m=3, usetop:m=4,u=3,l=1")
        p.add_argument("--n", type=int, required=True)
        if name == "boundary":
            p.add_argument("--out", default=None, help="also write the matrix as JSON here")
        p.set_defaults(func=func)

    p = sub.add_parser("table1", parents=[common], help="H_n(C^{mf}) grid, rows m, columns n")
    p.add_argument("--max-m", type=int, default=5)
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("hn", parents=[common], help="H_n(C^m) assembled from the final complexes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_hn)

    p = sub.add_parser("ranks", parents=[common], help="chain ranks S~(n, m, m-1)")
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--max-m", type=int, default=7)
    p.add_argument("--csv", action="store_true", help="same as --format csv")
    p.set_defaults(func=cmd_ranks)

    p = sub.add_parser("conjecture", parents=[common], help="evidence reports (JSON)")
    p.add_argument("name", choices=("free-rank", "fibonacci", "h5", "h5-formula", "kunneth",
                                    "mfl", "torsion", "h6"))
    p.add_argument("params", nargs="*", type=_param, metavar="key=value",
                   help="e.g. m=3 cap=1 n=6")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("cache", parents=[common], help="cache maintenance")
    p.add_argument("action", choices=("gc",))
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "params", None) is not None:
        args.params = dict(args.params)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        for attr in ("n", "m", "max_n", "max_m"):
            value = getattr(args, attr, None)
            if value is not None and value < 1:
                parser.error(f"--{attr.replace('_', '-')} must be >= 1")
        return args.func(args)
    except SpecError as exc:
        print(f"ybh: invalid spec: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CacheCorruption as exc:
        print(f"ybh: cache corruption: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except AssertionError as exc:
        print(f"ybh: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"ybh: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
