"""Command-line front end.

Subcommands: count, census, probe, lift, avg, density, sumprimes,
audit.  Every subcommand emits CSV or JSON with the same field set; a
'#'-prefixed metadata line (version + config echo) keeps runs
reproducible without timestamps.  Exit codes: 0 success, 1 usage or
validation error, 2 only when --expect-all-match meets a mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__, audit, counters, dynamics, ffield, stats
from .errors import LabError
from .ffield import MonicPoly


class _Parser(argparse.ArgumentParser):
    """argparse variant matching the exit-code contract (1, not 2)."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _meta_line(args: argparse.Namespace) -> str:
    skip = {"out", "func"}
    parts = [
        f"{k}={v}"
        for k, v in sorted(vars(args).items())
        if k not in skip and v is not None
    ]
    return f"# fixedpoint-lab {__version__} " + " ".join(parts)


def _emit(args: argparse.Namespace, header: str, rows: list[str], json_rows: list[dict],
          extra: dict | None = None) -> None:
    if args.format == "json":
        doc = {"meta": {"version": __version__, "config": _meta_line(args)[2:]},
               "rows": json_rows}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [_meta_line(args), header]
        lines.extend(rows)
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_bounds(text: str) -> list[int]:
    return [int(float(part)) for part in text.split(",") if part]


def _parse_ring(args: argparse.Namespace) -> counters.RingSpec:
    if args.ring == "prime":
        return counters.PrimeField(args.p)
    if args.ring == "ext":
        if args.n is None or args.n < 2:
            raise _UsageError("--ring ext needs --n >= 2")
        return counters.ExtField(args.p, args.n)
    if args.ring == "func":
        return counters.FuncField(args.p, _parse_pi(args))
    raise _UsageError(f"--ring {args.ring} not valid here")


def _parse_pi(args: argparse.Namespace) -> MonicPoly:
    if args.pi is None:
        raise _UsageError("--ring func needs --pi (serialized, or 'auto' with --m)")
    if args.pi == "auto":
        if args.m is None:
            raise _UsageError("--pi auto needs --m <degree>")
        return ffield.canonical_irreducible(args.p, args.m)
    return MonicPoly.parse(args.pi)


def _parse_dspec(args: argparse.Namespace) -> counters.DegreeSpec:
    if args.family == "ppow":
        if args.ell is None:
            raise _UsageError("--family ppow needs --ell")
        return counters.PPow(args.ell)
    if args.family == "pminusonepow":
        if args.ell is None:
            raise _UsageError("--family pminusonepow needs --ell")
        return counters.PMinusOnePow(args.ell)
    if args.d is None:
        raise _UsageError("--family explicit needs --d")
    return counters.Explicit(args.d)


def _parse_c_values(spec: str, ctx: ffield.FieldCtx, cap: int) -> list:
    """int | 'a..b' | '@all' | serialized element."""
    if spec == "@all":
        return list(ffield.enumerate_field(ctx, cap=cap))
    if spec.startswith("p="):
        p, coeffs = ffield.parse_coeff_string(spec)
        if p != ctx.p:
            raise _UsageError(f"--c has characteristic {p}, ring has {ctx.p}")
        return [ctx.elem(coeffs)]
    if ".." in spec:
        lo_s, _, hi_s = spec.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise _UsageError(f"--c range {spec} is empty")
        return [ctx.elem(v) for v in range(lo, hi + 1)]
    return [ctx.elem(int(spec))]


def _active_cap(args: argparse.Namespace) -> int:
    if getattr(args, "cap", None):
        return args.cap
    return ffield.enumeration_cap()


# ----------------------------------------------------------------------
# Subcommand bodies
# ----------------------------------------------------------------------

def _cmd_count(args: argparse.Namespace) -> int:
    ring = _parse_ring(args)
    dspec = _parse_dspec(args)
    ctx = counters.ring_field(ring)
    cap = _active_cap(args)
    rows, jrows = [], []
    for c in _parse_c_values(args.c, ctx, cap):
        res = counters.fixed_point_count(ring, dspec, c, cap=cap)
        rows.append(res.csv_row())
        jrows.append(res.json_obj())
    _emit(args, "ring,p,n_or_m,dspec,ell,c,count,witnesses", rows, jrows)
    return 0


_CENSUS_HEADER = "ring,p,param,dspec,ell,c,k,ring_size,fixed,tails,cycles"


def _census_rows(ring_tag: str, p: int, param: int, fam: str, ell: int,
                 c_label: str, k: int | str, census: dynamics.OrbitCensus) -> tuple[str, dict]:
    row = ",".join(
        str(v)
        for v in (ring_tag, p, param, fam, ell, c_label, k, census.ring_size,
                  census.fixed_count, census.tail_count, census.cycles_csv())
    )
    jrow = {
        "ring": ring_tag, "p": p, "param": param, "dspec": fam, "ell": ell,
        "c": c_label, "k": k, "ring_size": census.ring_size,
        "fixed": census.fixed_count, "tails": census.tail_count,
        "cycles": census.cycles_csv(),
    }
    return row, jrow


def _cmd_census(args: argparse.Namespace) -> int:
    cap = _active_cap(args)
    dspec = _parse_dspec(args)
    fam, ell = counters.degree_label(dspec)
    rows, jrows = [], []
    if args.ring == "padic":
        if args.k is None:
            raise _UsageError("--ring padic needs --k")
        for c in _parse_int_list(args.c):
            census = dynamics.functional_graph_census(
                dynamics.PadicRing(args.p, args.k), dspec, c, cap=cap)
            row, jrow = _census_rows("padic", args.p, args.k, fam, ell, str(c),
                                     args.k, census)
            rows.append(row)
            jrows.append(jrow)
    else:
        ring = _parse_ring(args)
        ctx = counters.ring_field(ring)
        sym = "t" if isinstance(ring, counters.FuncField) else "u"
        for c in _parse_c_values(args.c, ctx, cap):
            census = dynamics.functional_graph_census(ring, dspec, c, cap=cap)
            row, jrow = _census_rows(counters.ring_kind(ring), ring.p,
                                     counters.ring_param(ring), fam, ell,
                                     c.render(sym), "", census)
            rows.append(row)
            jrows.append(jrow)
    _emit(args, _CENSUS_HEADER, rows, jrows)
    return 0


def _parse_int_list(spec: str) -> list[int]:
    if ".." in spec:
        lo_s, _, hi_s = spec.partition("..")
        return list(range(int(lo_s), int(hi_s) + 1))
    return [int(spec)]


def _cmd_probe(args: argparse.Namespace) -> int:
    cap = _active_cap(args)
    rows, jrows = [], []
    for c in _parse_int_list(args.c):
        rep = dynamics.adam_fares_probe(args.p, args.ell, c, args.k, cap=cap)
        rows.append(",".join(str(v) for v in (
            rep.p, rep.ell, c, rep.k, rep.census.ring_size, rep.fixed_count,
            rep.census.tail_count, rep.census.cycles_csv(),
            int(rep.has_p_fixed_points), int(rep.has_exact_period_p_cycle),
            int(rep.dichotomy_holds))))
        jrows.append({
            "p": rep.p, "ell": rep.ell, "c": c, "k": rep.k,
            "ring_size": rep.census.ring_size, "fixed": rep.fixed_count,
            "tails": rep.census.tail_count, "cycles": rep.census.cycles_csv(),
            "has_p_fixed": rep.has_p_fixed_points,
            "has_period_p_cycle": rep.has_exact_period_p_cycle,
            "dichotomy": rep.dichotomy_holds,
        })
    _emit(args, "p,ell,c,k,ring_size,fixed,tails,cycles,has_p_fixed,"
          "has_period_p_cycle,dichotomy", rows, jrows)
    return 0


def _cmd_lift(args: argparse.Namespace) -> int:
    dspec = _parse_dspec(args)
    fam, ell = counters.degree_label(dspec)
    rep = dynamics.hensel_lift(args.p, dspec, args.c, args.root, args.k,
                               allow_wide=args.allow_wide)
    row = ",".join(str(v) for v in (args.p, fam, ell, args.c, args.root,
                                    rep.k, rep.value))
    jrow = {"p": args.p, "dspec": fam, "ell": ell, "c": args.c,
            "root": args.root, "k": rep.k, "value": rep.value}
    _emit(args, "p,dspec,ell,c,root,k,value", [row], [jrow])
    return 0


def _cmd_avg(args: argparse.Namespace) -> int:
    bounds = _parse_bounds(args.bounds) if args.bounds else [args.bound]
    if not bounds or bounds == [None]:
        raise _UsageError("avg needs --bound or --bounds")
    rows, jrows = [], []
    for bound in bounds:
        rep = stats.avg_estimator(args.setting, bound, ell=args.ell,
                                  degree_n=args.degree_n)
        rows.append(rep.csv_row())
        jrows.append(rep.json_obj())
    _emit(args, "setting,bound,ell,numerator,denominator,value,growth_samples,claimed",
          rows, jrows)
    return 0


def _cmd_density(args: argparse.Namespace) -> int:
    bounds = _parse_bounds(args.bounds) if args.bounds else [args.c]
    if not bounds or bounds == [None]:
        raise _UsageError("density needs --c or --bounds")
    rows, jrows = [], []
    for bound in bounds:
        rep = stats.density_estimator(args.family, bound, ell=args.ell)
        rows.append(rep.csv_row())
        jrows.append(rep.json_obj())
    _emit(args, "family,c_bound,ell,numerator,denominator,ratio,claimed", rows, jrows)
    return 0


def _cmd_sumprimes(args: argparse.Namespace) -> int:
    bounds = _parse_bounds(args.bounds) if args.bounds else [args.c]
    if not bounds or bounds == [None]:
        raise _UsageError("sumprimes needs --c or --bounds")
    rows, jrows = [], []
    for c in bounds:
        rep = stats.expansion_comparator(c, cap=args.sieve_cap)
        rows.append(",".join(str(v) for v in (
            rep.c, rep.sum_range, rep.sum_first_c,
            repr(rep.formula), repr(rep.rel_error))))
        jrows.append({"c": rep.c, "sum_range": rep.sum_range,
                      "sum_first_c": rep.sum_first_c, "formula": rep.formula,
                      "rel_error": rep.rel_error})
    _emit(args, "c,sum_range,sum_first_c,formula,rel_error", rows, jrows)
    return 0


def _cmd_audit(args: argparse.Namespace) -> int:
    grid = audit.build_grid(args.regime, args.grid)
    records = audit.run_audit(grid, jobs=args.jobs)
    summary = audit.summarize(records)
    rows = [r.csv_row() for r in records]
    jrows = [
        {
            "claim_id": r.claim_id, "case": r.case,
            "ring": counters.ring_kind(r.ring), "p": r.ring.p,
            "param": r.degree, "ell": r.ell,
            "c": r.c.render("t" if isinstance(r.ring, counters.FuncField) else "u"),
            "predicted_lo": r.predicted[0], "predicted_hi": r.predicted[1],
            "computed": r.computed, "verdict": r.verdict,
            "witnesses": [w.render("t" if isinstance(r.ring, counters.FuncField) else "u")
                          for w in r.witnesses],
        }
        for r in records
    ]
    _emit(args, audit.AUDIT_CSV_HEADER, rows, jrows, extra={"summary": summary})
    if args.summary_out:
        with open(args.summary_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(audit.summary_to_json(summary))
    if args.expect_all_match and summary["mismatches"]:
        return 2
    return 0


# ----------------------------------------------------------------------
# Parser assembly
# ----------------------------------------------------------------------

def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--cap", type=int, help="enumeration cap override")


def _add_ring(sp: argparse.ArgumentParser, padic: bool = False) -> None:
    choices = ("prime", "ext", "func") + (("padic",) if padic else ())
    sp.add_argument("--ring", choices=choices, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, help="extension degree for --ring ext")
    sp.add_argument("--pi", help="serialized modulus, or 'auto' with --m")
    sp.add_argument("--m", type=int, help="degree for --pi auto")
    if padic:
        sp.add_argument("--k", type=int, help="precision for --ring padic")


def _add_dspec(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--family", choices=("ppow", "pminusonepow", "explicit"),
                    required=True)
    sp.add_argument("--ell", type=int)
    sp.add_argument("--d", type=int, help="explicit degree")


def build_parser() -> _Parser:
    parser = _Parser(prog="fixedpoint-lab")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("count", help="fixed-point counts with witnesses")
    _add_ring(sp)
    _add_dspec(sp)
    sp.add_argument("--c", required=True, help="int | a..b | @all | p=..:..")
    _add_common(sp)
    sp.set_defaults(func=_cmd_count)

    sp = sub.add_parser("census", help="functional-graph census")
    _add_ring(sp, padic=True)
    _add_dspec(sp)
    sp.add_argument("--c", required=True)
    _add_common(sp)
    sp.set_defaults(func=_cmd_census)

    sp = sub.add_parser("probe", help="dichotomy probe on Z/p^k")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--c", required=True, help="int or a..b")
    sp.add_argument("--k", type=int, required=True)
    _add_common(sp)
    sp.set_defaults(func=_cmd_probe)

    sp = sub.add_parser("lift", help="Newton lift of a mod-p fixed point")
    sp.add_argument("--p", type=int, required=True)
    _add_dspec(sp)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--root", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--allow-wide", action="store_true",
                    help="permit p^k beyond 64 bits")
    _add_common(sp)
    sp.set_defaults(func=_cmd_lift)

    sp = sub.add_parser("avg", help="average of a counting function")
    sp.add_argument("--setting", required=True,
                    choices=stats.AVG_SETTINGS)
    sp.add_argument("--bound", type=int)
    sp.add_argument("--bounds", help="comma list, e.g. 1e2,1e3,1e4")
    sp.add_argument("--ell", type=int)
    sp.add_argument("--degree-n", type=int, dest="degree_n",
                    help="build F_{p^n} per prime instead of Z/pZ")
    _add_common(sp)
    sp.set_defaults(func=_cmd_avg)

    sp = sub.add_parser("density", help="density of primes meeting a count condition")
    sp.add_argument("--family", required=True,
                    choices=stats.DENSITY_FAMILIES)
    sp.add_argument("--c", type=int)
    sp.add_argument("--bounds", help="comma list of c bounds")
    sp.add_argument("--ell", type=int, default=1)
    _add_common(sp)
    sp.set_defaults(func=_cmd_density)

    sp = sub.add_parser("sumprimes", help="sum-of-primes expansion comparator")
    sp.add_argument("--c", type=int)
    sp.add_argument("--bounds", help="comma list of c values")
    sp.add_argument("--sieve-cap", type=int, default=stats.DEFAULT_SIEVE_CAP,
                    dest="sieve_cap")
    _add_common(sp)
    sp.set_defaults(func=_cmd_sumprimes)

    sp = sub.add_parser("audit", help="run the claim audit over a grid")
    sp.add_argument("--grid", choices=("small", "default"), default="small")
    sp.add_argument("--regime", choices=("degree1", "extension", "all"),
                    default="all")
    sp.add_argument("--expect-all-match", action="store_true",
                    dest="expect_all_match",
                    help="exit 2 if any record mismatches")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--summary-out", dest="summary_out",
                    help="write the JSON summary to this path")
    _add_common(sp)
    sp.set_defaults(func=_cmd_audit)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except LabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
