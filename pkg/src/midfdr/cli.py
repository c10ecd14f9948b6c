"""Command-line entry point: ``midfdr {pvalues,test,bounds,simulate,oracle}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .bounds import calibrate_alpha, prop_bound, prop_check, theorem1_bound
from .exact import binomial, binomial_half, hypergeometric
from .oracle import DEFAULT_CAP, exact_fdr_oracle
from .procedures import bh_constants
from .sim import load_configs, run_study, summary_json
from .tables import METHOD_NAMES, ingest, run_tests, table_records


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_pvalues(args) -> str:
    table = ingest(args.input, args.min_total)
    records, flags = table_records(table)
    rows = []
    for row, rec in zip(table.rows, records):
        conv = rec.conventional if rec else Fraction(1)
        mid = rec.mid if rec else Fraction(1)
        l = rec.l if rec else Fraction(1)
        e = rec.e if rec else Fraction(0)
        rows.append({"id": row.id, "c1": row.c1, "c2": row.c2, "l": l, "e": e,
                     "conventional": conv, "mid": mid, "flag": flags.get(row.id, "")})
    if args.format == "json":
        out = [dict(r, l=str(r["l"]), e=str(r["e"]), conventional=str(r["conventional"]), mid=str(r["mid"]))
               for r in rows]
        return json.dumps({"family": table.family, "removed": table.removed, "tests": out}, indent=2) + "\n"
    for r in rows:
        for k in ("l", "e", "conventional", "mid"):
            r[k] = repr(float(r[k]))
    return _csv(rows)


def cmd_test(args) -> str:
    table = ingest(args.input, args.min_total)
    methods = args.method or ["bh", "bh-midp"]
    report = run_tests(table, args.alpha, methods, args.lam, args.seed)
    if args.format == "json":
        return report.to_json() + "\n"
    return _csv(report.csv_rows())


def _pmfs(args):
    if args.family == "bt":
        if args.M or args.N is not None:
            raise ValueError("--N/--M are for --family fet; use --n for binomial tests")
        if not args.n:
            raise ValueError("--family bt needs at least one --n")
        return [binomial_half(n) for n in args.n]
    if args.n:
        raise ValueError("--n is for --family bt; use --N and --M for Fisher's exact tests")
    if args.N is None or not args.M:
        raise ValueError("--family fet needs --N and at least one --M")
    return [hypergeometric(args.N, args.N, M) for M in args.M]


def cmd_bounds(args) -> str:
    pmfs = _pmfs(args)
    rep = prop_check(pmfs, args.alpha, args.pi0, args.m0, args.family, args.rule)
    bound = prop_bound(pmfs, args.alpha, args.pi0, args.m0, args.family, args.rule)
    res = {
        "condition": rep.condition_id,
        "left": float(rep.left_side),
        "right": float(rep.right_side),
        "holds": rep.holds,
        "fdr_bound": float(bound),
    }
    if args.calibrate:
        res["calibrated_alpha"] = calibrate_alpha(pmfs, args.alpha, args.pi0, args.m0, args.family, args.rule)
    if args.format == "json":
        return json.dumps(res, indent=2) + "\n"
    if args.format == "csv":
        return _csv([res])
    lines = [rep.summary(), f"fdr bound {float(bound):.5f}"]
    if args.calibrate:
        lines.append(f"calibrated alpha {res['calibrated_alpha']:.6f}")
    return "\n".join(lines) + "\n"


def cmd_simulate(args) -> str:
    configs = load_configs(args.config)
    summaries = [run_study(c, args.workers) for c in configs]
    if args.format == "json":
        return summary_json(summaries) + "\n"
    return _csv([row for s in summaries for row in s.rows()])


def cmd_oracle(args) -> str:
    nulls = _pmfs(args)
    if len(nulls) != 1:
        raise ValueError("oracle takes a single --n (bt) or --M (fet); use --m and --m1 for test counts")
    null = nulls[0]
    if args.family == "bt":
        alt = binomial(null.kind[1], args.theta)
    else:
        alt = hypergeometric(args.N, args.N, args.M[0], odds=args.odds)
    res = exact_fdr_oracle([null] * args.m, [(alt, null)] * args.m1, args.alpha, args.flavor, args.cap)
    out = {
        "exact_fdr": str(res.exact_fdr),
        "fdr": float(res.exact_fdr),
        "exact_power": str(res.exact_power),
        "power": float(res.exact_power),
        "outcomes_enumerated": res.outcomes_enumerated,
        "alpha": float(args.alpha),
        "exceeds_alpha": res.exact_fdr > args.alpha,
    }
    if args.m1 == 0 and args.m >= 1 and null.is_symmetric:
        a1, a2 = theorem1_bound([null] * args.m, list(bh_constants(args.m, args.alpha)), 1, args.m)
        out["tightened_bound"] = float(a1 + a2)
    if args.format == "json":
        return json.dumps(out, indent=2) + "\n"
    if args.format == "csv":
        return _csv([out])
    verdict = "exceeds" if out["exceeds_alpha"] else "within"
    return (
        f"exact FDR {out['exact_fdr']} = {out['fdr']:.7g}, {verdict} alpha {float(args.alpha):g}\n"
        f"exact power {out['exact_power']} = {out['power']:.7g}\n"
        f"outcomes {res.outcomes_enumerated}\n"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="midfdr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def table_opts(p):
        p.add_argument("--input", required=True, help="CSV with id,c1,c2[,N1,N2]")
        p.add_argument("--min-total", type=int, default=0, help="drop rows with c1+c2 below this")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write here instead of stdout")

    p = sub.add_parser("pvalues", help="conventional and mid p-values per row")
    table_opts(p)
    p.set_defaults(func=cmd_pvalues)

    p = sub.add_parser("test", help="run BH-type procedures on a count table")
    table_opts(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--method", action="append", choices=sorted(METHOD_NAMES),
                   help="repeatable; default bh and bh-midp")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_test)

    def family_opts(p):
        p.add_argument("--family", choices=("bt", "fet"), required=True)
        p.add_argument("--n", type=int, action="append", help="binomial-test total count (repeatable)")
        p.add_argument("--N", type=int, help="common group size for Fisher's exact test")
        p.add_argument("--M", type=int, action="append", help="Fisher's exact test total count (repeatable)")
        p.add_argument("--alpha", type=_fraction, default=Fraction(1, 20))

    p = sub.add_parser("bounds", help="check the sufficient condition for BH on mid p-values")
    family_opts(p)
    p.add_argument("--pi0", type=_fraction, required=True)
    p.add_argument("--m0", type=int, required=True)
    p.add_argument("--rule", choices=("cdf", "conventional", "mid"), default="cdf")
    p.add_argument("--calibrate", action="store_true", help="also report the rescaled level")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="run simulation scenarios from an INI config")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="exact FDR of BH by full enumeration")
    family_opts(p)
    p.add_argument("--m", type=int, default=1, help="number of true nulls")
    p.add_argument("--m1", type=int, default=0, help="number of false nulls")
    p.add_argument("--theta", type=_fraction, default=Fraction(3, 4), help="success probability of false nulls (bt)")
    p.add_argument("--odds", type=_fraction, default=Fraction(4), help="odds ratio of false nulls (fet)")
    p.add_argument("--flavor", choices=("conventional", "mid"), default="mid")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
        _emit(text, args.out)
    except (ValueError, OSError) as exc:
        print(f"midfdr {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
