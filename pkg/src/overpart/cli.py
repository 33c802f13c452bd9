"""Command-line interface.

Exit status: 0 when every check passes, 1 when a mathematical failure is
found, 2 on operational errors (bad arguments, unreadable files, horizon
shortfalls).
"""

import argparse
import csv
import json
import logging
import sys

from . import verify
from .qseries import (
    eisenstein,
    eta_quotient_series,
    overpartition_series,
    phi_st,
    theta_phi,
    theta_psi,
    write_cache,
)
from .reports import dump_reports, load_reports, merge_reports

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

SERIES_HELP = """series spec, one of:
  overpartition
  eta:N:d=r,d=r,...    e.g. eta:2:2=1,1=-2
  theta:phi | theta:psi | theta:phi_st:s,t
  eisenstein:k         k in 4, 6, 10"""


class UsageError(ValueError):
    pass


def parse_series_spec(spec, n_terms, ring):
    kind, _, rest = spec.partition(":")
    if kind == "overpartition" and not rest:
        return overpartition_series(n_terms, ring)
    if kind == "eta":
        level, _, body = rest.partition(":")
        try:
            levelN = int(level)
            exps = {}
            for part in body.split(","):
                d, r = part.split("=")
                exps[int(d)] = exps.get(int(d), 0) + int(r)
        except ValueError as exc:
            raise UsageError(f"bad eta spec {spec!r}: expected eta:N:d=r,...") from exc
        for d in exps:
            if d < 1 or levelN % d:
                raise UsageError(f"bad eta spec {spec!r}: {d} does not divide {levelN}")
        series = eta_quotient_series(exps, n_terms, ring)
        return series
    if kind == "theta":
        if rest == "phi":
            return theta_phi(n_terms, ring)
        if rest == "psi":
            return theta_psi(n_terms, ring)
        if rest.startswith("phi_st:"):
            try:
                s, t = (int(x) for x in rest[len("phi_st:"):].split(","))
            except ValueError as exc:
                raise UsageError(f"bad theta spec {spec!r}: expected theta:phi_st:s,t") from exc
            return phi_st(s, t, n_terms, ring)
    if kind == "eisenstein":
        try:
            return eisenstein(int(rest), n_terms, ring)
        except ValueError as exc:
            raise UsageError(f"bad eisenstein spec {spec!r}: {exc}") from exc
    raise UsageError(f"unparseable series spec {spec!r}\n{SERIES_HELP}")


def _dump_series(series, fmt, fh):
    rows = [(e, int(v) if not isinstance(v, int) else v) for e, v in _exponent_rows(series)]
    if fmt == "json":
        json.dump(
            {
                "ring": str(series.ring),
                "offset24": series.offset24,
                "coefficients": [v for _, v in rows],
            },
            fh,
        )
        fh.write("\n")
    elif fmt == "csv":
        w = csv.writer(fh)
        w.writerow(["exponent", "coefficient"])
        w.writerows(rows)
    else:
        fh.write(" ".join(str(v) for _, v in rows) + "\n")


def _exponent_rows(series):
    from fractions import Fraction

    for i, v in enumerate(series.values()):
        e = Fraction(series.offset24 + 24 * i, 24)
        yield (e.numerator if e.denominator == 1 else str(e)), v


def cmd_expand(args):
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    series = parse_series_spec(args.series, args.terms, args.mod)
    if args.out:
        if args.mod is None:
            raise UsageError("--out writes a residue cache and needs --mod")
        write_cache(series, args.out)
    _dump_series(series, args.format, sys.stdout)
    return EXIT_OK


def _emit(reports, args):
    if args.out:
        with open(args.out, "w") as fh:
            dump_reports(reports, fh)
    if args.format == "json":
        dump_reports(reports, sys.stdout)
    else:
        for rep in reports:
            print(rep.summary())
            for n, v in rep.failures[:10]:
                print(f"    n={n}: {v}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_verify_theorem(args):
    names = sorted(verify.THEOREMS) if args.name == "all" else [args.name]
    if args.long and args.name == "all":
        names.append("mod13-counterexample")
    reports = []
    for name in names:
        if name in verify.LONG_ONLY and not args.long:
            raise UsageError(f"{name} expands ~4.3e7 coefficients; pass --long to run it")
        reports += verify.verify_theorem(name, args.Q, args.n_max, args.cache_dir)
    return _emit(reports, args)


def cmd_verify_identity(args):
    names = sorted(verify.IDENTITIES) if args.name == "all" else [args.name]
    reports = [verify.verify_identity(name, args.bound, long=args.long) for name in names]
    return _emit(reports, args)


def cmd_hunt(args):
    if args.mod is None:
        raise UsageError("hunt needs --mod")
    if not args.Q:
        raise UsageError("hunt needs at least one --Q")
    records = verify.hunt(args.mod, args.Q, args.bound, args.cache_dir)
    data = [r.to_json() for r in records]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.format == "json":
        json.dump(data, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        print("hunt verdicts are heuristic: pass means no violation through the bound")
        for r in records:
            where = f" at n={r.fail_n}" if r.fail_n is not None else ""
            extra = f" [{r.note}]" if r.note else ""
            print(f"m={r.m} Q={r.Q} bound={r.bound}: {r.label}{where}{extra}")
    # a refuted candidate is a search outcome, not a failed claim
    return EXIT_OK


def cmd_report(args):
    reports = []
    for path in args.inputs:
        reports += load_reports(path)
    matrix = merge_reports(reports)
    if args.format == "json":
        out = {cid: rep.to_json() for cid, rep in matrix.items()}
        text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    else:
        text = "".join(rep.summary() + "\n" for rep in matrix.values()) or "(no reports)\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in matrix.values()) else EXIT_FAIL


def _common(p, out=True):
    p.add_argument("--format", choices=("text", "json"), default="text")
    if out:
        p.add_argument("--out", help="write JSON to this path")
    p.add_argument("--cache-dir", help="directory for cached overpartition residues")
    p.add_argument("--long", action="store_true", help="enable the long runs")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="overpart", description="Overpartition congruence verification harness."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a q-series", formatter_class=argparse.RawTextHelpFormatter)
    p.add_argument("series", help=SERIES_HELP)
    p.add_argument("--terms", type=int, default=20)
    p.add_argument("--mod", type=int)
    p.add_argument("--out", help="write a QSER1 residue cache (needs --mod < 256)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify-theorem", help="check a congruence family")
    p.add_argument("name", choices=sorted(verify.THEOREMS) + sorted(verify.LONG_ONLY) + ["all"])
    p.add_argument("--Q", type=int, nargs="+", action="extend")
    p.add_argument("--n-max", type=int)
    _common(p)
    p.set_defaults(func=cmd_verify_theorem)

    p = sub.add_parser("verify-identity", help="check an identity or congruence to a bound")
    p.add_argument("name", choices=sorted(verify.IDENTITIES) + ["all"])
    p.add_argument("--bound", type=int)
    _common(p)
    p.set_defaults(func=cmd_verify_identity)

    p = sub.add_parser("hunt", help="search for T(Q^2) congruences mod m")
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--Q", type=int, nargs="+", action="extend")
    p.add_argument("--bound", type=int, default=10)
    _common(p)
    p.set_defaults(func=cmd_hunt)

    p = sub.add_parser("report", help="merge JSON reports into a reproduction matrix")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, IndexError, OSError, MemoryError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
