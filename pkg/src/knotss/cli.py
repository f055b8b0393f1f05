"""Batch command-line front end.

Every subcommand emits one self-describing JSON document (or TSV for
the table commands) echoing its resolved configuration and a schema
version.  Exit codes: 0 success, 1 a verification failed (the report
carries the witness), 2 usage error.
"""

import argparse
import json
import os
import sys

from .confcoh import ParseError, dim_cohomology, parse_class
from .fields import field_by_name
from .geometry import ALL_LEMMAS, check_lemma
from .hochschild import build_sinha_complex, e2_report
from .operads import d_squared_report
from .partgraph import verify_commutation
from .spectral import ss_pages

SCHEMA_VERSION = "knotss-output/1"
DEFAULT_SEED = 20260823


def _poincare_dims(p):
    """Coefficients of prod_{k<p} (1 + k t)."""
    coeffs = [1]
    for k in range(1, p):
        coeffs = [c + k * (coeffs[i - 1] if i else 0)
                  for i, c in enumerate(coeffs + [0])]
    return coeffs[:-1] if coeffs[-1] == 0 else coeffs


def _seed_default():
    try:
        return int(os.environ.get("KNOTSS_SEED", ""))
    except ValueError:
        return DEFAULT_SEED


# ---------------------------------------------------------------------------
# subcommands


def cmd_conf_dims(args):
    F = field_by_name(args.field)
    rows, ok = [], True
    for p in range(1, args.max_arity + 1):
        dims = [dim_cohomology(p, q, F) for q in range(p)]
        want = _poincare_dims(p)
        ok = ok and dims == want
        rows.append({"p": p, "dims": dims, "expected": want})
    return {"rows": rows}, ok


def cmd_ss_table(args):
    F = field_by_name(args.field)
    C = build_sinha_complex(args.max_arity, F, normalized=args.normalized)
    try:
        pages = ss_pages(C, args.r_max)
    except AssertionError as exc:
        return {"error": str(exc)}, False
    out, nonzero = [], []
    for page in pages:
        slots = {}
        for (mp, q), e in sorted(page.table.items()):
            slots["%d,%d" % (mp, q)] = {"dim": e["dim"],
                                        "d_rank": e["d_rank"],
                                        "target": "%d,%d" % e["target"]}
            if page.r >= 2 and e["d_rank"]:
                nonzero.append({"r": page.r, "slot": [mp, q],
                                "rank": e["d_rank"]})
        out.append({"r": page.r, "slots": slots})
    return {"pages": out, "nonzero_higher": nonzero}, not nonzero


def cmd_verify_cycle(args):
    F = field_by_name(args.field)
    x = parse_class(getattr(args, "class"), args.arity, F)
    rep = e2_report(x)
    coords = rep["coordinates"]
    return {"is_d1_cycle": rep["is_cycle"],
            "is_d1_boundary": rep["is_boundary"],
            "dim_e2": rep["dim_e2"],
            "e2_coordinates": None if coords is None
            else [str(c) for c in coords]}, True


def cmd_ledger(args):
    from .cases import all_cases, run_case
    names = all_cases() if args.case == "all" else [args.case]
    if not set(names) <= set(all_cases()):
        raise ValueError("unknown case %r" % args.case)
    reports = [run_case(name) for name in names]
    return {"cases": reports}, all(r["pass"] for r in reports)


def cmd_ainf_check(args):
    F = field_by_name(args.field)
    rep = d_squared_report(args.max_arity, F, mode=args.mode)
    return rep, rep["pass"]


def cmd_triple_commute(args):
    F = field_by_name(args.field)
    rep = verify_commutation(args.n, F, discrete_only=args.discrete_only,
                             max_edges=args.max_edges)
    return rep, rep["pass"]


def cmd_geom(args):
    names = ALL_LEMMAS if args.lemma == "all" else (args.lemma,)
    if not set(names) <= set(ALL_LEMMAS):
        raise ValueError("unknown lemma %r" % args.lemma)
    reports = [check_lemma(name, samples=args.samples, seed=args.seed)
               for name in names]
    return {"lemmas": reports}, all(r["pass"] for r in reports)


# ---------------------------------------------------------------------------
# plumbing


def _add_common(sp):
    sp.add_argument("--format", choices=("json", "tsv"), default="json")
    sp.add_argument("--config", default=None,
                    help="key=value file of flag defaults")
    sp.add_argument("--output", default=None, help="write here, not stdout")


def build_parser():
    ap = argparse.ArgumentParser(prog="knotss", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("conf-dims", help="cohomology dimension table")
    sp.add_argument("--max-arity", type=int, default=7)
    sp.add_argument("--field", default="q")
    sp.set_defaults(fn=cmd_conf_dims)
    _add_common(sp)

    sp = sub.add_parser("ss-table", help="spectral sequence pages")
    sp.add_argument("--max-arity", type=int, default=5)
    sp.add_argument("--field", default="f3")
    sp.add_argument("--r-max", type=int, default=3)
    sp.add_argument("--normalized", action=argparse.BooleanOptionalAction,
                    default=True)
    sp.set_defaults(fn=cmd_ss_table)
    _add_common(sp)

    sp = sub.add_parser("verify-cycle", help="first-page cycle verdict")
    sp.add_argument("--class", required=True)
    sp.add_argument("--arity", type=int, required=True)
    sp.add_argument("--field", default="f2")
    sp.set_defaults(fn=cmd_verify_cycle)
    _add_common(sp)

    sp = sub.add_parser("ledger", help="run the checked-in chain cases")
    sp.add_argument("--case", default="all")
    sp.set_defaults(fn=cmd_ledger)
    _add_common(sp)

    sp = sub.add_parser("ainf-check", help="d squared on the tree differential")
    sp.add_argument("--max-arity", type=int, default=6)
    sp.add_argument("--field", default="f2")
    sp.add_argument("--mode", choices=("verbatim", "signed"),
                    default="signed")
    sp.set_defaults(fn=cmd_ainf_check)
    _add_common(sp)

    sp = sub.add_parser("triple-commute",
                        help="merge maps against the Cech differential")
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--field", default="q")
    sp.add_argument("--discrete-only", action="store_true")
    sp.add_argument("--max-edges", type=int, default=None)
    sp.set_defaults(fn=cmd_triple_commute)
    _add_common(sp)

    sp = sub.add_parser("geom", help="geometric lemma sampling harnesses")
    sp.add_argument("--lemma", default="all")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=_seed_default())
    sp.set_defaults(fn=cmd_geom)
    _add_common(sp)
    return ap


def _read_config(path):
    extra = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError("bad config line %r" % line)
            key, value = (s.strip() for s in line.split("=", 1))
            if value.lower() == "true":
                extra.append("--" + key)
            elif value.lower() == "false":
                extra.append("--no-" + key)
            else:
                extra.extend(("--" + key, value))
    return extra


def _echo_config(args):
    skip = {"fn", "command", "config", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _tsv_lines(command, report):
    if command == "conf-dims":
        for row in report["rows"]:
            yield "\t".join([str(row["p"])] + [str(d) for d in row["dims"]])
    elif command == "ss-table":
        for page in report["pages"]:
            for slot, e in sorted(page["slots"].items()):
                yield "\t".join((str(page["r"]), slot, str(e["dim"]),
                                 str(e["d_rank"])))
    else:
        for k, v in sorted(report.items()):
            yield "%s\t%s" % (k, json.dumps(v, sort_keys=True, default=str))


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            # config values are defaults: put them before the real flags
            extra = _read_config(args.config)
            sub = argv[0]
            args = parser.parse_args([sub] + extra + argv[1:])
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report, ok = args.fn(args)
    except (ParseError, ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    doc = {"schema": SCHEMA_VERSION, "command": args.command,
           "config": _echo_config(args), "report": report, "pass": ok}
    if args.format == "tsv":
        text = "\n".join(_tsv_lines(args.command, report)) + "\n"
    else:
        text = json.dumps(doc, sort_keys=True, indent=1, default=str) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
