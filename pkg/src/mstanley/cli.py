"""``mstanley`` command line.

Exit codes: 0 success, 1 usage or parse error, 2 budget exceeded,
3 invariant violation (conjecture failure or formula/oracle mismatch).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import InvariantViolationError, MStanleyError
from .homology import Field
from .instances import format_instance, load_instance, parse_instance
from .invariants import depth_formula, depth_oracle, size
from .pipeline import BatchParams, batch, verify, write_jsonl
from .splitting import decompose
from .stanley import DEFAULT_BUDGET, sdepth_exact

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_parse(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        spec = parse_instance(fh.read(), allow_redundant=args.allow_redundant)
    if args.json:
        _emit(spec.to_json())
    else:
        sys.stdout.write(format_instance(spec))
    return EXIT_OK


def cmd_size(args) -> int:
    r = size(load_instance(args.file))
    _emit({"v": r.v, "h": r.h, "size": r.size})
    return EXIT_OK


def cmd_depth(args) -> int:
    dec = load_instance(args.file)
    out = {}
    if not args.oracle_only:
        f = depth_formula(dec)
        out["formula"] = {"depth_quotient": f.depth_quotient, "depth_ideal": f.depth_ideal,
                          "case": f.method, "flags": list(f.flags)}
    if not args.formula_only:
        o = depth_oracle(dec.ideal, Field.parse(args.field))
        out["oracle"] = {"depth_quotient": o.depth_quotient, "depth_ideal": o.depth_ideal,
                         "field": str(Field.parse(args.field))}
    _emit(out)
    if "formula" in out and "oracle" in out and out["formula"]["depth_quotient"] != out["oracle"]["depth_quotient"]:
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_sdepth(args) -> int:
    dec = load_instance(args.file, allow_redundant=True)
    r = sdepth_exact(dec.ideal, args.budget)
    _emit({"sdepth": r.value, "decomposition": r.witness.to_json()})
    return EXIT_OK


def cmd_decompose(args) -> int:
    dec = load_instance(args.file)
    out = decompose(dec, args.method, args.budget)
    _emit({"method": args.method, "sdepth": out.sdepth_of, "decomposition": out.to_json()})
    return EXIT_OK


def cmd_verify(args) -> int:
    dec = load_instance(args.file)
    report = verify(dec, Field.parse(args.field), exact=not args.no_exact, budget=args.budget)
    payload = report.to_json()
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    _emit(payload)
    return _status_exit(report.status)


def _status_exit(status: str) -> int:
    if status == "ok":
        return EXIT_OK
    if status == "budget":
        return EXIT_BUDGET
    return EXIT_INVARIANT


def cmd_batch(args) -> int:
    params = BatchParams(seed=args.seed, count=args.count, n=args.n, components=args.components,
                         max_exp=args.max_exp, max_gens=args.max_gens, exact=not args.no_exact,
                         budget=args.budget, field=args.field)
    summary, records = batch(params, jobs=args.jobs, timings=not args.no_timings)
    if args.jsonl:
        write_jsonl(args.jsonl, records, timings=not args.no_timings)
    if args.figures:
        from .plotting import render_batch_figures

        summary["figures"] = render_batch_figures(records, args.figures)
    _emit(summary)
    failing = [s for s in summary["statuses"] if s != "ok"]
    if any(s in ("conjecture-failure", "formula-mismatch", "invariant-violation") for s in failing):
        return EXIT_INVARIANT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mstanley", description="Stanley depth tools for intersections of monomial primary ideals")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="canonicalize an instance file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="print the instance as JSON")
    p.add_argument("--allow-redundant", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("size", help="Lyubeznik size")
    p.add_argument("file")
    p.set_defaults(func=cmd_size)

    p = sub.add_parser("depth", help="depth by closed formula and by Betti numbers")
    p.add_argument("file")
    p.add_argument("--field", default="q", help="q (default) or fp:<p>")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--oracle-only", action="store_true")
    which.add_argument("--formula-only", action="store_true")
    p.set_defaults(func=cmd_depth)

    p = sub.add_parser("sdepth", help="exact Stanley depth with a witness")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max characteristic poset box size")
    p.set_defaults(func=cmd_sdepth)

    p = sub.add_parser("decompose", help="build a Stanley decomposition")
    p.add_argument("file")
    p.add_argument("--method", choices=("split", "exact"), default="split")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="full conjecture check for one instance")
    p.add_argument("file")
    p.add_argument("--json", metavar="OUT", help="also write the report here")
    p.add_argument("--field", default="q")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--no-exact", action="store_true", help="skip the exact sdepth solver")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("batch", help="verify many seeded random instances")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--components", type=int, choices=(2, 3), default=3)
    p.add_argument("--max-exp", type=int, default=2)
    p.add_argument("--max-gens", type=int, default=5)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--field", default="q")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--jsonl", metavar="OUT", help="write one report per line")
    p.add_argument("--figures", metavar="DIR", help="render summary figures into DIR")
    p.add_argument("--no-exact", action="store_true")
    p.add_argument("--no-timings", action="store_true", help="omit timings for byte-identical output")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"mstanley: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolationError as exc:
        print(f"mstanley: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except MStanleyError as exc:
        print(f"mstanley: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
