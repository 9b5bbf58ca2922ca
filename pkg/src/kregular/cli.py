"""``kregular`` command line.

Exit status: 0 success, 1 a check or detector failed, 2 bad usage or input.
Human output is line oriented; structured results go to ``--out`` as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import hankel as hk
from .docs import (
    dfao_to_doc,
    linrep_to_doc,
    make_report,
    parse_definition,
    report_item,
    system_to_doc,
)
from .errors import DefinitionError, KRegularError, UsageError
from .kernel_lab import (
    DEFAULT_HORIZON,
    DEFAULT_RANK_CAP,
    DEFAULT_STATE_CAP,
    detect_automatic,
    detect_periodic,
    growth_probe,
    guess_linear_representation,
)
from .polygen import GeneratedSystem, construct, resolve, verify_rules
from .seq_core import Sequence
from .suites import SUITES, run_suite


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _seed(text: str) -> tuple[int, int]:
    idx, sep, val = text.partition("=")
    try:
        if not sep:
            raise ValueError
        return int(idx), int(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected index=value, got {text!r}") from None


# ------------------------------------------------------------ input helpers


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(args):
    """The parsed ``--def`` document with ``--seed`` overrides applied."""
    if not args.definition:
        raise UsageError("--def is required")
    obj = parse_definition(_read(args.definition))
    seeds = dict(getattr(args, "seed", None) or [])
    if seeds:
        if not isinstance(obj, GeneratedSystem):
            raise UsageError("--seed applies only to generated systems")
        obj = obj.with_seeds(seeds)
    return obj


def _sequence(args) -> Sequence:
    """Sequence named by ``--def``, or ``d(m, .)`` when only ``--m`` is given."""
    if not args.definition and getattr(args, "m", None) is not None:
        return hk.d_sequence(args.m)
    obj = _load(args)
    return construct(obj) if isinstance(obj, GeneratedSystem) else obj


def _write_json(path, doc):
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def _emit(args, doc, summary: str):
    if args.out:
        _write_json(args.out, doc)
        print(summary)
    else:
        print(json.dumps(doc, indent=2))


# ---------------------------------------------------------------- commands


def cmd_seq_eval(args):
    u = _sequence(args)
    if args.n is None:
        raise UsageError("--n is required")
    print(u.eval(args.n))
    return 0


def cmd_seq_prefix(args):
    u = _sequence(args)
    length = args.n if args.n is not None else 32
    print(" ".join(map(str, u.prefix(length))))
    return 0


def cmd_polygen_construct(args):
    system = _load(args)
    if not isinstance(system, GeneratedSystem):
        raise UsageError("--def must describe a generated system")
    plan = resolve(system)
    print(f"system: {system.describe()}")
    print(f"required seeds: {sorted(plan.required_seeds)}")
    if plan.defaults:
        print(f"defaults: {dict(sorted(plan.defaults.items()))}")
    if plan.missing_seeds:
        print(f"missing seeds: {sorted(plan.missing_seeds)}", file=sys.stderr)
        return 1
    u = construct(system, plan)
    length = args.n if args.n is not None else 32
    print(" ".join(map(str, u.prefix(length))))
    if args.out:
        _write_json(args.out, system_to_doc(system))
    return 0


def cmd_polygen_verify(args):
    system = _load(args)
    if not isinstance(system, GeneratedSystem):
        raise UsageError("--def must describe a generated system")
    if args.against:
        against = parse_definition(_read(args.against))
        u = construct(against) if isinstance(against, GeneratedSystem) else against
    else:
        u = construct(system)
    horizon = args.horizon or DEFAULT_HORIZON
    start = time.perf_counter()
    rep = verify_rules(system, u, horizon)
    ce = None
    if rep.violations:
        x, want, got = rep.violations[0]
        ce = {"index": x, "expected": str(want), "got": str(got)}
    item = report_item(f"rules hold below {horizon}", rep.ok, ce, detail={"checked": rep.checked})
    report = make_report("polygen-verify", {"horizon": horizon}, [item], time.perf_counter() - start)
    print(f"{'PASS' if rep.ok else 'FAIL'} checked={rep.checked} violations={len(rep.violations)}")
    if args.out:
        _write_json(args.out, report)
    return 0 if rep.ok else 1


def cmd_kernel_detect(args):
    u = _sequence(args)
    dfao = detect_automatic(u, args.k, args.horizon or DEFAULT_HORIZON, args.state_cap)
    _emit(args, dfao_to_doc(dfao), f"automatic: {dfao.num_states} states")
    return 0


def cmd_kernel_guess(args):
    u = _sequence(args)
    horizon = args.horizon or DEFAULT_HORIZON
    ext = args.extended_horizon or 4 * horizon
    rep = guess_linear_representation(u, args.k, horizon, args.rank_cap, ext)
    _emit(args, linrep_to_doc(rep), f"regular: rank {rep.rank}, verified below {ext}")
    return 0


def cmd_kernel_probe(args):
    u = _sequence(args)
    probe = growth_probe(u, args.anchor, args.steps)
    for kappa, rho in sorted(probe.ratios.items()):
        print(f"rho_{kappa} = {rho:.6f}")
    print(f"verdict: {probe.verdict}")
    return 0


def cmd_kernel_periodic(args):
    u = _sequence(args)
    horizon = args.horizon or DEFAULT_HORIZON
    per = detect_periodic(u, args.period_cap, args.preperiod_cap, horizon)
    print(f"period={per.period} preperiod={per.preperiod}")
    return 0


def cmd_hankel_det(args):
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required")
    if args.method == "oracle":
        print(hk.d_oracle(args.m, args.n).value)
        return 0
    if args.method == "recurrence":
        print(hk.d_value(args.m, args.n))
        return 0
    a = hk.d_oracle(args.m, args.n).value
    b = hk.d_value(args.m, args.n)
    print(f"oracle={a} recurrence={b} agree={'true' if a == b else 'false'}")
    return 0 if a == b else 1


def cmd_hankel_grid(args):
    max_m = 8 if args.max_m is None else args.max_m
    max_n = 16 if args.max_n is None else args.max_n
    start = time.perf_counter()
    if args.method == "both":
        report = run_suite("oracle-grid", max_m=max_m, max_n=max_n)
    else:
        if args.method == "oracle":
            grid = [[hk.d_oracle(m, n).value for n in range(max_n + 1)] for m in range(max_m + 1)]
        else:
            grid = hk.d_table(max_m, max_n)
        for m, row in enumerate(grid):
            print(f"m={m}: " + " ".join(map(str, row)))
        items = [report_item(f"d(m,n) {args.method}", True, detail={"grid": [[str(v) for v in r] for r in grid]})]
        report = make_report(f"hankel-grid-{args.method}", {"max_m": max_m, "max_n": max_n}, items, time.perf_counter() - start)
    if args.method == "both":
        _print_report(report)
    if args.out:
        _write_json(args.out, report)
    return 0 if report["status"] == "pass" else 1


def _print_report(report):
    for item in report["items"]:
        line = f"{item['status'].upper()} {item['check']}"
        if item["counterexample"] is not None:
            line += f"  counterexample={json.dumps(item['counterexample'])}"
        print(line)
    print(f"suite {report['suite']}: {report['status']} ({len(report['items'])} items, {report['wall_time_s']} s)")


def _suite_params(args) -> dict:
    suite = args.suite
    pick = {}

    def put(key, value):
        if value is not None:
            pick[key] = value

    if suite in ("oracle-grid", "prop42", "prop44"):
        put("max_m", args.max_m)
        put("max_n", args.max_n)
    if suite in ("prop42", "prop43", "cigler", "regularity", "periodicity"):
        put("horizon", args.horizon)
    if suite in ("cigler", "regularity"):
        put("max_k", args.max_k)
    if suite == "periodicity":
        put("max_m", args.max_m)
    if suite == "regularity":
        put("extended_horizon", args.extended_horizon)
        put("rank_cap", args.rank_cap)
        put("state_cap", args.state_cap)
    return pick


def cmd_verify(args):
    report = run_suite(args.suite, **_suite_params(args))
    _print_report(report)
    if args.out:
        _write_json(args.out, report)
    return 0 if report["status"] == "pass" else 1


# ------------------------------------------------------------------ parser


def _add_source(p):
    p.add_argument("--def", dest="definition", metavar="PATH", help="sequence-definition document")
    p.add_argument("--seed", action="append", type=_seed, metavar="INDEX=VALUE", help="seed override (repeatable)")
    p.add_argument("--m", type=int, help="use d(m, .) when no --def is given")


def _add_kernel(p, k=True):
    _add_source(p)
    if k:
        p.add_argument("--k", type=int, default=2)
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kregular", description="k-regular sequences and Hankel determinants of powers of two")
    parser.add_argument("--version", action="store_true", help="print the version and exit")
    top = parser.add_subparsers(dest="group", parser_class=_Parser)

    seq = top.add_parser("seq", help="evaluate a sequence").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = seq.add_parser("eval")
    _add_source(p)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_seq_eval)
    p = seq.add_parser("prefix")
    _add_source(p)
    p.add_argument("--n", type=int, help="prefix length (default 32)")
    p.set_defaults(func=cmd_seq_prefix)

    pg = top.add_parser("polygen", help="generated polynomial systems").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    p = pg.add_parser("construct")
    _add_source(p)
    p.add_argument("--n", type=int, help="prefix length to print (default 32)")
    p.add_argument("--out", metavar="PATH", help="write the normalized system document")
    p.set_defaults(func=cmd_polygen_construct)
    p = pg.add_parser("verify")
    _add_source(p)
    p.add_argument("--against", metavar="PATH", help="check this sequence instead of the system's own construction")
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_polygen_verify)

    kernel = top.add_parser("kernel", help="k-kernel detectors").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    p = kernel.add_parser("detect")
    _add_kernel(p)
    p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    p.set_defaults(func=cmd_kernel_detect)
    for name, sub in (("guess", kernel), ("rep", None)):
        if sub is None:
            sub = top.add_parser("guess", help="alias: guess rep = kernel guess").add_subparsers(
                dest="command", required=True, parser_class=_Parser
            )
        p = sub.add_parser(name)
        _add_kernel(p)
        p.add_argument("--extended-horizon", type=int)
        p.add_argument("--rank-cap", type=int, default=DEFAULT_RANK_CAP)
        p.set_defaults(func=cmd_kernel_guess)
    p = kernel.add_parser("probe")
    _add_source(p)
    p.add_argument("--anchor", type=int, default=3)
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=cmd_kernel_probe)
    p = kernel.add_parser("periodic")
    _add_kernel(p, k=False)
    p.add_argument("--period-cap", type=int, default=64)
    p.add_argument("--preperiod-cap", type=int, default=64)
    p.set_defaults(func=cmd_kernel_periodic)

    hank = top.add_parser("hankel", help="Hankel determinants of powers of two").add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )
    p = hank.add_parser("det")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--method", choices=("oracle", "recurrence", "both"), default="both")
    p.set_defaults(func=cmd_hankel_det)
    p = hank.add_parser("grid")
    p.add_argument("--max-m", type=int)
    p.add_argument("--max-n", type=int)
    p.add_argument("--method", choices=("oracle", "recurrence", "both"), default="both")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_hankel_grid)

    p = top.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=list(SUITES))
    p.add_argument("--max-m", type=int)
    p.add_argument("--max-n", type=int)
    p.add_argument("--max-k", type=int)
    p.add_argument("--horizon", type=int)
    p.add_argument("--extended-horizon", type=int)
    p.add_argument("--rank-cap", type=int)
    p.add_argument("--state-cap", type=int)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    return parser



def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.version:
            from . import __version__

            print(__version__)
            return 0
        if not getattr(args, "func", None):
            parser.print_usage(sys.stderr)
            return 2
        return args.func(args)
    except (UsageError, DefinitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KRegularError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
