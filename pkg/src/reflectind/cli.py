"""Command-line entry point ``reflect``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import benchgen, harness
from .errors import EncodingTooDeep, ReflectError
from .mangle import SMTLIB, TPTP
from .native import parse_model, render
from .randomgen import random_closed_formulas
from .reflection import reflective_extension, reflective_inductive_extension
from .semantics import (CheckReport, bounded_reflective_model, check_reflective_axioms,
                        check_truth_predicate)
from .theories import IND_THEORY, NAT_THEORY, cyclic_nat_model, load_theory

DEFAULT_THEORY = {"refl0": NAT_THEORY, "refl1": IND_THEORY, "ind": IND_THEORY}


def _bench_gen(args) -> int:
    base = load_theory(args.theory or DEFAULT_THEORY[args.suite])
    gen = benchgen.SUITES[args.suite]
    cases = gen(base) if args.suite == "refl0" else gen(base, skip_missing=args.skip_missing)
    rows = benchgen.write_suite(cases, args.format, args.out)
    bad = [r for r in rows if r["status"] != "ok"]
    print(f"wrote {len(rows) - len(bad)} problems to {args.out}"
          + (f" ({len(bad)} not expressible in {args.format})" if bad else ""))
    return 0


def _run(args) -> int:
    solvers = harness.load_solver_configs(args.solvers)
    if args.only:
        wanted = set(args.only.split(","))
        solvers = [s for s in solvers if s.name in wanted]
    files = harness.suite_files(args.suite)
    verdicts, skips = harness.run_suite(files, solvers, args.timeout, args.workers)
    harness.write_report(args.report, verdicts, skips, [s.name for s in solvers])
    proved = sum(v.outcome == harness.PROVED for v in verdicts)
    print(f"{len(verdicts)} runs, {proved} proved, {len(skips)} skipped; report in {args.report}")
    return 0


def _extend(args) -> int:
    base = load_theory(args.theory)
    rt = (reflective_inductive_extension if args.inductive else reflective_extension)(base)
    text = render(rt.theory)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _verify(args) -> int:
    base = load_theory(args.theory)
    if args.model:
        models = [parse_model(Path(args.model).read_text(), base)]
    else:
        models = [cyclic_nat_model(base, k) for k in args.cyclic]
    total = CheckReport()
    for m in models:
        rm = bounded_reflective_model(m, args.depth)
        report = check_reflective_axioms(rm)
        if args.formulas:
            phis = random_closed_formulas(args.seed, base.signature, args.formulas, args.depth)
            fitting = [phi for phi in phis if _fits(rm, phi)]
            report = report.merge(check_truth_predicate(rm, fitting))
            report.skipped += len(phis) - len(fitting)
        total = total.merge(report)
    print(total.to_text())
    return 0 if total.ok else 1


def _fits(rm, phi) -> bool:
    try:
        rm.require_form(phi)
    except EncodingTooDeep:
        return False
    return True


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reflect", description="Reflective theory benchmarks.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("bench-gen", help="emit a benchmark suite")
    g.add_argument("--suite", choices=sorted(benchgen.SUITES), required=True)
    g.add_argument("--theory", help="builtin theory name or .thy file")
    g.add_argument("--format", choices=[SMTLIB, TPTP], default=SMTLIB)
    g.add_argument("--out", required=True)
    g.add_argument("--skip-missing", action="store_true",
                   help="drop cases whose vocabulary the theory lacks")
    g.set_defaults(func=_bench_gen)

    r = sub.add_parser("run", help="run solvers over an emitted suite")
    r.add_argument("--suite", required=True, help="directory with manifest.csv")
    r.add_argument("--solvers", required=True, help="solver config file")
    r.add_argument("--only", help="comma-separated solver names")
    r.add_argument("--timeout", type=float, default=10.0)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--report", required=True)
    r.set_defaults(func=_run)

    e = sub.add_parser("extend", help="print the reflective extension of a theory")
    e.add_argument("--theory", required=True)
    e.add_argument("--inductive", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=_extend)

    v = sub.add_parser("verify", help="bounded check of the reflective axioms")
    v.add_argument("--theory", default=NAT_THEORY)
    v.add_argument("--model", help="model file; default is Z/k for each --cyclic k")
    v.add_argument("--cyclic", type=int, nargs="+", default=[1, 2])
    v.add_argument("--depth", type=int, default=2)
    v.add_argument("--formulas", type=int, default=0, help="random truth-predicate checks")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ReflectError, OSError) as exc:
        print(f"reflect: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
