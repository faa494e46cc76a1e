"""Run external solvers over emitted suites and tabulate their verdicts.

Solvers are described in the native s-expression format::

    (solver (name z3) (cmd "z3 -T:{timeout} {file}") (format smtlib2) (verdict smt))

Each (case, solver) pair runs in its own process group so a timeout can kill
the whole tree.  Pairs whose formats differ are recorded as skips.
"""

from __future__ import annotations

import csv
import io
import os
import re
import shlex
import signal
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError
from .mangle import SMTLIB, TPTP
from .sexpr import SList, Sym, fail, read_all

PROVED, COUNTERSAT, UNKNOWN, TIMEOUT, ERROR = "Proved", "CounterSat", "Unknown", "Timeout", "Error"
SMT, SZS = "smt", "szs"
FILE_PLACEHOLDER, TIMEOUT_PLACEHOLDER = "{file}", "{timeout}"
KILL_GRACE_S = 1.0


@dataclass(frozen=True)
class SolverConfig:
    name: str
    executable: str
    arguments: tuple[str, ...]
    format: str = SMTLIB
    verdict: str = SMT

    def __post_init__(self):
        n = sum(a.count(FILE_PLACEHOLDER) for a in (self.executable, *self.arguments))
        if n != 1:
            raise ValueError(f"solver {self.name}: command must mention {FILE_PLACEHOLDER} once")
        if self.format not in (SMTLIB, TPTP):
            raise ValueError(f"solver {self.name}: unknown format {self.format!r}")
        if self.verdict not in (SMT, SZS):
            raise ValueError(f"solver {self.name}: unknown verdict grammar {self.verdict!r}")

    @classmethod
    def from_command(cls, name: str, cmd: str, format: str = SMTLIB, verdict: str = SMT):
        exe, *args = shlex.split(cmd)
        return cls(name, exe, tuple(args), format, verdict)

    def command(self, file, timeout_s: float) -> list[str]:
        t = str(int(timeout_s)) if float(timeout_s).is_integer() else str(timeout_s)
        return [a.replace(FILE_PLACEHOLDER, str(file)).replace(TIMEOUT_PLACEHOLDER, t)
                for a in (self.executable, *self.arguments)]


@dataclass(frozen=True, order=True)
class SolverVerdict:
    case: str
    solver: str
    outcome: str
    ms: int
    detail: str = ""

    def key(self):
        return (self.case, self.solver, self.outcome)


@dataclass(frozen=True, order=True)
class FormatSkip:
    case: str
    solver: str
    reason: str


def parse_solver_configs(text: str) -> list[SolverConfig]:
    out = []
    for form in read_all(text):
        if not (isinstance(form, SList) and form and form[0] == "solver"):
            raise fail("expected (solver ...)", form)
        fields = {}
        for item in form[1:]:
            if not (isinstance(item, SList) and len(item) == 2 and isinstance(item[0], Sym)):
                raise fail("expected (key value)", item)
            fields[str(item[0])] = str(item[1])
        missing = {"name", "cmd"} - fields.keys()
        if missing:
            raise fail(f"solver entry lacks {sorted(missing)}", form)
        try:
            out.append(SolverConfig.from_command(fields["name"], fields["cmd"],
                                                 fields.get("format", SMTLIB),
                                                 fields.get("verdict", SMT)))
        except ValueError as exc:
            raise fail(str(exc), form)
    names = [c.name for c in out]
    if len(set(names)) != len(names):
        raise ParseError("duplicate solver names", 0, 0)
    return out


def load_solver_configs(path) -> list[SolverConfig]:
    return parse_solver_configs(Path(path).read_text())


# ---------------------------------------------------------------- verdicts

_SZS = re.compile(r"SZS status\s+(\w+)")
_SZS_MAP = {"Theorem": PROVED, "Unsatisfiable": PROVED, "ContradictoryAxioms": PROVED,
            "CounterSatisfiable": COUNTERSAT, "Satisfiable": COUNTERSAT}


def scan_verdict(stdout: str, grammar: str) -> str | None:
    """The outcome named by the first status line, or None if there is none."""
    if grammar == SMT:
        for line in stdout.splitlines():
            word = line.strip()
            if word == "unsat":
                return PROVED
            if word == "sat":
                return COUNTERSAT
            if word in ("unknown", "timeout"):
                return UNKNOWN
        return None
    m = _SZS.search(stdout)
    if m is None:
        return None
    return _SZS_MAP.get(m.group(1), UNKNOWN)


def run_solver(cfg: SolverConfig, file, timeout_s: float, case: str | None = None) -> SolverVerdict:
    case = case or Path(file).stem
    argv = cfg.command(file, timeout_s)
    start = time.monotonic()
    try:
        proc = subprocess.Popen(argv, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                                stdin=subprocess.DEVNULL, text=True, start_new_session=True)
    except OSError as exc:
        return SolverVerdict(case, cfg.name, ERROR, 0, f"spawn failed: {exc}")
    try:
        out, err = proc.communicate(timeout=timeout_s)
    except subprocess.TimeoutExpired:
        _kill_group(proc)
        ms = max(int((time.monotonic() - start) * 1000), int(timeout_s * 1000))
        return SolverVerdict(case, cfg.name, TIMEOUT, ms)
    ms = int((time.monotonic() - start) * 1000)
    found = scan_verdict(out, cfg.verdict)
    if proc.returncode != 0 and found in (None, UNKNOWN):
        tail = (err or out).strip().splitlines()[-1:] or [""]
        return SolverVerdict(case, cfg.name, ERROR, ms, f"exit {proc.returncode}: {tail[0][:200]}")
    if proc.returncode != 0:
        # a status line from a crashing process is not trusted
        return SolverVerdict(case, cfg.name, ERROR, ms, f"exit {proc.returncode} after {found}")
    return SolverVerdict(case, cfg.name, found or UNKNOWN, ms)


def _kill_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(proc.pid, signal.SIGKILL)
    except ProcessLookupError:
        pass
    try:
        proc.communicate(timeout=KILL_GRACE_S)
    except subprocess.TimeoutExpired:
        proc.kill()
        proc.communicate()


# ---------------------------------------------------------------- suites


@dataclass(frozen=True)
class SuiteFile:
    case: str
    path: Path | None
    format: str
    note: str = ""


def suite_files(suite_dir) -> list[SuiteFile]:
    """Cases listed in a suite's manifest, with the format implied by each file."""
    from .benchgen import read_manifest

    root = Path(suite_dir)
    out = []
    for row in read_manifest(root):
        if row["file"]:
            fmt = SMTLIB if row["file"].endswith(".smt2") else TPTP
            out.append(SuiteFile(row["id"], root / row["file"], fmt))
        else:
            out.append(SuiteFile(row["id"], None, "", row["status"]))
    return out


def run_suite(files, solvers, timeout_s: float = 10.0, workers: int = 1):
    """Run every format-compatible (case, solver) pair.

    Returns ``(verdicts, skips)``, both sorted by case then solver.
    """
    jobs, skips = [], []
    for f in files:
        for s in solvers:
            if f.path is None:
                skips.append(FormatSkip(f.case, s.name, f.note or "not emitted"))
            elif f.format != s.format:
                skips.append(FormatSkip(f.case, s.name, f"{s.name} reads {s.format}"))
            else:
                jobs.append((s, f))

    def one(job):
        s, f = job
        try:
            return run_solver(s, f.path, timeout_s, f.case)
        except Exception as exc:    # never let one pair abort the suite
            return SolverVerdict(f.case, s.name, ERROR, 0, repr(exc))

    if workers <= 1:
        verdicts = [one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(one, jobs))
    return sorted(verdicts), sorted(skips)


# ---------------------------------------------------------------- reports

MARKS = {PROVED: "✓"}
OTHER_MARK, SKIP_MARK = "–", ""


def render_csv(verdicts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case", "solver", "outcome", "ms"])
    for v in sorted(verdicts):
        w.writerow([v.case, v.solver, v.outcome, v.ms])
    return buf.getvalue()


def render_markdown(verdicts, skips=(), solvers=None) -> str:
    cells = {(v.case, v.solver): MARKS.get(v.outcome, OTHER_MARK) for v in verdicts}
    cases = sorted({v.case for v in verdicts} | {s.case for s in skips})
    cols = list(solvers) if solvers else sorted({v.solver for v in verdicts} | {s.solver for s in skips})
    lines = ["| case | " + " | ".join(cols) + " |",
             "|---|" + "---|" * len(cols)]
    for c in cases:
        lines.append(f"| {c} | " + " | ".join(cells.get((c, s), SKIP_MARK) for s in cols) + " |")
    return "\n".join(lines) + "\n"


def render_report(verdicts, skips=(), solvers=None) -> tuple[str, str]:
    return render_csv(verdicts), render_markdown(verdicts, skips, solvers)


def write_report(out_dir, verdicts, skips=(), solvers=None) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    text_csv, text_md = render_report(verdicts, skips, solvers)
    (out / "results.csv").write_text(text_csv)
    (out / "results.md").write_text(text_md)
    if skips:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case", "solver", "reason"])
        w.writerows((s.case, s.solver, s.reason) for s in sorted(skips))
        (out / "skips.csv").write_text(buf.getvalue())


def read_results_csv(text: str) -> list[SolverVerdict]:
    return [SolverVerdict(r["case"], r["solver"], r["outcome"], int(r["ms"]))
            for r in csv.DictReader(io.StringIO(text))]


__all__ = ["SolverConfig", "SolverVerdict", "FormatSkip", "SuiteFile", "parse_solver_configs",
           "load_solver_configs", "scan_verdict", "run_solver", "suite_files", "run_suite",
           "render_csv", "render_markdown", "render_report", "write_report", "read_results_csv"]
