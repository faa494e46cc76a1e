import sys

import pytest

from reflectind import benchgen
from reflectind.cli import main
from reflectind.harness import read_results_csv
from reflectind.native import parse_theory
from reflectind.theories import LIST_THEORY, NAT_THEORY, builtin

from .grammars import check_smtlib, check_tptp


def test_bench_gen_smtlib(tmp_path, capsys):
    assert main(["bench-gen", "--suite", "refl0", "--out", str(tmp_path)]) == 0
    rows = benchgen.read_manifest(tmp_path)
    assert [r["id"] for r in rows] == [f"{NAT_THEORY}-ax{i}" for i in range(6)]
    for r in rows:
        check_smtlib((tmp_path / r["file"]).read_text())
    assert "wrote 6 problems" in capsys.readouterr().out


def test_bench_gen_tptp_ind(tmp_path, capsys):
    assert main(["bench-gen", "--suite", "ind", "--format", "tptp", "--out", str(tmp_path)]) == 0
    rows = benchgen.read_manifest(tmp_path)
    assert sum(r["file"] != "" for r in rows) == 23
    for r in rows:
        if r["file"]:
            check_tptp((tmp_path / r["file"]).read_text())
    assert "23 not expressible in tptp" in capsys.readouterr().out


def test_bench_gen_missing_vocabulary(tmp_path, capsys):
    args = ["bench-gen", "--suite", "refl1", "--theory", NAT_THEORY, "--out", str(tmp_path)]
    assert main(args) == 2
    assert "lacks" in capsys.readouterr().err
    assert main(args + ["--skip-missing"]) == 0


def test_run(tmp_path):
    suite, report = tmp_path / "suite", tmp_path / "report"
    main(["bench-gen", "--suite", "refl0", "--theory", LIST_THEORY, "--out", str(suite)])
    stub = tmp_path / "stub.py"
    stub.write_text("print('unsat')\n")
    cfg = tmp_path / "solvers.sexp"
    cfg.write_text(f'(solver (name fake) (cmd "{sys.executable} {stub} {{file}}") '
                   f'(format smtlib2) (verdict smt))\n'
                   f'(solver (name other) (cmd "{sys.executable} {stub} {{file}}") '
                   f'(format tptp) (verdict szs))\n')
    assert main(["run", "--suite", str(suite), "--solvers", str(cfg), "--timeout", "5",
                 "--workers", "2", "--report", str(report)]) == 0
    verdicts = read_results_csv((report / "results.csv").read_text())
    assert len(verdicts) == 5 and {v.outcome for v in verdicts} == {"Proved"}
    md = (report / "results.md").read_text().splitlines()
    assert md[0] == "| case | fake | other |"
    assert all(ln.endswith("| ✓ |  |") for ln in md[2:])
    assert len((report / "skips.csv").read_text().splitlines()) == 6

    assert main(["run", "--suite", str(suite), "--solvers", str(cfg), "--only", "other",
                 "--report", str(report)]) == 0
    assert read_results_csv((report / "results.csv").read_text()) == []


def test_extend(tmp_path):
    out = tmp_path / "ext.thy"
    assert main(["extend", "--theory", NAT_THEORY, "--out", str(out)]) == 0
    ext = parse_theory(out.read_text(), allow_reserved=True)
    # 13 schema instances for (n, k, m) = (1, 4, 1) plus nextinj/nextdisj
    assert len(ext.axioms) == len(builtin(NAT_THEORY).axioms) + 13 + 2


def test_extend_stdout(capsys):
    assert main(["extend", "--theory", LIST_THEORY, "--inductive"]) == 0
    assert "ax_ind_List_nat" in capsys.readouterr().out


@pytest.mark.slow
def test_verify(capsys):
    assert main(["verify", "--cyclic", "2", "--depth", "1", "--formulas", "10"]) == 0
    assert "0 violations" in capsys.readouterr().out


def test_unknown_theory(capsys):
    assert main(["extend", "--theory", "/nonexistent.thy"]) == 2
