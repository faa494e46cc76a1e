"""Benchmark families Refl0, Refl1 and Ind.

* Refl0: for each base axiom ``α``, prove ``empty ⊨̇ ⌈α⌉`` in the reflective
  extension.
* Refl1: simple consequences of the base theory, stated through the truth
  predicate.
* Ind: inductive properties, once over the base theory with native
  datatypes and once as ``empty ⊨̇ ⌈φ⌉`` over the reflective inductive
  extension.

Refl1 and Ind formulas are reconstructed from their benchmark names and must
pass :func:`validate_case` (a sweep of the bounded standard model) before
they can be emitted.
"""

from __future__ import annotations

import csv
import dataclasses
import itertools
from dataclasses import dataclass
from pathlib import Path

from .emit import DATATYPE_LOGIC, PLAIN_LOGIC, ProblemFile, emit
from .errors import MissingVocabulary, NoDatatypes, UnsupportedFeature, ValidationFailed
from .logic import NamedFormula, Theory, free_vars, show, strip_foralls
from .mangle import SMTLIB, TPTP
from .native import parse_formula
from .reflection import (reflective_extension, reflective_inductive_extension,
                         truth_conjecture)
from .semantics import CheckReport, holds
from .theories import StandardModel

REFL0, REFL1, IND_NATIVE, IND_REFLECTIVE = "Refl0", "Refl1", "IndNative", "IndReflective"
PAPER_NAMED, RECONSTRUCTED = "PaperNamed", "Reconstructed"
EXTENSIONS = {SMTLIB: "smt2", TPTP: "p"}


@dataclass(frozen=True)
class BenchmarkCase:
    id: str
    family: str
    theory: Theory
    conjecture: NamedFormula
    provenance: str
    base: Theory
    statement: object          # the base-level formula whose truth the case asserts
    stem: str = ""

    def problem(self, target: str) -> ProblemFile:
        header = DATATYPE_LOGIC if self.family == IND_NATIVE else PLAIN_LOGIC
        th = dataclasses.replace(self.theory, conjectures=(self.conjecture,))
        return ProblemFile(th, self.conjecture.name, target, header)


# ---------------------------------------------------------------- formulas

REFL1_FORMULAS: dict[str, str] = {
    "eqRefl": "(forall ((x nat)) (= x x))",
    "eqTrans": "(forall ((x nat) (y nat) (z nat)) (=> (and (= x y) (= y z)) (= x z)))",
    "excludedMiddle-0": "(or (= zero (s zero)) (not (= zero (s zero))))",
    "excludedMiddle-1": "(forall ((x nat)) (or (leq x zero) (not (leq x zero))))",
    "universalInstance":
        "(=> (forall ((x nat)) (= (add zero x) x)) (= (add zero (s zero)) (s zero)))",
    "contraposition-0":
        "(=> (=> (= zero (s zero)) (leq (s zero) zero))"
        " (=> (not (leq (s zero) zero)) (not (= zero (s zero)))))",
    "contraposition-1":
        "(forall ((x nat) (y nat)) (=> (=> (leq x y) (= x y))"
        " (=> (not (= x y)) (not (leq x y)))))",
    "currying-0":
        "(=> (=> (and (leq zero zero) (= zero zero)) (leq zero (s zero)))"
        " (=> (leq zero zero) (=> (= zero zero) (leq zero (s zero)))))",
    "currying-1":
        "(forall ((x nat) (y nat)) (=> (=> (and (leq x y) (leq y x)) (= x y))"
        " (=> (leq x y) (=> (leq y x) (= x y)))))",
    "addGround-0": "(= (add (s zero) (s zero)) (s (s zero)))",
    "addGround-1": "(= (add (s (s zero)) (s zero)) (s (s (s zero))))",
    "addExists": "(exists ((x nat)) (= (add x (s zero)) (s (s zero))))",
    "existsZeroAdd": "(exists ((x nat)) (forall ((y nat)) (= (add x y) y)))",
    "mulGround": "(= (mul (s (s zero)) (s (s zero))) (s (s (s (s zero)))))",
    "mulExists": "(exists ((x nat)) (= (mul x (s (s zero))) (s (s zero))))",
    "existsZeroMul": "(exists ((x nat)) (forall ((y nat)) (= (mul x y) x)))",
    "appendGround-0":
        "(= (app_nat (cons_nat zero nil_nat) (cons_nat zero nil_nat))"
        " (cons_nat zero (cons_nat zero nil_nat)))",
    "appendGround-1": "(= (app_nat (cons_nat (s zero) nil_nat) nil_nat) (cons_nat (s zero) nil_nat))",
    "appendExists":
        "(exists ((l List_nat)) (= (app_nat l (cons_nat zero nil_nat))"
        " (cons_nat zero (cons_nat zero nil_nat))))",
    "existsNil": "(exists ((l List_nat)) (forall ((k List_nat)) (= (app_nat l k) k)))",
}

_N2 = "(x nat) (y nat)"
_N3 = "(x nat) (y nat) (z nat)"
_L2 = "(l List_nat) (k List_nat)"

IND_FORMULAS: dict[str, str] = {
    "addCommut": f"(forall ({_N2}) (= (add x y) (add y x)))",
    "mulCommut": f"(forall ({_N2}) (= (mul x y) (mul y x)))",
    "addAssoc": f"(forall ({_N3}) (= (add x (add y z)) (add (add x y) z)))",
    "mulAssoc": f"(forall ({_N3}) (= (mul x (mul y z)) (mul (mul x y) z)))",
    "addNeutral": "(forall ((x nat)) (= (add x zero) x))",
    "addNeutral-0": "(forall ((x nat)) (= (add x zero) (add zero x)))",
    "addNeutral-1": "(forall ((x nat)) (= x (add x zero)))",
    "mulZero": "(forall ((x nat)) (= (mul x zero) zero))",
    "distr-0": f"(forall ({_N3}) (= (mul x (add y z)) (add (mul x y) (mul x z))))",
    "distr-1": f"(forall ({_N3}) (= (mul (add x y) z) (add (mul x z) (mul y z))))",
    "leqTrans": f"(forall ({_N3}) (=> (and (leq x y) (leq y z)) (leq x z)))",
    "zeroMin": "(forall ((x nat)) (leq zero x))",
    "addMonoton-0": f"(forall ({_N2}) (leq x (add x y)))",
    "addMonoton-1": f"(forall ({_N3}) (=> (leq x y) (leq (add x z) (add y z))))",
    "addCommutId": f"(forall ({_N2}) (= (add x (s y)) (s (add x y))))",
    "appendAssoc":
        "(forall ((l List_nat) (k List_nat) (m List_nat))"
        " (= (app_nat l (app_nat k m)) (app_nat (app_nat l k) m)))",
    "appendMonoton": f"(forall ({_L2}) (pref_nat l (app_nat l k)))",
    "allEqRefl": "(forall ((l List_nat)) (allEq_nat l l))",
    "allEqDefsEquality": f"(forall ({_L2}) (<=> (allEq_nat l k) (= l k)))",
    "revSelfInvers": "(forall ((l List_nat)) (= (rev_nat (rev_nat l)) l))",
    "revAppend-0":
        f"(forall ({_L2}) (= (rev_nat (app_nat l k)) (app_nat (rev_nat k) (rev_nat l))))",
    "revAppend-1":
        "(forall ((x nat) (l List_nat))"
        " (= (rev_nat (app_nat l (cons_nat x nil_nat))) (cons_nat x (rev_nat l))))",
    "revsEqual": "(forall ((l List_nat)) (= (rev_nat l) (revAcc_nat l nil_nat)))",
}

NATIVE_SUFFIX, REFL_SUFFIX = ".native", ".refl"


def _formula(case_id: str, text: str, base: Theory):
    needed = _vocabulary(text)
    missing = needed - base.signature.names()
    if missing:
        raise MissingVocabulary(case_id, missing)
    return parse_formula(text, base)


def _vocabulary(text: str) -> set[str]:
    from .sexpr import SList, Sym, read_all

    keywords = {"forall", "exists", "and", "or", "not", "=>", "<=>", "=", "true", "false"}
    out: set[str] = set()

    def walk(x, binders: set) -> None:
        if isinstance(x, Sym):
            if x not in keywords and x not in binders:
                out.add(str(x))
        elif isinstance(x, SList) and x:
            if x[0] in ("forall", "exists") and len(x) == 3:
                names = {b[0] for b in x[1]}
                for b in x[1]:
                    out.add(str(b[1]))
                walk(x[2], binders | names)
            else:
                for y in x:
                    walk(y, binders)

    for f in read_all(text):
        walk(f, set())
    return out


# ---------------------------------------------------------------- generators


def gen_refl0(base: Theory) -> list[BenchmarkCase]:
    if not base.axioms:
        return []
    rt = reflective_extension(base)
    out = []
    for i, ax in enumerate(base.axioms):
        cid = f"{base.name}-ax{i}"
        conj = NamedFormula(cid, truth_conjecture(ax.formula, rt.map))
        out.append(BenchmarkCase(cid, REFL0, rt.theory, conj, PAPER_NAMED, base, ax.formula))
    return out


def gen_refl1(base: Theory, skip_missing: bool = False) -> list[BenchmarkCase]:
    """One case per Refl1 name; raises MissingVocabulary unless ``skip_missing``."""
    rt = reflective_extension(base)
    out = []
    for cid, text in REFL1_FORMULAS.items():
        try:
            phi = _formula(cid, text, base)
        except MissingVocabulary:
            if skip_missing:
                continue
            raise
        conj = NamedFormula(cid, truth_conjecture(phi, rt.map))
        out.append(BenchmarkCase(cid, REFL1, rt.theory, conj, RECONSTRUCTED, base, phi))
    return sorted(out, key=lambda c: c.id)


def gen_ind(base: Theory, skip_missing: bool = False) -> list[BenchmarkCase]:
    """A native/reflective pair per Ind stem."""
    if not base.datatypes:
        raise NoDatatypes(f"theory {base.name!r} declares no datatypes")
    rt = reflective_inductive_extension(base)
    out = []
    for stem, text in IND_FORMULAS.items():
        try:
            phi = _formula(stem, text, base)
        except MissingVocabulary:
            if skip_missing:
                continue
            raise
        nid, rid = stem + NATIVE_SUFFIX, stem + REFL_SUFFIX
        out.append(BenchmarkCase(nid, IND_NATIVE, base, NamedFormula(nid, phi),
                                 RECONSTRUCTED, base, phi, stem))
        out.append(BenchmarkCase(rid, IND_REFLECTIVE, rt.theory,
                                 NamedFormula(rid, truth_conjecture(phi, rt.map)),
                                 RECONSTRUCTED, base, phi, stem))
    return sorted(out, key=lambda c: c.id)


SUITES = {"refl0": gen_refl0, "refl1": gen_refl1, "ind": gen_ind}


# ---------------------------------------------------------------- validation


def validate_case(c: BenchmarkCase, model=None, strict: bool = True) -> CheckReport:
    """Sweep the case statement's universal prefix over the bounded standard model.

    Each prefix instance is one checked instance.  With ``strict`` the first
    failing instance raises ValidationFailed carrying its values; otherwise
    failures are only reported.
    """
    m = model or StandardModel(c.base)
    report = CheckReport()
    vs, body = strip_foralls(c.statement)
    if free_vars(c.statement):
        raise ValueError(f"{c.id}: statement is not closed")
    for values in itertools.product(*(m.carrier(v.sort) for v in vs)):
        good = holds(m, dict(zip(vs, values)), body)
        report.add(c.id, good, None if good else tuple(values))
        if strict and not good:
            raise ValidationFailed(c.id, tuple(values))
    return report


def require_valid(cases) -> None:
    for c in cases:
        if c.provenance == RECONSTRUCTED:
            validate_case(c)


# ---------------------------------------------------------------- writing


def write_suite(cases, target: str, out_dir) -> list[dict]:
    """Emit one file per case plus ``manifest.csv``; returns the manifest rows.

    Cases the target format cannot express get an empty file column and an
    ``unsupported`` status instead of a file.
    """
    require_valid(cases)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for c in sorted(cases, key=lambda c: c.id):
        name = f"{c.id}.{EXTENSIONS[target]}"
        try:
            text = emit(c.problem(target))
        except UnsupportedFeature as exc:
            rows.append({"id": c.id, "family": c.family, "provenance": c.provenance,
                         "file": "", "status": f"unsupported: {exc}"})
            continue
        (out / name).write_text(text)
        rows.append({"id": c.id, "family": c.family, "provenance": c.provenance,
                     "file": name, "status": "ok"})
    with open(out / "manifest.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["id", "family", "provenance", "file", "status"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return rows


def read_manifest(suite_dir) -> list[dict]:
    with open(Path(suite_dir) / "manifest.csv", newline="") as fh:
        return list(csv.DictReader(fh))


def summary(c: BenchmarkCase) -> str:
    return f"{c.id} [{c.family}, {c.provenance}] {show(c.statement)}"
