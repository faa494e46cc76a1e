"""SMT-LIB 2 and TPTP TFF serializers.

A :class:`ProblemFile` holds one theory and the name of one of its
conjectures.  SMT-LIB output is refutation style (axioms, then the negated
conjecture, then ``check-sat``); TFF output uses the ``conjecture`` role.
Declarations are ordered by kind, then lexicographically by name, and
axioms keep theory order.  Output therefore depends only on the problem.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedFeature
from .logic import (And, App, Atom, Bottom, Eq, Exists, Forall, Iff, Implies, Not, Or,
                    Theory, Var)
from .mangle import SMTLIB, TPTP, MangleTable, smt_variable, tptp_variable

DATATYPE_LOGIC = "UFDT"
PLAIN_LOGIC = "UF"


@dataclass(frozen=True)
class ProblemFile:
    theory: Theory
    selected_conjecture: str
    target: str = SMTLIB
    logic_header: str = PLAIN_LOGIC

    @property
    def native_datatypes(self) -> bool:
        return "DT" in self.logic_header


def emit(p: ProblemFile) -> str:
    if p.target == SMTLIB:
        return emit_smtlib(p)
    if p.target == TPTP:
        return emit_tptp(p)
    raise ValueError(f"unknown target {p.target!r}")


def _decl_groups(p: ProblemFile):
    sig = p.theory.signature
    dt_sorts, ctors = set(), set()
    if p.native_datatypes:
        for dt in p.theory.datatypes:
            dt_sorts.add(dt.sort)
            ctors.update(dt.constructors)
    sorts = sorted((s for s in sig.sorts if s not in dt_sorts), key=lambda s: s.name)
    funcs = sorted((f for f in sig.funcs if f not in ctors), key=lambda f: f.name)
    preds = sorted(sig.preds, key=lambda q: q.name)
    return sorts, funcs, preds


# ---------------------------------------------------------------- SMT-LIB 2


def _smt(e, mt: MangleTable) -> str:
    if isinstance(e, Var):
        return smt_variable(e.sort.name, e.index)
    if isinstance(e, (App, Atom)):
        head = mt(e.func.name if isinstance(e, App) else e.pred.name)
        if not e.args:
            return head
        return f"({head} {' '.join(_smt(a, mt) for a in e.args)})"
    if isinstance(e, Bottom):
        return "false"
    if isinstance(e, Eq):
        return f"(= {_smt(e.lhs, mt)} {_smt(e.rhs, mt)})"
    if isinstance(e, Not):
        return f"(not {_smt(e.arg, mt)})"
    for cls, op in ((Or, "or"), (And, "and"), (Implies, "=>"), (Iff, "=")):
        if isinstance(e, cls):
            return f"({op} {_smt(e.left, mt)} {_smt(e.right, mt)})"
    if isinstance(e, (Forall, Exists)):
        q = "forall" if isinstance(e, Forall) else "exists"
        cls, vs = type(e), []
        # group a run of like quantifiers; binder lists must not repeat a name
        while isinstance(e, cls) and e.var not in vs:
            vs.append(e.var)
            e = e.body
        binders = " ".join(f"({smt_variable(v.sort.name, v.index)} {mt(v.sort.name)})" for v in vs)
        return f"({q} ({binders}) {_smt(e, mt)})"
    raise TypeError(f"cannot emit {e!r}")


def emit_smtlib(p: ProblemFile) -> str:
    th = p.theory
    conj = th.conjecture(p.selected_conjecture)
    mt = MangleTable(SMTLIB)
    sorts, funcs, preds = _decl_groups(p)
    out = [f"; {th.name} / {p.selected_conjecture}", f"(set-logic {p.logic_header})"]
    out += [f"(declare-sort {mt(s.name)} 0)" for s in sorts]
    if p.native_datatypes and th.datatypes:
        dts = sorted(th.datatypes, key=lambda d: d.sort.name)
        heads = " ".join(f"({mt(d.sort.name)} 0)" for d in dts)
        bodies = []
        for d in dts:
            cs = []
            for c in d.constructors:
                sels = "".join(f" ({mt(f'rfl_sel_{c.name}_{i}')} {mt(s.name)})"
                               for i, s in enumerate(c.domain))
                cs.append(f"({mt(c.name)}{sels})")
            bodies.append("(" + " ".join(cs) + ")")
        out.append(f"(declare-datatypes ({heads}) ({' '.join(bodies)}))")
    for f in funcs:
        out.append(f"(declare-fun {mt(f.name)} ({' '.join(mt(s.name) for s in f.domain)}) "
                   f"{mt(f.codomain.name)})")
    for q in preds:
        out.append(f"(declare-fun {mt(q.name)} ({' '.join(mt(s.name) for s in q.domain)}) Bool)")
    for ax in th.axioms:
        out.append(f"; {ax.name}")
        out.append(f"(assert {_smt(ax.formula, mt)})")
    out.append(f"; conjecture {conj.name}")
    out.append(f"(assert (not {_smt(conj.formula, mt)}))")
    out.append("(check-sat)")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- TPTP TFF


def _tff_term(e, mt: MangleTable) -> str:
    if isinstance(e, Var):
        return tptp_variable(e.sort.name, e.index)
    head = mt(e.func.name if isinstance(e, App) else e.pred.name)
    if not e.args:
        return head
    return f"{head}({', '.join(_tff_term(a, mt) for a in e.args)})"


def _tff(e, mt: MangleTable) -> str:
    if isinstance(e, Bottom):
        return "$false"
    if isinstance(e, Atom):
        return _tff_term(e, mt)
    if isinstance(e, Eq):
        return f"{_tff_term(e.lhs, mt)} = {_tff_term(e.rhs, mt)}"
    if isinstance(e, Not):
        return f"~ ({_tff(e.arg, mt)})"
    for cls, op in ((Or, "|"), (And, "&"), (Implies, "=>"), (Iff, "<=>")):
        if isinstance(e, cls):
            return f"({_tff(e.left, mt)} {op} {_tff(e.right, mt)})"
    if isinstance(e, (Forall, Exists)):
        q = "!" if isinstance(e, Forall) else "?"
        v = e.var
        return f"{q}[{tptp_variable(v.sort.name, v.index)}: {mt(v.sort.name)}]: ({_tff(e.body, mt)})"
    raise TypeError(f"cannot emit {e!r}")


def _tff_type(domain, codomain: str, mt: MangleTable) -> str:
    if not domain:
        return codomain
    if len(domain) == 1:
        return f"{mt(domain[0].name)} > {codomain}"
    return f"({' * '.join(mt(s.name) for s in domain)}) > {codomain}"


def emit_tptp(p: ProblemFile) -> str:
    if p.native_datatypes and p.theory.datatypes:
        raise UnsupportedFeature("TPTP TFF has no inductive datatype declarations")
    th = p.theory
    conj = th.conjecture(p.selected_conjecture)
    mt = MangleTable(TPTP)
    names = MangleTable(TPTP)   # annotated-formula names live in their own namespace
    sorts, funcs, preds = _decl_groups(p)
    out = [f"% {th.name} / {p.selected_conjecture}"]
    for s in sorts:
        out.append(f"tff({names('type_' + s.name)}, type, {mt(s.name)}: $tType).")
    for f in funcs:
        out.append(f"tff({names('decl_' + f.name)}, type, "
                   f"{mt(f.name)}: {_tff_type(f.domain, mt(f.codomain.name), mt)}).")
    for q in preds:
        out.append(f"tff({names('decl_' + q.name)}, type, {mt(q.name)}: {_tff_type(q.domain, '$o', mt)}).")
    for ax in th.axioms:
        out.append(f"tff({names(ax.name)}, axiom, {_tff(ax.formula, mt)}).")
    out.append(f"tff({names(conj.name)}, conjecture, {_tff(conj.formula, mt)}).")
    return "\n".join(out) + "\n"

