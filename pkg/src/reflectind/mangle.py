"""Deterministic identifier mangling for the SMT-LIB 2 and TPTP TFF targets.

Generated symbols already carry the reserved ``rfl_`` prefix and are legal in
both grammars.  User symbols pass through when legal; otherwise SMT-LIB
renames reserved words to ``rfl_u_<name>`` and quotes anything outside the
simple-symbol alphabet with ``|...|``, while TPTP single-quotes functors that
are not lower words.
"""

from __future__ import annotations

import re

from .errors import MangleCollision

SMTLIB = "smtlib2"
TPTP = "tptp"

_SMT_SIMPLE = re.compile(r"[A-Za-z~!@$%^&*_\-+=<>.?/][A-Za-z0-9~!@$%^&*_\-+=<>.?/]*")
SMT_RESERVED = frozenset("""
    ! _ as BINARY DECIMAL exists HEXADECIMAL forall let match NUMERAL par STRING
    assert check-sat check-sat-assuming declare-const declare-datatype declare-datatypes
    declare-fun declare-sort define-fun define-fun-rec define-funs-rec define-sort echo exit
    get-assertions get-assignment get-info get-model get-option get-proof get-unsat-assumptions
    get-unsat-core get-value pop push reset reset-assertions set-info set-logic set-option
    Bool true false not and or xor => = distinct ite
""".split())

_TPTP_LOWER = re.compile(r"[a-z][A-Za-z0-9_]*")


def smt_symbol(name: str) -> str:
    if name in SMT_RESERVED:
        name = "rfl_u_" + name
    if _SMT_SIMPLE.fullmatch(name):
        return name
    if "|" in name or "\\" in name:
        raise MangleCollision(f"{name!r} cannot be written as an SMT-LIB symbol")
    return f"|{name}|"


def tptp_functor(name: str) -> str:
    if _TPTP_LOWER.fullmatch(name):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _word(name: str) -> str:
    """Injective map into ``[A-Za-z0-9_]``: ``_`` doubles, other bytes hex-escape."""
    out = []
    for ch in name:
        if ch.isascii() and ch.isalnum():
            out.append(ch)
        elif ch == "_":
            out.append("__")
        else:
            out.append("".join(f"_x{b:02x}" for b in ch.encode()))
    return "".join(out)


def smt_variable(sort: str, index: int) -> str:
    return smt_symbol(f"rfl_x{index}_{_word(sort)}")


def tptp_variable(sort: str, index: int) -> str:
    return f"X{index}_{_word(sort)}"


def mangle(name: str, target: str) -> str:
    if target == SMTLIB:
        return smt_symbol(name)
    if target == TPTP:
        return tptp_functor(name)
    raise ValueError(f"unknown target {target!r}")


class MangleTable:
    """Per-file symbol map that refuses to emit two symbols under one identifier."""

    def __init__(self, target: str):
        self.target = target
        self.forward: dict[str, str] = {}
        self._back: dict[str, str] = {}

    def __call__(self, name: str) -> str:
        out = self.forward.get(name)
        if out is None:
            out = mangle(name, self.target)
            key = out.strip("|") if self.target == SMTLIB else out
            prior = self._back.get(key)
            if prior is not None and prior != name:
                raise MangleCollision(f"{prior!r} and {name!r} both map to {out}")
            self._back[key] = name
            self.forward[name] = out
        return out
