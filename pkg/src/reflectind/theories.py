"""Built-in base theories, their finite models, and a bounded standard model."""

from __future__ import annotations

import itertools
from importlib import resources
from pathlib import Path

from .errors import ModelError
from .logic import FuncSym, PredSym, Sort, Theory
from .native import parse_theory
from .semantics import FiniteModel

NAT_THEORY = "N+Leq+Add+Mul"
LIST_THEORY = "N+L+Pref+App"
IND_THEORY = "N+L+Ind"

_FILES = {
    NAT_THEORY: "nat_leq_add_mul.thy",
    LIST_THEORY: "nat_list_pref_app.thy",
    IND_THEORY: "nat_list_ind.thy",
}


def builtin_names() -> list[str]:
    return list(_FILES)


def builtin_text(name: str) -> str:
    return resources.files("reflectind").joinpath("data", _FILES[name]).read_text()


def builtin(name: str) -> Theory:
    if name not in _FILES:
        raise KeyError(f"no built-in theory {name!r}; known: {', '.join(_FILES)}")
    return parse_theory(builtin_text(name))


def load_theory(spec: str) -> Theory:
    """A built-in name or a path to a native-format file."""
    if spec in _FILES:
        return builtin(spec)
    return parse_theory(Path(spec).read_text())


# ---------------------------------------------------------------- finite models


def cyclic_nat_model(theory: Theory, k: int) -> FiniteModel:
    """Z/k: successor, addition and multiplication mod k, ``leq`` everywhere true."""
    return FiniteModel.from_functions(
        theory, {"nat": k},
        {"zero": lambda: 0, "s": lambda x: (x + 1) % k,
         "add": lambda x, y: (x + y) % k, "mul": lambda x, y: (x * y) % k},
        {"leq": lambda x, y: True})


def two_orbit_model(theory: Theory) -> FiniteModel:
    """Successor with two 2-cycles ``0↔1`` and ``2↔3``; ``zero`` = 0.

    ``add``/``mul`` follow their recursion equations along each orbit, so the
    axioms hold, yet induction fails: ``x ≈ zero ∨ x ≈ s(zero)`` holds at zero
    and is preserved by ``s`` but is false at 2.
    """
    succ = {0: 1, 1: 0, 2: 3, 3: 2}

    def add(x, y):
        return y if x in (0, 2) else succ[y]

    def mul(x, y):
        return 0 if x in (0, 2) else add(y, 0)

    return FiniteModel.from_functions(
        theory, {"nat": 4},
        {"zero": lambda: 0, "s": succ.__getitem__, "add": add, "mul": mul},
        {"leq": lambda x, y: True})


def list_models(theory: Theory) -> list[FiniteModel]:
    """Models of ``N+L+Pref+App`` with every carrier of size ≤ 3.

    Element 0 of the list sort is ``nil``; ``pref(a, b)`` holds iff ``a`` is
    ``nil`` or ``a == b``.
    """
    nat_one = FiniteModel.from_functions(
        theory, {"nat": 1, "List_nat": 2},
        {"zero": lambda: 0, "s": lambda x: 0, "nil_nat": lambda: 0,
         "cons_nat": lambda x, l: 1, "app_nat": lambda l, k: k if l == 0 else 1},
        {"pref_nat": lambda a, b: a == 0 or a == b})
    nat_two = FiniteModel.from_functions(
        theory, {"nat": 2, "List_nat": 3},
        {"zero": lambda: 0, "s": lambda x: 1 - x, "nil_nat": lambda: 0,
         "cons_nat": lambda x, l: 1 + x, "app_nat": lambda l, k: k if l == 0 else l},
        {"pref_nat": lambda a, b: a == 0 or a == b})
    return [nat_one, nat_two]


# ---------------------------------------------------------------- standard model


NAT_BOUND = 6
LIST_LEN = 3
LIST_ELEMS = 3


class StandardModel:
    """The intended model with quantifiers bounded.

    ``nat`` ranges over ``0..NAT_BOUND-1`` and lists over tuples of length
    ≤ ``LIST_LEN`` drawn from ``0..LIST_ELEMS-1``; function values are computed
    exactly, so they may leave the quantifier range.
    """

    def __init__(self, theory: Theory):
        self.theory = theory
        self._funcs = {}
        self._preds = {}
        self._carriers = {}
        for s in theory.signature.sorts:
            self._carriers[s] = self._domain(s)
        for f in theory.signature.funcs:
            self._funcs[f] = _STD_FUNCS.get(_stem(f.name))
            if self._funcs[f] is None:
                raise ModelError(f"no standard interpretation for {f.name}")
        for p in theory.signature.preds:
            self._preds[p] = _STD_PREDS.get(_stem(p.name))
            if self._preds[p] is None:
                raise ModelError(f"no standard interpretation for {p.name}")

    @staticmethod
    def _domain(s: Sort) -> list:
        if s.name == "nat":
            return list(range(NAT_BOUND))
        if s.name.startswith("List"):
            out: list = []
            for n in range(LIST_LEN + 1):
                out += list(itertools.product(range(LIST_ELEMS), repeat=n))
            return out
        raise ModelError(f"no standard carrier for sort {s.name}")

    def carrier(self, sort: Sort):
        return self._carriers[sort]

    def apply(self, f: FuncSym, args: tuple):
        return self._funcs[f](*args)

    def test(self, p: PredSym, args: tuple) -> bool:
        return self._preds[p](*args)


def _stem(name: str) -> str:
    for suffix in ("_nat",):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return name


def _rev_acc(l, a):
    for x in l:
        a = (x,) + a
    return a


_STD_FUNCS = {
    "zero": lambda: 0,
    "s": lambda x: x + 1,
    "add": lambda x, y: x + y,
    "mul": lambda x, y: x * y,
    "nil": lambda: (),
    "cons": lambda x, l: (x,) + l,
    "app": lambda l, k: l + k,
    "rev": lambda l: l[::-1],
    "revAcc": _rev_acc,
}

_STD_PREDS = {
    "leq": lambda x, y: x <= y,
    "pref": lambda l, k: k[: len(l)] == l,
    "allEq": lambda l, k: l == k,
}
