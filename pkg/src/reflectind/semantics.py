"""Finite-model semantics and bounded checks of the reflective metatheory.

A *structure* is anything with ``carrier(sort)``, ``apply(func, args)`` and
``test(pred, args)``.  :class:`FiniteModel` backs these with explicit tables;
:class:`BoundedReflectiveModel` adds the reflective sorts, interpreted as
depth-bounded universes of syntax.  The bounded model is a *partial*
structure: a reflective constructor whose result leaves the universe raises
:class:`OutOfUniverse`, and checks skip such instances.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (EncodingTooDeep, MissingAssignment, ModelError, OutOfUniverse,
                     UniverseOverflow)
from .logic import (App, And, Atom, Bottom, Eq, Exists, Forall, FuncSym, Iff, Implies,
                    InductiveDatatype, Not, Or, PredSym, BINARY, Sort, Theory, Var, all_vars,
                    free_vars, height, induction_instance, is_core, show, strip_foralls,
                    substitute)
from .reflection import (ReflectionMap, godel_encode, induction_axiom, reflective_axioms,
                         reflective_signature, variable_term_axioms)

DEFAULT_CAP = 10**6


# ---------------------------------------------------------------- evaluation


def eval_term(m, a: Mapping, t):
    if isinstance(t, Var):
        try:
            return a[t]
        except KeyError:
            raise MissingAssignment(t) from None
    return m.apply(t.func, tuple(eval_term(m, a, x) for x in t.args))


def holds(m, a: Mapping, phi) -> bool:
    """Tarski satisfaction; quantifiers enumerate ``m.carrier`` of the bound sort."""
    if isinstance(phi, Eq):
        return eval_term(m, a, phi.lhs) == eval_term(m, a, phi.rhs)
    if isinstance(phi, Atom):
        return m.test(phi.pred, tuple(eval_term(m, a, x) for x in phi.args))
    if isinstance(phi, Not):
        return not holds(m, a, phi.arg)
    if isinstance(phi, Or):
        return holds(m, a, phi.left) or holds(m, a, phi.right)
    if isinstance(phi, And):
        return holds(m, a, phi.left) and holds(m, a, phi.right)
    if isinstance(phi, Implies):
        return (not holds(m, a, phi.left)) or holds(m, a, phi.right)
    if isinstance(phi, Iff):
        return holds(m, a, phi.left) == holds(m, a, phi.right)
    if isinstance(phi, Forall):
        v, body = phi.var, phi.body
        b = dict(a)
        for x in m.carrier(v.sort):
            b[v] = x
            if not holds(m, b, body):
                return False
        return True
    if isinstance(phi, Exists):
        v, body = phi.var, phi.body
        b = dict(a)
        for x in m.carrier(v.sort):
            b[v] = x
            if holds(m, b, body):
                return True
        return False
    if isinstance(phi, Bottom):
        return False
    raise TypeError(f"not a formula: {phi!r}")


def holds_closure(m, phi) -> bool:
    """Truth of ``phi`` under every assignment of its free variables."""
    fv = sorted(free_vars(phi))
    for values in itertools.product(*(m.carrier(v.sort) for v in fv)):
        if not holds(m, dict(zip(fv, values)), phi):
            return False
    return True


def _func_op(m, f):
    op = getattr(m, "op", None)
    return op(f) if op else (lambda args: m.apply(f, args))


def _pred_op(m, p):
    op = getattr(m, "pred_op", None)
    return op(p) if op else (lambda args: m.test(p, args))


def _compile_term(m, t, slots: dict):
    if isinstance(t, Var):
        if t not in slots:
            raise MissingAssignment(t)
        i = slots[t]
        return lambda v: v[i]
    op = _func_op(m, t.func)
    subs = [_compile_term(m, a, slots) for a in t.args]
    if not subs:
        return lambda v: op(())
    if len(subs) == 1:
        a0, = subs
        return lambda v: op((a0(v),))
    if len(subs) == 2:
        a0, a1 = subs
        return lambda v: op((a0(v), a1(v)))
    return lambda v: op(tuple(a(v) for a in subs))


def _compile(m, phi, slots: dict, width: list):
    if isinstance(phi, Eq):
        l, r = _compile_term(m, phi.lhs, slots), _compile_term(m, phi.rhs, slots)
        return lambda v: l(v) == r(v)
    if isinstance(phi, Atom):
        op = _pred_op(m, phi.pred)
        subs = [_compile_term(m, a, slots) for a in phi.args]
        if len(subs) == 2:
            a0, a1 = subs
            return lambda v: op((a0(v), a1(v)))
        return lambda v: op(tuple(a(v) for a in subs))
    if isinstance(phi, Not):
        a = _compile(m, phi.arg, slots, width)
        return lambda v: not a(v)
    if isinstance(phi, BINARY):
        l, r = _compile(m, phi.left, slots, width), _compile(m, phi.right, slots, width)
        if isinstance(phi, Or):
            return lambda v: l(v) or r(v)
        if isinstance(phi, And):
            return lambda v: l(v) and r(v)
        if isinstance(phi, Implies):
            return lambda v: (not l(v)) or r(v)
        return lambda v: l(v) == r(v)
    if isinstance(phi, (Forall, Exists)):
        i = width[0]
        width[0] += 1
        body = _compile(m, phi.body, {**slots, phi.var: i}, width)
        sort = phi.var.sort
        if isinstance(phi, Forall):
            def q(v):
                for x in m.carrier(sort):
                    v[i] = x
                    if not body(v):
                        return False
                return True
        else:
            def q(v):
                for x in m.carrier(sort):
                    v[i] = x
                    if body(v):
                        return True
                return False
        return q
    if isinstance(phi, Bottom):
        return lambda v: False
    raise TypeError(f"not a formula: {phi!r}")


def compile_formula(m, phi, free: Sequence[Var]) -> Callable[[Sequence], bool]:
    """Specialize ``holds(m, ·, phi)`` into a closure over values for ``free``.

    Same semantics as :func:`holds`; used by the exhaustive sweeps.
    """
    slots = {x: i for i, x in enumerate(free)}
    width = [len(free)]
    f = _compile(m, phi, slots, width)
    n = width[0]

    def run(values) -> bool:
        v = list(values)
        v.extend([None] * (n - len(v)))
        return f(v)
    return run


# ---------------------------------------------------------------- finite models


class FiniteModel:
    """Finite carriers ``0..n-1`` per sort with total function and relation tables."""

    def __init__(self, theory: Theory, carriers: Mapping[Sort, Sequence[int]],
                 funcs: Mapping[FuncSym, Mapping[tuple, int]],
                 preds: Mapping[PredSym, Iterable[tuple]], validate: bool = True):
        self.theory = theory
        self.carriers = {s: list(v) for s, v in carriers.items()}
        self.funcs = {f: dict(t) for f, t in funcs.items()}
        self.preds = {p: set(map(tuple, t)) for p, t in preds.items()}
        self._check_tables()
        if validate:
            for ax in theory.axioms:
                if not holds(self, {}, ax.formula):
                    raise ModelError(f"axiom {ax.name} fails: {show(ax.formula)}")

    @classmethod
    def from_functions(cls, theory: Theory, sizes: Mapping[str, int],
                       funcs: Mapping[str, Callable], preds: Mapping[str, Callable] = {},
                       validate: bool = True) -> "FiniteModel":
        """Tabulate Python callables over carriers ``range(sizes[sort])``."""
        sig = theory.signature
        carriers = {s: list(range(sizes[s.name])) for s in sig.sorts}
        ftab = {}
        for f in sig.funcs:
            if f.name not in funcs:
                raise ModelError(f"no interpretation for function {f.name}")
            fn = funcs[f.name]
            ftab[f] = {args: fn(*args)
                       for args in itertools.product(*(carriers[d] for d in f.domain))}
        ptab = {}
        for p in sig.preds:
            if p.name not in preds:
                raise ModelError(f"no interpretation for predicate {p.name}")
            fn = preds[p.name]
            ptab[p] = {args for args in itertools.product(*(carriers[d] for d in p.domain))
                       if fn(*args)}
        return cls(theory, carriers, ftab, ptab, validate)

    def _check_tables(self) -> None:
        sig = self.theory.signature
        for s in sig.sorts:
            if not self.carriers.get(s):
                raise ModelError(f"sort {s} needs a nonempty carrier")
        for f in sig.funcs:
            table = self.funcs.get(f)
            if table is None:
                raise ModelError(f"missing table for {f.name}")
            for args in itertools.product(*(self.carriers[d] for d in f.domain)):
                if args not in table:
                    raise ModelError(f"{f.name} undefined at {args}")
                if table[args] not in self.carriers[f.codomain]:
                    raise ModelError(f"{f.name}{args} = {table[args]} outside {f.codomain}")
        for p in sig.preds:
            if p not in self.preds:
                raise ModelError(f"missing table for {p.name}")
            for args in self.preds[p]:
                if len(args) != p.arity or any(
                        x not in self.carriers[d] for x, d in zip(args, p.domain)):
                    raise ModelError(f"{p.name} tuple {args} is not sort-correct")

    def carrier(self, sort: Sort):
        return self.carriers[sort]

    def apply(self, f: FuncSym, args: tuple):
        return self.funcs[f][args]

    def test(self, p: PredSym, args: tuple) -> bool:
        return args in self.preds[p]

    def op(self, f: FuncSym):
        return self.funcs[f].__getitem__

    def pred_op(self, p: PredSym):
        return self.preds[p].__contains__


# ---------------------------------------------------------------- reports


@dataclass
class CheckReport:
    checked: int = 0
    violations: list = field(default_factory=list)
    skipped: int = 0
    per_claim: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, name: str, good: bool, witness=None) -> None:
        self.checked += 1
        self.per_claim[name] = self.per_claim.get(name, 0) + 1
        if not good:
            self.violations.append((name, witness))

    def merge(self, other: "CheckReport") -> "CheckReport":
        out = CheckReport(self.checked + other.checked, self.violations + other.violations,
                          self.skipped + other.skipped, dict(self.per_claim))
        for k, v in other.per_claim.items():
            out.per_claim[k] = out.per_claim.get(k, 0) + v
        out.violations.sort(key=lambda v: v[0])
        return out

    def to_text(self) -> str:
        lines = [f"checked {self.checked} instances, {len(self.violations)} violations"
                 + (f", {self.skipped} skipped" if self.skipped else "")]
        for name, w in sorted(self.violations, key=lambda v: v[0]):
            lines.append(f"  VIOLATION {name}: {w}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["claim", "instances", "violations"])
        bad: dict[str, int] = {}
        for name, _ in self.violations:
            bad[name] = bad.get(name, 0) + 1
        for name in sorted(self.per_claim):
            w.writerow([name, self.per_claim[name], bad.get(name, 0)])
        return buf.getvalue()


# ---------------------------------------------------------------- bounded reflective model


class Env(tuple):
    """Push-chain of ``(Var, element)`` bindings, oldest first; hash is cached."""

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = self.__dict__["_h"] = tuple.__hash__(self)
        return h

    def push(self, v: Var, x) -> "Env":
        return Env(self + ((v, x),))


EMPTY_ENV = Env()


class BoundedReflectiveModel:
    """Depth-bounded reflective interpretation over a finite base model.

    Reflective sorts are interpreted syntactically: ``var_σ`` by variables of
    index ≤ depth, ``term_σ`` by base terms of height ≤ depth, ``form`` by core
    formulas of height ≤ depth, and ``env`` by push-chains of length ≤ depth.
    An empty chain assigns the first carrier element to every variable.
    """

    def __init__(self, base: FiniteModel, depth: int, cap: int = DEFAULT_CAP,
                 refl: ReflectionMap | None = None):
        if depth < 1:
            raise ValueError("depth must be at least 1")
        self.base = base
        self.depth = depth
        self.cap = cap
        self.map = refl or reflective_signature(base.theory.signature)
        sig = self.map.base
        self.sorts = sig.sorts
        self.var_universe = {s: [Var(s, i) for i in range(depth + 1)] for s in sig.sorts}
        self._consts = {s: [f() for f in sig.funcs if f.codomain == s and not f.domain]
                        for s in sig.sorts}
        self._term_levels: list[dict[Sort, list]] = []
        self._form_levels: list[list] = []
        self._env_levels: list[list] = []
        self._heights: dict = {}
        self._decoded: dict = {}
        self._sat: dict = {}
        self._eval: dict = {}
        self._ops: dict = {}
        self.sat_overrides: dict = {}
        self._kinds = {s: "base" for s in sig.sorts}
        for s in sig.sorts:
            self._kinds[self.map.var_sort[s]] = ("var", s)
            self._kinds[self.map.term_sort[s]] = ("term", s)
        self._kinds[self.map.form_sort] = "form"
        self._kinds[self.map.env_sort] = "env"

    # ---- universes -------------------------------------------------------

    def _term_counts(self, h: int) -> dict[Sort, int]:
        sig = self.map.base
        cnt = {s: len(self.var_universe[s]) + len(self._consts[s]) for s in self.sorts}
        base = dict(cnt)
        for _ in range(h):
            nxt = dict(base)
            for f in sig.funcs:
                if f.domain:
                    n = 1
                    for d in f.domain:
                        n *= cnt[d]
                    nxt[f.codomain] += n
            cnt = nxt
        return cnt

    def term_count(self, sort: Sort, h: int | None = None) -> int:
        return self._term_counts(self.depth if h is None else h)[sort]

    def form_count(self, h: int | None = None) -> int:
        h = self.depth if h is None else h
        sig = self.map.base
        f0 = 1 + sum(1 for p in sig.preds if not p.domain)
        cnt = f0
        for k in range(h):
            tc = self._term_counts(k)
            n = f0
            n += sum(tc[s] ** 2 for s in self.sorts)
            for p in sig.preds:
                if p.domain:
                    m = 1
                    for d in p.domain:
                        m *= tc[d]
                    n += m
            n += cnt + cnt * cnt + sum(len(self.var_universe[s]) for s in self.sorts) * cnt
            cnt = n
        return cnt

    def env_count(self, length: int | None = None) -> int:
        length = self.depth if length is None else length
        b = sum(len(self.var_universe[s]) * len(self.base.carrier(s)) for s in self.sorts)
        return sum(b**i for i in range(length + 1))

    def _guard(self, n: int, what: str) -> None:
        if n > self.cap:
            raise UniverseOverflow(f"{what} universe has {n} elements (cap {self.cap})")

    def terms(self, sort: Sort, h: int | None = None) -> list:
        h = self.depth if h is None else h
        while len(self._term_levels) <= h:
            k = len(self._term_levels)
            for s in self.sorts:
                self._guard(self.term_count(s, k), f"term_{s.name}")
            lvl = {s: list(self.var_universe[s]) + list(self._consts[s]) for s in self.sorts}
            if k > 0:
                prev = self._term_levels[k - 1]
                for f in self.map.base.funcs:
                    if f.domain:
                        for args in itertools.product(*(prev[d] for d in f.domain)):
                            lvl[f.codomain].append(App(f, args))
            self._term_levels.append(lvl)
        return self._term_levels[h][sort]

    def forms(self, h: int | None = None) -> list:
        h = self.depth if h is None else h
        sig = self.map.base
        while len(self._form_levels) <= h:
            k = len(self._form_levels)
            self._guard(self.form_count(k), "form")
            lvl = [Bottom()] + [Atom(p, ()) for p in sig.preds if not p.domain]
            if k > 0:
                prev = self._form_levels[k - 1]
                for s in self.sorts:
                    ts = self.terms(s, k - 1)
                    lvl += [Eq(a, b) for a in ts for b in ts]
                for p in sig.preds:
                    if p.domain:
                        for args in itertools.product(*(self.terms(d, k - 1) for d in p.domain)):
                            lvl.append(Atom(p, args))
                lvl += [Not(f) for f in prev]
                lvl += [Or(f, g) for f in prev for g in prev]
                for s in self.sorts:
                    lvl += [Forall(v, f) for v in self.var_universe[s] for f in prev]
            self._form_levels.append(lvl)
        return self._form_levels[h]

    def envs(self, length: int | None = None) -> list:
        length = self.depth if length is None else length
        while len(self._env_levels) <= length:
            k = len(self._env_levels)
            self._guard(self.env_count(k), "env")
            if k == 0:
                self._env_levels.append([EMPTY_ENV])
                continue
            bindings = [(v, x) for s in self.sorts for v in self.var_universe[s]
                        for x in self.base.carrier(s)]
            prev = self._env_levels[k - 1]
            self._env_levels.append([EMPTY_ENV] + [e.push(*b) for e in prev if len(e) == k - 1
                                                   for b in bindings] + [e for e in prev if e])
        return self._env_levels[length]

    @property
    def term_universe(self) -> dict[Sort, list]:
        return {s: self.terms(s) for s in self.sorts}

    @property
    def form_universe(self) -> list:
        return self.forms()

    @property
    def env_universe(self) -> list:
        return self.envs()

    def carrier(self, sort: Sort, level: int | None = None):
        kind = self._kinds[sort]
        level = self.depth if level is None else level
        if kind == "base":
            return self.base.carrier(sort)
        if kind == "form":
            return self.forms(level)
        if kind == "env":
            return self.envs(level)
        tag, s = kind
        if tag == "var":
            return self.var_universe[s][:level + 1]
        return self.terms(s, level)

    # ---- membership -------------------------------------------------------

    def height(self, e) -> int:
        h = self._heights.get(e)
        if h is None:
            h = height(e)
            self._heights[e] = h
        return h

    def _vars_fit(self, e) -> bool:
        return all(v.index <= self.depth and v.sort in self.var_universe for v in all_vars(e))

    def contains_term(self, t) -> bool:
        return self.height(t) <= self.depth and self._vars_fit(t)

    def contains_form(self, phi) -> bool:
        return is_core(phi) and self.height(phi) <= self.depth and self._vars_fit(phi)

    def contains_env(self, e) -> bool:
        return len(e) <= self.depth and all(v.index <= self.depth for v, _ in e)

    def require_form(self, phi) -> None:
        if not self.contains_form(phi):
            raise EncodingTooDeep(phi)

    # ---- table interpretation -----------------------------------------------

    def decode_env(self, e: Env) -> dict:
        a = self._decoded.get(e)
        if a is None:
            a = {v: self.base.carrier(s)[0] for s in self.sorts for v in self.var_universe[s]}
            for v, x in e:
                a[v] = x
            self._decoded[e] = a
        return a

    def sat(self, e: Env, phi) -> bool:
        key = (e, phi)
        if self.sat_overrides and key in self.sat_overrides:
            return self.sat_overrides[key]
        r = self._sat.get(key)
        if r is None:
            r = holds(self.base, self.decode_env(e), phi)
            self._sat[key] = r
        return r

    def _eval_op(self, args):
        r = self._eval.get(args)
        if r is None:
            e, t = args
            if isinstance(t, Var):
                r = self.decode_env(e)[t]
            else:
                ev = self._eval_op
                r = self.base.op(t.func)(tuple(ev((e, a)) for a in t.args))
            self._eval[args] = r
        return r

    def _build(self, t, args):
        # heights of the arguments are already known: they are universe elements
        h = 1 + max(self.height(a) for a in args) if args else 0
        if h > self.depth:
            raise OutOfUniverse(t)
        self._heights[t] = h
        return t

    def op(self, f: FuncSym):
        """The interpretation of ``f`` as a callable on argument tuples (cached)."""
        fn = self._ops.get(f)
        if fn is None:
            fn = self._make_op(f)
            if self.map.roles.get(f, ("",))[0] in _SYNTAX_ROLES:
                fn = _memo_partial(fn)
            self._ops[f] = fn
        return fn

    def _make_op(self, f: FuncSym):
        role = self.map.roles.get(f)
        if role is None:
            return self.base.op(f)
        kind, what = role
        depth = self.depth
        build = self._build
        if kind == "eval":
            return self._eval_op
        if kind == "evalv":
            default = self.base.carrier(what)[0]

            def evalv(args):
                e, v = args
                for w, x in reversed(e):
                    if w == v:
                        return x
                return default
            return evalv
        if kind == "push":
            def push(args):
                e, v, x = args
                if len(e) >= depth:
                    raise OutOfUniverse(e)
                return e.push(v, x)
            return push
        if kind == "inj":
            return lambda args: args[0]
        if kind == "v0":
            v0 = Var(what, 0)
            return lambda args: v0
        if kind == "next":
            def nxt(args):
                v = args[0]
                if v.index >= depth:
                    raise OutOfUniverse(v)
                return Var(what, v.index + 1)
            return nxt
        if kind == "qfunc":
            return lambda args: build(App(what, args), args)
        if kind == "qpred":
            return lambda args: build(Atom(what, args), args)
        if kind == "req":
            return lambda args: build(Eq(args[0], args[1]), args)
        if kind == "rbot":
            bot = Bottom()
            return lambda args: bot
        if kind == "rnot":
            return lambda args: build(Not(args[0]), args)
        if kind == "ror":
            return lambda args: build(Or(args[0], args[1]), args)
        if kind == "rforall":
            return lambda args: build(Forall(args[0], args[1]), args[1:])
        if kind == "empty":
            return lambda args: EMPTY_ENV
        raise KeyError(f.name)

    def pred_op(self, p: PredSym):
        if p == self.map.sat:
            return lambda args: self.sat(args[0], args[1])
        return self.base.pred_op(p)

    def apply(self, f: FuncSym, args: tuple):
        return self.op(f)(args)

    def test(self, p: PredSym, args: tuple) -> bool:
        return self.pred_op(p)(args)

    def element(self, term):
        """Denotation of a closed reflective term (e.g. a Gödel encoding)."""
        return eval_term(self, {}, term)


_SYNTAX_ROLES = {"next", "qfunc", "qpred", "req", "rnot", "ror", "rforall", "push"}


def _memo_partial(fn):
    """Memoize a partial constructor, remembering out-of-universe arguments too."""
    memo: dict = {}
    missing = object()

    def run(args):
        r = memo.get(args, missing)
        if r is missing:
            try:
                r = fn(args)
            except OutOfUniverse as exc:
                r = exc
            memo[args] = r
        if isinstance(r, OutOfUniverse):
            raise r
        return r
    return run


def bounded_reflective_model(m: FiniteModel, depth: int, cap: int = DEFAULT_CAP
                             ) -> BoundedReflectiveModel:
    return BoundedReflectiveModel(m, depth, cap)


# ---------------------------------------------------------------- checks


def _guarded_vars(m: ReflectionMap, body) -> set[Var]:
    """Variables occurring as a reflective-sort argument of a syntax constructor."""
    out: set[Var] = set()
    stack = [body]
    while stack:
        x = stack.pop()
        if isinstance(x, App):
            role = m.roles.get(x.func)
            if role and role[0] in _SYNTAX_ROLES:
                for a, s in zip(x.args, x.func.domain):
                    if isinstance(a, Var) and s not in m.base.sorts and not (
                            role[0] in ("rforall", "push") and s in m.var_sort.values()):
                        out.add(a)
            stack.extend(x.args)
        elif isinstance(x, (Atom,)):
            stack.extend(x.args)
        elif isinstance(x, Eq):
            stack.extend((x.lhs, x.rhs))
        elif isinstance(x, Not):
            stack.append(x.arg)
        elif isinstance(x, (Or, And, Implies, Iff)):
            stack.extend((x.left, x.right))
        elif isinstance(x, (Forall, Exists)):
            stack.append(x.body)
    return out


def _witness(vs, values) -> str:
    return ", ".join(f"{show(v)}={_show_elem(x)}" for v, x in zip(vs, values))


def _show_elem(x) -> str:
    if isinstance(x, tuple):
        return "[" + "; ".join(f"{show(v)}->{val}" for v, val in x) + "]"
    if isinstance(x, (int, str)):
        return str(x)
    return show(x)


def check_axiom_instances(rm: BoundedReflectiveModel, axioms) -> CheckReport:
    """Evaluate every instance of each closed axiom over the bounded carriers."""
    report = CheckReport()
    for ax in axioms:
        vs, body = strip_foralls(ax.formula)
        guarded = _guarded_vars(rm.map, body)
        domains = [rm.carrier(v.sort, rm.depth - 1 if v in guarded else None) for v in vs]
        run = compile_formula(rm, body, vs)
        for values in itertools.product(*domains):
            try:
                good = run(values)
            except OutOfUniverse:
                report.skipped += 1
                continue
            report.add(ax.name, good, None if good else _witness(vs, values))
    report.violations.sort(key=lambda v: v[0])
    return report


def check_reflective_axioms(rm: BoundedReflectiveModel, var_axioms: bool = True) -> CheckReport:
    axioms = reflective_axioms(rm.map) + variable_term_axioms(rm.map, var_axioms)
    return check_axiom_instances(rm, axioms)


def check_truth_predicate(rm: BoundedReflectiveModel, phis) -> CheckReport:
    report = CheckReport()
    m = rm.map
    for i, phi in enumerate(phis):
        rm.require_form(phi)
        if free_vars(phi):
            raise ValueError(f"not closed: {show(phi)}")
        direct = holds(rm.base, {}, phi)
        reflected = holds(rm, {}, m.sat(m.empty(), godel_encode(phi, m)))
        report.add(f"truth[{i}]", direct == reflected,
                   None if direct == reflected else f"{show(phi)}: base={direct} sat={reflected}")
    return report


def substitution_lemma_formula(m: ReflectionMap, env_var: Var, phi, x: Var, t):
    """``push(e, ⌈x⌉, t) ⊨̇ ⌈phi⌉  ↔  e ⊨̇ ⌈phi[x:=t]⌉`` with ``e`` free."""
    lhs = m.sat(m.push[x.sort](env_var, m.var_term(x.sort, x.index), t), godel_encode(phi, m))
    rhs = m.sat(env_var, godel_encode(substitute(phi, x, t), m))
    return Iff(lhs, rhs)


def check_substitution_lemma(rm: BoundedReflectiveModel, triples) -> CheckReport:
    report = CheckReport()
    m = rm.map
    ev = Var(m.env_sort, 0)
    envs = rm.envs(rm.depth - 1)
    for i, (phi, x, t) in enumerate(triples):
        if free_vars(t):
            raise ValueError(f"substituted term must be ground: {show(t)}")
        rm.require_form(phi)
        rm.require_form(substitute(phi, x, t))
        claim = substitution_lemma_formula(m, ev, phi, x, t)
        for e in envs:
            good = holds(rm, {ev: e}, claim)
            report.add(f"subst[{i}]", good,
                       None if good else f"{show(phi)} [{show(x)} := {show(t)}] env={_show_elem(e)}")
    return report


def check_induction_instances(rm: BoundedReflectiveModel, dt: InductiveDatatype, phis,
                              slot: int = 0) -> CheckReport:
    """Evaluate the reflective induction axiom at ``⌈phi⌉`` for each ``phi``.

    Each instance is also compared against the first-order induction instance
    for ``phi`` in the base model; a disagreement is reported separately.
    """
    report = CheckReport()
    m = rm.map
    ax = induction_axiom(dt, m)
    phi_var, body = ax.var, ax.body
    x = Var(dt.sort, slot)
    for i, phi in enumerate(phis):
        rm.require_form(phi)
        elem = rm.element(godel_encode(phi, m))
        reflective = holds(rm, {phi_var: elem}, body)
        first_order = holds(rm.base, rm.decode_env(EMPTY_ENV), induction_instance(dt, phi, x))
        report.add(f"ind[{i}]", reflective, None if reflective else show(phi))
        if reflective != first_order:
            report.violations.append((f"ind-agree[{i}]",
                                      f"{show(phi)}: reflective={reflective} "
                                      f"first-order={first_order}"))
    return report


# ---------------------------------------------------------------- second path


def sat_by_rewriting(rm: BoundedReflectiveModel, e: Env, p) -> bool:
    """Decide ``e ⊨̇ p`` by unfolding the satisfaction and evaluation axioms.

    Works on the Gödel encoding of ``p`` and on the environment as a stack of
    (variable term, value) pairs; variable terms are compared syntactically.
    """
    m = rm.map
    stack = tuple((m.var_term(v.sort, v.index), x) for v, x in e)
    return _rw_sat(rm, m, stack, godel_encode(p, m))


def _rw_evalv(rm, m: ReflectionMap, stack, sort: Sort, vterm):
    for w, x in reversed(stack):
        if w.func.codomain != vterm.func.codomain:
            continue            # push of another sort
        if w == vterm:
            return x            # matching push
        # distinct variable: fall through to the rest of the stack
    return rm.base.carrier(sort)[0]


def _rw_eval(rm, m: ReflectionMap, stack, t):
    kind, what = m.roles[t.func]
    if kind == "inj":
        return _rw_evalv(rm, m, stack, what, t.args[0])
    if kind == "qfunc":
        return rm.base.apply(what, tuple(_rw_eval(rm, m, stack, a) for a in t.args))
    raise ValueError(f"not a reflected term: {t}")


def _rw_sat(rm, m: ReflectionMap, stack, p) -> bool:
    kind, what = m.roles[p.func]
    if kind == "rbot":
        return False
    if kind == "rnot":
        return not _rw_sat(rm, m, stack, p.args[0])
    if kind == "ror":
        return _rw_sat(rm, m, stack, p.args[0]) or _rw_sat(rm, m, stack, p.args[1])
    if kind == "req":
        return _rw_eval(rm, m, stack, p.args[0]) == _rw_eval(rm, m, stack, p.args[1])
    if kind == "qpred":
        return rm.base.test(what, tuple(_rw_eval(rm, m, stack, a) for a in p.args))
    if kind == "rforall":
        v, body = p.args
        return all(_rw_sat(rm, m, stack + ((v, x),), body) for x in rm.base.carrier(what))
    raise ValueError(f"not a reflected formula: {p}")


def check_two_path(rm: BoundedReflectiveModel, envs=None, forms=None) -> CheckReport:
    """Compare :func:`sat_by_rewriting` with the table interpretation on a sweep."""
    report = CheckReport()
    envs = rm.envs() if envs is None else envs
    forms = rm.forms() if forms is None else forms
    for p in forms:
        for e in envs:
            a, b = rm.sat(e, p), sat_by_rewriting(rm, e, p)
            report.add("two-path", a == b,
                       None if a == b else f"env={_show_elem(e)} form={show(p)}")
    return report
