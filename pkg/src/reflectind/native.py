"""Native theory and model format.

Theories are sequences of parenthesized forms::

    (theory N+Leq+Add+Mul)
    (sort nat)
    (fun add (nat nat) nat)
    (pred leq (nat nat))
    (datatype nat (zero) (s nat))
    (axiom ax0 (forall ((x nat)) (= (add zero x) x)))
    (conjecture c0 (forall ((x nat)) (leq zero x)))

``(par (a) DECL)`` makes a datatype, function, predicate or axiom
parametric.  Parametric symbols are instantiated on use by
:func:`monomorphize`: ``(List nat)`` becomes the sort ``List_nat`` with
constructors ``nil_nat``/``cons_nat``.  ``(as t S)`` fixes the result sort of
a parametric constant.

Variables written ``x<i>_<sort>`` keep index ``i``; other names get the least
index not otherwise in use.  This is what :func:`render` emits, so
``parse_theory(render(t)) == t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, ReservedPrefix, TheoryError, UnresolvedParameter
from .logic import (BOTTOM, TOP, And, App, Atom, Bottom, Eq, Exists, Forall, FuncSym, Iff,
                    Implies, InductiveDatatype, NamedFormula, Not, Or, PredSym,
                    RESERVED_PREFIX, Signature, Sort, Theory, Var, check_theory, sort_of)
from .sexpr import SList, Sym, fail, read_all

SortExpr = object  # str, or tuple (head, arg, ...)

_VAR_NAME = re.compile(r"x(\d+)_(.+)")


# ---------------------------------------------------------------- raw declarations


@dataclass
class _Fun:
    name: str
    params: tuple
    domain: tuple
    codomain: SortExpr
    ctor_of: str | None = None


@dataclass
class _Pred:
    name: str
    params: tuple
    domain: tuple


@dataclass
class _Datatype:
    params: tuple
    head: str
    ctors: list
    src: object = None


@dataclass
class RawTheory:
    """Declarations as written, before monomorphization."""

    name: str = "theory"
    sorts: list = field(default_factory=list)
    funs: dict = field(default_factory=dict)
    preds: dict = field(default_factory=dict)
    datatypes: dict = field(default_factory=dict)
    axioms: list = field(default_factory=list)       # (name|None, params, sexpr)
    conjectures: list = field(default_factory=list)  # (name, sexpr)
    order: list = field(default_factory=list)        # declaration order for sorts/funs/preds/dts

    @property
    def parametric(self) -> bool:
        return any(d.params for d in self.datatypes.values()) or any(
            f.params for f in self.funs.values()) or any(p.params for p in self.preds.values())


def _name(x, what: str) -> str:
    if not isinstance(x, Sym):
        raise fail(f"expected {what} name", x)
    return str(x)


def _sort_expr(x) -> SortExpr:
    if isinstance(x, Sym):
        return str(x)
    if isinstance(x, SList) and x and all(isinstance(a, (Sym, SList)) for a in x):
        return (_name(x[0], "sort"),) + tuple(_sort_expr(a) for a in x[1:])
    raise fail("malformed sort", x)


def _list(x, what: str) -> SList:
    if not isinstance(x, SList):
        raise fail(f"expected a list for {what}", x)
    return x


def parse_raw(text: str, allow_reserved: bool = False) -> RawTheory:
    """Read declarations.  ``allow_reserved`` admits ``rfl_`` names, as in rendered extensions."""
    raw = RawTheory()
    for form in read_all(text):
        _decl(raw, _list(form, "declaration"), ())
    if not allow_reserved:
        for _, name in raw.order:
            if name.startswith(RESERVED_PREFIX):
                raise ReservedPrefix(name)
    return raw


def _declare(raw: RawTheory, kind: str, name: str, src) -> None:
    taken = {n for _, n in raw.order}
    if name in taken and not (kind == "fun" and name in raw.funs):
        raise fail(f"duplicate declaration of {name}", src)
    raw.order.append((kind, name))


def _decl(raw: RawTheory, f: SList, params: tuple) -> None:
    if not f or not isinstance(f[0], Sym):
        raise fail("empty or malformed declaration", f)
    head = f[0]
    if head == "par":
        if params:
            raise fail("nested par", f)
        if len(f) != 3:
            raise fail("expected (par (params) decl)", f)
        ps = tuple(_name(p, "parameter") for p in _list(f[1], "parameters"))
        _decl(raw, _list(f[2], "declaration"), ps)
    elif head == "theory":
        if len(f) != 2:
            raise fail("expected (theory name)", f)
        raw.name = str(f[1])
    elif head == "sort":
        if len(f) != 2 or params:
            raise fail("expected (sort name)", f)
        name = _name(f[1], "sort")
        _declare(raw, "sort", name, f)
        raw.sorts.append(name)
    elif head == "fun":
        if len(f) != 4:
            raise fail("expected (fun name (domain) codomain)", f)
        name = _name(f[1], "function")
        fun = _Fun(name, params, tuple(_sort_expr(s) for s in _list(f[2], "domain")),
                   _sort_expr(f[3]))
        if name in raw.funs:
            raise fail(f"duplicate declaration of {name}", f)
        _declare(raw, "fun", name, f)
        raw.funs[name] = fun
    elif head == "pred":
        if len(f) != 3:
            raise fail("expected (pred name (domain))", f)
        name = _name(f[1], "predicate")
        _declare(raw, "pred", name, f)
        raw.preds[name] = _Pred(name, params, tuple(_sort_expr(s) for s in _list(f[2], "domain")))
    elif head == "datatype":
        if len(f) < 3:
            raise fail("expected (datatype sort (ctor sort...)...)", f)
        sx = _sort_expr(f[1])
        if params:
            if not (isinstance(sx, tuple) and sx[1:] == params):
                raise fail("parametric datatype head must list its parameters", f)
            head_name = sx[0]
        elif isinstance(sx, str):
            head_name = sx
        else:
            raise fail("datatype head must be a sort name", f)
        ctors = []
        for c in f[2:]:
            c = _list(c, "constructor")
            cname = _name(c[0], "constructor") if c else None
            if cname is None:
                raise fail("empty constructor", c)
            dom = tuple(_sort_expr(s) for s in c[1:])
            ctors.append((cname, dom))
            prior = raw.funs.get(cname)
            if prior is not None:
                if prior.domain != dom or prior.codomain != sx or prior.params != params:
                    raise fail(f"constructor {cname} disagrees with its declaration", c)
                prior.ctor_of = head_name
            else:
                _declare(raw, "fun", cname, c)
                raw.funs[cname] = _Fun(cname, params, dom, sx, head_name)
        if head_name in raw.datatypes:
            raise fail(f"duplicate datatype {head_name}", f)
        if not params and head_name not in raw.sorts:
            _declare(raw, "sort", head_name, f)
            raw.sorts.append(head_name)
        raw.order.append(("datatype", head_name))
        raw.datatypes[head_name] = _Datatype(params, head_name, ctors, f)
    elif head == "axiom":
        if len(f) == 2:
            raw.axioms.append((None, params, f[1]))
        elif len(f) == 3:
            raw.axioms.append((_name(f[1], "axiom"), params, f[2]))
        else:
            raise fail("expected (axiom [name] formula)", f)
    elif head == "conjecture":
        if len(f) != 3 or params:
            raise fail("expected (conjecture name formula)", f)
        raw.conjectures.append((_name(f[1], "conjecture"), f[2]))
    else:
        raise fail(f"unknown declaration {head}", f)


# ---------------------------------------------------------------- monomorphization


def _subst_sort(x: SortExpr, binding: dict) -> SortExpr:
    if isinstance(x, str):
        return binding.get(x, x)
    return (x[0],) + tuple(_subst_sort(a, binding) for a in x[1:])


def _params_in(x: SortExpr, params) -> set:
    if isinstance(x, str):
        return {x} & set(params)
    out: set = set()
    for a in x[1:]:
        out |= _params_in(a, params)
    return out


class _Mono:
    def __init__(self, raw: RawTheory):
        self.raw = raw
        self.sorts: dict = {}        # ground SortExpr -> Sort
        self.ground: dict = {}       # Sort -> ground SortExpr
        self.sort_order: list = []
        self.funcs: dict = {}        # (name, binding values) -> FuncSym
        self.func_order: list = []
        self.preds: dict = {}
        self.pred_order: list = []
        self.dts: dict = {}          # Sort -> InductiveDatatype
        self.dt_order: list = []
        for kind, name in raw.order:
            if kind == "sort":
                self.sort(name)
            elif kind == "fun" and not raw.funs[name].params:
                self.func(name, ())
            elif kind == "pred" and not raw.preds[name].params:
                self.pred(name, ())
            elif kind == "datatype" and not raw.datatypes[name].params:
                self._datatype(self.sort(name), raw.datatypes[name], {})

    # ---- sorts -----------------------------------------------------------

    def sort(self, g: SortExpr, src=None) -> Sort:
        s = self.sorts.get(g)
        if s is not None:
            return s
        if isinstance(g, str):
            if g not in self.raw.sorts:
                raise ParseError(f"unknown sort {g}", *(_pos(src)))
            s = Sort(g)
            self._add_sort(g, s)
            return s
        dt = self.raw.datatypes.get(g[0])
        if dt is None or len(dt.params) != len(g) - 1:
            raise ParseError(f"unknown parametric sort {g[0]}/{len(g) - 1}", *(_pos(src)))
        args = [self.sort(a, src) for a in g[1:]]
        s = Sort(g[0] + "_" + "_".join(a.name for a in args))
        self._add_sort(g, s)
        self._datatype(s, dt, dict(zip(dt.params, g[1:])))
        return s

    def _add_sort(self, g, s: Sort) -> None:
        self.sorts[g] = s
        self.ground[s] = g
        self.sort_order.append(s)

    def _datatype(self, s: Sort, dt: _Datatype, binding: dict) -> None:
        vals = tuple(binding[p] for p in dt.params)
        ctors = tuple(self.func(c, vals) for c, _ in dt.ctors)
        self.dts[s] = InductiveDatatype(s, ctors)
        self.dt_order.append(s)

    def _suffix(self, vals: tuple) -> str:
        return "_".join(self.sort(v).name for v in vals)

    # ---- symbols ---------------------------------------------------------

    def func(self, name: str, vals: tuple) -> FuncSym:
        key = (name, vals)
        f = self.funcs.get(key)
        if f is None:
            d = self.raw.funs[name]
            b = dict(zip(d.params, vals))
            fname = name + ("_" + self._suffix(vals) if vals else "")
            f = FuncSym(fname, tuple(self.sort(_subst_sort(x, b)) for x in d.domain),
                        self.sort(_subst_sort(d.codomain, b)))
            self.funcs[key] = f
            self.func_order.append(f)
        return f

    def pred(self, name: str, vals: tuple) -> PredSym:
        key = (name, vals)
        p = self.preds.get(key)
        if p is None:
            d = self.raw.preds[name]
            b = dict(zip(d.params, vals))
            pname = name + ("_" + self._suffix(vals) if vals else "")
            p = PredSym(pname, tuple(self.sort(_subst_sort(x, b)) for x in d.domain))
            self.preds[key] = p
            self.pred_order.append(p)
        return p

    # ---- elaboration -------------------------------------------------------

    def formula(self, sx, binding: dict, explicit: set):
        return _Elab(self, binding, explicit).formula(sx, {})


def _pos(x):
    return (getattr(x, "line", 0), getattr(x, "column", 0))


def _unify(pat: SortExpr, g: SortExpr, params, b: dict) -> bool:
    if isinstance(pat, str):
        if pat in params:
            if pat in b:
                return b[pat] == g
            b[pat] = g
            return True
        return pat == g
    if isinstance(g, str) or pat[0] != g[0] or len(pat) != len(g):
        return False
    return all(_unify(p, x, params, b) for p, x in zip(pat[1:], g[1:]))


class _Deferred(Exception):
    pass


class _Elab:
    def __init__(self, mono: _Mono, binding: dict, explicit: set):
        self.m = mono
        self.binding = binding      # axiom-level sort parameters
        self.explicit = explicit    # (sort name, index) written as x<i>_<sort>

    def sort_of_expr(self, sx) -> Sort:
        return self.m.sort(_subst_sort(_sort_expr(sx), self.binding), sx)

    # terms ---------------------------------------------------------------

    def term(self, sx, scope: dict, expected: Sort | None = None):
        try:
            return self._term(sx, scope, expected)
        except _Deferred as d:
            raise UnresolvedParameter(str(d)) from None

    def _term(self, sx, scope: dict, expected: Sort | None):
        if isinstance(sx, Sym):
            if sx in scope:
                return scope[sx]
            return self._apply(sx, [], scope, expected, sx)
        if isinstance(sx, SList) and sx and isinstance(sx[0], Sym):
            if sx[0] == "as":
                if len(sx) != 3:
                    raise fail("expected (as term sort)", sx)
                want = self.sort_of_expr(sx[2])
                t = self._term(sx[1], scope, want)
                if sort_of(t) != want:
                    raise fail(f"term has sort {sort_of(t)}, not {want}", sx)
                return t
            return self._apply(sx[0], list(sx[1:]), scope, expected, sx)
        raise fail("malformed term", sx)

    def _apply(self, name, args: list, scope: dict, expected, src):
        d = self.m.raw.funs.get(str(name))
        if d is None:
            raise fail(f"unknown function {name}", src)
        if len(args) != len(d.domain):
            raise fail(f"{name} expects {len(d.domain)} arguments, got {len(args)}", src)
        if not d.params:
            f = self.m.func(d.name, ())
            return App(f, tuple(self._term(a, scope, s) for a, s in zip(args, f.domain)))
        b: dict = {}
        if expected is not None and not _unify(d.codomain, self.m.ground[expected], d.params, b):
            raise fail(f"{name} cannot have sort {expected}", src)
        done: dict = {}
        pending = list(range(len(args)))
        while pending:
            progress = False
            for i in list(pending):
                want = None
                if not (_params_in(d.domain[i], d.params) - set(b)):
                    want = self.m.sort(_subst_sort(d.domain[i], b), src)
                try:
                    t = self._term(args[i], scope, want)
                except _Deferred:
                    continue
                if not _unify(d.domain[i], self.m.ground[sort_of(t)], d.params, b):
                    raise fail(f"argument {i + 1} of {name} has sort {sort_of(t)}", args[i])
                done[i] = t
                pending.remove(i)
                progress = True
            if not progress:
                break
        missing = [p for p in d.params if p not in b]
        if missing or pending:
            raise _Deferred(missing[0] if missing else d.params[0])
        f = self.m.func(d.name, tuple(b[p] for p in d.params))
        return App(f, tuple(done[i] for i in range(len(args))))

    # formulas ------------------------------------------------------------

    def formula(self, sx, scope: dict):
        if isinstance(sx, Sym):
            if sx == "false":
                return BOTTOM
            if sx == "true":
                return TOP
            return self._atom(sx, [], scope, sx)
        if not (isinstance(sx, SList) and sx and isinstance(sx[0], Sym)):
            raise fail("malformed formula", sx)
        h, args = sx[0], list(sx[1:])
        if h in ("and", "or"):
            if not args:
                return TOP if h == "and" else BOTTOM
            fs = [self.formula(a, scope) for a in args]
            out = fs[-1]
            for g in reversed(fs[:-1]):
                out = And(g, out) if h == "and" else Or(g, out)
            return out
        if h == "not":
            if len(args) != 1:
                raise fail("not takes one argument", sx)
            return Not(self.formula(args[0], scope))
        if h in ("=>", "<=>"):
            if len(args) != 2:
                raise fail(f"{h} takes two arguments", sx)
            a, b = self.formula(args[0], scope), self.formula(args[1], scope)
            return Implies(a, b) if h == "=>" else Iff(a, b)
        if h == "=":
            if len(args) != 2:
                raise fail("= takes two arguments", sx)
            try:
                lhs = self._term(args[0], scope, None)
                rhs = self._term(args[1], scope, sort_of(lhs))
            except _Deferred:
                rhs = self.term(args[1], scope)
                lhs = self.term(args[0], scope, sort_of(rhs))
            if sort_of(lhs) != sort_of(rhs):
                raise fail(f"= between {sort_of(lhs)} and {sort_of(rhs)}", sx)
            return Eq(lhs, rhs)
        if h in ("forall", "exists"):
            if len(args) != 2:
                raise fail(f"expected ({h} ((x sort)...) body)", sx)
            inner = dict(scope)
            vs = []
            for bnd in _list(args[0], "binders"):
                bnd = _list(bnd, "binder")
                if len(bnd) != 2 or not isinstance(bnd[0], Sym):
                    raise fail("binder must be (name sort)", bnd)
                s = self.sort_of_expr(bnd[1])
                v = self._binder(str(bnd[0]), s, inner)
                inner[bnd[0]] = v
                vs.append(v)
            body = self.formula(args[1], inner)
            for v in reversed(vs):
                body = Forall(v, body) if h == "forall" else Exists(v, body)
            return body
        return self._atom(h, args, scope, sx)

    def _binder(self, name: str, s: Sort, scope: dict) -> Var:
        m = _VAR_NAME.fullmatch(name)
        if m and m.group(2) == s.name:
            return Var(s, int(m.group(1)))
        used = {i for (sn, i) in self.explicit if sn == s.name}
        used |= {v.index for v in scope.values() if v.sort == s}
        i = 0
        while i in used:
            i += 1
        return Var(s, i)

    def _atom(self, name, args: list, scope: dict, src):
        d = self.m.raw.preds.get(str(name))
        if d is None:
            raise fail(f"unknown predicate {name}", src)
        if len(args) != len(d.domain):
            raise fail(f"{name} expects {len(d.domain)} arguments, got {len(args)}", src)
        if not d.params:
            p = self.m.pred(d.name, ())
            return Atom(p, tuple(self.term(a, scope, s) for a, s in zip(args, p.domain)))
        b: dict = {}
        ts = []
        for i, a in enumerate(args):
            want = None
            if not (_params_in(d.domain[i], d.params) - set(b)):
                want = self.m.sort(_subst_sort(d.domain[i], b), src)
            t = self.term(a, scope, want)
            if not _unify(d.domain[i], self.m.ground[sort_of(t)], d.params, b):
                raise fail(f"argument {i + 1} of {name} has sort {sort_of(t)}", a)
            ts.append(t)
        p = self.m.pred(d.name, tuple(b[q] for q in d.params))
        return Atom(p, tuple(ts))


def _explicit_vars(sx) -> set:
    out: set = set()
    stack = [sx]
    while stack:
        x = stack.pop()
        if isinstance(x, SList):
            stack.extend(x)
        elif isinstance(x, Sym):
            m = _VAR_NAME.fullmatch(x)
            if m:
                out.add((m.group(2), int(m.group(1))))
    return out


def _binder_sorts(sx, params) -> list:
    """Sort expressions of all binders in ``sx`` that mention a parameter."""
    out = []
    stack = [sx]
    while stack:
        x = stack.pop()
        if isinstance(x, SList):
            if x and x[0] in ("forall", "exists") and len(x) == 3 and isinstance(x[1], SList):
                for b in x[1]:
                    if isinstance(b, SList) and len(b) == 2:
                        e = _sort_expr(b[1])
                        if _params_in(e, params):
                            out.append(e)
            stack.extend(x)
    return out


def monomorphize(raw: RawTheory | Theory) -> Theory:
    """Instantiate parametric declarations at the sorts actually used.

    A ground :class:`Theory` is returned unchanged.  Parametric axioms are
    instantiated for every parameter binding under which all of their
    parametric binder sorts are already in use.
    """
    if isinstance(raw, Theory):
        return raw
    m = _Mono(raw)
    named: list[NamedFormula] = []
    auto = 0

    def next_name(given) -> str:
        nonlocal auto
        if given is None:
            given = f"ax{auto}"
        auto += 1
        return given

    conjs = [NamedFormula(n, m.formula(sx, {}, _explicit_vars(sx))) for n, sx in raw.conjectures]
    pending = []
    for name, params, sx in raw.axioms:
        nm = next_name(name)
        if not params:
            named.append(NamedFormula(nm, m.formula(sx, {}, _explicit_vars(sx))))
        else:
            pending.append((nm, params, sx))

    # parametric axioms: instantiate until no new instance appears
    done: set = set()
    while True:
        new = False
        for nm, params, sx in pending:
            pats = _binder_sorts(sx, params)
            used = list(m.sorts)
            for combo in _bindings(params, pats, used):
                key = (nm, tuple(combo[p] for p in params))
                if key in done:
                    continue
                done.add(key)
                suffix = "_".join(m.sort(combo[p]).name for p in params)
                f = m.formula(sx, combo, _explicit_vars(sx))
                named.append(NamedFormula(f"{nm}_{suffix}", f))
                new = True
        if not new:
            break

    sig = Signature(tuple(m.sort_order), tuple(m.func_order), tuple(m.pred_order))
    dts = tuple(m.dts[s] for s in m.dt_order)
    return Theory(sig, tuple(named), dts, tuple(conjs), raw.name)


def _bindings(params, pats, used) -> list:
    """Parameter bindings making every pattern in ``pats`` a sort already in use."""
    results: list = [{}]
    for pat in pats:
        nxt = []
        for b in results:
            for g in used:
                b2 = dict(b)
                if _unify(pat, g, params, b2):
                    nxt.append(b2)
        results = nxt
    out, seen = [], set()
    for b in results:
        if all(p in b for p in params):
            key = tuple(b[p] for p in params)
            if key not in seen:
                seen.add(key)
                out.append(b)
    return out


def parse_theory(text: str, check: bool = True, allow_reserved: bool = False) -> Theory:
    th = monomorphize(parse_raw(text, allow_reserved))
    if check:
        diags = check_theory(th)
        if diags:
            raise TheoryError(diags)
    return th


# ---------------------------------------------------------------- rendering


def render_var(v: Var) -> str:
    return f"x{v.index}_{v.sort.name}"


def render_expr(e) -> str:
    if isinstance(e, Var):
        return render_var(e)
    if isinstance(e, App):
        if not e.args:
            return e.func.name
        return f"({e.func.name} {' '.join(render_expr(a) for a in e.args)})"
    if isinstance(e, Bottom):
        return "false"
    if isinstance(e, Eq):
        return f"(= {render_expr(e.lhs)} {render_expr(e.rhs)})"
    if isinstance(e, Atom):
        if not e.args:
            return e.pred.name
        return f"({e.pred.name} {' '.join(render_expr(a) for a in e.args)})"
    if isinstance(e, Not):
        return f"(not {render_expr(e.arg)})"
    ops = {Or: "or", And: "and", Implies: "=>", Iff: "<=>"}
    for cls, op in ops.items():
        if isinstance(e, cls):
            return f"({op} {render_expr(e.left)} {render_expr(e.right)})"
    if isinstance(e, (Forall, Exists)):
        q = "forall" if isinstance(e, Forall) else "exists"
        return f"({q} (({render_var(e.var)} {e.var.sort.name})) {render_expr(e.body)})"
    raise TypeError(f"cannot render {e!r}")


def render(theory: Theory) -> str:
    sig = theory.signature
    lines = [f"(theory {theory.name})"]
    lines += [f"(sort {s.name})" for s in sig.sorts]
    lines += [f"(fun {f.name} ({' '.join(d.name for d in f.domain)}) {f.codomain.name})"
              for f in sig.funcs]
    lines += [f"(pred {p.name} ({' '.join(d.name for d in p.domain)}))" for p in sig.preds]
    for dt in theory.datatypes:
        ctors = " ".join("(" + " ".join([c.name] + [d.name for d in c.domain]) + ")"
                         for c in dt.constructors)
        lines.append(f"(datatype {dt.sort.name} {ctors})")
    lines += [f"(axiom {a.name} {render_expr(a.formula)})" for a in theory.axioms]
    lines += [f"(conjecture {c.name} {render_expr(c.formula)})" for c in theory.conjectures]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- models


def parse_model(text: str, theory: Theory, validate: bool = True):
    """Read ``(model (carrier σ n) (fun f ((args) value)...) (pred p (tuple)...))``."""
    from .semantics import FiniteModel

    forms = read_all(text)
    if len(forms) != 1 or not isinstance(forms[0], SList) or not forms[0] or forms[0][0] != "model":
        raise ParseError("expected a single (model ...) form", 1, 1)
    sig = theory.signature
    carriers, funcs, preds = {}, {}, {}

    def elem(x) -> int:
        if not isinstance(x, Sym) or not x.isdigit():
            raise fail("expected an element number", x)
        return int(x)

    for item in forms[0][1:]:
        item = _list(item, "model entry")
        kind = item[0] if item else None
        try:
            if kind == "carrier":
                carriers[sig.sort(str(item[1]))] = list(range(elem(item[2])))
            elif kind == "fun":
                f = sig.func(str(item[1]))
                table = {}
                for row in item[2:]:
                    row = _list(row, "function row")
                    if len(row) != 2:
                        raise fail("function row must be ((args) value)", row)
                    table[tuple(elem(a) for a in _list(row[0], "arguments"))] = elem(row[1])
                funcs[f] = table
            elif kind == "pred":
                p = sig.pred(str(item[1]))
                preds[p] = {tuple(elem(a) for a in _list(r, "tuple")) for r in item[2:]}
            else:
                raise fail(f"unknown model entry {kind}", item)
        except KeyError as e:
            raise fail(f"unknown symbol {e.args[0]}", item) from None
    for p in sig.preds:
        preds.setdefault(p, set())
    return FiniteModel(theory, carriers, funcs, preds, validate)


def render_model(m) -> str:
    sig = m.theory.signature
    out = ["(model"]
    out += [f"  (carrier {s.name} {len(m.carrier(s))})" for s in sig.sorts]
    for f in sig.funcs:
        rows = " ".join(f"(({' '.join(map(str, k))}) {v})" for k, v in sorted(m.funcs[f].items()))
        out.append(f"  (fun {f.name} {rows})")
    for p in sig.preds:
        rows = " ".join(f"({' '.join(map(str, t))})" for t in sorted(m.preds[p]))
        out.append(f"  (pred {p.name} {rows})".rstrip())
    return "\n".join(out) + ")\n"


def parse_formula(text: str, theory: Theory):
    """Elaborate one formula in native syntax against a ground theory."""
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError("expected exactly one formula", 1, 1)
    m = _Mono(parse_raw(render(theory), allow_reserved=True))
    return m.formula(forms[0], {}, _explicit_vars(forms[0]))
