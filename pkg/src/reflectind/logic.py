"""Multi-sorted first-order syntax.

Variables are ``(sort, index)`` pairs.  Terms are :class:`Var` or :class:`App`;
formulas are built from the classes below.  The *core* connectives are
``Bottom, Eq, Atom, Not, Or, Forall``; everything else is sugar that
:func:`desugar` removes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .errors import SortMismatch

RESERVED_PREFIX = "rfl_"


@dataclass(frozen=True, order=True)
class Sort:
    name: str

    def __hash__(self) -> int:
        return hash(self.name)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class FuncSym:
    name: str
    domain: tuple[Sort, ...]
    codomain: Sort

    def __hash__(self) -> int:
        return hash(self.name)

    @property
    def arity(self) -> int:
        return len(self.domain)

    def __call__(self, *args: "Term") -> "App":
        return App(self, tuple(args))

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PredSym:
    name: str
    domain: tuple[Sort, ...]

    def __hash__(self) -> int:
        return hash(self.name)

    @property
    def arity(self) -> int:
        return len(self.domain)

    def __call__(self, *args: "Term") -> "Atom":
        return Atom(self, tuple(args))

    def __str__(self) -> str:
        return self.name


class _Node:
    """Hash-caching base for AST nodes; trees are hashed a lot during model checks."""

    __slots__ = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((type(self).__name__,) + self._key()))

    def _key(self) -> tuple:
        return tuple(getattr(self, f) for f in self.__dataclass_fields__ if f != "_h")

    def __hash__(self) -> int:
        return self._h  # type: ignore[attr-defined]

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, eq=True, repr=False)
class Var(_Node):
    sort: Sort
    index: int
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Var({self.sort.name}, {self.index})"

    def __lt__(self, other: "Var") -> bool:
        return (self.sort.name, self.index) < (other.sort.name, other.index)


@dataclass(frozen=True, eq=True, repr=False)
class App(_Node):
    func: FuncSym
    args: tuple = ()
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"App({self.func.name}, {list(self.args)!r})"


Term = Union[Var, App]


@dataclass(frozen=True, eq=True, repr=False)
class Bottom(_Node):
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return "Bottom()"


@dataclass(frozen=True, eq=True, repr=False)
class Eq(_Node):
    lhs: Term
    rhs: Term
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Eq({self.lhs!r}, {self.rhs!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Atom(_Node):
    pred: PredSym
    args: tuple = ()
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Atom({self.pred.name}, {list(self.args)!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Not(_Node):
    arg: "Formula"
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Not({self.arg!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Or(_Node):
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class And(_Node):
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Implies(_Node):
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Iff(_Node):
    left: "Formula"
    right: "Formula"
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Iff({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Forall(_Node):
    var: Var
    body: "Formula"
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Forall({self.var!r}, {self.body!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Exists(_Node):
    var: Var
    body: "Formula"
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __repr__(self) -> str:
        return f"Exists({self.var!r}, {self.body!r})"


Formula = Union[Bottom, Eq, Atom, Not, Or, And, Implies, Iff, Forall, Exists]

# dataclass(eq=True, frozen=True) installs a field hash; restore the cached one.
for _cls in (Var, App, Bottom, Eq, Atom, Not, Or, And, Implies, Iff, Forall, Exists):
    _cls.__hash__ = _Node.__hash__  # type: ignore[method-assign]

Expr = Union[Term, Formula]

BOTTOM = Bottom()
TOP = Not(BOTTOM)
BINARY = (Or, And, Implies, Iff)
QUANTIFIERS = (Forall, Exists)
CORE = (Bottom, Eq, Atom, Not, Or, Forall)


@dataclass(frozen=True)
class NamedFormula:
    name: str
    formula: Formula

    def __str__(self) -> str:
        return f"{self.name}: {self.formula}"


@dataclass(frozen=True)
class Signature:
    sorts: tuple[Sort, ...] = ()
    funcs: tuple[FuncSym, ...] = ()
    preds: tuple[PredSym, ...] = ()

    def sort(self, name: str) -> Sort:
        for s in self.sorts:
            if s.name == name:
                return s
        raise KeyError(name)

    def func(self, name: str) -> FuncSym:
        for f in self.funcs:
            if f.name == name:
                return f
        raise KeyError(name)

    def pred(self, name: str) -> PredSym:
        for p in self.preds:
            if p.name == name:
                return p
        raise KeyError(name)

    def names(self) -> set[str]:
        return {x.name for x in (*self.sorts, *self.funcs, *self.preds)}

    def has(self, name: str) -> bool:
        return any(x.name == name for x in (*self.funcs, *self.preds))

    def union(self, other: "Signature") -> "Signature":
        def merge(a, b):
            seen = dict.fromkeys(a)
            seen.update(dict.fromkeys(b))
            return tuple(seen)

        return Signature(merge(self.sorts, other.sorts), merge(self.funcs, other.funcs),
                         merge(self.preds, other.preds))


@dataclass(frozen=True)
class InductiveDatatype:
    sort: Sort
    constructors: tuple[FuncSym, ...]

    def recursive_positions(self, ctor: FuncSym) -> list[int]:
        return [i for i, s in enumerate(ctor.domain) if s == self.sort]


@dataclass(frozen=True)
class Theory:
    signature: Signature
    axioms: tuple[NamedFormula, ...] = ()
    datatypes: tuple[InductiveDatatype, ...] = ()
    conjectures: tuple[NamedFormula, ...] = ()
    name: str = "theory"

    def axiom_formulas(self) -> list[Formula]:
        return [a.formula for a in self.axioms]

    def datatype(self, sort: Sort) -> InductiveDatatype | None:
        for dt in self.datatypes:
            if dt.sort == sort:
                return dt
        return None

    def conjecture(self, name: str) -> NamedFormula:
        for c in self.conjectures:
            if c.name == name:
                return c
        raise KeyError(name)


# ---------------------------------------------------------------- helpers


def sort_of(t: Term) -> Sort:
    if isinstance(t, Var):
        return t.sort
    return t.func.codomain


def conj(fs: Sequence[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``¬⊥``."""
    fs = list(fs)
    if not fs:
        return TOP
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(fs: Sequence[Formula]) -> Formula:
    fs = list(fs)
    if not fs:
        return BOTTOM
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def forall(vs: Iterable[Var], body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Forall(v, body)
    return body


def exists(vs: Iterable[Var], body: Formula) -> Formula:
    for v in reversed(list(vs)):
        body = Exists(v, body)
    return body


def neq(a: Term, b: Term) -> Formula:
    return Not(Eq(a, b))


def children(e: Expr) -> tuple:
    if isinstance(e, App):
        return e.args
    if isinstance(e, Atom):
        return e.args
    if isinstance(e, Eq):
        return (e.lhs, e.rhs)
    if isinstance(e, Not):
        return (e.arg,)
    if isinstance(e, BINARY):
        return (e.left, e.right)
    if isinstance(e, QUANTIFIERS):
        return (e.body,)
    return ()


def subexpressions(e: Expr) -> Iterator[Expr]:
    stack = [e]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(children(x))


def is_core(phi: Formula) -> bool:
    return all(not isinstance(x, (And, Implies, Iff, Exists)) for x in subexpressions(phi))


def height(e: Expr) -> int:
    """Tree height with variables, constants, ⊥ and nullary atoms at height 0."""
    kids = children(e)
    if not kids:
        return 0
    return 1 + max(height(k) for k in kids)


def all_vars(e: Expr) -> set[Var]:
    """Every variable occurring in ``e``, bound or free (including binders)."""
    out: set[Var] = set()
    for x in subexpressions(e):
        if isinstance(x, Var):
            out.add(x)
        elif isinstance(x, QUANTIFIERS):
            out.add(x.var)
    return out


def symbols(e: Expr) -> tuple[set[FuncSym], set[PredSym]]:
    fs, ps = set(), set()
    for x in subexpressions(e):
        if isinstance(x, App):
            fs.add(x.func)
        elif isinstance(x, Atom):
            ps.add(x.pred)
    return fs, ps


def free_vars(e: Expr) -> frozenset[Var]:
    if isinstance(e, Var):
        return frozenset((e,))
    if isinstance(e, QUANTIFIERS):
        return free_vars(e.body) - {e.var}
    out: frozenset[Var] = frozenset()
    for k in children(e):
        out |= free_vars(k)
    return out


def is_closed(phi: Formula) -> bool:
    return not free_vars(phi)


def fresh_var(sort: Sort, avoid: Iterable[Var]) -> Var:
    used = {v.index for v in avoid if v.sort == sort}
    i = 0
    while i in used:
        i += 1
    return Var(sort, i)


def substitute(e: Expr, x: Var, t: Term) -> Expr:
    """Capture-avoiding replacement of the free occurrences of ``x`` by ``t``.

    A binder that would capture a variable of ``t`` is renamed to the least
    index of its sort that is free in neither the body nor ``t``.
    """
    if sort_of(t) != x.sort:
        raise SortMismatch(f"cannot substitute {t} : {sort_of(t)} for {x} : {x.sort}")
    if x not in free_vars(e):
        return e
    return _subst(e, x, t, free_vars(t))


def _subst(e: Expr, x: Var, t: Term, fv_t: frozenset[Var]) -> Expr:
    if isinstance(e, Var):
        return t if e == x else e
    if isinstance(e, App):
        return App(e.func, tuple(_subst(a, x, t, fv_t) for a in e.args))
    if isinstance(e, Atom):
        return Atom(e.pred, tuple(_subst(a, x, t, fv_t) for a in e.args))
    if isinstance(e, Eq):
        return Eq(_subst(e.lhs, x, t, fv_t), _subst(e.rhs, x, t, fv_t))
    if isinstance(e, Not):
        return Not(_subst(e.arg, x, t, fv_t))
    if isinstance(e, BINARY):
        return type(e)(_subst(e.left, x, t, fv_t), _subst(e.right, x, t, fv_t))
    if isinstance(e, QUANTIFIERS):
        y, body = e.var, e.body
        if y == x:
            return e
        fv_body = free_vars(body)
        if x not in fv_body:
            return e
        if y in fv_t:
            y2 = fresh_var(y.sort, fv_body | fv_t | {x})
            body = _subst(body, y, y2, frozenset((y2,)))
            y = y2
        return type(e)(y, _subst(body, x, t, fv_t))
    return e  # Bottom


def universal_closure(phi: Formula) -> Formula:
    """Prefix ``∀`` for each free variable, ordered by (sort name, index)."""
    return forall(sorted(free_vars(phi)), phi)


def strip_foralls(phi: Formula) -> tuple[list[Var], Formula]:
    vs = []
    while isinstance(phi, Forall):
        vs.append(phi.var)
        phi = phi.body
    return vs, phi


def induction_instance(dt: "InductiveDatatype", phi: Formula, x: Var) -> Formula:
    """The instance of the structural induction scheme for ``dt`` at ``phi[x]``.

    ``(⋀_c ∀ȳ. (⋀_{i rec} phi[y_i]) → phi[c(ȳ)]) → ∀x. phi``
    """
    if x.sort != dt.sort:
        raise SortMismatch(f"induction variable {x} is not of sort {dt.sort}")
    avoid = set(all_vars(phi)) | {x}
    cases = []
    for c in dt.constructors:
        ys = []
        for d in c.domain:
            y = fresh_var(d, avoid)
            avoid.add(y)
            ys.append(y)
        concl = substitute(phi, x, c(*ys))
        hyps = [substitute(phi, x, ys[i]) for i in dt.recursive_positions(c)]
        cases.append(forall(ys, Implies(conj(hyps), concl) if hyps else concl))
    return Implies(conj(cases), Forall(x, phi))


def desugar(phi: Formula) -> Formula:
    """Rewrite into the core connectives ``⊥, ≈, P, ¬, ∨, ∀``."""
    if isinstance(phi, (Bottom, Eq, Atom)):
        return phi
    if isinstance(phi, Not):
        return Not(desugar(phi.arg))
    if isinstance(phi, Or):
        return Or(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, And):
        return Not(Or(Not(desugar(phi.left)), Not(desugar(phi.right))))
    if isinstance(phi, Implies):
        return Or(Not(desugar(phi.left)), desugar(phi.right))
    if isinstance(phi, Iff):
        return desugar(And(Implies(phi.left, phi.right), Implies(phi.right, phi.left)))
    if isinstance(phi, Forall):
        return Forall(phi.var, desugar(phi.body))
    if isinstance(phi, Exists):
        return Not(Forall(phi.var, Not(desugar(phi.body))))
    raise TypeError(f"not a formula: {phi!r}")


def alpha_normalize(phi: Formula) -> Formula:
    """Rename bound variables canonically so alpha-equivalent formulas compare equal.

    Binders get indices counting up from one past the largest index of any free
    variable of the same sort, in binding order.
    """
    free = free_vars(phi)
    start: dict[Sort, int] = {}
    for v in free:
        start[v.sort] = max(start.get(v.sort, 0), v.index + 1)
    return _alpha(phi, {}, dict(start))


def _alpha(e, ren: dict, nxt: dict):
    if isinstance(e, Var):
        return ren.get(e, e)
    if isinstance(e, App):
        return App(e.func, tuple(_alpha(a, ren, nxt) for a in e.args))
    if isinstance(e, Atom):
        return Atom(e.pred, tuple(_alpha(a, ren, nxt) for a in e.args))
    if isinstance(e, Eq):
        return Eq(_alpha(e.lhs, ren, nxt), _alpha(e.rhs, ren, nxt))
    if isinstance(e, Not):
        return Not(_alpha(e.arg, ren, nxt))
    if isinstance(e, BINARY):
        return type(e)(_alpha(e.left, ren, nxt), _alpha(e.right, ren, nxt))
    if isinstance(e, QUANTIFIERS):
        i = nxt.get(e.var.sort, 0)
        nxt[e.var.sort] = i + 1
        v = Var(e.var.sort, i)
        return type(e)(v, _alpha(e.body, {**ren, e.var: v}, nxt))
    return e


# ---------------------------------------------------------------- printing

_OPS = {Or: "|", And: "&", Implies: "->", Iff: "<->"}


def show(e) -> str:
    if isinstance(e, Var):
        return f"x{e.index}:{e.sort.name}"
    if isinstance(e, App):
        if not e.args:
            return e.func.name
        return f"{e.func.name}({', '.join(show(a) for a in e.args)})"
    if isinstance(e, Atom):
        if not e.args:
            return e.pred.name
        return f"{e.pred.name}({', '.join(show(a) for a in e.args)})"
    if isinstance(e, Bottom):
        return "false"
    if isinstance(e, Eq):
        return f"{show(e.lhs)} = {show(e.rhs)}"
    if isinstance(e, Not):
        return f"~({show(e.arg)})"
    if isinstance(e, BINARY):
        return f"({show(e.left)} {_OPS[type(e)]} {show(e.right)})"
    if isinstance(e, Forall):
        return f"(forall {show(e.var)}. {show(e.body)})"
    if isinstance(e, Exists):
        return f"(exists {show(e.var)}. {show(e.body)})"
    return repr(e)


# ---------------------------------------------------------------- well-formedness


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    location: str = ""

    def __str__(self) -> str:
        loc = f" at {self.location}" if self.location else ""
        return f"{self.kind}{loc}: {self.message}"


def check_signature(sig: Signature) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    seen: dict[str, str] = {}
    for kind, xs in (("sort", sig.sorts), ("function", sig.funcs), ("predicate", sig.preds)):
        for x in xs:
            if not x.name:
                out.append(Diagnostic("BadName", f"empty {kind} name"))
            if x.name in seen:
                out.append(Diagnostic("DuplicateName",
                                      f"{kind} {x.name!r} clashes with {seen[x.name]} {x.name!r}",
                                      x.name))
            seen[x.name] = kind
    declared = set(sig.sorts)
    for sym in (*sig.funcs, *sig.preds):
        srts = list(sym.domain) + ([sym.codomain] if isinstance(sym, FuncSym) else [])
        for s in srts:
            if s not in declared:
                out.append(Diagnostic("UnknownSort", f"{s.name!r} in the type of {sym.name!r}",
                                      sym.name))
    return out


def check_expr(e: Expr, sig: Signature, location: str = "") -> list[Diagnostic]:
    """Sort-check an expression against ``sig``."""
    funcs, preds, sorts = set(sig.funcs), set(sig.preds), set(sig.sorts)
    out: list[Diagnostic] = []

    def term(t, path):
        if isinstance(t, Var):
            if t.sort not in sorts:
                out.append(Diagnostic("UnknownSort", f"variable {t} has undeclared sort", path))
            return t.sort
        if not isinstance(t, App):
            out.append(Diagnostic("NotATerm", repr(t), path))
            return None
        if t.func not in funcs:
            out.append(Diagnostic("UnknownSymbol", t.func.name, path))
        args(t.func, t.args, path)
        return t.func.codomain

    def args(sym, ts, path):
        if len(ts) != len(sym.domain):
            out.append(Diagnostic("ArityMismatch",
                                  f"{sym.name} expects {len(sym.domain)} arguments, got {len(ts)}",
                                  path))
        for i, (a, s) in enumerate(zip(ts, sym.domain)):
            got = term(a, f"{path}/{sym.name}[{i}]")
            if got is not None and got != s:
                out.append(Diagnostic("SortMismatch",
                                      f"argument {i} of {sym.name}: expected {s}, got {got}",
                                      f"{path}/{sym.name}[{i}]"))

    def form(f, path):
        if isinstance(f, Bottom):
            return
        if isinstance(f, Eq):
            a = term(f.lhs, path + "/=[0]")
            b = term(f.rhs, path + "/=[1]")
            if a is not None and b is not None and a != b:
                out.append(Diagnostic("SortMismatch", f"equality between {a} and {b}", path))
        elif isinstance(f, Atom):
            if f.pred not in preds:
                out.append(Diagnostic("UnknownSymbol", f.pred.name, path))
            args(f.pred, f.args, path)
        elif isinstance(f, Not):
            form(f.arg, path + "/not")
        elif isinstance(f, BINARY):
            form(f.left, path + "/0")
            form(f.right, path + "/1")
        elif isinstance(f, QUANTIFIERS):
            if f.var.sort not in sorts:
                out.append(Diagnostic("UnknownSort", f"binder {f.var}", path))
            form(f.body, path + "/body")
        else:
            out.append(Diagnostic("NotAFormula", repr(f), path))

    if isinstance(e, (Var, App)):
        term(e, location)
    else:
        form(e, location)
    return out


def check_theory(theory: Theory) -> list[Diagnostic]:
    sig = theory.signature
    out = check_signature(sig)
    for group, items in (("axiom", theory.axioms), ("conjecture", theory.conjectures)):
        for nf in items:
            loc = f"{group} {nf.name}"
            out.extend(check_expr(nf.formula, sig, loc))
            fv = free_vars(nf.formula)
            if fv:
                out.append(Diagnostic("NotClosed", ", ".join(map(show, sorted(fv))), loc))
    funcs = set(sig.funcs)
    for dt in theory.datatypes:
        loc = f"datatype {dt.sort.name}"
        if dt.sort not in sig.sorts:
            out.append(Diagnostic("UnknownSort", dt.sort.name, loc))
        if not dt.constructors:
            out.append(Diagnostic("BadDatatype", "no constructors", loc))
        for c in dt.constructors:
            if c not in funcs:
                out.append(Diagnostic("UnknownSymbol", c.name, loc))
            if c.codomain != dt.sort:
                out.append(Diagnostic("BadDatatype",
                                      f"constructor {c.name} has codomain {c.codomain}", loc))
    return out


def reserved_names(sig: Signature) -> list[str]:
    return sorted(n for n in sig.names() if n.startswith(RESERVED_PREFIX))
