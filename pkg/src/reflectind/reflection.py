"""Reflective extension of a theory: syntax-as-terms, a satisfaction predicate,
Gödel quoting, and the single-formula reflective induction axiom per datatype.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import (NoDatatypes, NotADatatype, NotAnEncoding, NotCore, ReservedPrefix,
                     TheoryError, UnknownSymbol)
from .logic import (BOTTOM, App, Atom, Bottom, Eq, Forall, FuncSym, Iff, Implies,
                    InductiveDatatype, NamedFormula, Not, Or, PredSym, Signature, Sort,
                    Theory, Var, alpha_normalize, check_theory, conj, desugar, forall, neq,
                    reserved_names, sort_of, universal_closure)


@dataclass
class ReflectionMap:
    base: Signature
    var_sort: dict[Sort, Sort]
    term_sort: dict[Sort, Sort]
    form_sort: Sort
    env_sort: Sort
    v0: dict[Sort, FuncSym]
    next: dict[Sort, FuncSym]
    inj: dict[Sort, FuncSym]
    reflected_func: dict[FuncSym, FuncSym]
    reflected_pred: dict[PredSym, FuncSym]
    req: dict[Sort, FuncSym]
    rbot: FuncSym
    ror: FuncSym
    rnot: FuncSym
    rforall: dict[Sort, FuncSym]
    empty: FuncSym
    push: dict[Sort, FuncSym]
    evalv: dict[Sort, FuncSym]
    eval: dict[Sort, FuncSym]
    sat: PredSym
    # generated symbol -> (role, base sort or base symbol); filled in __post_init__
    roles: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        r = self.roles
        for s in self.base.sorts:
            r[self.v0[s]] = ("v0", s)
            r[self.next[s]] = ("next", s)
            r[self.inj[s]] = ("inj", s)
            r[self.req[s]] = ("req", s)
            r[self.rforall[s]] = ("rforall", s)
            r[self.push[s]] = ("push", s)
            r[self.evalv[s]] = ("evalv", s)
            r[self.eval[s]] = ("eval", s)
        for f, q in self.reflected_func.items():
            r[q] = ("qfunc", f)
        for p, q in self.reflected_pred.items():
            r[q] = ("qpred", p)
        r[self.rbot] = ("rbot", None)
        r[self.ror] = ("ror", None)
        r[self.rnot] = ("rnot", None)
        r[self.empty] = ("empty", None)
        self._unquote = {q: f for f, q in self.reflected_func.items()}
        self._unquote_pred = {q: p for p, q in self.reflected_pred.items()}

    @property
    def new_sorts(self) -> tuple[Sort, ...]:
        out = []
        for s in self.base.sorts:
            out += [self.var_sort[s], self.term_sort[s]]
        return tuple(out) + (self.form_sort, self.env_sort)

    @property
    def new_funcs(self) -> tuple[FuncSym, ...]:
        out: list[FuncSym] = []
        for s in self.base.sorts:
            out += [self.v0[s], self.next[s], self.inj[s]]
        out += [self.reflected_func[f] for f in self.base.funcs]
        out += [self.reflected_pred[p] for p in self.base.preds]
        out += [self.req[s] for s in self.base.sorts]
        out += [self.rbot, self.ror, self.rnot]
        out += [self.rforall[s] for s in self.base.sorts]
        out.append(self.empty)
        for s in self.base.sorts:
            out += [self.push[s], self.evalv[s], self.eval[s]]
        return tuple(out)

    @property
    def new_preds(self) -> tuple[PredSym, ...]:
        return (self.sat,)

    @property
    def generated(self) -> Signature:
        return Signature(self.new_sorts, self.new_funcs, self.new_preds)

    @property
    def signature(self) -> Signature:
        return self.base.union(self.generated)

    def var_term(self, sort: Sort, index: int):
        """``v_index`` as ``next^index(v0)``."""
        t = self.v0[sort]()
        for _ in range(index):
            t = self.next[sort](t)
        return t

    def base_sort_of_var_sort(self, s: Sort) -> Sort:
        for b, v in self.var_sort.items():
            if v == s:
                return b
        raise KeyError(s)


def reflective_signature(sig: Signature) -> ReflectionMap:
    bad = reserved_names(sig)
    if bad:
        raise ReservedPrefix(bad[0])
    form = Sort("rfl_Form")
    env = Sort("rfl_Env")
    var_sort = {s: Sort(f"rfl_Var{s.name}") for s in sig.sorts}
    term_sort = {s: Sort(f"rfl_Tm{s.name}") for s in sig.sorts}
    m = ReflectionMap(
        base=sig,
        var_sort=var_sort,
        term_sort=term_sort,
        form_sort=form,
        env_sort=env,
        v0={s: FuncSym(f"rfl_v0_{s.name}", (), var_sort[s]) for s in sig.sorts},
        next={s: FuncSym(f"rfl_next_{s.name}", (var_sort[s],), var_sort[s]) for s in sig.sorts},
        inj={s: FuncSym(f"rfl_inj_{s.name}", (var_sort[s],), term_sort[s]) for s in sig.sorts},
        reflected_func={f: FuncSym(f"rfl_q_{f.name}", tuple(term_sort[d] for d in f.domain),
                                   term_sort[f.codomain]) for f in sig.funcs},
        reflected_pred={p: FuncSym(f"rfl_q_{p.name}", tuple(term_sort[d] for d in p.domain), form)
                        for p in sig.preds},
        req={s: FuncSym(f"rfl_eq_{s.name}", (term_sort[s], term_sort[s]), form) for s in sig.sorts},
        rbot=FuncSym("rfl_false", (), form),
        ror=FuncSym("rfl_or", (form, form), form),
        rnot=FuncSym("rfl_not", (form,), form),
        rforall={s: FuncSym(f"rfl_all_{s.name}", (var_sort[s], form), form) for s in sig.sorts},
        empty=FuncSym("rfl_empty", (), env),
        push={s: FuncSym(f"rfl_push_{s.name}", (env, var_sort[s], s), env) for s in sig.sorts},
        evalv={s: FuncSym(f"rfl_evalv_{s.name}", (env, var_sort[s]), s) for s in sig.sorts},
        eval={s: FuncSym(f"rfl_eval_{s.name}", (env, term_sort[s]), s) for s in sig.sorts},
        sat=PredSym("rfl_sat", (env, form)),
    )
    names = [x.name for x in (*m.new_sorts, *m.new_funcs, *m.new_preds)]
    assert len(names) == len(set(names)), "generated names collide"
    return m


class _Vars:
    """Hands out distinct variables per sort within one axiom."""

    def __init__(self) -> None:
        self.count: dict[Sort, int] = {}

    def __call__(self, sort: Sort) -> Var:
        i = self.count.get(sort, 0)
        self.count[sort] = i + 1
        return Var(sort, i)


def _ax(name: str, body) -> NamedFormula:
    return NamedFormula(name, universal_closure(body))


def reflective_axioms(m: ReflectionMap) -> list[NamedFormula]:
    """Closures of every instance of the evaluation and satisfaction schemata."""
    out: list[NamedFormula] = []
    sorts = m.base.sorts
    E = m.env_sort
    for s in sorts:
        V = _Vars()
        e, v, x = V(E), V(m.var_sort[s]), V(s)
        out.append(_ax(f"ax_evalv0_{s.name}",
                       Eq(m.evalv[s](m.push[s](e, v, x), v), x)))
        V = _Vars()
        e, v, v1, x = V(E), V(m.var_sort[s]), V(m.var_sort[s]), V(s)
        out.append(_ax(f"ax_evalv1_{s.name}",
                       Implies(neq(v, v1),
                               Eq(m.evalv[s](m.push[s](e, v1, x), v), m.evalv[s](e, v)))))
    for s in sorts:
        for t in sorts:
            if s == t:
                continue
            V = _Vars()
            e, w, x, v = V(E), V(m.var_sort[t]), V(t), V(m.var_sort[s])
            out.append(_ax(f"ax_evalv2_{s.name}_{t.name}",
                           Eq(m.evalv[s](m.push[t](e, w, x), v), m.evalv[s](e, v))))
    for s in sorts:
        V = _Vars()
        e, v = V(E), V(m.var_sort[s])
        out.append(_ax(f"ax_evalvar_{s.name}", Eq(m.eval[s](e, m.inj[s](v)), m.evalv[s](e, v))))
    for f in m.base.funcs:
        V = _Vars()
        e = V(E)
        ts = [V(m.term_sort[d]) for d in f.domain]
        lhs = m.eval[f.codomain](e, m.reflected_func[f](*ts))
        rhs = f(*[m.eval[d](e, t) for d, t in zip(f.domain, ts)])
        out.append(_ax(f"ax_evalf_{f.name}", Eq(lhs, rhs)))
    for s in sorts:
        V = _Vars()
        e, a, b = V(E), V(m.term_sort[s]), V(m.term_sort[s])
        out.append(_ax(f"ax_eq_{s.name}",
                       Iff(m.sat(e, m.req[s](a, b)), Eq(m.eval[s](e, a), m.eval[s](e, b)))))
    for p in m.base.preds:
        V = _Vars()
        e = V(E)
        ts = [V(m.term_sort[d]) for d in p.domain]
        out.append(_ax(f"ax_pred_{p.name}",
                       Iff(m.sat(e, m.reflected_pred[p](*ts)),
                           p(*[m.eval[d](e, t) for d, t in zip(p.domain, ts)]))))
    V = _Vars()
    e, phi, psi = V(E), V(m.form_sort), V(m.form_sort)
    out.append(_ax("ax_bot", Iff(m.sat(e, m.rbot()), BOTTOM)))
    out.append(_ax("ax_not", Iff(m.sat(e, m.rnot(phi)), Not(m.sat(e, phi)))))
    out.append(_ax("ax_or", Iff(m.sat(e, m.ror(phi, psi)), Or(m.sat(e, phi), m.sat(e, psi)))))
    for s in sorts:
        V = _Vars()
        e, v, phi, x = V(E), V(m.var_sort[s]), V(m.form_sort), V(s)
        out.append(_ax(f"ax_forall_{s.name}",
                       Iff(m.sat(e, m.rforall[s](v, phi)),
                           Forall(x, m.sat(m.push[s](e, v, x), phi)))))
    return out


def variable_term_axioms(m: ReflectionMap, enabled: bool = True) -> list[NamedFormula]:
    """Free-constructor axioms for the variable sorts (``next`` injective, ``v0`` not a successor)."""
    if not enabled:
        return []
    out = []
    for s in m.base.sorts:
        vs = m.var_sort[s]
        x, y = Var(vs, 0), Var(vs, 1)
        nxt = m.next[s]
        out.append(_ax(f"ax_nextinj_{s.name}", Implies(Eq(nxt(x), nxt(y)), Eq(x, y))))
        out.append(_ax(f"ax_nextdisj_{s.name}", neq(m.v0[s](), nxt(x))))
    return out


# ---------------------------------------------------------------- Gödel quoting


def godel_encode(e, m: ReflectionMap):
    if isinstance(e, Var):
        if e.sort not in m.inj:
            raise UnknownSymbol(e.sort.name)
        return m.inj[e.sort](m.var_term(e.sort, e.index))
    if isinstance(e, App):
        q = m.reflected_func.get(e.func)
        if q is None:
            raise UnknownSymbol(e.func.name)
        return q(*[godel_encode(a, m) for a in e.args])
    if isinstance(e, Bottom):
        return m.rbot()
    if isinstance(e, Eq):
        s = sort_of(e.lhs)
        if s not in m.req:
            raise UnknownSymbol(s.name)
        return m.req[s](godel_encode(e.lhs, m), godel_encode(e.rhs, m))
    if isinstance(e, Atom):
        q = m.reflected_pred.get(e.pred)
        if q is None:
            raise UnknownSymbol(e.pred.name)
        return q(*[godel_encode(a, m) for a in e.args])
    if isinstance(e, Not):
        return m.rnot(godel_encode(e.arg, m))
    if isinstance(e, Or):
        return m.ror(godel_encode(e.left, m), godel_encode(e.right, m))
    if isinstance(e, Forall):
        s = e.var.sort
        if s not in m.rforall:
            raise UnknownSymbol(s.name)
        return m.rforall[s](m.var_term(s, e.var.index), godel_encode(e.body, m))
    raise NotCore(f"{type(e).__name__} is not a core connective: {e}")


def _decode_var(t, sort: Sort, m: ReflectionMap) -> Var:
    i = 0
    while isinstance(t, App) and t.func == m.next[sort]:
        t = t.args[0]
        i += 1
    if not (isinstance(t, App) and t.func == m.v0[sort]):
        raise NotAnEncoding(t)
    return Var(sort, i)


def godel_decode(t, m: ReflectionMap):
    if not isinstance(t, App):
        raise NotAnEncoding(t)
    role = m.roles.get(t.func)
    if role is None:
        raise NotAnEncoding(t)
    kind, what = role
    if kind == "inj":
        return _decode_var(t.args[0], what, m)
    if kind == "qfunc":
        return what(*[godel_decode(a, m) for a in t.args])
    if kind == "qpred":
        return what(*[godel_decode(a, m) for a in t.args])
    if kind == "req":
        return Eq(godel_decode(t.args[0], m), godel_decode(t.args[1], m))
    if kind == "rbot":
        return BOTTOM
    if kind == "rnot":
        return Not(godel_decode(t.args[0], m))
    if kind == "ror":
        return Or(godel_decode(t.args[0], m), godel_decode(t.args[1], m))
    if kind == "rforall":
        return Forall(_decode_var(t.args[0], what, m), godel_decode(t.args[1], m))
    raise NotAnEncoding(t)


def truth_conjecture(phi, m: ReflectionMap):
    """``empty ⊨̇ ⌈phi⌉`` for the desugared ``phi``."""
    return m.sat(m.empty(), godel_encode(desugar(phi), m))


# ---------------------------------------------------------------- induction


def _check_datatype(dt: InductiveDatatype) -> None:
    if not dt.constructors:
        raise NotADatatype(f"{dt.sort.name} has no constructors")
    for c in dt.constructors:
        if c.codomain != dt.sort:
            raise NotADatatype(f"constructor {c.name} has codomain {c.codomain}, not {dt.sort}")


def true_at(m: ReflectionMap, sort: Sort, phi, n):
    """``True[phi, n]``: phi holds with its slot variable ``v0`` bound to ``n``."""
    return m.sat(m.push[sort](m.empty(), m.v0[sort](), n), phi)


def induction_axiom(dt: InductiveDatatype, m: ReflectionMap):
    _check_datatype(dt)
    tau = dt.sort
    if tau not in m.push:
        raise UnknownSymbol(tau.name)
    phi = Var(m.form_sort, 0)
    cases = []
    for c in dt.constructors:
        V = _Vars()
        xs = [V(d) for d in c.domain]
        concl = true_at(m, tau, phi, c(*xs))
        hyps = [true_at(m, tau, phi, xs[i]) for i in dt.recursive_positions(c)]
        body = Implies(conj(hyps), concl) if hyps else concl
        cases.append(forall(xs, body))
    n = Var(tau, 0)
    return Forall(phi, Implies(conj(cases), Forall(n, true_at(m, tau, phi, n))))


def datatype_axioms(dt: InductiveDatatype) -> list[NamedFormula]:
    """Pairwise constructor disjointness and argumentwise injectivity."""
    _check_datatype(dt)
    out = []
    cs = dt.constructors
    tau = dt.sort.name
    for i, c in enumerate(cs):
        for d in cs[i + 1:]:
            V = _Vars()
            xs = [V(s) for s in c.domain]
            ys = [V(s) for s in d.domain]
            out.append(_ax(f"ax_disj_{tau}_{c.name}_{d.name}", neq(c(*xs), d(*ys))))
    for c in cs:
        if not c.domain:
            continue
        V = _Vars()
        xs = [V(s) for s in c.domain]
        ys = [V(s) for s in c.domain]
        out.append(_ax(f"ax_inj_{tau}_{c.name}",
                       Implies(Eq(c(*xs), c(*ys)), conj([Eq(a, b) for a, b in zip(xs, ys)]))))
    return out


# ---------------------------------------------------------------- extensions


@dataclass(frozen=True)
class ReflectiveTheory:
    theory: Theory
    map: ReflectionMap
    generated_axioms: tuple[NamedFormula, ...]

    def restrict(self) -> Theory:
        """Drop generated symbols and axioms, recovering the base theory."""
        gen = {a.name for a in self.generated_axioms}
        return replace(self.theory, signature=self.map.base,
                       axioms=tuple(a for a in self.theory.axioms if a.name not in gen))

    @property
    def induction_axioms(self) -> list[NamedFormula]:
        return [a for a in self.generated_axioms if a.name.startswith("ax_ind_")]


def _validated(theory: Theory) -> None:
    bad = reserved_names(theory.signature)
    if bad:
        raise ReservedPrefix(bad[0])
    diags = check_theory(theory)
    if diags:
        raise TheoryError(diags)


def reflective_extension(theory: Theory, var_axioms: bool = True) -> ReflectiveTheory:
    _validated(theory)
    m = reflective_signature(theory.signature)
    gen = tuple(reflective_axioms(m) + variable_term_axioms(m, var_axioms))
    ext = replace(theory, signature=m.signature, axioms=theory.axioms + gen)
    return ReflectiveTheory(ext, m, gen)


def reflective_inductive_extension(theory: Theory, var_axioms: bool = True) -> ReflectiveTheory:
    if not theory.datatypes:
        raise NoDatatypes(f"theory {theory.name!r} declares no datatypes")
    rt = reflective_extension(theory, var_axioms)
    m = rt.map
    seen = {alpha_normalize(a.formula) for a in theory.axioms}
    extra: list[NamedFormula] = []
    for dt in theory.datatypes:
        extra.append(NamedFormula(f"ax_ind_{dt.sort.name}", induction_axiom(dt, m)))
        for ax in datatype_axioms(dt):
            key = alpha_normalize(ax.formula)
            if key in seen:
                continue
            seen.add(key)
            extra.append(ax)
    gen = rt.generated_axioms + tuple(extra)
    ext = replace(rt.theory, axioms=rt.theory.axioms + tuple(extra))
    return ReflectiveTheory(ext, m, gen)
