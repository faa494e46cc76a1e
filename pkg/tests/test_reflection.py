import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reflectind.errors import NoDatatypes, NotAnEncoding, NotCore, UnknownSymbol
from reflectind.logic import (BOTTOM, And, Eq, Exists, Forall, FuncSym, Iff, Implies, InductiveDatatype,
                              NamedFormula, Not, Signature, Sort, Theory, Var, check_theory,
                              neq, subexpressions)
from reflectind.mangle import SMTLIB, mangle
from reflectind.randomgen import random_closed_formulas, random_formula, random_signature
from reflectind.reflection import (datatype_axioms, godel_decode, godel_encode, induction_axiom,
                                   reflective_axioms, reflective_extension,
                                   reflective_inductive_extension, reflective_signature,
                                   true_at, truth_conjecture, variable_term_axioms)
from reflectind.semantics import holds
from reflectind.theories import StandardModel

from .conftest import NAT, x
from .strategies import formulas

# Clause table of the reflective language, one row per declaration schema,
# with how many instances each schema has: once, per sort, per function,
# per predicate.  Independent of the implementation's bookkeeping.
SORT_CLAUSES = [("Var", "sort"), ("Tm", "sort"), ("Form", "once"), ("Env", "once")]
SYMBOL_CLAUSES = [
    ("v0", "sort"), ("next", "sort"), ("inj", "sort"), ("quote f", "func"),
    ("quote P", "pred"), ("req", "sort"), ("false", "once"), ("or", "once"), ("not", "once"),
    ("all", "sort"), ("empty", "once"), ("push", "sort"), ("evalv", "sort"), ("eval", "sort"),
    ("sat", "once"),
]
# axiom schemata; "pair" counts ordered pairs of distinct sorts
AXIOM_CLAUSES = [
    ("evalv0", "sort"), ("evalv1", "sort"), ("evalv2", "pair"), ("evalvar", "sort"),
    ("evalf", "func"), ("eq", "sort"), ("pred", "pred"), ("bot", "once"), ("not", "once"),
    ("or", "once"), ("forall", "sort"),
]


def enumerate_clauses(table, n, k, m):
    mult = {"once": 1, "sort": n, "func": k, "pred": m, "pair": n * (n - 1)}
    return sum(mult[per] for _, per in table)


def counts(sig: Signature):
    rm = reflective_signature(sig)
    return (len(rm.new_sorts), len(rm.new_funcs) + len(rm.new_preds),
            len(reflective_axioms(rm)))


class TestSignatureArithmetic:
    def test_nat_theory(self, nat_sig):
        assert counts(nat_sig) == (4, 18, 13)
        assert (enumerate_clauses(SORT_CLAUSES, 1, 4, 1),
                enumerate_clauses(SYMBOL_CLAUSES, 1, 4, 1),
                enumerate_clauses(AXIOM_CLAUSES, 1, 4, 1)) == (4, 18, 13)

    def test_empty_signature(self):
        rm = reflective_signature(Signature())
        assert [s.name for s in rm.new_sorts] == ["rfl_Form", "rfl_Env"]
        names = sorted(f.name for f in (*rm.new_funcs, *rm.new_preds))
        assert names == ["rfl_empty", "rfl_false", "rfl_not", "rfl_or", "rfl_sat"]

    def test_two_bare_sorts(self):
        sig = Signature((Sort("a"), Sort("b")))
        assert counts(sig)[:2] == (6, 21)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 4), st.integers(0, 6), st.integers(0, 4), st.integers(0, 2**31))
    def test_random_signatures(self, n, k, m, seed):
        sig = random_signature(random.Random(seed), n, k, m)
        k, m = (k, m) if n else (0, 0)
        got = counts(sig)
        assert got[0] == enumerate_clauses(SORT_CLAUSES, n, k, m) == 2 * n + 2
        assert got[1] == enumerate_clauses(SYMBOL_CLAUSES, n, k, m) == 8 * n + k + m + 5
        assert got[2] == enumerate_clauses(AXIOM_CLAUSES, n, k, m) == n * n + 4 * n + k + m + 3

    def test_profiles_follow_the_clause_table(self, nat_sig):
        rm = reflective_signature(nat_sig)
        add = nat_sig.func("add")
        tm, form, env = rm.term_sort[NAT], rm.form_sort, rm.env_sort
        assert rm.reflected_func[add].domain == (tm, tm) and rm.reflected_func[add].codomain == tm
        assert rm.reflected_pred[nat_sig.pred("leq")].codomain == form
        assert rm.sat.domain == (env, form)
        assert rm.push[NAT].domain == (env, rm.var_sort[NAT], NAT)
        assert rm.evalv[NAT].domain == (env, rm.var_sort[NAT]) and rm.evalv[NAT].codomain == NAT
        assert rm.rforall[NAT].domain == (rm.var_sort[NAT], form)
        assert rm.inj[NAT].domain == (rm.var_sort[NAT],) and rm.inj[NAT].codomain == tm

    def test_generated_names_are_disjoint(self, ind_theory):
        rm = reflective_signature(ind_theory.signature)
        gen = [x.name for x in (*rm.new_sorts, *rm.new_funcs, *rm.new_preds)]
        assert len(set(gen)) == len(gen)
        assert not set(gen) & ind_theory.signature.names()

    def test_mangled_names(self, nat_sig):
        rm = reflective_signature(nat_sig)
        add = nat_sig.func("add")
        assert mangle(rm.reflected_func[add].name, SMTLIB) == "rfl_q_add"
        assert mangle(rm.sat.name, SMTLIB) == "rfl_sat"
        expect = {rm.var_sort[NAT]: "rfl_Varnat", rm.term_sort[NAT]: "rfl_Tmnat",
                  rm.form_sort: "rfl_Form", rm.env_sort: "rfl_Env"}
        assert {s: s.name for s in expect} == expect
        assert [f.name for f in (rm.req[NAT], rm.rbot, rm.ror, rm.rnot, rm.rforall[NAT],
                                 rm.v0[NAT], rm.next[NAT], rm.inj[NAT], rm.empty,
                                 rm.push[NAT], rm.evalv[NAT], rm.eval[NAT])] == [
            "rfl_eq_nat", "rfl_false", "rfl_or", "rfl_not", "rfl_all_nat", "rfl_v0_nat",
            "rfl_next_nat", "rfl_inj_nat", "rfl_empty", "rfl_push_nat", "rfl_evalv_nat",
            "rfl_eval_nat"]


class TestAxioms:
    def test_eval_f_for_add(self, nat_sig):
        rm = reflective_signature(nat_sig)
        ax = {a.name: a.formula for a in reflective_axioms(rm)}["ax_evalf_add"]
        add = nat_sig.func("add")
        E, T = rm.env_sort, rm.term_sort[NAT]
        e, t1, t2 = Var(E, 0), Var(T, 0), Var(T, 1)
        ev = rm.eval[NAT]
        body = Eq(ev(e, rm.reflected_func[add](t1, t2)), add(ev(e, t1), ev(e, t2)))
        assert ax == Forall(e, Forall(t1, Forall(t2, body)))

    def test_forall_axiom(self, nat_sig):
        rm = reflective_signature(nat_sig)
        ax = {a.name: a.formula for a in reflective_axioms(rm)}["ax_forall_nat"]
        e, v, phi, xn = Var(rm.env_sort, 0), Var(rm.var_sort[NAT], 0), Var(rm.form_sort, 0), x(0)
        body = Iff(rm.sat(e, rm.rforall[NAT](v, phi)), Forall(xn, rm.sat(rm.push[NAT](e, v, xn), phi)))
        # closure binds by sort name: rfl_Env, rfl_Form, rfl_Varnat
        assert ax == Forall(e, Forall(phi, Forall(v, body)))

    def test_variable_term_axioms(self, nat_sig):
        rm = reflective_signature(nat_sig)
        vs = rm.var_sort[NAT]
        a, b = Var(vs, 0), Var(vs, 1)
        nxt = rm.next[NAT]
        got = [a_.formula for a_ in variable_term_axioms(rm)]
        assert got == [Forall(a, Forall(b, Implies(Eq(nxt(a), nxt(b)), Eq(a, b)))),
                       Forall(a, neq(rm.v0[NAT](), nxt(a)))]
        assert variable_term_axioms(rm, enabled=False) == []
        two = reflective_signature(Signature((Sort("a"), Sort("b"))))
        assert len(variable_term_axioms(two)) == 4

    def test_all_generated_symbols_are_declared(self, ind_theory):
        rt = reflective_inductive_extension(ind_theory)
        assert check_theory(rt.theory) == []


class TestGodel:
    def test_variable(self, nat_sig):
        rm = reflective_signature(nat_sig)
        assert godel_encode(x(0), rm) == rm.inj[NAT](rm.v0[NAT]())

    def test_bottom(self, nat_sig):
        rm = reflective_signature(nat_sig)
        assert godel_encode(BOTTOM, rm) == rm.rbot()
        assert godel_decode(rm.rbot(), rm) == BOTTOM

    def test_quantifier(self, nat_sig):
        rm = reflective_signature(nat_sig)
        v1 = rm.next[NAT](rm.v0[NAT]())
        inj = rm.inj[NAT]
        want = rm.rforall[NAT](v1, rm.req[NAT](inj(v1), inj(v1)))
        phi = Forall(x(1), Eq(x(1), x(1)))
        assert godel_encode(phi, rm) == want
        assert godel_decode(want, rm) == phi

    def test_decode_variable(self, nat_sig):
        rm = reflective_signature(nat_sig)
        assert godel_decode(rm.inj[NAT](rm.next[NAT](rm.v0[NAT]())), rm) == x(1)

    def test_errors(self, nat_sig):
        rm = reflective_signature(nat_sig)
        with pytest.raises(NotCore):
            godel_encode(Exists(x(0), BOTTOM), rm)
        with pytest.raises(NotCore):
            godel_encode(And(BOTTOM, BOTTOM), rm)
        with pytest.raises(UnknownSymbol):
            godel_encode(Eq(Var(Sort("bool"), 0), Var(Sort("bool"), 0)), rm)
        with pytest.raises(NotAnEncoding):
            godel_decode(nat_sig.func("zero")(), rm)
        with pytest.raises(NotAnEncoding):
            godel_decode(rm.inj[NAT](Var(rm.var_sort[NAT], 0)), rm)

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_round_trip(self, nat_sig, data):
        rm = reflective_signature(nat_sig)
        phi = data.draw(formulas(nat_sig, core=True, max_index=4, max_leaves=10))
        code = godel_encode(phi, rm)
        assert godel_decode(code, rm) == phi
        assert godel_encode(godel_decode(code, rm), rm) == code

    def test_injective_on_random_corpus(self, list_theory):
        sig = list_theory.signature
        rm = reflective_signature(sig)
        phis = set(random_closed_formulas(11, sig, 400, 5))
        phis |= {random_formula(random.Random(i), sig, 5, [x(0)]) for i in range(200)}
        codes = {godel_encode(p, rm) for p in phis}
        assert len(codes) == len(phis)


class TestTruthConjecture:
    def test_reflexivity(self, nat_sig):
        rm = reflective_signature(nat_sig)
        v0 = rm.v0[NAT]()
        inj = rm.inj[NAT]
        want = rm.sat(rm.empty(), rm.rforall[NAT](v0, rm.req[NAT](inj(v0), inj(v0))))
        assert truth_conjecture(Forall(x(0), Eq(x(0), x(0))), rm) == want

    def test_bottom(self, nat_sig):
        rm = reflective_signature(nat_sig)
        assert truth_conjecture(BOTTOM, rm) == rm.sat(rm.empty(), rm.rbot())

    def test_desugars_first(self, nat_sig):
        rm = reflective_signature(nat_sig)
        phi = Exists(x(0), BOTTOM)
        assert truth_conjecture(phi, rm) == truth_conjecture(Not(Forall(x(0), Not(BOTTOM))), rm)


class TestInduction:
    def test_nat(self, nat_theory):
        rm = reflective_signature(nat_theory.signature)
        dt = nat_theory.datatypes[0]
        zero, s = nat_theory.signature.func("zero"), nat_theory.signature.func("s")
        phi, n = Var(rm.form_sort, 0), x(0)
        base = true_at(rm, NAT, phi, zero())
        step = Forall(n, Implies(true_at(rm, NAT, phi, n), true_at(rm, NAT, phi, s(n))))
        want = Forall(phi, Implies(And(base, step), Forall(n, true_at(rm, NAT, phi, n))))
        assert induction_axiom(dt, rm) == want
        # the slot is v0
        assert true_at(rm, NAT, phi, n).args[0] == rm.push[NAT](rm.empty(), rm.v0[NAT](), n)

    def test_list(self, list_theory):
        sig = list_theory.signature
        lst = sig.sort("List_nat")
        rm = reflective_signature(sig)
        dt = list_theory.datatype(lst)
        nil, cons = sig.func("nil_nat"), sig.func("cons_nat")
        phi, xs, el = Var(rm.form_sort, 0), Var(lst, 0), x(0)
        T = lambda t: true_at(rm, lst, phi, t)  # noqa: E731
        cases = And(T(nil()), Forall(el, Forall(xs, Implies(T(xs), T(cons(el, xs))))))
        assert induction_axiom(dt, rm) == Forall(phi, Implies(cases, Forall(xs, T(xs))))

    def test_single_nullary_constructor(self):
        u = Sort("unit")
        c = FuncSym("c", (), u)
        rm = reflective_signature(Signature((u,), (c,)))
        phi, y = Var(rm.form_sort, 0), Var(u, 0)
        got = induction_axiom(InductiveDatatype(u, (c,)), rm)
        assert got == Forall(phi, Implies(true_at(rm, u, phi, c()), Forall(y, true_at(rm, u, phi, y))))


class TestDatatypeAxioms:
    def test_nat(self, nat_theory):
        zero, s = nat_theory.signature.func("zero"), nat_theory.signature.func("s")
        got = [a.formula for a in datatype_axioms(nat_theory.datatypes[0])]
        assert got == [Forall(x(0), neq(zero(), s(x(0)))),
                       Forall(x(0), Forall(x(1), Implies(Eq(s(x(0)), s(x(1))), Eq(x(0), x(1)))))]

    def test_nullary_only(self):
        u = Sort("unit")
        assert datatype_axioms(InductiveDatatype(u, (FuncSym("c", (), u),))) == []

    def test_list_shape_and_truth(self, list_theory):
        lst = list_theory.signature.sort("List_nat")
        axs = datatype_axioms(list_theory.datatype(lst))
        assert [a.name for a in axs] == ["ax_disj_List_nat_nil_nat_cons_nat", "ax_inj_List_nat_cons_nat"]
        inj = axs[1].formula
        while isinstance(inj, Forall):
            inj = inj.body
        assert isinstance(inj.right, And)

    def test_hold_in_standard_model(self, list_theory):
        m = StandardModel(list_theory)
        for dt in list_theory.datatypes:
            for a in datatype_axioms(dt):
                assert holds(m, {}, a.formula), a.name


class TestExtensions:
    def test_axiom_count(self, nat_theory):
        rt = reflective_extension(nat_theory)
        assert len(rt.theory.axioms) == 6 + 13 + 2

    def test_empty_theory(self):
        rt = reflective_extension(Theory(Signature()))
        assert [a.name for a in rt.theory.axioms] == ["ax_bot", "ax_not", "ax_or"]

    def test_restrict_is_identity(self, nat_theory, ind_theory):
        assert reflective_extension(nat_theory).restrict() == nat_theory
        assert reflective_inductive_extension(ind_theory).restrict() == ind_theory

    def test_inductive_nat(self, nat_theory):
        rt = reflective_inductive_extension(nat_theory)
        extra = [a.name for a in rt.generated_axioms][-3:]
        assert extra == ["ax_ind_nat", "ax_disj_nat_zero_s", "ax_inj_nat_s"]

    def test_deduplicates_existing_datatype_axioms(self, nat_theory):
        s, zero = nat_theory.signature.func("s"), nat_theory.signature.func("zero")
        # alpha-variant of the disjointness axiom, already present in the base
        present = NamedFormula("q1", Forall(x(5), Not(Eq(zero(), s(x(5))))))
        base = Theory(nat_theory.signature, nat_theory.axioms + (present,),
                      nat_theory.datatypes, (), "Q")
        names = [a.name for a in reflective_inductive_extension(base).generated_axioms]
        assert "ax_disj_nat_zero_s" not in names
        assert names.count("ax_ind_nat") == 1 and "ax_inj_nat_s" in names

    def test_two_datatypes(self, list_theory):
        rt = reflective_inductive_extension(list_theory)
        assert len(rt.induction_axioms) == 2
        groups = {a.name.split("_")[2] for a in rt.generated_axioms
                  if a.name.startswith(("ax_disj_", "ax_inj_"))}
        assert groups == {"nat", "List"}

    def test_datatype_free(self, nat_sig):
        with pytest.raises(NoDatatypes):
            reflective_inductive_extension(Theory(nat_sig))

    def test_generated_formulas_only_use_declared_symbols(self, list_theory):
        rt = reflective_inductive_extension(list_theory)
        sig = rt.theory.signature
        declared = set(sig.funcs) | set(sig.preds)
        for a in rt.generated_axioms:
            for e in subexpressions(a.formula):
                head = getattr(e, "func", None) or getattr(e, "pred", None)
                assert head is None or head in declared
