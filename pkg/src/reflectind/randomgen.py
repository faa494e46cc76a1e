"""Seeded random terms, core formulas and signatures for bounded checks."""

from __future__ import annotations

import random

from .logic import (BOTTOM, App, Atom, Eq, Forall, FuncSym, Not, Or, PredSym, Signature,
                    Sort, Var, height)


def _ground_ok(sig: Signature, sort: Sort) -> bool:
    return any(f.codomain == sort and not f.domain for f in sig.funcs)


def random_term(rng: random.Random, sig: Signature, sort: Sort, h: int, scope: list[Var]):
    """A term of ``sort`` with height ≤ ``h`` whose variables come from ``scope``."""
    vs = [v for v in scope if v.sort == sort]
    consts = [f for f in sig.funcs if f.codomain == sort and not f.domain]
    leaves = [*vs, *(f() for f in consts)]
    funcs = [f for f in sig.funcs if f.codomain == sort and f.domain]
    if h > 0 and funcs and (not leaves or rng.random() < 0.5):
        f = rng.choice(funcs)
        return App(f, tuple(random_term(rng, sig, d, h - 1, scope) for d in f.domain))
    if not leaves:
        raise ValueError(f"no term of sort {sort} fits")
    return rng.choice(leaves)


def random_formula(rng: random.Random, sig: Signature, h: int, scope: list[Var] = (),
                   max_index: int = 2):
    """A core formula of height ≤ ``h`` whose free variables lie in ``scope``.

    Bound variables get indices ≤ ``max_index``.
    """
    scope = list(scope)
    sorts_with_terms = [s for s in sig.sorts
                        if _ground_ok(sig, s) or any(v.sort == s for v in scope)]
    preds = [p for p in sig.preds
             if all(d in sorts_with_terms for d in p.domain)]
    choices = ["atom"]
    if h > 0:
        choices += ["not", "or", "forall"]
    kind = rng.choice(choices) if rng.random() < 0.75 or h == 0 else "atom"
    if kind == "not":
        return Not(random_formula(rng, sig, h - 1, scope, max_index))
    if kind == "or":
        return Or(random_formula(rng, sig, h - 1, scope, max_index),
                  random_formula(rng, sig, h - 1, scope, max_index))
    if kind == "forall" and sig.sorts:
        s = rng.choice(sig.sorts)
        v = Var(s, rng.randint(0, max_index))
        inner = [w for w in scope if w != v] + [v]
        return Forall(v, random_formula(rng, sig, h - 1, inner, max_index))
    # atoms need h ≥ 1 unless they are ⊥ or nullary
    if h == 0:
        nullary = [p for p in sig.preds if not p.domain]
        return Atom(rng.choice(nullary), ()) if nullary and rng.random() < 0.5 else BOTTOM
    options = [("eq", s) for s in sorts_with_terms] + [("pred", p) for p in preds]
    if not options or rng.random() < 0.05:
        return BOTTOM
    tag, what = rng.choice(options)
    if tag == "eq":
        return Eq(random_term(rng, sig, what, h - 1, scope),
                  random_term(rng, sig, what, h - 1, scope))
    return Atom(what, tuple(random_term(rng, sig, d, h - 1, scope) for d in what.domain))


def random_closed_formulas(seed: int, sig: Signature, n: int, h: int, max_index: int = 2):
    rng = random.Random(seed)
    return [random_formula(rng, sig, h, (), max_index) for _ in range(n)]


def random_signature(rng: random.Random, n: int, k: int, m: int) -> Signature:
    """``n`` sorts, ``k`` functions and ``m`` predicates with random profiles."""
    sorts = tuple(Sort(f"s{i}") for i in range(n))
    if not sorts:
        return Signature((), (), ())
    funcs = tuple(FuncSym(f"f{i}", tuple(rng.choice(sorts) for _ in range(rng.randint(0, 3))),
                          rng.choice(sorts)) for i in range(k))
    preds = tuple(PredSym(f"p{i}", tuple(rng.choice(sorts) for _ in range(rng.randint(0, 3))))
                  for i in range(m))
    return Signature(sorts, funcs, preds)


def fits(phi, depth: int) -> bool:
    return height(phi) <= depth
