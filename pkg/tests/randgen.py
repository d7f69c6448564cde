"""Seeded random generators for property tests."""

from __future__ import annotations

import random
from itertools import product

from inquiry.syntax import (
    And, Apply, Atom, BOTTOM, Equal, Exists, Formula, Not, Question,
    Signature, TOP, Var, f_forall, f_iff, f_implies, f_or, rename_apart,
)
from inquiry.oracle import ModalModel


def small_signature(n_preds: int = 2, n_consts: int = 2,
                    rigid_consts: bool = True) -> Signature:
    sig = Signature()
    for i in range(n_preds):
        sig.declare_predicate(f"p{i}", 1)
    for i in range(n_consts):
        sig.declare_function(f"c{i}", 0, rigid=rigid_consts)
    return sig


def random_term(rng: random.Random, sig: Signature, variables: list[str]):
    choices = []
    if variables:
        choices.append("var")
    consts = [n for n, a in sig.functions.items() if a == 0]
    if consts:
        choices.append("const")
    kind = rng.choice(choices)
    if kind == "var":
        return Var(rng.choice(variables))
    return Apply(rng.choice(consts), ())


def random_formula(rng: random.Random, sig: Signature, depth: int,
                   variables: list[str] | None = None,
                   allow_equality: bool = False) -> Formula:
    variables = list(variables or [])
    preds = sorted(sig.predicates)
    if depth <= 0 or rng.random() < 0.25:
        kinds = ["atom", "atom", "top", "bottom"]
        if allow_equality:
            kinds.append("equal")
        kind = rng.choice(kinds)
        if kind == "top":
            return TOP
        if kind == "bottom":
            return BOTTOM
        if kind == "equal":
            return Equal(random_term(rng, sig, variables),
                         random_term(rng, sig, variables))
        p = rng.choice(preds)
        arity = sig.predicates[p]
        return Atom(p, tuple(random_term(rng, sig, variables)
                             for _ in range(arity)))
    kind = rng.choice(["and", "or", "implies", "iff", "not", "exists", "forall"])
    if kind == "not":
        return Not(random_formula(rng, sig, depth - 1, variables, allow_equality))
    if kind in ("exists", "forall"):
        v = f"W{len(variables) + 1}"
        inner = random_formula(rng, sig, depth - 1, variables + [v],
                               allow_equality)
        return Exists(v, inner) if kind == "exists" else f_forall(v, inner)
    a = random_formula(rng, sig, depth - 1, variables, allow_equality)
    b = random_formula(rng, sig, depth - 1, variables, allow_equality)
    return {"and": And, "or": f_or, "implies": f_implies, "iff": f_iff}[kind](a, b)


def random_closed_formula(rng: random.Random, sig: Signature, depth: int,
                          allow_equality: bool = False) -> Formula:
    return rename_apart(random_formula(rng, sig, depth, [], allow_equality))


def random_model(rng: random.Random, sig: Signature, n_worlds: int,
                 n_entities: int) -> ModalModel:
    worlds = tuple(range(n_worlds))
    domain = tuple(range(n_entities))
    relations = {}
    functions = {}
    rigid_tables = {}
    for name, arity in sig.functions.items():
        if sig.is_rigid(name):
            rigid_tables[name] = {
                args: rng.choice(domain)
                for args in product(domain, repeat=arity)}
    for w in worlds:
        for name, arity in sig.predicates.items():
            cells = [args for args in product(domain, repeat=arity)
                     if rng.random() < 0.5]
            relations[(w, name)] = frozenset(cells)
        for name, arity in sig.functions.items():
            if sig.is_rigid(name):
                functions[(w, name)] = dict(rigid_tables[name])
            else:
                functions[(w, name)] = {
                    args: rng.choice(domain)
                    for args in product(domain, repeat=arity)}
    return ModalModel(worlds, domain, relations, functions)
