"""Reduction of question entailment to classical first-order entailment.

A question entails another iff every pair of worlds the first cannot tell
apart is also indistinguishable to the second.  Priming every predicate and
every non-rigid function symbol builds a second "world" inside one classical
structure, so the modal entailment turns into an ordinary sequent.  Also
provides the quantifier-relativization transform used to reduce
varying-domain readings to the constant-domain pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .syntax import (
    And, Apply, Atom, Equal, Exists, Formula, Not, Question, Signature,
    Term, Top, Var, conj, f_iff, forall_close, formula_symbols,
)


@dataclass(frozen=True)
class Sequent:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __str__(self) -> str:
        left = ", ".join(str(p) for p in self.premises)
        return f"{left} |- {self.conclusion}" if left else f"|- {self.conclusion}"


def primed_name(name: str) -> str:
    """The reserved copy of a symbol; primes cannot appear in user input."""
    return name + "'"


def star(f: Formula, sig: Signature) -> Formula:
    """Prime every predicate symbol and every non-rigid function symbol.

    Rigid function symbols, variables, equality and the constants are left
    alone.  The input must be prime-free: primed symbols are terminal, the
    transform is never iterated.
    """
    preds, funcs, _ = formula_symbols(f)
    for name in preds | funcs:
        if name.endswith("'"):
            raise ValueError(f"{name} is already primed")
    for p, arity in sorted((p, sig.predicates[p]) for p in preds):
        sig.declare_predicate(primed_name(p), arity)
    for fn in sorted(funcs):
        if not sig.is_rigid(fn):
            sig.declare_function(primed_name(fn), sig.functions[fn])

    def go_t(t: Term) -> Term:
        if isinstance(t, Apply):
            name = t.func if sig.is_rigid(t.func) else primed_name(t.func)
            return Apply(name, tuple(go_t(a) for a in t.args))
        return t

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return Atom(primed_name(g.pred), tuple(go_t(t) for t in g.args))
        if isinstance(g, Equal):
            return Equal(go_t(g.left), go_t(g.right))
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, Exists):
            return Exists(g.var, go(g.body))
        return g

    return go(f)


def hash_question(q: Question, sig: Signature) -> Formula:
    """The classical formula stating that q's extension agrees with its
    primed copy: the universal closure of body <-> body*."""
    return forall_close(q.variables, f_iff(q.body, star(q.body, sig)))


def reduce_entailment(questions: Sequence[Question], context: Formula,
                      conclusion: Question, sig: Signature) -> Sequent:
    """The classical sequent equivalent to: the questions, in the given
    context, entail the conclusion question.  Tautological premises arising
    from an empty context are dropped."""
    premises: list[Formula] = [hash_question(q, sig) for q in questions]
    if not isinstance(context, Top):
        premises.append(context)
        premises.append(star(context, sig))
    return Sequent(tuple(premises), hash_question(conclusion, sig))


def relativize(x: Formula | Question, sig: Signature,
               exists_pred: str = "e") -> Formula | Question:
    """Relativize quantification to an existence predicate: each quantified
    variable is asserted to exist, and a question additionally asserts
    existence of its free variables."""
    def check(f: Formula) -> None:
        preds, funcs, _ = formula_symbols(f)
        if exists_pred in preds or exists_pred in funcs:
            raise ValueError(f"existence predicate {exists_pred!r} already in use")

    def go(g: Formula) -> Formula:
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, Exists):
            return Exists(g.var, And(Atom(exists_pred, (Var(g.var),)), go(g.body)))
        return g

    if isinstance(x, Question):
        check(x.body)
        sig.declare_predicate(exists_pred, 1)
        body = go(x.body)
        guards = [Atom(exists_pred, (Var(v),)) for v in x.variables]
        return Question(conj(guards + [body]) if guards else body, x.variables)
    check(x)
    sig.declare_predicate(exists_pred, 1)
    return go(x)
