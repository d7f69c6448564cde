"""Syntactic answerhood: rigid terms, rigid instances, developments.

A closed formula answers a question set exactly when it is equivalent to a
development of the set: something built from rigid instances of the
question bodies (and rigid identity statements, when equality is allowed)
with boolean connectives and quantifiers, or one of the truth constants.
The combined decision procedure runs the tableau prover on the classical
reduction for the "yes" side and the finite-model oracle for the "no" side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import oracle
from .prover import Deadline, prove
from .syntax import (
    And, Apply, Atom, Bottom, Equal, Exists, Formula, Not, Question,
    Signature, Substitution, Term, Top, Var, free_variables, render,
)
from .translation import reduce_entailment


@dataclass(frozen=True)
class DevelopmentConfig:
    """Whether rigid identity statements are permitted building blocks
    (they are in the full language, not in the equality-free fragment)."""

    equality_allowed: bool = True


def is_rigid_term(t: Term, sig: Signature) -> bool:
    """A term is rigid when it is composed of variables and rigid function
    symbols only; its denotation is then world-independent."""
    if isinstance(t, Var):
        return True
    assert isinstance(t, Apply)
    return sig.is_rigid(t.func) and all(is_rigid_term(a, sig) for a in t.args)


def rigid_instance_match(candidate: Formula, pattern: Formula,
                         sig: Signature) -> Substitution | None:
    """A substitution with rigid range terms turning `pattern` into
    `candidate` (up to renaming of bound variables), or None.

    The substitution is uniform: every occurrence of a pattern variable
    maps to the same term, and that term may not mention variables bound at
    the occurrence (textbook substitution cannot capture).
    """
    binding: Substitution = {}

    def terms(p: Term, c: Term, env: dict[str, str]) -> bool:
        if isinstance(p, Var):
            if p.name in env:
                return isinstance(c, Var) and c.name == env[p.name]
            bound_here = set(env.values())
            if any(v in bound_here for v in free_variables(c)):
                return False
            if p.name in binding:
                return binding[p.name] == c
            binding[p.name] = c
            return True
        if isinstance(p, Apply):
            return (isinstance(c, Apply) and c.func == p.func
                    and len(c.args) == len(p.args)
                    and all(terms(a, b, env) for a, b in zip(p.args, c.args)))
        return False

    def go(p: Formula, c: Formula, env: dict[str, str]) -> bool:
        if type(p) is not type(c):
            return False
        if isinstance(p, (Top, Bottom)):
            return True
        if isinstance(p, Atom):
            return (p.pred == c.pred and len(p.args) == len(c.args)
                    and all(terms(a, b, env) for a, b in zip(p.args, c.args)))
        if isinstance(p, Equal):
            return terms(p.left, c.left, env) and terms(p.right, c.right, env)
        if isinstance(p, And):
            return go(p.left, c.left, env) and go(p.right, c.right, env)
        if isinstance(p, Not):
            return go(p.body, c.body, env)
        if isinstance(p, Exists):
            inner = dict(env)
            inner[p.var] = c.var
            return go(p.body, c.body, inner)
        return False

    if not go(pattern, candidate, {}):
        return None
    if not all(is_rigid_term(t, sig) for t in binding.values()):
        return None
    return {v: t for v, t in binding.items()
            if not (isinstance(t, Var) and t.name == v)}


@dataclass
class DevelopmentWitness:
    """One node of the decomposition justifying a development claim."""

    rule: str  # "truth-constant" | "rigid-instance" | "rigid-identity"
               # | "and" | "not" | "exists"
    formula: Formula
    children: tuple["DevelopmentWitness", ...] = ()
    pattern_index: int | None = None
    substitution: Substitution | None = None

    def describe(self, indent: int = 0) -> str:
        pad = "  " * indent
        extra = ""
        if self.rule == "rigid-instance":
            sub = ", ".join(f"{v} := {render(t)}"
                            for v, t in sorted((self.substitution or {}).items()))
            extra = f" of question {self.pattern_index}" + (f" with {{{sub}}}" if sub else "")
        lines = [f"{pad}{self.rule}{extra}: {render(self.formula)}"]
        for child in self.children:
            lines.append(child.describe(indent + 1))
        return "\n".join(lines)


def development_witness(psi: Formula, patterns: Sequence[Formula],
                        sig: Signature,
                        cfg: DevelopmentConfig = DevelopmentConfig()
                        ) -> DevelopmentWitness | None:
    """Decomposition of psi into rigid instances of the patterns (plus
    rigid identities and truth constants) under boolean connectives and
    quantifiers, or None if psi is no development of the patterns.

    A rigid-instance match is tried at every node before structural
    decomposition: a composite pattern can be matched wholesale.
    """
    if isinstance(psi, (Top, Bottom)):
        return DevelopmentWitness("truth-constant", psi)
    for i, pattern in enumerate(patterns):
        m = rigid_instance_match(psi, pattern, sig)
        if m is not None:
            return DevelopmentWitness("rigid-instance", psi,
                                      pattern_index=i, substitution=m)
    if isinstance(psi, Equal):
        if (cfg.equality_allowed and is_rigid_term(psi.left, sig)
                and is_rigid_term(psi.right, sig)):
            return DevelopmentWitness("rigid-identity", psi)
        return None
    if isinstance(psi, And):
        left = development_witness(psi.left, patterns, sig, cfg)
        if left is None:
            return None
        right = development_witness(psi.right, patterns, sig, cfg)
        if right is None:
            return None
        return DevelopmentWitness("and", psi, (left, right))
    if isinstance(psi, Not):
        inner = development_witness(psi.body, patterns, sig, cfg)
        return DevelopmentWitness("not", psi, (inner,)) if inner else None
    if isinstance(psi, Exists):
        inner = development_witness(psi.body, patterns, sig, cfg)
        return DevelopmentWitness("exists", psi, (inner,)) if inner else None
    return None


def is_development(psi: Formula, patterns: Sequence[Formula], sig: Signature,
                   cfg: DevelopmentConfig = DevelopmentConfig()) -> bool:
    return development_witness(psi, patterns, sig, cfg) is not None


# ---------------------------------------------------------------------------
# Combined decision procedure
# ---------------------------------------------------------------------------

@dataclass
class EntailmentVerdict:
    status: str  # "yes" | "no" | "unknown"
    countermodel: oracle.Countermodel | None = None
    proof_multiplicity: int | None = None


def decide_entailment(questions: Sequence[Question], context: Formula,
                      conclusion: Question, sig: Signature, *,
                      rounds: int = 3, max_domain: int = 3,
                      max_branches: int = 2000,
                      timeout_ms: float | None = None) -> EntailmentVerdict:
    """Decide question entailment by interleaving proof search on the
    classical reduction with bounded countermodel search.

    Validity is only semi-decidable, so exhausting the budget on both sides
    yields "unknown" rather than "no".
    """
    if rounds < 1:
        raise ValueError("budget must be positive")
    deadline = Deadline(timeout_ms)
    sequent = reduce_entailment(questions, context, conclusion, sig)
    oracle_domains = [min(2, max_domain), max_domain]
    for r in range(1, rounds + 1):
        if prove(sequent.premises, sequent.conclusion, sig,
                 max_gamma=r, max_branches=max_branches,
                 timeout_ms=deadline.remaining_ms()):
            return EntailmentVerdict("yes", proof_multiplicity=r)
        if r <= len(oracle_domains):
            try:
                found = oracle.entails_bounded(
                    questions, context, conclusion, sig,
                    max_worlds=2, max_domain=oracle_domains[r - 1])
            except oracle.BoundsError:
                found = None
            if found is not None:
                return EntailmentVerdict("no", countermodel=found)
        if deadline.expired():
            break
    return EntailmentVerdict("unknown")


def check_answerhood(psi: Formula, questions: Sequence[Question],
                     context: Formula, sig: Signature, *,
                     budget: int = 3, timeout_ms: float | None = None
                     ) -> EntailmentVerdict:
    """Is the closed formula psi an answer to the question set in context?

    Returns "yes" when the prover validates the classical reduction, "no"
    when the oracle exhibits a countermodel, "unknown" when the budget runs
    out on both sides.
    """
    if free_variables(psi):
        raise ValueError("an answer must be a closed formula")
    return decide_entailment(questions, context, Question(psi, ()), sig,
                             rounds=budget, timeout_ms=timeout_ms)
