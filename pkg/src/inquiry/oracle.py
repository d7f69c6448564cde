"""Brute-force semantic oracle over finite constant-domain modal structures.

Evaluates formulas directly from the satisfaction relation, computes the
world partition a question induces, and searches exhaustively for
countermodels to question entailment within small bounds.  This is the
independent reference the symbolic machinery is tested against; it is not
meant to scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .syntax import (
    And, Apply, Atom, Bottom, Equal, Exists, Formula, Not, Question,
    Signature, Term, Top, Var, formula_symbols,
)


@dataclass
class ModalModel:
    """A structure (W, D, I) with constant domain.

    Worlds and entities are small ints.  `relations[(w, p)]` is the set of
    tuples satisfying predicate p at world w; `functions[(w, f)]` maps each
    argument tuple to an entity.  Rigid function symbols have identical
    tables at every world.
    """

    worlds: tuple[int, ...]
    domain: tuple[int, ...]
    relations: dict[tuple[int, str], frozenset[tuple[int, ...]]]
    functions: dict[tuple[int, str], dict[tuple[int, ...], int]]

    def describe(self) -> str:
        lines = [f"domain: {{{', '.join(f'd{e}' for e in self.domain)}}}"]
        preds = sorted({p for (_, p) in self.relations})
        funcs = sorted({f for (_, f) in self.functions})
        for w in self.worlds:
            lines.append(f"world w{w}:")
            for p in preds:
                rows = sorted(self.relations[(w, p)])
                shown = ", ".join("(" + ",".join(f"d{e}" for e in row) + ")" for row in rows)
                lines.append(f"  {p}: {{{shown}}}")
            for f in funcs:
                table = self.functions[(w, f)]
                if () in table:
                    lines.append(f"  {f} = d{table[()]}")
                else:
                    cells = ", ".join(
                        "(" + ",".join(f"d{e}" for e in k) + f")->d{v}"
                        for k, v in sorted(table.items()))
                    lines.append(f"  {f}: {cells}")
        return "\n".join(lines)


Assignment = dict[str, int]


def eval_term(model: ModalModel, world: int, g: Assignment, t: Term) -> int:
    if isinstance(t, Apply):
        args = tuple(eval_term(model, world, g, a) for a in t.args)
        return model.functions[(world, t.func)][args]
    assert isinstance(t, Var)
    return g[t.name]  # KeyError signals an unassigned variable


def evaluate(model: ModalModel, world: int, g: Assignment, f: Formula) -> bool:
    """Tarskian truth at a world; `g` must cover the free variables of f."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Atom):
        args = tuple(eval_term(model, world, g, t) for t in f.args)
        return args in model.relations[(world, f.pred)]
    if isinstance(f, Equal):
        return eval_term(model, world, g, f.left) == eval_term(model, world, g, f.right)
    if isinstance(f, And):
        return evaluate(model, world, g, f.left) and evaluate(model, world, g, f.right)
    if isinstance(f, Not):
        return not evaluate(model, world, g, f.body)
    if isinstance(f, Exists):
        for d in model.domain:
            g2 = dict(g)
            g2[f.var] = d
            if evaluate(model, world, g2, f.body):
                return True
        return False
    raise TypeError(f"cannot evaluate {f!r}")


def partition_equivalent(model: ModalModel, w: int, v: int, q: Question) -> bool:
    """True iff w and v land in the same block of the partition q induces:
    the question's extension is identical at both worlds."""
    for values in product(model.domain, repeat=len(q.variables)):
        g = dict(zip(q.variables, values))
        if evaluate(model, w, g, q.body) != evaluate(model, v, g, q.body):
            return False
    return True


def holds_everywhere(model: ModalModel, f: Formula) -> bool:
    return all(evaluate(model, w, {}, f) for w in model.worlds)


@dataclass
class Countermodel:
    model: ModalModel
    w: int
    v: int

    def describe(self) -> str:
        return self.model.describe() + f"\nwitness pair: (w{self.w}, w{self.v})"


class BoundsError(Exception):
    """Enumeration bounds would be astronomically large."""


# ---------------------------------------------------------------------------
# Model enumeration
# ---------------------------------------------------------------------------

def _collect_symbols(formulas: Iterable[Formula], sig: Signature):
    preds: dict[str, int] = {}
    funcs: dict[str, int] = {}
    for f in formulas:
        ps, fs, _ = formula_symbols(f)
        for p in ps:
            preds[p] = sig.predicates[p]
        for fn in fs:
            funcs[fn] = sig.functions[fn]
    rigid = [(n, a) for n, a in sorted(funcs.items()) if sig.is_rigid(n)]
    flex = [(n, a) for n, a in sorted(funcs.items()) if not sig.is_rigid(n)]
    return sorted(preds.items()), rigid, flex


def _all_tuples(domain: Sequence[int], arity: int) -> list[tuple[int, ...]]:
    return list(product(domain, repeat=arity))


def _iter_relations(domain, arity) -> Iterator[frozenset]:
    cells = _all_tuples(domain, arity)
    for mask in range(1 << len(cells)):
        yield frozenset(c for i, c in enumerate(cells) if mask >> i & 1)


def _iter_functions(domain, arity) -> Iterator[dict]:
    cells = _all_tuples(domain, arity)
    for values in product(domain, repeat=len(cells)):
        yield dict(zip(cells, values))


def _guard_bounds(preds, rigid, flex, domain_size: int) -> None:
    # The enumeration visits rigid-block x per-world interpretations; bail
    # out before materializing anything astronomically large.
    import math
    bits = 0.0
    for _, a in preds:
        bits += domain_size ** a
    for _, a in rigid + flex:
        bits += (domain_size ** a) * math.log2(max(domain_size, 2))
    if bits > 18:
        raise BoundsError(
            f"enumeration space ~2^{bits:.0f} exceeds the oracle's guard")


def _iter_world_interpretations(preds, flex, domain):
    """All interpretations of the non-rigid symbols at a single world, in
    lexicographic order over the interpretation bit-vectors."""
    pred_choices = [list(_iter_relations(domain, a)) for _, a in preds]
    flex_choices = [list(_iter_functions(domain, a)) for _, a in flex]
    for combo in product(*pred_choices, *flex_choices):
        yield combo[:len(preds)], combo[len(preds):]


def _assemble(domain, worlds, preds, rigid, flex, rigid_tables, world_interps) -> ModalModel:
    relations: dict[tuple[int, str], frozenset] = {}
    functions: dict[tuple[int, str], dict] = {}
    for w, (rels, funcs) in zip(worlds, world_interps):
        for (name, _), rel in zip(preds, rels):
            relations[(w, name)] = rel
        for (name, _), table in zip(flex, funcs):
            functions[(w, name)] = table
        for (name, _), table in zip(rigid, rigid_tables):
            functions[(w, name)] = table
    return ModalModel(tuple(worlds), tuple(domain), relations, functions)


def entails_bounded(questions: Sequence[Question], context: Formula,
                    conclusion: Question, sig: Signature,
                    max_worlds: int = 2, max_domain: int = 3) -> Countermodel | None:
    """Exhaustive countermodel search for question entailment in context.

    Returns the first countermodel in canonical enumeration order - by
    (world count, domain size), then lexicographic interpretation order -
    or None if no model within bounds violates the entailment.

    A violation is a pair of worlds agreeing on every premise question and
    on the context but distinguished by the conclusion.  Since formulas have
    no modal operators, truth at a world only depends on that world's
    interpretation, so two worlds always suffice: any violating pair inside
    a larger model is itself a countermodel.
    """
    if max_worlds < 2:
        return None
    bodies = [q.body for q in questions] + [context, conclusion.body]
    preds, rigid, flex = _collect_symbols(bodies, sig)
    for domain_size in range(1, max_domain + 1):
        domain = list(range(domain_size))
        _guard_bounds(preds, rigid, flex, domain_size)
        rigid_choices = [list(_iter_functions(domain, a)) for _, a in rigid]
        for rigid_tables in product(*rigid_choices):
            found = _search_pairs(questions, context, conclusion, domain,
                                  preds, rigid, flex, rigid_tables)
            if found is not None:
                return found
    return None


def _search_pairs(questions, context, conclusion, domain,
                  preds, rigid, flex, rigid_tables) -> Countermodel | None:
    # Precompute, per single-world interpretation, the context truth value
    # and the answer pattern of every question; a countermodel is a pair of
    # context-worlds with equal premise patterns but different conclusion
    # patterns.  Grouping by premise pattern avoids the quadratic pair scan.
    interps = []
    q_patterns: list[tuple] = []
    c_patterns: list[tuple] = []
    for world_interp in _iter_world_interpretations(preds, flex, domain):
        probe = _assemble(domain, [0], preds, rigid, flex, rigid_tables, [world_interp])
        if not evaluate(probe, 0, {}, context):
            continue
        qp = tuple(_pattern(probe, 0, domain, q) for q in questions)
        cp = _pattern(probe, 0, domain, conclusion)
        interps.append(world_interp)
        q_patterns.append(qp)
        c_patterns.append(cp)

    groups: dict[tuple, list[int]] = {}
    for i, qp in enumerate(q_patterns):
        groups.setdefault(qp, []).append(i)

    best: tuple[int, int] | None = None
    for members in groups.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                i, j = members[a], members[b]
                if c_patterns[i] != c_patterns[j]:
                    if best is None or (i, j) < best:
                        best = (i, j)
                    break
            else:
                continue
            break
    if best is None:
        return None
    i, j = best
    model = _assemble(domain, [0, 1], preds, rigid, flex, rigid_tables,
                      [interps[i], interps[j]])
    return Countermodel(model, 0, 1)


def _pattern(model: ModalModel, world: int, domain, q: Question) -> tuple:
    return tuple(
        evaluate(model, world, dict(zip(q.variables, values)), q.body)
        for values in product(domain, repeat=len(q.variables)))


def is_answer_bounded(psi: Formula, questions: Sequence[Question], sig: Signature,
                      max_worlds: int = 2, max_domain: int = 3) -> Countermodel | None:
    """Countermodel search for answerhood: psi (closed) answers the question
    set iff the questions entail ?psi."""
    return entails_bounded(questions, Top(), Question(psi, ()), sig,
                           max_worlds=max_worlds, max_domain=max_domain)


# ---------------------------------------------------------------------------
# Classical (single-world) countermodel search
# ---------------------------------------------------------------------------

def classical_countermodel(premises: Sequence[Formula], conclusion: Formula,
                           sig: Signature, max_domain: int = 3) -> ModalModel | None:
    """First single-world model of the premises falsifying the conclusion,
    or None.  Used to refute classical sequents within small bounds."""
    bodies = list(premises) + [conclusion]
    preds, rigid, flex = _collect_symbols(bodies, sig)
    for domain_size in range(1, max_domain + 1):
        domain = list(range(domain_size))
        _guard_bounds(preds, rigid, flex, domain_size)
        rigid_choices = [list(_iter_functions(domain, a)) for _, a in rigid]
        for rigid_tables in product(*rigid_choices):
            for world_interp in _iter_world_interpretations(preds, flex, domain):
                model = _assemble(domain, [0], preds, rigid, flex,
                                  rigid_tables, [world_interp])
                if all(evaluate(model, 0, {}, p) for p in premises):
                    if not evaluate(model, 0, {}, conclusion):
                        return model
    return None
