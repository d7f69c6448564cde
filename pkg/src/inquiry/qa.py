"""Question answering on top of the tableau engine.

A question is reduced to an atomic answer literal; copies of the literal
with fresh variables (positive or negated) may be appended to every branch
of the theory tableau.  Each most general closure then certifies that the
theory refutes the added instances under the closing substitution, so the
universally closed negation of their conjunction is an entailed statement
about the question.  Unskolemization removes non-rigid and Skolem witnesses
by existential generalization, after which the statement is a development
of the question and therefore an answer.

The stream interleaves expansion, instance addition and answer synthesis by
iterative deepening over (quantifier multiplicity, per-question instance
budget), a fair schedule: every answer the theory entails is eventually
entailed by some emitted answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

from .prover import (
    BudgetExceeded, Closure, Deadline, SkolemizedTheory, Tableau,
    find_most_general_closures, prove, skolemize,
)
from .syntax import (
    And, Apply, Atom, BOTTOM, Bottom, Equal, Exists, Formula, Not, Question,
    Signature, Substitution, TOP, Top, Var, all_variable_names, conj,
    forall_close, formula_symbols, free_variables, match_forall,
    match_implies, f_forall, render, rename_apart, substitute,
)


# ---------------------------------------------------------------------------
# Answer literals
# ---------------------------------------------------------------------------

def introduce_answer_literal(theory: Sequence[Formula], q: Question,
                             sig: Signature
                             ) -> tuple[list[Formula], Question,
                                        tuple[str, tuple[str, ...], Formula] | None]:
    """Reduce a question to an atomic one.

    Atomic questions pass through.  Otherwise a fresh predicate is defined
    to be equivalent to the body, the definition joins the theory, and the
    returned rewrite entry (name, parameters, body) is used to translate
    emitted answers back into the user's vocabulary.
    """
    if isinstance(q.body, Atom):
        return list(theory), q, None
    name = sig.fresh_predicate(len(q.variables))
    params = tuple(q.variables)
    head = Atom(name, tuple(Var(v) for v in params))
    axiom = forall_close(params, And(
        Not(And(head, Not(q.body))), Not(And(q.body, Not(head)))))
    return list(theory) + [axiom], Question(head, params), (name, params, q.body)


def rewrite_answer_literals(f: Formula,
                            rewrites: dict[str, tuple[tuple[str, ...], Formula]]
                            ) -> Formula:
    if not rewrites:
        return f

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom) and g.pred in rewrites:
            params, body = rewrites[g.pred]
            return substitute(body, dict(zip(params, g.args)))
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, Exists):
            return Exists(g.var, go(g.body))
        return g

    return go(f)


# ---------------------------------------------------------------------------
# Simplification
# ---------------------------------------------------------------------------

def simplify(f: Formula) -> Formula:
    """Equivalence-preserving cleanup: double negation, truth-constant
    folding, conjunction flattening with duplicate and complementary-pair
    removal, and dropping of vacuous quantifiers (sound because domains are
    nonempty).  One bottom-up pass."""
    if isinstance(f, And):
        conjuncts: list[Formula] = []
        seen: set[Formula] = set()

        def gather(g: Formula) -> bool:
            # returns False if the conjunction collapses to false
            if isinstance(g, And):
                return gather(g.left) and gather(g.right)
            h = simplify(g)
            if isinstance(h, Bottom):
                return False
            if Not(h) in seen or (isinstance(h, Not) and h.body in seen):
                return False
            if isinstance(h, Top) or h in seen:
                return True
            seen.add(h)
            conjuncts.append(h)
            return True

        if not gather(f):
            return BOTTOM
        return conj(conjuncts)
    if isinstance(f, Not):
        body = simplify(f.body)
        if isinstance(body, Not):
            return body.body
        if isinstance(body, Top):
            return BOTTOM
        if isinstance(body, Bottom):
            return TOP
        return Not(body)
    if isinstance(f, Exists):
        body = simplify(f.body)
        if f.var not in free_variables(body):
            return body
        return Exists(f.var, body)
    return f


# ---------------------------------------------------------------------------
# Unskolemization
# ---------------------------------------------------------------------------

def _nonrigid_subterms(f: Formula, sig: Signature) -> list:
    """Subterms headed by a non-rigid function symbol at outermost such
    positions (occurrences inside another non-rigid-headed term do not count
    as separate entries)."""
    found: dict = {}

    def go_t(t) -> None:
        if isinstance(t, Apply):
            if not sig.is_rigid(t.func):
                found.setdefault(t, None)
            else:
                for a in t.args:
                    go_t(a)

    def go(g: Formula) -> None:
        if isinstance(g, Atom):
            for t in g.args:
                go_t(t)
        elif isinstance(g, Equal):
            go_t(g.left)
            go_t(g.right)
        elif isinstance(g, And):
            go(g.left)
            go(g.right)
        elif isinstance(g, Not):
            go(g.body)
        elif isinstance(g, Exists):
            go(g.body)

    go(f)
    return list(found)


def _term_depth(t) -> int:
    if isinstance(t, Apply) and t.args:
        return 1 + max(_term_depth(a) for a in t.args)
    return 1


def _replace_term(f: Formula, target, replacement) -> Formula:
    def go_t(t):
        if t == target:
            return replacement
        if isinstance(t, Apply) and t.args:
            return Apply(t.func, tuple(go_t(a) for a in t.args))
        return t

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(go_t(t) for t in g.args))
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


def _contains_term(f: Formula, target) -> bool:
    hit = False

    def go_t(t) -> None:
        nonlocal hit
        if hit or t == target:
            hit = True
            return
        if isinstance(t, Apply):
            for a in t.args:
                go_t(a)

    def go(g: Formula) -> None:
        if hit:
            return
        if isinstance(g, Atom):
            for t in g.args:
                go_t(t)
        elif isinstance(g, Equal):
            go_t(g.left)
            go_t(g.right)
        elif isinstance(g, And):
            go(g.left)
            go(g.right)
        elif isinstance(g, Not):
            go(g.body)
        elif isinstance(g, Exists):
            go(g.body)

    go(f)
    return hit


def _generalize(f: Formula, target, var_name: str) -> Formula:
    """Replace every occurrence of the target term by a fresh variable and
    bind it existentially at the innermost sound insertion point.

    The insertion point descends through quantifiers and through conjuncts
    that alone contain the term; it never crosses a negation, where
    existential introduction would not be entailment-preserving.  Descending
    below the binders of the target's own variables keeps them in scope.
    """
    def go(g: Formula) -> Formula:
        fa = match_forall(g)
        if fa is not None:
            v, body = fa
            return f_forall(v, go(body))
        if isinstance(g, Exists):
            return Exists(g.var, go(g.body))
        if isinstance(g, And):
            left_in = _contains_term(g.left, target)
            right_in = _contains_term(g.right, target)
            if left_in and not right_in:
                return And(go(g.left), g.right)
            if right_in and not left_in:
                return And(g.left, go(g.right))
        return Exists(var_name, _replace_term(g, target, Var(var_name)))

    return go(f)


def unskolemize(f: Formula, sig: Signature) -> Formula:
    """Eliminate Skolem and other non-rigid function symbols by existential
    generalization; the result is entailed by the input.

    Outermost non-rigid-headed subterms go first, deepest first; all
    occurrences of a term share one variable.
    """
    used = set(all_variable_names(f))
    counter = 0
    for _ in range(10_000):
        targets = _nonrigid_subterms(f, sig)
        if not targets:
            return f
        targets.sort(key=lambda t: (-_term_depth(t), render(t)))
        target = targets[0]
        while True:
            counter += 1
            name = f"X{counter}"
            if name not in used:
                used.add(name)
                break
        f = _generalize(f, target, name)
    return TOP  # unreachable fallback; always a sound answer


# ---------------------------------------------------------------------------
# Sessions
# ---------------------------------------------------------------------------

@dataclass
class QuestionInstance:
    question_index: int
    polarity: str  # "neg" | "pos"
    variables: tuple[str, ...]
    formula: Formula
    occurrence_ids: tuple[int, ...]


class HornError(ValueError):
    """The theory or question does not fit the Horn restriction."""


def _horn_clause_ok(f: Formula) -> bool:
    body = f
    while True:
        fa = match_forall(body)
        if fa is None:
            break
        body = fa[1]
    if isinstance(body, Atom):
        return True
    im = match_implies(body)
    if im is None:
        return False
    premise, head = im
    if not isinstance(head, Atom):
        return False

    def conj_of_atoms(g: Formula) -> bool:
        if isinstance(g, And):
            return conj_of_atoms(g.left) and conj_of_atoms(g.right)
        return isinstance(g, Atom)

    return conj_of_atoms(premise)


class QASession:
    """One question-answering run: the Skolemized theory, the atomic
    questions, the tableau, and the registry of added instances."""

    def __init__(self, axioms: Sequence[Formula], questions: Sequence[Question],
                 sig: Signature, *, assume_rigid: bool = False,
                 horn: bool = False):
        if horn:
            for f in axioms:
                if not _horn_clause_ok(f):
                    raise HornError(f"not a Horn clause: {render(f)}")
            for q in questions:
                if not isinstance(q.body, Atom):
                    raise HornError(f"question is not atomic: {render(q)}")
        self.sig = sig.all_rigid_copy() if assume_rigid else sig
        self.horn = horn
        base = list(axioms)
        self.questions: list[Question] = []
        self.rewrites: dict[str, tuple[tuple[str, ...], Formula]] = {}
        for q in questions:
            base, atomic, rewrite = introduce_answer_literal(base, q, self.sig)
            if rewrite is not None:
                self.rewrites[rewrite[0]] = (rewrite[1], rewrite[2])
            self.questions.append(atomic)
        self.axioms = base
        self.theory: SkolemizedTheory = skolemize(base, self.sig,
                                                  rigid_skolems=assume_rigid)
        self.instances: list[QuestionInstance] = []
        self.tableau = Tableau(self.theory.formulas)

    def reset(self) -> None:
        self.instances = []
        self.tableau = Tableau(self.theory.formulas)

    def add_instance(self, question_index: int = 0, polarity: str = "neg"
                     ) -> QuestionInstance:
        """Append a fresh-variable copy of the question (negated for "neg")
        to every branch of the tableau."""
        q = self.questions[question_index]
        fresh = tuple(self.tableau.fresh_var() for _ in q.variables)
        renaming: Substitution = {v: Var(y) for v, y in zip(q.variables, fresh)}
        literal = substitute(q.body, renaming)
        if polarity == "neg":
            literal = Not(literal)
        elif polarity != "pos":
            raise ValueError(f"bad polarity {polarity!r}")
        oids = self.tableau.push_instances([(literal, len(self.instances))])[0]
        inst = QuestionInstance(question_index, polarity, fresh, literal,
                                tuple(oids))
        self.instances.append(inst)
        return inst

    def pop_instance(self) -> None:
        self.tableau.pop_instances()
        self.instances.pop()


def add_instance(session: QASession, polarity: str,
                 question_index: int = 0) -> QASession:
    session.add_instance(question_index, polarity)
    return session


def ans(closure: Closure, session: QASession) -> Formula:
    """The answer a closure generates: the universal closure of the negated
    conjunction of the added instances taking part in the closure, under the
    closing substitution.  No participating instances means the theory alone
    is refuted, so the answer is the contradiction."""
    live = [inst for inst in session.instances
            if set(inst.occurrence_ids) & closure.kappa]
    if not live:
        return BOTTOM
    body = Not(conj([substitute(inst.formula, closure.substitution)
                     for inst in live]))
    return forall_close(free_variables(body), body)


def _raw_conjunction(session: QASession, closures: Sequence[Closure]) -> Formula:
    parts: list[Formula] = []
    seen: set[str] = set()
    for c in closures:
        a = ans(c, session)
        key = render(a)
        if key not in seen:
            seen.add(key)
            parts.append(a)
    return conj(parts)


def _finish(session: QASession, raw: Formula) -> Formula:
    f = rename_apart(raw)
    f = unskolemize(f, session.sig)
    f = rewrite_answer_literals(f, session.rewrites)
    return simplify(f)


def answer_step(session: QASession, *, node_budget: int = 150_000,
                deadline: Deadline | None = None) -> Formula:
    """One synthesis step: conjoin the answers of all most general closures
    of the current tableau, unskolemize, rewrite, simplify."""
    closures = find_most_general_closures(session.tableau,
                                          project_instances=True,
                                          node_budget=node_budget,
                                          deadline=deadline)
    if not closures:
        raise LookupError("no closure yet")
    return _finish(session, _raw_conjunction(session, closures))


# ---------------------------------------------------------------------------
# The answer stream
# ---------------------------------------------------------------------------

@dataclass
class Answer:
    formula: Formula
    raw: Formula  # pre-answer: the closure conjunction before unskolemization
    level: int
    gamma: int
    instances: int

    def __str__(self) -> str:
        return render(self.formula)


def canonical_key(f: Formula) -> str:
    """Render after renaming variables in order of appearance; equal keys
    mean equal formulas up to variable naming."""
    mapping: dict[str, str] = {}

    def name(v: str) -> str:
        if v not in mapping:
            mapping[v] = f"_v{len(mapping)}"
        return mapping[v]

    def go_t(t):
        if isinstance(t, Var):
            return Var(name(t.name))
        if isinstance(t, Apply):
            return Apply(t.func, tuple(go_t(a) for a in t.args))
        return t

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(go_t(t) for t in g.args))
        if isinstance(g, Equal):
            return Equal(go_t(g.left), go_t(g.right))
        if isinstance(g, And):
            return And(go(g.left), go(g.right))
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, Exists):
            new = name(g.var)
            return Exists(new, go(g.body))
        return g

    return render(go(f))


def _mixes(n_questions: int, m: int, horn: bool) -> Iterator[tuple[tuple[int, int], ...]]:
    """Instance mixes at per-question budget m: for each question a count of
    negative and positive copies, at most m in total per question, with at
    least one question using the full budget (smaller mixes ran at earlier
    levels).  Negative-heavy mixes come first."""
    options: list[tuple[int, int]] = []
    for total in range(m + 1):
        for neg in range(total, -1, -1):
            pos = total - neg
            if horn and pos:
                continue
            options.append((neg, pos))
    for combo in product(options, repeat=n_questions):
        if m == 0 or max(neg + pos for neg, pos in combo) == m:
            yield combo


def _equivalent(a: Formula, b: Formula, sig: Signature,
                timeout_ms: float = 250.0) -> bool:
    """Prover-checked equivalence within a small budget; only a proof both
    ways counts, so suppression based on this test never drops a genuinely
    new answer."""
    if a == b:
        return True
    return (prove([a], b, sig, max_gamma=2, max_branches=400,
                  node_budget=20_000, timeout_ms=timeout_ms)
            and prove([b], a, sig, max_gamma=2, max_branches=400,
                      node_budget=20_000, timeout_ms=timeout_ms))


def answer_stream(axioms: Sequence[Formula], questions: Sequence[Question],
                  sig: Signature, *, max_level: int | None = None,
                  max_instances: int | None = None,
                  max_answers: int | None = None,
                  timeout_ms: float | None = None,
                  horn: bool = False, assume_rigid: bool = False,
                  max_branches: int = 4000, closure_budget: int = 150_000,
                  trace: Callable[[str], None] | None = None
                  ) -> Iterator[Answer]:
    """Lazily emit answers of (weakly) increasing informativeness.

    Level L runs the stages (gamma multiplicity k, instance budget m) with
    k + m = L: the theory tableau is saturated to multiplicity k, every
    instance mix within budget m is pushed, and each nonempty most general
    closure set is turned into an answer.  Emitted answers are entailed by
    the theory and are developments of the questions; answers provably
    equivalent to an earlier one are suppressed.  Without bounds the stream
    runs forever (ever-stronger answers may keep coming).
    """
    deadline = Deadline(timeout_ms)
    session = QASession(axioms, questions, sig,
                        assume_rigid=assume_rigid, horn=horn)
    emitted: list[Formula] = []
    seen_raw: set[str] = set()
    seen_final: set[str] = set()
    count = 0
    level = 0
    while max_level is None or level <= max_level:
        level_had_output = False
        for k in range(level, -1, -1):
            m = level - k
            if max_instances is not None and m > max_instances:
                continue
            session.reset()
            try:
                session.tableau.saturate(k, max_branches=max_branches,
                                         deadline=deadline)
            except BudgetExceeded:
                if deadline.expired():
                    return
                continue  # branch bound hit; skip this stage
            if trace is not None:
                trace(f"--- stage gamma={k} instances={m} ---\n"
                      + session.tableau.dump())
            for mix in _mixes(len(session.questions), m, horn):
                if deadline.expired():
                    return
                pushed = 0
                for qi, (neg, pos) in enumerate(mix):
                    for _ in range(neg):
                        session.add_instance(qi, "neg")
                        pushed += 1
                    for _ in range(pos):
                        session.add_instance(qi, "pos")
                        pushed += 1
                try:
                    closures = find_most_general_closures(
                        session.tableau, project_instances=True,
                        node_budget=closure_budget, deadline=deadline)
                    if closures:
                        if horn:
                            raws = [ans(c, session) for c in closures]
                        else:
                            raws = [_raw_conjunction(session, closures)]
                        for raw in raws:
                            # Two cheap filters (same closure conjunction up
                            # to renaming, same finished formula) run before
                            # the prover-checked equivalence suppression.
                            raw_key = canonical_key(raw)
                            if raw_key in seen_raw:
                                continue
                            seen_raw.add(raw_key)
                            cand = _finish(session, raw)
                            key = canonical_key(cand)
                            if key in seen_final:
                                continue
                            seen_final.add(key)
                            if any(_equivalent(cand, e, session.sig)
                                   for e in emitted):
                                continue
                            emitted.append(cand)
                            level_had_output = True
                            count += 1
                            yield Answer(cand, raw, level, k, m)
                            if max_answers is not None and count >= max_answers:
                                return
                except BudgetExceeded:
                    if deadline.expired():
                        return
                finally:
                    for _ in range(pushed):
                        session.pop_instance()
        if level == 0 and not level_had_output and not horn:
            emitted.append(TOP)
            count += 1
            yield Answer(TOP, TOP, 0, 0, 0)
            if max_answers is not None and count >= max_answers:
                return
        if deadline.expired():
            return
        level += 1


# ---------------------------------------------------------------------------
# Development enumeration (reference algorithm)
# ---------------------------------------------------------------------------

def algorithm1_reference(axioms: Sequence[Formula], q: Question,
                         sig: Signature, depth: int = 2, *,
                         max_gamma: int = 2, max_candidates: int = 2000,
                         timeout_ms: float | None = None) -> list[Formula]:
    """Enumerate closed developments of the question up to a depth bound and
    report those the theory provably entails.

    Depth 1 covers the truth constants and ground rigid instances; each
    further depth adds one boolean connective or one quantified instance.
    Sound and complete in the limit but blind to the theory, hence only a
    reference for cross-checking the tableau stream.
    """
    deadline = Deadline(timeout_ms)
    ground_terms = [Apply(name, ()) for name in sorted(sig.functions)
                    if sig.functions[name] == 0 and sig.is_rigid(name)]
    pool_var = "Z1"
    layers: list[list[Formula]] = [[TOP, BOTTOM]]
    instances: list[Formula] = []
    if q.variables:
        for values in product(ground_terms, repeat=len(q.variables)):
            instances.append(substitute(q.body, dict(zip(q.variables, values))))
    else:
        instances.append(q.body)
    layers[0].extend(instances)

    quantified: list[Formula] = []
    for i, v in enumerate(q.variables):
        for values in product(ground_terms, repeat=len(q.variables) - 1):
            others = [w for w in q.variables if w != v]
            mapping: Substitution = dict(zip(others, values))
            mapping[v] = Var(pool_var)
            open_body = substitute(q.body, mapping)
            quantified.append(Exists(pool_var, open_body))
            quantified.append(f_forall(pool_var, open_body))

    seen: set[str] = set()
    ordered: list[Formula] = []

    def push(f: Formula) -> None:
        if free_variables(f):
            return
        key = render(f)
        if key not in seen and len(ordered) < max_candidates:
            seen.add(key)
            ordered.append(f)

    for f in layers[0]:
        push(f)
    previous = list(ordered)
    for _ in range(2, depth + 1):
        new: list[Formula] = list(quantified)
        quantified = []
        for a in previous:
            new.append(Not(a))
        for i, a in enumerate(previous):
            for b in previous[i:]:
                new.append(And(a, b))
        for f in new:
            push(f)
        previous = list(ordered)

    results: list[Formula] = []
    reported: set[str] = set()
    for f in ordered:
        if deadline.expired():
            break
        if prove(axioms, f, sig, max_gamma=max_gamma, max_branches=800,
                 node_budget=40_000, timeout_ms=deadline.remaining_ms()):
            s = simplify(f)
            key = render(s)
            if key not in reported:
                reported.add(key)
                results.append(s)
    return results
