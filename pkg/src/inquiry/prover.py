"""Free-variable tableau refutation engine.

The calculus works on formulas over {and, not, exists, true, false, =} in
which no existential quantifier occurs positively (positive existentials
are eliminated up front by Skolemization, so polarity is made explicit by
a negation-normal-form style traversal).  Expansion rules:

    conjunction      a & b        adds both conjuncts to the branch
    neg. conjunction ~(a & b)     splits the branch into ~a | ~b
    double negation  ~~a          adds a
    quantification   ~exists X. a adds ~a[X := Y] for a fresh Y, and may be
                                  re-applied up to the multiplicity bound

A branch is closed when, after applying a substitution, it contains a
formula and its negation (or the constant false / ~true).  Closure search
pairs complementary literals; after saturation this loses no closures,
since the non-quantifier rules are free and every surviving existential is
negative, so any complex complementary pair decomposes to literal ones
under the same substitution.

Proof search runs depth-first iterative deepening on the quantifier
multiplicity, which keeps the search fair and complete in the limit.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .syntax import (
    And, Apply, Atom, Bottom, Equal, Exists, Formula, Not, Question,
    Signature, Substitution, Term, Top, Var, all_variable_names, conj,
    extend_unifier, f_implies, forall_close, formula_symbols, free_variables,
    more_general, render, substitute, substitute_term,
)


class BudgetExceeded(Exception):
    """A search bound (time, branches, or closure nodes) was hit."""


class RuleError(Exception):
    """No tableau rule applies to the given occurrence."""


class Deadline:
    def __init__(self, timeout_ms: float | None = None):
        self._at = None if timeout_ms is None else time.monotonic() + timeout_ms / 1000.0

    def check(self) -> None:
        if self._at is not None and time.monotonic() > self._at:
            raise BudgetExceeded("timeout")

    def expired(self) -> bool:
        return self._at is not None and time.monotonic() > self._at

    def remaining_ms(self) -> float | None:
        if self._at is None:
            return None
        return max(0.0, (self._at - time.monotonic()) * 1000.0)


# ---------------------------------------------------------------------------
# Skolemization
# ---------------------------------------------------------------------------

@dataclass
class SkolemizedTheory:
    formulas: list[Formula]
    skolem_symbols: set[str]


def skolemize(formulas: Iterable[Formula], sig: Signature,
              rigid_skolems: bool = False) -> SkolemizedTheory:
    """Eliminate positively occurring existentials with fresh function
    symbols applied to the universal variables in scope.

    Skolem symbols are non-rigid (they name unknown witnesses) unless
    `rigid_skolems` is set.  The result is equisatisfiable and contains
    existentials in negative (universal) positions only.
    """
    symbols: set[str] = set()

    def go(f: Formula, positive: bool, scope: tuple[str, ...]) -> Formula:
        if isinstance(f, And):
            return And(go(f.left, positive, scope), go(f.right, positive, scope))
        if isinstance(f, Not):
            return Not(go(f.body, not positive, scope))
        if isinstance(f, Exists):
            if positive:
                name = sig.fresh_function(len(scope), rigid=rigid_skolems)
                symbols.add(name)
                witness = Apply(name, tuple(Var(v) for v in scope))
                return go(substitute(f.body, {f.var: witness}), positive, scope)
            return Exists(f.var, go(f.body, positive, scope + (f.var,)))
        return f

    out = [go(f, True, ()) for f in formulas]
    return SkolemizedTheory(out, symbols)


# ---------------------------------------------------------------------------
# Tableau
# ---------------------------------------------------------------------------

@dataclass
class Occurrence:
    oid: int
    formula: Formula
    provenance: str                    # "theory" | "expand" | "instance"
    expanded_from: int | None = None   # oid of the occurrence this came from
    instance_index: int | None = None  # registry index for added instances


class _Node:
    __slots__ = ("occ", "parent", "children")

    def __init__(self, occ: Occurrence | None, parent: "_Node | None"):
        self.occ = occ
        self.parent = parent
        self.children: list[_Node] = []


class Tableau:
    """A tree of formula occurrences; a branch is the path to a leaf.

    The tableau owns a fresh-variable supply; variables introduced by the
    quantification rule never collide with anything already present.
    """

    def __init__(self, formulas: Sequence[Formula], provenance: str = "theory"):
        self.root = _Node(None, None)
        self._next_oid = 0
        self._used_vars: set[str] = set()
        for f in formulas:
            self._used_vars |= all_variable_names(f)
        self._var_counter = 0
        leaf = self.root
        for f in formulas:
            leaf = self._attach(leaf, f, provenance)
        self.leaves: list[_Node] = [leaf]
        self._instance_frames: list[list[_Node]] = []

    # -- construction helpers ------------------------------------------------

    def _attach(self, parent: _Node, formula: Formula, provenance: str,
                expanded_from: int | None = None,
                instance_index: int | None = None) -> _Node:
        occ = Occurrence(self._next_oid, formula, provenance,
                         expanded_from, instance_index)
        self._next_oid += 1
        node = _Node(occ, parent)
        parent.children.append(node)
        return node

    def fresh_var(self) -> str:
        while True:
            self._var_counter += 1
            name = f"V{self._var_counter}"
            if name not in self._used_vars:
                self._used_vars.add(name)
                return name

    def path(self, leaf: _Node) -> list[Occurrence]:
        out = []
        node = leaf
        while node is not self.root:
            out.append(node.occ)
            node = node.parent
        out.reverse()
        return out

    def _replace_leaf(self, leaf: _Node, new_leaves: list[_Node]) -> None:
        i = self.leaves.index(leaf)
        self.leaves[i:i + 1] = new_leaves

    # -- expansion rules -----------------------------------------------------

    def expand(self, leaf: _Node, occ: Occurrence) -> list[_Node]:
        """Apply the one rule matching the occurrence on the given branch;
        returns the new leaves.  Raises RuleError if no rule applies."""
        f = occ.formula
        if isinstance(f, And):
            mid = self._attach(leaf, f.left, "expand", occ.oid)
            new = self._attach(mid, f.right, "expand", occ.oid)
            self._replace_leaf(leaf, [new])
            return [new]
        if isinstance(f, Not) and isinstance(f.body, And):
            l1 = self._attach(leaf, Not(f.body.left), "expand", occ.oid)
            l2 = self._attach(leaf, Not(f.body.right), "expand", occ.oid)
            self._replace_leaf(leaf, [l1, l2])
            return [l1, l2]
        if isinstance(f, Not) and isinstance(f.body, Not):
            new = self._attach(leaf, f.body.body, "expand", occ.oid)
            self._replace_leaf(leaf, [new])
            return [new]
        if isinstance(f, Not) and isinstance(f.body, Exists):
            y = self.fresh_var()
            inst = Not(substitute(f.body.body, {f.body.var: Var(y)}))
            new = self._attach(leaf, inst, "expand", occ.oid)
            self._replace_leaf(leaf, [new])
            return [new]
        if isinstance(f, Exists):
            raise RuleError("positive existential on a branch; Skolemize first")
        raise RuleError(f"no rule applies to {render(f)}")

    def gamma_count(self, leaf: _Node, oid: int) -> int:
        """Number of instances the quantification rule has produced from the
        given occurrence on this branch."""
        n = 0
        node = leaf
        while node is not self.root:
            if node.occ.expanded_from == oid and node.occ.provenance == "expand":
                n += 1
            node = node.parent
        return n

    # -- saturation ----------------------------------------------------------

    def saturate(self, multiplicity: int, *, max_branches: int = 5000,
                 deadline: Deadline | None = None) -> None:
        """Exhaustively apply expansion rules, each universal occurrence
        instantiated at most `multiplicity` times per branch.  Deterministic:
        branches develop left-first, rules in occurrence order."""
        work: list[tuple[_Node, deque[Occurrence]]] = []
        finished: list[_Node] = []
        for leaf in self.leaves:
            work.append((leaf, deque(self.path(leaf))))
        work.reverse()
        branch_count = len(self.leaves)
        steps = 0
        while work:
            leaf, queue = work.pop()
            while queue:
                steps += 1
                if deadline is not None and steps % 64 == 0:
                    deadline.check()
                occ = queue.popleft()
                f = occ.formula
                if isinstance(f, And):
                    mid = self._attach(leaf, f.left, "expand", occ.oid)
                    leaf = self._attach(mid, f.right, "expand", occ.oid)
                    queue.append(mid.occ)
                    queue.append(leaf.occ)
                elif isinstance(f, Not) and isinstance(f.body, And):
                    l1 = self._attach(leaf, Not(f.body.left), "expand", occ.oid)
                    l2 = self._attach(leaf, Not(f.body.right), "expand", occ.oid)
                    branch_count += 1
                    if branch_count > max_branches:
                        raise BudgetExceeded("branch bound exceeded")
                    q2 = deque(queue)
                    q2.append(l2.occ)
                    work.append((l2, q2))
                    leaf = l1
                    queue.append(l1.occ)
                elif isinstance(f, Not) and isinstance(f.body, Not):
                    leaf = self._attach(leaf, f.body.body, "expand", occ.oid)
                    queue.append(leaf.occ)
                elif isinstance(f, Not) and isinstance(f.body, Exists):
                    if self.gamma_count(leaf, occ.oid) < multiplicity:
                        y = self.fresh_var()
                        inst = Not(substitute(f.body.body, {f.body.var: Var(y)}))
                        leaf = self._attach(leaf, inst, "expand", occ.oid)
                        queue.append(leaf.occ)
                        queue.append(occ)  # may be instantiated again
                elif isinstance(f, Exists):
                    raise RuleError("positive existential on a branch; Skolemize first")
                # literals, constants: nothing to do
            finished.append(leaf)
        self.leaves = finished

    # -- added instances -----------------------------------------------------

    def push_instances(self, items: Sequence[tuple[Formula, int]]) -> list[list[int]]:
        """Append each (formula, instance index) to every branch; returns the
        occurrence ids per item.  Instances are literals and need no further
        expansion.  Pop with pop_instances to restore the previous state."""
        frame = list(self.leaves)
        oids: list[list[int]] = []
        for formula, idx in items:
            ids = []
            new_leaves = []
            for leaf in self.leaves:
                node = self._attach(leaf, formula, "instance", instance_index=idx)
                ids.append(node.occ.oid)
                new_leaves.append(node)
            self.leaves = new_leaves
            oids.append(ids)
        self._instance_frames.append(frame)
        return oids

    def pop_instances(self) -> None:
        frame = self._instance_frames.pop()
        for leaf in frame:
            leaf.children = []
        self.leaves = frame

    def instance_occurrences(self) -> list[Occurrence]:
        out = []

        def walk(node: _Node) -> None:
            for child in node.children:
                if child.occ.provenance == "instance":
                    out.append(child.occ)
                walk(child)

        walk(self.root)
        return out

    # -- reporting -----------------------------------------------------------

    def dump(self) -> str:
        lines: list[str] = []

        def walk(node: _Node, path: tuple[int, ...]) -> None:
            for i, child in enumerate(node.children):
                occ = child.occ
                p = path + (i,)
                origin = occ.provenance
                if occ.expanded_from is not None:
                    origin += f"(#{occ.expanded_from})"
                lines.append(f"#{occ.oid}  path={'.'.join(map(str, p))}  "
                             f"{render(occ.formula)}  [{origin}]")
                walk(child, p)

        walk(self.root, ())
        return "\n".join(lines)

    def free_variable_names(self) -> set[str]:
        names: set[str] = set()

        def walk(node: _Node) -> None:
            for child in node.children:
                names.update(free_variables(child.occ.formula))
                walk(child)

        walk(self.root)
        return names


# ---------------------------------------------------------------------------
# Closures
# ---------------------------------------------------------------------------

@dataclass
class Closure:
    """A substitution plus the occurrence set that realizes, per branch, a
    complementary pair once the substitution is applied."""

    substitution: Substitution
    kappa: frozenset[int]


@dataclass
class _Candidate:
    kappa: frozenset[int]
    pairs: tuple[tuple[Term, Term], ...]
    variables: frozenset[str]


def _branch_candidates(occs: Sequence[Occurrence]) -> list[_Candidate]:
    out: list[_Candidate] = []
    positives: list[Occurrence] = []
    negatives: list[Occurrence] = []
    for occ in occs:
        f = occ.formula
        if isinstance(f, Bottom) or (isinstance(f, Not) and isinstance(f.body, Top)):
            out.append(_Candidate(frozenset([occ.oid]), (), frozenset()))
        elif isinstance(f, (Atom, Equal)):
            positives.append(occ)
        elif isinstance(f, Not) and isinstance(f.body, (Atom, Equal)):
            negatives.append(occ)
    for pos in positives:
        for neg in negatives:
            pf, nf = pos.formula, neg.formula.body
            pairs: tuple[tuple[Term, Term], ...] | None = None
            if isinstance(pf, Atom) and isinstance(nf, Atom):
                if pf.pred == nf.pred and len(pf.args) == len(nf.args):
                    pairs = tuple(zip(pf.args, nf.args))
            elif isinstance(pf, Equal) and isinstance(nf, Equal):
                pairs = ((pf.left, nf.left), (pf.right, nf.right))
            if pairs is not None:
                vs: set[str] = set()
                for s, t in pairs:
                    vs.update(free_variables(s))
                    vs.update(free_variables(t))
                out.append(_Candidate(frozenset([pos.oid, neg.oid]), pairs,
                                      frozenset(vs)))
    return out


def _canon_sigma(sigma: Substitution, variables: frozenset[str]) -> tuple:
    # Terms are frozen dataclasses, hence hashable and ordered by name here.
    return tuple(sorted(((v, sigma[v]) for v in sigma if v in variables),
                        key=lambda kv: kv[0]))


def _search_closures(branch_cands: list[list[_Candidate]], *,
                     project_vars: frozenset[str] | None,
                     project_oids: frozenset[int] | None,
                     node_budget: int,
                     deadline: Deadline | None) -> tuple[list[Closure], bool]:
    """Backtracking combination of one closing candidate per branch.

    With projection enabled, states that agree on the substitution over the
    still-relevant variables and on the projected occurrence set are
    explored once; this collapses choices that differ only in which theory
    occurrences justify a branch.
    """
    order = sorted(range(len(branch_cands)), key=lambda i: len(branch_cands[i]))
    branches = [branch_cands[i] for i in order]
    n = len(branches)
    suffix_vars: list[frozenset[str]] = [frozenset()] * (n + 1)
    for i in range(n - 1, -1, -1):
        vs = set(suffix_vars[i + 1])
        for cand in branches[i]:
            vs |= cand.variables
        suffix_vars[i] = frozenset(vs)

    results: list[Closure] = []
    seen: set[tuple] = set()
    budget = [node_budget]
    truncated = [False]

    def rec(i: int, sigma: Substitution, kappa: frozenset[int]) -> None:
        if budget[0] <= 0:
            truncated[0] = True
            return
        budget[0] -= 1
        if deadline is not None and budget[0] % 128 == 0 and deadline.expired():
            truncated[0] = True
            return
        if i == n:
            results.append(Closure(sigma, kappa))
            return
        if project_vars is not None:
            key = (i,
                   _canon_sigma(sigma, suffix_vars[i] | project_vars),
                   kappa & project_oids if project_oids is not None else kappa)
            if key in seen:
                return
            seen.add(key)
        for cand in branches[i]:
            s2 = extend_unifier(sigma, cand.pairs)
            if s2 is None:
                continue
            rec(i + 1, s2, kappa | cand.kappa)

    rec(0, {}, frozenset())
    return results, truncated[0]


def _maximal_closures(closures: list[Closure], variables: set[str],
                      oids: frozenset[int] | None = None) -> list[Closure]:
    """Deduplicate, then keep only closures no other closure strictly
    dominates (dominating = more general substitution, smaller kappa).

    When `oids` is given, kappa comparison and deduplication are restricted
    to those occurrences; substitution comparison is always over
    `variables`.  Passing the instance projection here collapses closures
    that generate the same answer."""
    varset = frozenset(variables)

    def proj(kappa: frozenset[int]) -> frozenset[int]:
        return kappa if oids is None else kappa & oids

    uniq: list[Closure] = []
    seen: set[tuple] = set()
    for c in closures:
        key = (_canon_sigma(c.substitution, varset), proj(c.kappa))
        if key not in seen:
            seen.add(key)
            uniq.append(c)

    def dominates(a: Closure, b: Closure) -> bool:
        return (proj(a.kappa) <= proj(b.kappa)
                and more_general(a.substitution, b.substitution, variables))

    kept: list[Closure] = []
    for i, c in enumerate(uniq):
        drop = False
        for j, d in enumerate(uniq):
            if i == j:
                continue
            if dominates(d, c) and (not dominates(c, d) or j < i):
                drop = True
                break
        if not drop:
            kept.append(c)
    return kept


def find_most_general_closures(tableau: Tableau, *,
                               project_instances: bool = False,
                               node_budget: int = 200_000,
                               deadline: Deadline | None = None) -> list[Closure]:
    """All most general closures of the tableau as it stands.

    Every returned (substitution, kappa) closes each branch; no returned
    closure is strictly dominated by another.  With `project_instances`,
    closures are identified when they agree on the added instances and on
    the substitution's effect on instance variables - the projection under
    which generated answers are invariant."""
    branch_cands = [_branch_candidates(tableau.path(leaf)) for leaf in tableau.leaves]
    if any(not cands for cands in branch_cands):
        return []
    project_vars: frozenset[str] | None = None
    project_oids: frozenset[int] | None = None
    if project_instances:
        inst = tableau.instance_occurrences()
        vs: set[str] = set()
        for occ in inst:
            vs.update(free_variables(occ.formula))
        project_vars = frozenset(vs)
        project_oids = frozenset(occ.oid for occ in inst)
    results, _ = _search_closures(branch_cands, project_vars=project_vars,
                                  project_oids=project_oids,
                                  node_budget=node_budget, deadline=deadline)
    if project_instances:
        return _maximal_closures(results, set(project_vars or ()), project_oids)
    return _maximal_closures(results, tableau.free_variable_names())


def has_closing_substitution(tableau: Tableau, *, node_budget: int = 200_000,
                             deadline: Deadline | None = None) -> bool:
    """Whether some substitution closes every branch; first hit wins."""
    branch_cands = [_branch_candidates(tableau.path(leaf)) for leaf in tableau.leaves]
    if any(not cands for cands in branch_cands):
        return False
    order = sorted(range(len(branch_cands)), key=lambda i: len(branch_cands[i]))
    branches = [branch_cands[i] for i in order]
    n = len(branches)
    suffix_vars: list[frozenset[str]] = [frozenset()] * (n + 1)
    for i in range(n - 1, -1, -1):
        vs = set(suffix_vars[i + 1])
        for cand in branches[i]:
            vs |= cand.variables
        suffix_vars[i] = frozenset(vs)

    failed: set[tuple] = set()
    budget = [node_budget]

    def rec(i: int, sigma: Substitution) -> bool:
        if i == n:
            return True
        if budget[0] <= 0:
            raise BudgetExceeded("closure search budget")
        budget[0] -= 1
        if deadline is not None and budget[0] % 128 == 0:
            deadline.check()
        key = (i, _canon_sigma(sigma, suffix_vars[i]))
        if key in failed:
            return False
        for cand in branches[i]:
            s2 = extend_unifier(sigma, cand.pairs)
            if s2 is not None and rec(i + 1, s2):
                return True
        failed.add(key)
        return False

    return rec(0, {})


# ---------------------------------------------------------------------------
# Proving
# ---------------------------------------------------------------------------

def prove(premises: Sequence[Formula], conclusion: Formula, sig: Signature, *,
          max_gamma: int = 3, max_branches: int = 2000,
          node_budget: int = 200_000, timeout_ms: float | None = None) -> bool:
    """Refutation proof of `premises entail conclusion`.

    True only if a closed tableau for premises + negated conclusion exists
    (sound); iterative deepening over the quantifier multiplicity makes the
    search complete in the limit.  False means no proof within the budget,
    never disproof.
    """
    deadline = Deadline(timeout_ms)
    theory = skolemize(list(premises) + [Not(conclusion)], sig)
    for k in range(1, max_gamma + 1):
        tableau = Tableau(theory.formulas)
        try:
            tableau.saturate(k, max_branches=max_branches, deadline=deadline)
            if has_closing_substitution(tableau, node_budget=node_budget,
                                        deadline=deadline):
                return True
        except BudgetExceeded:
            return False
    return False


# ---------------------------------------------------------------------------
# Equality via axioms
# ---------------------------------------------------------------------------

def equality_axioms(formulas: Sequence[Formula], sig: Signature) -> list[Formula]:
    """Reflexivity plus replacement axioms for the predicate and function
    symbols occurring in the formulas.

    Pass in every formula that will take part in the proof (theory and
    goals); adequacy of the axiomatization needs replacement for all symbols
    involved.  A replacement axiom for equality itself (which packages
    symmetry and transitivity) is emitted when equality occurs.
    """
    preds: dict[str, int] = {}
    funcs: dict[str, int] = {}
    has_eq = False
    for f in formulas:
        ps, fs, eq = formula_symbols(f)
        has_eq = has_eq or eq
        for p in ps:
            preds[p] = sig.predicates[p]
        for fn in fs:
            funcs[fn] = sig.functions[fn]

    axioms: list[Formula] = [forall_close(["X"], Equal(Var("X"), Var("X")))]
    if has_eq:
        axioms.append(forall_close(
            ["X", "Y", "Z", "U"],
            f_implies(conj([Equal(Var("X"), Var("Z")),
                            Equal(Var("Y"), Var("U")),
                            Equal(Var("X"), Var("Y"))]),
                      Equal(Var("Z"), Var("U")))))
    for name in sorted(preds):
        n = preds[name]
        if n == 0:
            continue
        xs = [Var(f"X{i + 1}") for i in range(n)]
        ys = [Var(f"Y{i + 1}") for i in range(n)]
        body = f_implies(
            conj([Equal(x, y) for x, y in zip(xs, ys)]
                 + [Atom(name, tuple(xs))]),
            Atom(name, tuple(ys)))
        axioms.append(forall_close([v.name for v in xs + ys], body))
    for name in sorted(funcs):
        n = funcs[name]
        if n == 0:
            continue
        xs = [Var(f"X{i + 1}") for i in range(n)]
        ys = [Var(f"Y{i + 1}") for i in range(n)]
        body = f_implies(
            conj([Equal(x, y) for x, y in zip(xs, ys)]),
            Equal(Apply(name, tuple(xs)), Apply(name, tuple(ys))))
        axioms.append(forall_close([v.name for v in xs + ys], body))
    return axioms
