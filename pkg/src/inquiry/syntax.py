"""First-order syntax: terms, formulas, questions, substitution, unification.

Naming is Prolog-style: identifiers starting with an uppercase letter are
variables, lowercase identifiers are predicate/function symbols.  The core
connective set is {and, not, exists, true, false, =}; disjunction,
implication, biconditional and the universal quantifier are surface sugar
that the parser desugars.  Bound variables are renamed apart at parse time,
so no two binders in a parsed formula share a name and no binder shadows a
free variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class ParseError(Exception):
    """Malformed input text; carries a character position when known."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SignatureError(Exception):
    """Arity conflict, predicate/function clash, or reserved-name misuse."""


# ---------------------------------------------------------------------------
# Terms and formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Apply(Term):
    func: str
    args: tuple[Term, ...] = ()


def const(name: str) -> Apply:
    return Apply(name, ())


@dataclass(frozen=True)
class Formula:
    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Equal(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Question:
    """A formula with its free variables in first-occurrence order."""

    body: Formula
    variables: tuple[str, ...]

    def __str__(self) -> str:
        return render(self)


def question(body: Formula) -> Question:
    return Question(body, tuple(free_variables(body)))


# Sugar constructors; the parser and the rest of the engine build the core
# connective set only, so these desugar immediately.

def f_or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def f_implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def f_iff(a: Formula, b: Formula) -> Formula:
    return And(f_implies(a, b), f_implies(b, a))


def f_forall(var: str, body: Formula) -> Formula:
    return Not(Exists(var, Not(body)))


def conj(formulas: Iterable[Formula]) -> Formula:
    fs = list(formulas)
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def forall_close(variables: Iterable[str], body: Formula) -> Formula:
    out = body
    for v in reversed(list(variables)):
        out = f_forall(v, out)
    return out


def exists_close(variables: Iterable[str], body: Formula) -> Formula:
    out = body
    for v in reversed(list(variables)):
        out = Exists(v, out)
    return out


# Resugaring patterns used by the printer (and by simplification).

def match_forall(f: Formula) -> tuple[str, Formula] | None:
    if isinstance(f, Not) and isinstance(f.body, Exists) and isinstance(f.body.body, Not):
        return f.body.var, f.body.body.body
    return None


def match_or(f: Formula) -> tuple[Formula, Formula] | None:
    if (isinstance(f, Not) and isinstance(f.body, And)
            and isinstance(f.body.left, Not) and isinstance(f.body.right, Not)):
        return f.body.left.body, f.body.right.body
    return None


def match_implies(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, Not) and isinstance(f.body, And) and isinstance(f.body.right, Not):
        return f.body.left, f.body.right.body
    return None


def match_iff(f: Formula) -> tuple[Formula, Formula] | None:
    if isinstance(f, And):
        fwd = match_implies(f.left)
        bwd = match_implies(f.right)
        if fwd and bwd and fwd[0] == bwd[1] and fwd[1] == bwd[0]:
            return fwd
    return None


# ---------------------------------------------------------------------------
# Signature
# ---------------------------------------------------------------------------

def is_generated_name(name: str) -> bool:
    """Generated symbols never collide with user input: the surface grammar
    rejects leading underscores and primes."""
    return name.startswith("_") or "'" in name


class Signature:
    """Predicate and function symbols with arities and rigidity flags.

    Function symbols default to non-rigid; rigidity is the marked property.
    Predicates have no rigidity flag (their extension is world-dependent by
    nature).  A name may not be both a predicate and a function symbol.
    """

    def __init__(self) -> None:
        self.predicates: dict[str, int] = {}
        self.functions: dict[str, int] = {}
        self._rigid: set[str] = set()
        self._fresh_counter = 0

    def declare_predicate(self, name: str, arity: int) -> None:
        if arity < 0:
            raise SignatureError(f"negative arity for {name}")
        if name in self.functions:
            raise SignatureError(f"{name} is already a function symbol")
        old = self.predicates.get(name)
        if old is not None and old != arity:
            raise SignatureError(f"arity conflict for {name}: {old} vs {arity}")
        self.predicates[name] = arity

    def declare_function(self, name: str, arity: int, rigid: bool = False) -> None:
        if arity < 0:
            raise SignatureError(f"negative arity for {name}")
        if name in self.predicates:
            raise SignatureError(f"{name} is already a predicate symbol")
        old = self.functions.get(name)
        if old is not None and old != arity:
            raise SignatureError(f"arity conflict for {name}: {old} vs {arity}")
        self.functions[name] = arity
        if rigid:
            self._rigid.add(name)

    def make_rigid(self, name: str) -> None:
        if name not in self.functions:
            raise SignatureError(f"unknown function symbol {name}")
        self._rigid.add(name)

    def is_rigid(self, name: str) -> bool:
        return name in self._rigid

    def rigid_functions(self) -> set[str]:
        return set(self._rigid)

    def fresh_predicate(self, arity: int, base: str = "_q") -> str:
        name = self._fresh_name(base)
        self.predicates[name] = arity
        return name

    def fresh_function(self, arity: int, base: str = "_sk", rigid: bool = False) -> str:
        name = self._fresh_name(base)
        self.functions[name] = arity
        if rigid:
            self._rigid.add(name)
        return name

    def _fresh_name(self, base: str) -> str:
        while True:
            name = f"{base}{self._fresh_counter}"
            self._fresh_counter += 1
            if name not in self.predicates and name not in self.functions:
                return name

    def copy(self) -> Signature:
        sig = Signature()
        sig.predicates = dict(self.predicates)
        sig.functions = dict(self.functions)
        sig._rigid = set(self._rigid)
        sig._fresh_counter = self._fresh_counter
        return sig

    def all_rigid_copy(self) -> Signature:
        sig = self.copy()
        sig._rigid = set(sig.functions)
        return sig


# ---------------------------------------------------------------------------
# Structural walks
# ---------------------------------------------------------------------------

def _term_vars(t: Term, out: list[str], seen: set[str], bound: set[str]) -> None:
    if isinstance(t, Var):
        if t.name not in bound and t.name not in seen:
            seen.add(t.name)
            out.append(t.name)
    elif isinstance(t, Apply):
        for a in t.args:
            _term_vars(a, out, seen, bound)


def _formula_vars(f: Formula, out: list[str], seen: set[str], bound: set[str]) -> None:
    if isinstance(f, Atom):
        for t in f.args:
            _term_vars(t, out, seen, bound)
    elif isinstance(f, Equal):
        _term_vars(f.left, out, seen, bound)
        _term_vars(f.right, out, seen, bound)
    elif isinstance(f, And):
        _formula_vars(f.left, out, seen, bound)
        _formula_vars(f.right, out, seen, bound)
    elif isinstance(f, Not):
        _formula_vars(f.body, out, seen, bound)
    elif isinstance(f, Exists):
        inner = bound | {f.var}
        _formula_vars(f.body, out, seen, inner)


def free_variables(x: Term | Formula | Question) -> list[str]:
    """Free variables in first-occurrence (left-to-right) order."""
    out: list[str] = []
    if isinstance(x, Question):
        x = x.body
    if isinstance(x, Term):
        _term_vars(x, out, set(), set())
    else:
        _formula_vars(x, out, set(), set())
    return out


def all_variable_names(f: Formula) -> set[str]:
    """Every variable name occurring in f, free or bound."""
    names: set[str] = set()

    def go_t(t: Term) -> None:
        if isinstance(t, Var):
            names.add(t.name)
        elif isinstance(t, Apply):
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
            names.add(g.var)
            go(g.body)

    go(f)
    return names


def term_functions(t: Term) -> set[str]:
    out: set[str] = set()

    def go(u: Term) -> None:
        if isinstance(u, Apply):
            out.add(u.func)
            for a in u.args:
                go(a)

    go(t)
    return out


def formula_symbols(f: Formula) -> tuple[set[str], set[str], bool]:
    """Returns (predicate names, function names, whether equality occurs)."""
    preds: set[str] = set()
    funcs: set[str] = set()
    has_eq = False

    def go(g: Formula) -> None:
        nonlocal has_eq
        if isinstance(g, Atom):
            preds.add(g.pred)
            for t in g.args:
                funcs.update(term_functions(t))
        elif isinstance(g, Equal):
            has_eq = True
            funcs.update(term_functions(g.left))
            funcs.update(term_functions(g.right))
        elif isinstance(g, And):
            go(g.left)
            go(g.right)
        elif isinstance(g, Not):
            go(g.body)
        elif isinstance(g, Exists):
            go(g.body)

    go(f)
    return preds, funcs, has_eq


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

Substitution = dict[str, Term]


def substitute_term(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, Apply):
        if not t.args:
            return t
        return Apply(t.func, tuple(substitute_term(a, sigma) for a in t.args))
    return t


def _variant(base: str, used: set[str]) -> str:
    if base not in used:
        return base
    root = base.rstrip("0123456789") or base
    n = 1
    while f"{root}{n}" in used:
        n += 1
    return f"{root}{n}"


def substitute(f: Formula, sigma: Substitution) -> Formula:
    """Capture-avoiding substitution; bound variables renamed as needed."""
    if not sigma:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(substitute_term(t, sigma) for t in f.args))
    if isinstance(f, Equal):
        return Equal(substitute_term(f.left, sigma), substitute_term(f.right, sigma))
    if isinstance(f, And):
        return And(substitute(f.left, sigma), substitute(f.right, sigma))
    if isinstance(f, Not):
        return Not(substitute(f.body, sigma))
    if isinstance(f, Exists):
        body_free = set(free_variables(f.body))
        live = {k: v for k, v in sigma.items() if k != f.var and k in body_free}
        if not live:
            return f
        range_vars: set[str] = set()
        for t in live.values():
            range_vars.update(free_variables(t))
        if f.var in range_vars:
            used = body_free | range_vars | set(live)
            fresh = _variant(f.var, used)
            live[f.var] = Var(fresh)
            return Exists(fresh, substitute(f.body, live))
        return Exists(f.var, substitute(f.body, live))
    return f


def compose(first: Substitution, then: Substitution) -> Substitution:
    """Substitution composition: applying the result equals applying `first`
    and then `then`."""
    out: Substitution = {}
    for v, t in first.items():
        u = substitute_term(t, then)
        if not (isinstance(u, Var) and u.name == v):
            out[v] = u
    for v, t in then.items():
        if v not in first:
            out[v] = t
    return out


def normalize(sigma: Substitution) -> Substitution:
    """Iterate self-application until idempotent; drops identity bindings.

    Fails with ValueError on cyclic substitutions (never produced by mgu)."""
    current = {v: t for v, t in sigma.items()
               if not (isinstance(t, Var) and t.name == v)}
    for _ in range(len(current) + 1):
        nxt = {v: substitute_term(t, current) for v, t in current.items()}
        nxt = {v: t for v, t in nxt.items()
               if not (isinstance(t, Var) and t.name == v)}
        if nxt == current:
            return current
        current = nxt
    raise ValueError("cyclic substitution")


def _occurs(var: str, t: Term) -> bool:
    if isinstance(t, Var):
        return t.name == var
    if isinstance(t, Apply):
        return any(_occurs(var, a) for a in t.args)
    return False


def mgu(pairs: Iterable[tuple[Term, Term]]) -> Substitution | None:
    """Most general unifier of the term pairs, or None.

    The result is idempotent: domain variables do not occur in range terms.
    """
    sigma: Substitution = {}
    work = list(pairs)
    while work:
        s, t = work.pop()
        s = substitute_term(s, sigma)
        t = substitute_term(t, sigma)
        if s == t:
            continue
        if isinstance(s, Var):
            if _occurs(s.name, t):
                return None
            bind = {s.name: t}
            sigma = {v: substitute_term(u, bind) for v, u in sigma.items()}
            sigma[s.name] = t
        elif isinstance(t, Var):
            work.append((t, s))
        elif isinstance(s, Apply) and isinstance(t, Apply):
            if s.func != t.func or len(s.args) != len(t.args):
                return None
            work.extend(zip(s.args, t.args))
        else:
            return None
    return sigma


def unify_atoms(a: Formula, b: Formula) -> Substitution | None:
    """Unify two atoms (same predicate) or two equality statements."""
    if isinstance(a, Atom) and isinstance(b, Atom):
        if a.pred != b.pred or len(a.args) != len(b.args):
            return None
        return mgu(zip(a.args, b.args))
    if isinstance(a, Equal) and isinstance(b, Equal):
        return mgu([(a.left, b.left), (a.right, b.right)])
    return None


def extend_unifier(sigma: Substitution,
                   pairs: Iterable[tuple[Term, Term]]) -> Substitution | None:
    """Unify the pairs under an existing substitution; returns the composite."""
    inst = [(substitute_term(s, sigma), substitute_term(t, sigma)) for s, t in pairs]
    extra = mgu(inst)
    if extra is None:
        return None
    return compose(sigma, extra)


def match_terms(patterns: Sequence[Term], targets: Sequence[Term],
                binding: Substitution | None = None) -> Substitution | None:
    """One-way matching: find tau with pattern.tau == target, variables in
    patterns bind, targets are taken literally."""
    if len(patterns) != len(targets):
        return None
    out: Substitution = dict(binding) if binding else {}
    work = list(zip(patterns, targets))
    while work:
        p, t = work.pop()
        if isinstance(p, Var):
            bound = out.get(p.name)
            if bound is None:
                out[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, Apply):
            if not isinstance(t, Apply) or p.func != t.func or len(p.args) != len(t.args):
                return None
            work.extend(zip(p.args, t.args))
        else:
            return None
    return out


def more_general(s1: Substitution, s2: Substitution,
                 variables: Iterable[str]) -> bool:
    """True if s1 is more general than (or a renaming of) s2 over the given
    variables: some tau turns v.s1 into v.s2 for every v."""
    vs = list(variables)
    patterns = [substitute_term(Var(v), s1) for v in vs]
    targets = [substitute_term(Var(v), s2) for v in vs]
    return match_terms(patterns, targets) is not None


# ---------------------------------------------------------------------------
# Alpha-equivalence and hygiene
# ---------------------------------------------------------------------------

def alpha_equal(f1: Formula, f2: Formula) -> bool:
    def go(a: Formula, b: Formula, env: dict[str, str]) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, (Top, Bottom)):
            return True
        if isinstance(a, Atom):
            return a.pred == b.pred and _terms_eq(a.args, b.args, env)
        if isinstance(a, Equal):
            return _terms_eq((a.left, a.right), (b.left, b.right), env)
        if isinstance(a, And):
            return go(a.left, b.left, env) and go(a.right, b.right, env)
        if isinstance(a, Not):
            return go(a.body, b.body, env)
        if isinstance(a, Exists):
            inner = dict(env)
            inner[a.var] = b.var
            return go(a.body, b.body, inner)
        return False

    def _terms_eq(ts1: Sequence[Term], ts2: Sequence[Term], env: dict[str, str]) -> bool:
        if len(ts1) != len(ts2):
            return False
        for t1, t2 in zip(ts1, ts2):
            if isinstance(t1, Var):
                if not isinstance(t2, Var):
                    return False
                if env.get(t1.name, t1.name) != t2.name:
                    return False
            elif isinstance(t1, Apply):
                if not (isinstance(t2, Apply) and t1.func == t2.func):
                    return False
                if not _terms_eq(t1.args, t2.args, env):
                    return False
        return True

    return go(f1, f2, {})


def rename_apart(f: Formula, reserved: Iterable[str] = ()) -> Formula:
    """Rename bound variables so every binder is unique and distinct from
    all free variables and from the reserved names."""
    used = set(free_variables(f)) | set(reserved)

    def go(g: Formula, env: dict[str, Term]) -> Formula:
        if isinstance(g, Atom):
            return Atom(g.pred, tuple(substitute_term(t, env) for t in g.args))
        if isinstance(g, Equal):
            return Equal(substitute_term(g.left, env), substitute_term(g.right, env))
        if isinstance(g, And):
            return And(go(g.left, env), go(g.right, env))
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, Exists):
            name = _variant(g.var, used)
            used.add(name)
            inner = dict(env)
            inner[g.var] = Var(name)
            return Exists(name, go(g.body, inner))
        return g

    return go(f, {})


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"(<->|->|[()=,.?~&|])|([A-Za-z_][A-Za-z0-9_']*)|(\S)")
_KEYWORDS = {"exists", "forall", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.group(3):
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            tokens.append(("op", m.group(1), pos))
        else:
            word = m.group(2)
            kind = "kw" if word in _KEYWORDS else "ident"
            tokens.append((kind, word, pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.sig = sig

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != value:
            found = tok[1] if tok else "end of input"
            pos = tok[2] if tok else None
            raise ParseError(f"expected {value!r} but found {found!r}", pos)
        self.pos += 1

    def at_op(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value

    # Precedence: ~ binds tightest, then &, |, ->, <->; the two arrows are
    # right-associative, & and | left-associative, quantifiers extend
    # maximally to the right.

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.implies()
        if self.at_op("<->"):
            self.next()
            return f_iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.at_op("->"):
            self.next()
            return f_implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.at_op("|"):
            self.next()
            out = f_or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.unary()
        while self.at_op("&"):
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        kind, value, pos = tok
        if kind == "op" and value == "~":
            self.next()
            return Not(self.unary())
        if kind == "kw" and value in ("exists", "forall"):
            self.next()
            vtok = self.next()
            if vtok[0] != "ident" or not vtok[1][0].isupper():
                raise ParseError("expected a variable after quantifier", vtok[2])
            self._check_user_name(vtok[1], vtok[2])
            self.expect(".")
            body = self.formula()
            return Exists(vtok[1], body) if value == "exists" else f_forall(vtok[1], body)
        if kind == "kw" and value == "true":
            self.next()
            return TOP
        if kind == "kw" and value == "false":
            self.next()
            return BOTTOM
        if kind == "op" and value == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            if self.at_op("="):
                raise ParseError("equality applies to terms, not formulas", pos)
            return inner
        if kind == "ident":
            return self.atomic(pos)
        raise ParseError(f"unexpected token {value!r}", pos)

    def atomic(self, pos: int) -> Formula:
        left = self.term()
        if self.at_op("="):
            self.next()
            right = self.term()
            return Equal(left, right)
        if isinstance(left, Var):
            raise ParseError(f"variable {left.name} is not a formula", pos)
        assert isinstance(left, Apply)
        # Reinterpret the application as an atom; declare_predicate rejects
        # names already used as function symbols.
        self.sig.declare_predicate(left.func, len(left.args))
        return Atom(left.func, left.args)

    def term(self) -> Term:
        tok = self.next()
        if tok[0] != "ident":
            raise ParseError(f"expected a term but found {tok[1]!r}", tok[2])
        name = tok[1]
        self._check_user_name(name, tok[2])
        if name[0].isupper():
            return Var(name)
        args: list[Term] = []
        if self.at_op("("):
            self.next()
            if not self.at_op(")"):
                args.append(self.term())
                while self.at_op(","):
                    self.next()
                    args.append(self.term())
            self.expect(")")
        return Apply(name, tuple(args))

    def _check_user_name(self, name: str, pos: int) -> None:
        if is_generated_name(name):
            raise ParseError(f"{name!r} is a reserved generated name", pos)

    def declare_terms(self, f: Formula) -> None:
        # Function symbols are declared after a full parse so that an
        # identifier's final role (predicate vs function) is known.
        def go_t(t: Term) -> None:
            if isinstance(t, Apply):
                self.sig.declare_function(t.func, len(t.args))
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


def parse(text: str, sig: Signature) -> Formula | Question:
    """Parse surface text into a desugared, renamed-apart formula.

    A leading '?' yields a Question.  Symbols are declared in `sig` on first
    use; conflicting use raises SignatureError.
    """
    p = _Parser(text, sig)
    is_question = False
    if p.at_op("?"):
        p.next()
        is_question = True
    f = p.formula()
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
    p.declare_terms(f)
    f = rename_apart(f)
    if is_question:
        return question(f)
    return f


def parse_formula(text: str, sig: Signature) -> Formula:
    out = parse(text, sig)
    if isinstance(out, Question):
        raise ParseError("expected a formula, found a question")
    return out


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_PREC_IFF = 1
_PREC_IMPL = 2
_PREC_OR = 3
_PREC_AND = 4
_PREC_UNARY = 5


def render(x: Term | Formula | Question) -> str:
    """Deterministic text form; parse(render(f)) is alpha-equivalent to f.

    Core encodings of |, ->, <-> and forall are rendered back in surface
    syntax; each sugar form desugars to exactly the matched core shape, so
    the round trip is stable.
    """
    if isinstance(x, Question):
        return "? " + _render_f(x.body, 0, True)
    if isinstance(x, Term):
        return _render_t(x)
    return _render_f(x, 0, True)


def _render_t(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    assert isinstance(t, Apply)
    if not t.args:
        return t.func
    return f"{t.func}({', '.join(_render_t(a) for a in t.args)})"


def _render_f(f: Formula, prec: int, rightmost: bool) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({', '.join(_render_t(a) for a in f.args)})"
    if isinstance(f, Equal):
        return f"{_render_t(f.left)} = {_render_t(f.right)}"

    fa = match_forall(f)
    if fa is not None:
        return _render_quant("forall", fa[0], fa[1], rightmost)
    if isinstance(f, Exists):
        return _render_quant("exists", f.var, f.body, rightmost)

    io = match_iff(f)
    if io is not None:
        a, b = io
        s = (_render_f(a, _PREC_IFF + 1, False) + " <-> "
             + _render_f(b, _PREC_IFF, rightmost))
        return _wrap(s, _PREC_IFF, prec)
    im = match_implies(f)
    if im is not None and match_or(f) is None:
        a, b = im
        s = (_render_f(a, _PREC_IMPL + 1, False) + " -> "
             + _render_f(b, _PREC_IMPL, rightmost))
        return _wrap(s, _PREC_IMPL, prec)
    orr = match_or(f)
    if orr is not None:
        a, b = orr
        s = (_render_f(a, _PREC_OR, False) + " | "
             + _render_f(b, _PREC_OR + 1, rightmost))
        return _wrap(s, _PREC_OR, prec)
    if isinstance(f, And):
        s = (_render_f(f.left, _PREC_AND, False) + " & "
             + _render_f(f.right, _PREC_AND + 1, rightmost))
        return _wrap(s, _PREC_AND, prec)
    if isinstance(f, Not):
        if isinstance(f.body, Equal):
            return "~(" + _render_f(f.body, 0, True) + ")"
        return "~" + _render_f(f.body, _PREC_UNARY, rightmost)
    raise TypeError(f"cannot render {f!r}")


def _render_quant(word: str, var: str, body: Formula, rightmost: bool) -> str:
    s = f"{word} {var}. " + _render_f(body, 0, True)
    return s if rightmost else f"({s})"


def _wrap(s: str, node_prec: int, ctx_prec: int) -> str:
    return s if node_prec >= ctx_prec else f"({s})"
