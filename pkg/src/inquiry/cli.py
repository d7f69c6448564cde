"""Command-line interface: problem files, mode dispatch, exit codes.

Problem files are line-based (UTF-8, '%' comments), one statement per line:

    rigid a, b, f/2.          declare rigid symbols (arity defaults to 0)
    axiom <formula>.          add to the theory
    context <formula>.        background assumption (entail / check modes)
    question <formula>.       a question (free variables uppercase)
    common <formula>.         a commonly-answered question, folded into the
                              question set
    conjecture <formula>.     the conclusion of entail / check modes

Exit codes: answer mode returns 0 when some answer stronger than `true` was
emitted and 3 otherwise; entail and the check modes return 0 for yes, 1 for
no, 2 for unknown.  File and usage problems exit with 4.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .development import (
    DevelopmentConfig, check_answerhood, decide_entailment,
    development_witness,
)
from .oracle import BoundsError, entails_bounded
from .prover import Deadline, Tableau, equality_axioms, skolemize
from .qa import Answer, algorithm1_reference, answer_stream
from .syntax import (
    Formula, Not, ParseError, Question, Signature, SignatureError, TOP,
    free_variables, parse_formula, render,
)
from .translation import reduce_entailment


class ProblemError(Exception):
    pass


@dataclass
class Problem:
    sig: Signature = field(default_factory=Signature)
    axioms: list[Formula] = field(default_factory=list)
    context: Formula | None = None
    questions: list[Question] = field(default_factory=list)
    common: list[Question] = field(default_factory=list)
    conjecture: Formula | None = None


def load(path: str | Path) -> Problem:
    """Parse and validate a problem file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ProblemError(f"cannot read {path}: {e}") from e
    problem = Problem()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        if not line.endswith("."):
            raise ProblemError(f"{path}:{lineno}: statement must end with '.'")
        line = line[:-1].strip()
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            _statement(problem, keyword, rest)
        except (ParseError, SignatureError, ProblemError) as e:
            raise ProblemError(f"{path}:{lineno}: {e}") from e
    for q in problem.questions + problem.common:
        pass  # questions may be open; nothing to validate here
    if problem.context is not None and free_variables(problem.context):
        raise ProblemError(f"{path}: context must be a closed formula")
    for f in problem.axioms:
        if free_variables(f):
            raise ProblemError(f"{path}: axioms must be closed formulas"
                               f" ({render(f)} is open)")
    return problem


def _statement(problem: Problem, keyword: str, rest: str) -> None:
    if keyword == "rigid":
        for entry in rest.split(","):
            entry = entry.strip()
            if not entry:
                raise ProblemError("empty symbol in rigid declaration")
            name, _, arity_text = entry.partition("/")
            name = name.strip()
            arity = 0
            if arity_text:
                try:
                    arity = int(arity_text)
                except ValueError:
                    raise ProblemError(f"bad arity in {entry!r}") from None
            if not name or not name[0].islower():
                raise ProblemError(f"rigid symbol {name!r} must be lowercase")
            problem.sig.declare_function(name, arity, rigid=True)
        return
    if keyword == "axiom":
        problem.axioms.append(parse_formula(rest, problem.sig))
        return
    if keyword == "context":
        if problem.context is not None:
            raise ProblemError("duplicate context declaration")
        problem.context = parse_formula(rest, problem.sig)
        return
    if keyword == "question":
        body = parse_formula(rest, problem.sig)
        problem.questions.append(Question(body, tuple(free_variables(body))))
        return
    if keyword == "common":
        body = parse_formula(rest, problem.sig)
        problem.common.append(Question(body, tuple(free_variables(body))))
        return
    if keyword == "conjecture":
        if problem.conjecture is not None:
            raise ProblemError("duplicate conjecture declaration")
        problem.conjecture = parse_formula(rest, problem.sig)
        return
    raise ProblemError(f"unknown declaration {keyword!r}")


def fold_common_ground(common: list[Question],
                       questions: list[Question]) -> list[Question]:
    """Asking under a commonly-answered question set is asking the union."""
    out: list[Question] = []
    seen: set[tuple] = set()
    for q in common + questions:
        key = (q.body, q.variables)
        if key not in seen:
            seen.add(key)
            out.append(q)
    return out


# ---------------------------------------------------------------------------
# Modes
# ---------------------------------------------------------------------------

def _mode_answer(problem: Problem, args: argparse.Namespace) -> int:
    if not problem.questions:
        print("answer mode needs at least one question", file=sys.stderr)
        return 4
    if problem.context is not None:
        print("answer mode does not take a context formula; "
              "assert it as an axiom or a common question", file=sys.stderr)
        return 4
    questions = fold_common_ground(problem.common, problem.questions)
    axioms = list(problem.axioms)
    if args.equality == "axioms":
        scope = axioms + [q.body for q in questions]
        axioms = equality_axioms(scope, problem.sig) + axioms

    trace = print if args.trace else None
    nontrivial = False
    index = 0
    if args.algorithm == "enumerate":
        if len(questions) != 1:
            print("enumerate mode handles a single question", file=sys.stderr)
            return 4
        found = algorithm1_reference(axioms, questions[0], problem.sig,
                                     depth=args.max_level or 2,
                                     timeout_ms=args.timeout_ms)
        for f in found:
            print(f"answer[{index}]: {render(f)}  % level={args.max_level or 2}")
            nontrivial = nontrivial or f != TOP
            index += 1
        return 0 if nontrivial else 3

    stream = answer_stream(
        axioms, questions, problem.sig,
        max_level=args.max_level, max_answers=args.max_answers,
        max_instances=args.max_instances, timeout_ms=args.timeout_ms,
        horn=args.horn, assume_rigid=args.assume_rigid, trace=trace)
    for answer in stream:
        print(f"answer[{index}]: {render(answer.formula)}  % level={answer.level}")
        nontrivial = nontrivial or answer.formula != TOP
        index += 1
    return 0 if nontrivial else 3


def _mode_entail(problem: Problem, args: argparse.Namespace) -> int:
    if problem.conjecture is None or not problem.questions:
        print("entail mode needs questions and a conjecture", file=sys.stderr)
        return 4
    questions = fold_common_ground(problem.common, problem.questions)
    context = problem.context if problem.context is not None else TOP
    conclusion = Question(problem.conjecture,
                          tuple(free_variables(problem.conjecture)))
    if args.show_translation:
        sequent = reduce_entailment(questions, context, conclusion, problem.sig)
        for p in sequent.premises:
            print(f"premise: {render(p)}")
        print(f"conclusion: {render(sequent.conclusion)}")
    if args.oracle:
        try:
            found = entails_bounded(questions, context, conclusion, problem.sig,
                                    max_worlds=args.max_worlds,
                                    max_domain=args.max_domain)
        except BoundsError as e:
            print(f"oracle bounds: {e}", file=sys.stderr)
            return 4
        if found is not None:
            print("no")
            print(found.describe())
            return 1
        print(f"no countermodel within |W|<={args.max_worlds}, "
              f"|D|<={args.max_domain}")
        return 2
    if args.trace:
        sequent = reduce_entailment(questions, context, conclusion, problem.sig)
        theory = skolemize(list(sequent.premises) + [Not(sequent.conclusion)],
                           problem.sig)
        tableau = Tableau(theory.formulas)
        tableau.saturate(1, max_branches=args.max_branches,
                         deadline=Deadline(args.timeout_ms))
        print(tableau.dump())
    verdict = decide_entailment(questions, context, conclusion, problem.sig,
                                rounds=args.max_gamma,
                                max_domain=args.max_domain,
                                max_branches=args.max_branches,
                                timeout_ms=args.timeout_ms)
    if verdict.status == "yes":
        print("yes")
        return 0
    if verdict.status == "no":
        print("no")
        if verdict.countermodel is not None:
            print(verdict.countermodel.describe())
        return 1
    print("unknown")
    return 2


def _mode_check_answer(problem: Problem, args: argparse.Namespace) -> int:
    if problem.conjecture is None or not problem.questions:
        print("check-answer mode needs questions and a conjecture",
              file=sys.stderr)
        return 4
    if free_variables(problem.conjecture):
        print("check-answer needs a closed conjecture", file=sys.stderr)
        return 4
    questions = fold_common_ground(problem.common, problem.questions)
    context = problem.context if problem.context is not None else TOP
    verdict = check_answerhood(problem.conjecture, questions, context,
                               problem.sig, budget=args.max_gamma,
                               timeout_ms=args.timeout_ms)
    if verdict.status == "yes":
        print("answer")
        return 0
    if verdict.status == "no":
        print("not an answer")
        if verdict.countermodel is not None:
            print(verdict.countermodel.describe())
        return 1
    print("unknown")
    return 2


def _mode_check_development(problem: Problem, args: argparse.Namespace) -> int:
    if problem.conjecture is None or not problem.questions:
        print("check-development mode needs questions and a conjecture",
              file=sys.stderr)
        return 4
    questions = fold_common_ground(problem.common, problem.questions)
    cfg = DevelopmentConfig(equality_allowed=args.equality != "off")
    witness = development_witness(problem.conjecture,
                                  [q.body for q in questions],
                                  problem.sig, cfg)
    if witness is not None:
        print("development")
        print(witness.describe())
        return 0
    print("not a development")
    return 1


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inquiry",
        description="Answer questions from first-order theories; decide "
                    "question entailment and answerhood.")
    sub = parser.add_subparsers(dest="mode", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", help="problem file")
        p.add_argument("--timeout-ms", type=float, default=None)
        p.add_argument("--equality", choices=["off", "axioms"], default="off")
        p.add_argument("--trace", action="store_true",
                       help="dump tableaux while searching")

    p = sub.add_parser("answer", help="generate answers to the questions")
    common(p)
    p.add_argument("--max-level", type=int, default=4)
    p.add_argument("--max-answers", type=int, default=8)
    p.add_argument("--max-instances", type=int, default=None)
    p.add_argument("--horn", action="store_true",
                   help="restrict to Horn theories; report ground answers")
    p.add_argument("--assume-rigid", action="store_true",
                   help="treat every function symbol as rigid")
    p.add_argument("--algorithm", choices=["tableau", "enumerate"],
                   default="tableau")

    p = sub.add_parser("entail", help="decide question entailment")
    common(p)
    p.add_argument("--oracle", action="store_true",
                   help="countermodel search only")
    p.add_argument("--show-translation", action="store_true")
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--max-domain", type=int, default=3)
    p.add_argument("--max-gamma", type=int, default=3)
    p.add_argument("--max-branches", type=int, default=2000)

    p = sub.add_parser("check-answer", help="is the conjecture an answer?")
    common(p)
    p.add_argument("--max-gamma", type=int, default=3)

    p = sub.add_parser("check-development",
                       help="is the conjecture a development of the questions?")
    common(p)
    return parser


_MODES = {
    "answer": _mode_answer,
    "entail": _mode_entail,
    "check-answer": _mode_check_answer,
    "check-development": _mode_check_development,
}


def run(problem: Problem, mode: str, args: argparse.Namespace) -> int:
    return _MODES[mode](problem, args)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        problem = load(args.file)
    except ProblemError as e:
        print(str(e), file=sys.stderr)
        return 4
    try:
        return run(problem, args.mode, args)
    except (ParseError, SignatureError, ValueError) as e:
        print(str(e), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
