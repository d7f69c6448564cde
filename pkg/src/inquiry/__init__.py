"""Question answering over first-order theories.

Questions partition the space of possibilities: two states of affairs fall
in the same block when the question's extension agrees on them.  Entailment
between questions is refinement of partitions, answers are closed formulas
the question entails as a (trivial) question, and a sound, in-the-limit
complete tableau procedure extracts ever more informative answers from a
theory.
"""

from .development import (
    DevelopmentConfig, DevelopmentWitness, check_answerhood,
    decide_entailment, development_witness, is_development,
    is_rigid_term, rigid_instance_match,
)
from .oracle import (
    Countermodel, ModalModel, classical_countermodel, entails_bounded,
    evaluate, is_answer_bounded, partition_equivalent,
)
from .prover import (
    Closure, Deadline, SkolemizedTheory, Tableau, equality_axioms,
    find_most_general_closures, has_closing_substitution, prove, skolemize,
)
from .qa import (
    Answer, QASession, add_instance, algorithm1_reference, ans, answer_step,
    answer_stream, introduce_answer_literal, simplify, unskolemize,
)
from .syntax import (
    And, Apply, Atom, BOTTOM, Bottom, Equal, Exists, Formula, Not,
    ParseError, Question, Signature, SignatureError, TOP, Term, Top, Var,
    alpha_equal, free_variables, mgu, parse, parse_formula, question,
    render, substitute,
)
from .translation import (
    Sequent, hash_question, reduce_entailment, relativize, star,
)

__version__ = "0.1.0"
