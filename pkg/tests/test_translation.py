import random

import pytest

from inquiry.oracle import classical_countermodel, entails_bounded
from inquiry.prover import prove
from inquiry.syntax import (
    And, Apply, Atom, Equal, Exists, Not, Question, Signature, TOP, Top,
    Var, alpha_equal, const, f_forall, f_iff, parse_formula, question,
    render,
)
from inquiry.translation import (
    hash_question, reduce_entailment, relativize, star,
)

from randgen import random_closed_formula, small_signature


class TestStar:
    def test_predicates_primed(self):
        sig = Signature()
        f = parse_formula("p(X)", sig)
        assert star(f, sig) == Atom("p'", (Var("X"),))

    def test_rigid_terms_unchanged(self):
        sig = Signature()
        sig.declare_function("f", 1, rigid=True)
        sig.declare_function("c", 0, rigid=True)
        f = parse_formula("X = f(c)", sig)
        assert star(f, sig) == f

    def test_nonrigid_constant_primed(self):
        sig = Signature()
        f = parse_formula("p(c)", sig)
        assert star(f, sig) == Atom("p'", (Apply("c'", ()),))

    def test_primed_input_rejected(self):
        sig = Signature()
        f = parse_formula("p(c)", sig)
        g = star(f, sig)
        with pytest.raises(ValueError):
            star(g, sig)

    def test_shape_preserved(self):
        rng = random.Random(17)
        template = small_signature(rigid_consts=False)

        def shape(f):
            name = type(f).__name__
            if isinstance(f, And):
                return (name, shape(f.left), shape(f.right))
            if isinstance(f, Not):
                return (name, shape(f.body))
            if isinstance(f, Exists):
                return (name, shape(f.body))
            return name

        for _ in range(40):
            sig = template.copy()  # star declares primed copies as it goes
            f = random_closed_formula(rng, sig, depth=3, allow_equality=True)
            assert shape(star(f, sig)) == shape(f)


class TestHashQuestion:
    def test_open_question(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        h = hash_question(q, sig)
        expected = f_forall("X", f_iff(Atom("p", (Var("X"),)),
                                       Atom("p'", (Var("X"),))))
        assert alpha_equal(h, expected)

    def test_trivial_question(self):
        sig = Signature()
        h = hash_question(Question(TOP, ()), sig)
        assert h == f_iff(TOP, TOP)

    def test_closed_atomic_question(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        q = question(parse_formula("p(a)", sig))
        h = hash_question(q, sig)
        expected = f_iff(Atom("p", (const("a"),)), Atom("p'", (const("a"),)))
        assert h == expected


class TestReduceEntailment:
    def test_rigid_instance_is_valid(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        qs = [question(parse_formula("p(X)", sig))]
        concl = question(parse_formula("p(a)", sig))
        seq = reduce_entailment(qs, TOP, concl, sig)
        assert len(seq.premises) == 1  # tautological context dropped
        assert prove(seq.premises, seq.conclusion, sig)

    def test_context_supports_the_conclusion(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        qs = [question(parse_formula("p(X)", sig))]
        ctx = parse_formula("forall X. (p(X) <-> q(X))", sig)
        concl = question(parse_formula("q(a)", sig))
        seq = reduce_entailment(qs, ctx, concl, sig)
        assert len(seq.premises) == 3
        assert prove(seq.premises, seq.conclusion, sig)

    def test_nonrigid_instance_is_invalid(self):
        sig = Signature()
        qs = [question(parse_formula("p(X)", sig))]
        concl = question(parse_formula("p(a)", sig))  # a non-rigid
        seq = reduce_entailment(qs, TOP, concl, sig)
        assert classical_countermodel(seq.premises, seq.conclusion, sig) is not None

    def test_agreement_with_modal_oracle(self):
        # the countermodel verdicts of the two routes must coincide exactly
        rng = random.Random(29)
        sig_template = small_signature(n_preds=2, n_consts=1, rigid_consts=False)
        sig_template.declare_function("c1", 0, rigid=True)
        agreements = 0
        for i in range(40):
            sig = sig_template.copy()
            body = random_closed_formula(rng, sig, depth=2)
            # reopen one bound variable now and then by asking about p0
            q = question(parse_formula("p0(X)", sig))
            concl = Question(body, ())
            modal = entails_bounded([q], TOP, concl, sig, max_domain=2)
            seq = reduce_entailment([q], TOP, concl, sig)
            classical = classical_countermodel(seq.premises, seq.conclusion,
                                               sig, max_domain=2)
            assert (modal is None) == (classical is None), render(body)
            agreements += 1
        assert agreements == 40


class TestRelativize:
    def test_existential_guarded(self):
        sig = Signature()
        f = parse_formula("exists X. p(X)", sig)
        g = relativize(f, sig)
        assert isinstance(g, Exists)
        assert g.body == And(Atom("e", (Var("X"),)), Atom("p", (Var("X"),)))

    def test_question_free_variables_guarded(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        q2 = relativize(q, sig)
        assert isinstance(q2, Question)
        assert q2.body == And(Atom("e", (Var("X"),)), Atom("p", (Var("X"),)))
        assert q2.variables == ("X",)

    def test_constant_formula_unchanged(self):
        sig = Signature()
        assert relativize(TOP, sig) == TOP

    def test_universal_gets_conditional_guard(self):
        # the encoding of forall under relativization: no X without e(X)
        # satisfying p may refute the body
        sig = Signature()
        f = parse_formula("forall X. p(X)", sig)
        g = relativize(f, sig)
        assert isinstance(g, Not)
        assert isinstance(g.body, Exists)
        assert isinstance(g.body.body, And)  # e(X) & ~p(X)

    def test_collision_rejected(self):
        sig = Signature()
        f = parse_formula("e(a)", sig)
        with pytest.raises(ValueError):
            relativize(f, sig)
