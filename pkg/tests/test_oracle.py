import random
from itertools import product

import pytest

from inquiry.oracle import (
    BoundsError, ModalModel, classical_countermodel, entails_bounded,
    evaluate, is_answer_bounded, partition_equivalent,
)
from inquiry.syntax import (
    Atom, Equal, Exists, Question, Signature, TOP, Var, const, f_forall,
    parse, parse_formula, question,
)

from randgen import random_closed_formula, random_model, small_signature


def model_one_pred(extensions):
    """Unary p over domain {0, 1}; extensions[w] is the set at world w."""
    worlds = tuple(range(len(extensions)))
    return ModalModel(
        worlds, (0, 1),
        {(w, "p"): frozenset((d,) for d in ext)
         for w, ext in enumerate(extensions)},
        {})


class TestEvaluate:
    def test_atom(self):
        m = model_one_pred([{0}])
        assert evaluate(m, 0, {"X": 0}, Atom("p", (Var("X"),)))
        assert not evaluate(m, 0, {"X": 1}, Atom("p", (Var("X"),)))

    def test_top(self):
        m = model_one_pred([set()])
        assert evaluate(m, 0, {}, TOP)

    def test_empty_extension_has_no_witness(self):
        m = model_one_pred([set()])
        f = Exists("X", Atom("p", (Var("X"),)))
        assert not evaluate(m, 0, {}, f)

    def test_unassigned_variable(self):
        m = model_one_pred([{0}])
        with pytest.raises(KeyError):
            evaluate(m, 0, {}, Atom("p", (Var("X"),)))

    def test_equality_and_functions(self):
        m = ModalModel((0,), (0, 1), {}, {(0, "c"): {(): 1}})
        assert evaluate(m, 0, {}, Equal(const("c"), const("c")))
        assert not evaluate(m, 0, {"X": 0}, Equal(Var("X"), const("c")))


class TestPartitionEquivalent:
    def test_trivial_question(self):
        m = model_one_pred([{0}, {1}])
        assert partition_equivalent(m, 0, 1, Question(TOP, ()))

    def test_distinguishing_assignment(self):
        m = model_one_pred([{0}, {0, 1}])
        q = question(Atom("p", (Var("X"),)))
        assert not partition_equivalent(m, 0, 1, q)

    def test_rigid_identity_question_never_distinguishes(self):
        sig = Signature()
        sig.declare_function("j", 0, rigid=True)
        sig.declare_function("b", 0, rigid=True)
        q = question(Equal(const("j"), const("b")))
        rng = random.Random(3)
        for _ in range(20):
            m = random_model(rng, sig, n_worlds=2, n_entities=2)
            assert partition_equivalent(m, 0, 1, q)

    def test_equivalence_relation(self):
        rng = random.Random(11)
        sig = small_signature(n_preds=1, n_consts=1, rigid_consts=False)
        q = question(parse_formula("p0(X)", sig))
        for _ in range(15):
            m = random_model(rng, sig, n_worlds=3, n_entities=2)
            ws = m.worlds
            for w in ws:
                assert partition_equivalent(m, w, w, q)
            for w, v in product(ws, ws):
                assert partition_equivalent(m, w, v, q) == \
                    partition_equivalent(m, v, w, q)
            for w, v, u in product(ws, ws, ws):
                if partition_equivalent(m, w, v, q) and \
                        partition_equivalent(m, v, u, q):
                    assert partition_equivalent(m, w, u, q)

    def test_refinement_is_intersection(self):
        rng = random.Random(13)
        sig = small_signature(n_preds=2, n_consts=0)
        q1 = question(parse_formula("p0(X)", sig))
        q2 = question(parse_formula("p1(X)", sig))
        for _ in range(15):
            m = random_model(rng, sig, n_worlds=3, n_entities=2)
            for w, v in product(m.worlds, m.worlds):
                joint = all(partition_equivalent(m, w, v, q)
                            for q in (q1, q2))
                both = (partition_equivalent(m, w, v, q1)
                        and partition_equivalent(m, w, v, q2))
                assert joint == both


class TestEntailsBounded:
    def test_whether_everyone_goes_is_settled(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        concl = question(parse_formula("forall X. p(X)", sig))
        assert entails_bounded([q], TOP, concl, sig,
                               max_worlds=2, max_domain=3) is None

    def test_negation_settled_under_constant_domains(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        concl = question(parse_formula("~p(X)", sig))
        assert entails_bounded([q], TOP, concl, sig,
                               max_worlds=2, max_domain=3) is None

    def test_trivial_question_settles_nothing(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        concl = question(parse_formula("p(a)", sig))
        found = entails_bounded([Question(TOP, ())], TOP, concl, sig,
                                max_worlds=2, max_domain=1)
        assert found is not None
        m, w, v = found.model, found.w, found.v
        assert evaluate(m, w, {}, concl.body) != evaluate(m, v, {}, concl.body)

    def test_context_changes_the_verdict(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        q = question(parse_formula("p(X)", sig))
        concl = question(parse_formula("q(a)", sig))
        assert entails_bounded([q], TOP, concl, sig) is not None
        ctx = parse_formula("forall X. (p(X) <-> q(X))", sig)
        assert entails_bounded([q], ctx, concl, sig) is None

    def test_countermodel_is_reported_in_enumeration_order(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        concl = question(parse_formula("p(a)", sig))
        found = entails_bounded([Question(TOP, ())], TOP, concl, sig)
        assert found is not None
        assert len(found.model.domain) == 1  # smallest domain first

    def test_bounds_guard(self):
        sig = Signature()
        sig.declare_predicate("r", 3)
        sig.declare_predicate("s", 3)
        sig.declare_predicate("t", 3)
        q = question(parse_formula("r(X, Y, Z) & s(X, X, X) & t(X, Y, Z)", sig))
        with pytest.raises(BoundsError):
            entails_bounded([q], TOP, q, sig, max_domain=3)


class TestIsAnswerBounded:
    def test_universal_statement_answers(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        psi = parse_formula("forall X. p(X)", sig)
        assert is_answer_bounded(psi, [q], sig) is None

    def test_tautology_answers_anything(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        assert is_answer_bounded(TOP, [q], sig) is None

    def test_foreign_fact_is_no_answer(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        q = question(parse_formula("p(X)", sig))
        psi = parse_formula("q(a)", sig)
        found = is_answer_bounded(psi, [q], sig)
        assert found is not None
        assert len(found.model.worlds) == 2
        assert len(found.model.domain) == 1


class TestClassicalCountermodel:
    def test_finds_simple_countermodel(self):
        sig = Signature()
        prem = parse_formula("p(a)", sig)
        concl = parse_formula("forall X. p(X)", sig)
        assert classical_countermodel([prem], concl, sig) is not None

    def test_respects_valid_entailment(self):
        sig = Signature()
        prem = parse_formula("forall X. p(X)", sig)
        concl = parse_formula("p(a)", sig)
        assert classical_countermodel([prem], concl, sig) is None
