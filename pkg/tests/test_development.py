import random

import pytest

from inquiry.development import (
    DevelopmentConfig, check_answerhood, decide_entailment,
    development_witness, is_development, is_rigid_term,
    rigid_instance_match,
)
from inquiry.syntax import (
    Apply, Atom, Equal, Not, Signature, TOP, Var, const, parse_formula,
    question,
)

EQ_ON = DevelopmentConfig(equality_allowed=True)
EQ_OFF = DevelopmentConfig(equality_allowed=False)


def rigid_sig(*names, funcs=()):
    sig = Signature()
    for n in names:
        sig.declare_function(n, 0, rigid=True)
    for n, arity in funcs:
        sig.declare_function(n, arity, rigid=True)
    return sig


class TestRigidTerm:
    def test_rigid_composition(self):
        sig = rigid_sig("c", funcs=[("f", 1)])
        assert is_rigid_term(Apply("f", (const("c"),)), sig)

    def test_nonrigid_constant(self):
        sig = Signature()
        sig.declare_function("c", 0)
        assert not is_rigid_term(const("c"), sig)

    def test_bare_variable(self):
        assert is_rigid_term(Var("X"), Signature())

    def test_nonrigid_buried_in_rigid(self):
        sig = rigid_sig(funcs=[("f", 1)])
        sig.declare_function("d", 0)
        assert not is_rigid_term(Apply("f", (const("d"),)), sig)


class TestRigidInstanceMatch:
    def test_mixed_rigidity(self):
        # rigid instances need not be rigid formulas: only the substituted
        # terms must be rigid
        sig = rigid_sig("c")
        sig.declare_function("d", 0)
        pattern = parse_formula("r(X, d)", sig)
        candidate = parse_formula("r(c, d)", sig)
        assert rigid_instance_match(candidate, pattern, sig) == {"X": const("c")}

    def test_identity_match(self):
        sig = Signature()
        f = parse_formula("p(X)", sig)
        assert rigid_instance_match(f, f, sig) == {}

    def test_nonrigid_substitution_rejected(self):
        sig = Signature()
        pattern = parse_formula("p(X)", sig)
        candidate = parse_formula("p(c)", sig)
        assert rigid_instance_match(candidate, pattern, sig) is None

    def test_uniformity_required(self):
        sig = rigid_sig("a", "b")
        pattern = parse_formula("r(X, X)", sig)
        assert rigid_instance_match(parse_formula("r(a, b)", sig),
                                    pattern, sig) is None
        assert rigid_instance_match(parse_formula("r(a, a)", sig),
                                    pattern, sig) == {"X": const("a")}

    def test_alpha_equivalent_binders(self):
        sig = Signature()
        pattern = parse_formula("exists Y. r(Y, X)", sig)
        candidate = parse_formula("exists Z. r(Z, W)", sig)
        assert rigid_instance_match(candidate, pattern, sig) == {"X": Var("W")}

    def test_capture_rejected(self):
        # substituting the bound variable itself for X would capture
        sig = Signature()
        pattern = parse_formula("exists Y. r(Y, X)", sig)
        candidate = parse_formula("exists Z. r(Z, Z)", sig)
        assert rigid_instance_match(candidate, pattern, sig) is None


class TestIsDevelopment:
    def test_conjunction_of_instances(self):
        sig = rigid_sig("c", "d")
        f = parse_formula("p(c) & p(d)", sig)
        q = parse_formula("p(X)", sig)
        w = development_witness(f, [q], sig, EQ_ON)
        assert w is not None
        assert w.rule == "and"
        assert {c.rule for c in w.children} == {"rigid-instance"}

    def test_quantified_with_identity(self):
        sig = rigid_sig("c")
        f = parse_formula("exists X. (p(X) & ~(X = c))", sig)
        q = parse_formula("p(X)", sig)
        assert is_development(f, [q], sig, EQ_ON)
        assert not is_development(f, [q], sig, EQ_OFF)

    def test_foreign_atom_rejected(self):
        sig = rigid_sig("a")
        f = parse_formula("q(a)", sig)
        assert not is_development(f, [parse_formula("p(X)", sig)], sig, EQ_ON)

    def test_truth_constants(self):
        sig = Signature()
        q = parse_formula("p(X)", sig)
        assert is_development(TOP, [q], sig, EQ_ON)

    def test_composite_pattern_matched_wholesale(self):
        sig = rigid_sig("c")
        q = parse_formula("p(X) & q(X)", sig)
        f = parse_formula("p(c) & q(c)", sig)
        w = development_witness(f, [q], sig, EQ_ON)
        assert w is not None and w.rule == "rigid-instance"
        # but a lone conjunct is no development of the conjunction
        assert not is_development(parse_formula("p(c)", sig), [q], sig, EQ_ON)

    def test_multiple_patterns(self):
        sig = Signature()
        qi = parse_formula("i(X)", sig)
        qp = parse_formula("p(X)", sig)
        f = parse_formula("forall X. (i(X) <-> p(X))", sig)
        assert is_development(f, [qi, qp], sig, EQ_OFF)
        assert not is_development(f, [qi], sig, EQ_OFF)

    def test_closed_under_boolean_combination(self):
        rng = random.Random(37)
        sig = rigid_sig("c", "d")
        q = parse_formula("p(X)", sig)
        pool = [parse_formula("p(c)", sig), parse_formula("p(d)", sig), TOP]
        from inquiry.syntax import And
        for _ in range(30):
            a, b = rng.choice(pool), rng.choice(pool)
            assert is_development(And(a, b), [q], sig, EQ_ON)
            assert is_development(Not(a), [q], sig, EQ_ON)


class TestCheckAnswerhood:
    def test_universal_answer(self):
        sig = Signature()
        psi = parse_formula("forall X. p(X)", sig)
        q = question(parse_formula("p(X)", sig))
        verdict = check_answerhood(psi, [q], TOP, sig)
        assert verdict.status == "yes"

    def test_contradiction_answers(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        verdict = check_answerhood(parse_formula("false", sig), [q], TOP, sig)
        assert verdict.status == "yes"

    def test_biconditional_answers_the_pair(self):
        sig = Signature()
        psi = parse_formula("forall X. (i(X) <-> p(X))", sig)
        qi = question(parse_formula("i(X)", sig))
        qp = question(parse_formula("p(X)", sig))
        verdict = check_answerhood(psi, [qi, qp], TOP, sig)
        assert verdict.status == "yes"

    def test_foreign_fact_refuted(self):
        sig = Signature()
        sig.declare_function("a", 0, rigid=True)
        psi = parse_formula("q(a)", sig)
        q = question(parse_formula("p(X)", sig))
        verdict = check_answerhood(psi, [q], TOP, sig)
        assert verdict.status == "no"
        assert verdict.countermodel is not None

    def test_open_formula_rejected(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        with pytest.raises(ValueError):
            check_answerhood(parse_formula("p(Y)", sig), [q], TOP, sig)

    def test_budget_must_be_positive(self):
        sig = Signature()
        q = question(parse_formula("p(X)", sig))
        with pytest.raises(ValueError):
            check_answerhood(TOP, [q], TOP, sig, budget=0)


class TestDevelopmentImpliesAnswerhood:
    def test_developments_are_never_refuted(self):
        # one direction of the syntactic characterization, checked against
        # the oracle on a stock of developments
        sig = rigid_sig("c", "d")
        q = parse_formula("p(X)", sig)
        developments = [
            "p(c)",
            "p(c) & p(d)",
            "~p(c)",
            "exists X. p(X)",
            "forall X. p(X)",
            "exists X. (p(X) & ~(X = c))",
            "p(c) | p(d)",
            "true",
            "false",
        ]
        for text in developments:
            psi = parse_formula(text, sig)
            assert is_development(psi, [q], sig, EQ_ON), text
            verdict = check_answerhood(psi, [question(q)], TOP, sig)
            assert verdict.status != "no", text
