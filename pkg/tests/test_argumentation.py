"""Tests for argument existence, verification, relevance, and classification."""

import random

import pytest

from argcl import (
    BudgetExceededError,
    ComplexityReport,
    Constraint,
    ConstraintLanguage,
    GammaFormula,
    PreconditionError,
    Relation,
    Support,
    arg_exists,
    argcheck,
    argrel,
    argrel_negative,
    argrel_positive,
    classify_complexity,
    enumerate_minimal_supports,
    find_minimal_support,
    relation_properties,
)

from conftest import (
    EQ2,
    IMPL,
    NAE3,
    NEQ,
    ONE_IN_THREE,
    OR2,
    RPRIME,
    T,
    F,
    _dedup,
    naive_arg_exists,
    naive_argcheck,
    naive_argrel,
    naive_min_supports,
    random_formula,
    random_instance,
)


def gamma(*constraints):
    return GammaFormula(tuple(constraints))


def or2(a, b):
    return gamma(Constraint(OR2, (a, b)))


class TestSupport:
    def test_indices_must_ascend(self):
        with pytest.raises(ValueError, match="ascending"):
            Support((2, 1))
        with pytest.raises(ValueError, match="ascending"):
            Support((1, 1))

    def test_formulas_projection(self):
        delta = [or2("a", "b"), or2("b", "c"), or2("c", "d")]
        assert Support((0, 2)).formulas(delta) == (delta[0], delta[2])

    def test_iteration(self):
        assert tuple(Support((0, 3))) == (0, 3)


class TestComplexityReport:
    def test_rejects_unknown_class(self):
        with pytest.raises(ValueError, match="unknown complexity class"):
            ComplexityReport(arg="P", argcheck="P", argrel="PSPACE-complete")


class TestArgExists:
    def test_direct_entailment(self):
        delta = [or2("a", "b")]
        assert arg_exists(delta, or2("b", "a"))

    def test_subset_rescues_inconsistent_base(self):
        # The base as a whole is contradictory, yet the OR2 formula alone
        # supports the claim.
        delta = [
            gamma(Constraint(T, ("x",)), Constraint(F, ("x",))),
            or2("a", "b"),
        ]
        alpha = or2("b", "a")
        assert arg_exists(delta, alpha)
        assert arg_exists(delta, alpha, engine="generic")

    def test_no_support(self):
        # T(a) says nothing about b or c, so no subset reaches the claim.
        delta = [gamma(Constraint(T, ("a",)))]
        assert not arg_exists(delta, or2("b", "c"))

    def test_empty_base(self):
        assert not arg_exists([], or2("a", "b"))
        assert arg_exists([], gamma(Constraint(EQ2, ("x", "x"))))

    def test_matches_naive_random(self):
        rng = random.Random(5150)
        for _ in range(150):
            language, delta, alpha = random_instance(rng, max_kb=5, max_vars=5)
            want = naive_arg_exists(delta, alpha)
            assert arg_exists(delta, alpha) == want
            assert arg_exists(delta, alpha, engine="generic") == want

    def test_subset_budget(self):
        delta = [or2("a", f"b{i}") for i in range(21)]
        alpha = or2("z", "w")
        with pytest.raises(BudgetExceededError):
            arg_exists(delta, alpha, engine="generic")

    def test_budget_override(self):
        delta = [or2("a", "b"), or2("b", "c"), or2("c", "d")]
        with pytest.raises(BudgetExceededError):
            arg_exists(delta, or2("a", "d"), engine="generic", max_kb=2)

    def test_shortcut_path_ignores_subset_budget(self):
        # A 1-valid base is consistent outright, so existence reduces to
        # entailment and no subset search happens.
        delta = [gamma(Constraint(T, (f"x{i}",))) for i in range(30)]
        assert arg_exists(delta, gamma(Constraint(T, ("x0",))))
        assert not arg_exists(delta, gamma(Constraint(T, ("y",))))


class TestArgcheck:
    def test_exact_argument(self):
        delta = [gamma(Constraint(IMPL, ("a", "b"))), gamma(Constraint(T, ("a",)))]
        assert argcheck(delta, gamma(Constraint(T, ("b",))))

    def test_inconsistent_set_fails(self):
        delta = [gamma(Constraint(T, ("x",)), Constraint(F, ("x",)))]
        assert not argcheck(delta, gamma(Constraint(EQ2, ("x", "x"))))

    def test_non_entailing_set_fails(self):
        assert not argcheck([or2("a", "b")], gamma(Constraint(T, ("a",))))

    def test_proper_subset_must_not_entail(self):
        delta = [or2("a", "b"), gamma(Constraint(T, ("c",)))]
        assert not argcheck(delta, or2("b", "a"))

    def test_duplicates_collapse(self):
        phi = or2("a", "b")
        assert argcheck([phi, phi], or2("b", "a"))

    def test_empty_set_checks_tautologies(self):
        assert argcheck([], gamma(Constraint(EQ2, ("x", "x"))))
        assert not argcheck([], or2("a", "b"))

    def test_matches_naive_random(self):
        rng = random.Random(61)
        for _ in range(150):
            language, delta, alpha = random_instance(rng, max_kb=4, max_vars=5)
            want = naive_argcheck(delta, alpha)
            assert argcheck(delta, alpha) == want
            assert argcheck(delta, alpha, engine="generic") == want


class TestFindMinimalSupport:
    def test_agrees_with_existence(self):
        rng = random.Random(8112)
        for _ in range(120):
            language, delta, alpha = random_instance(rng, max_kb=5, max_vars=5)
            delta = _dedup(delta)
            support = find_minimal_support(delta, alpha)
            if support is None:
                assert not naive_arg_exists(delta, alpha)
            else:
                assert tuple(support) in naive_min_supports(delta, alpha)
                assert argcheck(support.formulas(delta), alpha)

    def test_deterministic_per_engine(self):
        rng = random.Random(404)
        for _ in range(40):
            language, delta, alpha = random_instance(rng, max_kb=5, max_vars=4)
            for engine in ("auto", "generic"):
                first = find_minimal_support(delta, alpha, engine=engine)
                second = find_minimal_support(delta, alpha, engine=engine)
                assert first == second

    def test_empty_support_for_tautology(self):
        delta = [or2("a", "b")]
        support = find_minimal_support(delta, gamma(Constraint(EQ2, ("x", "x"))))
        assert support == Support(())

    def test_none_when_nothing_supports(self):
        assert find_minimal_support([], or2("a", "b")) is None

    def test_budget(self):
        delta = [or2("a", f"b{i}") for i in range(3)]
        with pytest.raises(BudgetExceededError):
            find_minimal_support(delta, or2("a", "z"), engine="generic", max_kb=2)


class TestEnumerateMinimalSupports:
    def test_matches_naive(self):
        rng = random.Random(321)
        for _ in range(120):
            language, delta, alpha = random_instance(rng, max_kb=5, max_vars=5)
            delta = _dedup(delta)
            got = enumerate_minimal_supports(delta, alpha)
            assert [tuple(s) for s in got] == naive_min_supports(delta, alpha)

    def test_canonical_order_and_no_supersets(self):
        delta = [or2("a", "b"), or2("a", "b"), gamma(Constraint(T, ("c",)))]
        supports = enumerate_minimal_supports(delta, or2("b", "a"))
        assert [tuple(s) for s in supports] == [(0,), (1,)]

    def test_each_result_is_an_argument(self):
        delta = [
            gamma(Constraint(IMPL, ("a", "b"))),
            gamma(Constraint(T, ("a",))),
            gamma(Constraint(T, ("b",))),
        ]
        alpha = gamma(Constraint(T, ("b",)))
        supports = enumerate_minimal_supports(delta, alpha)
        assert [tuple(s) for s in supports] == [(2,), (0, 1)]
        for s in supports:
            assert argcheck(s.formulas(delta), alpha)

    def test_budget(self):
        delta = [or2("a", f"b{i}") for i in range(21)]
        with pytest.raises(BudgetExceededError):
            enumerate_minimal_supports(delta, or2("x", "y"))


class TestArgrel:
    def test_membership_in_some_minimal_support(self):
        # {OR2(a,b)} and {NEQ(a,b)} are the minimal supports; T(c) joins none.
        delta = [or2("a", "b"), gamma(Constraint(NEQ, ("a", "b"))), gamma(Constraint(T, ("c",)))]
        alpha = or2("a", "b")
        assert argrel(delta, alpha, 0)
        assert argrel(delta, alpha, 1)
        assert not argrel(delta, alpha, 2)

    def test_jointly_needed_formulas(self):
        delta = [gamma(Constraint(IMPL, ("a", "b"))), gamma(Constraint(T, ("a",)))]
        alpha = gamma(Constraint(T, ("b",)))
        assert argrel(delta, alpha, 0)
        assert argrel(delta, alpha, 1)

    def test_psi_as_formula_uses_first_occurrence(self):
        phi = or2("a", "b")
        delta = [phi, gamma(Constraint(T, ("c",)))]
        assert argrel(delta, or2("b", "a"), phi)

    def test_psi_validation(self):
        delta = [or2("a", "b")]
        with pytest.raises(ValueError, match="out of range"):
            argrel(delta, or2("a", "b"), 1)
        with pytest.raises(ValueError, match="not in the knowledge base"):
            argrel(delta, or2("a", "b"), or2("x", "y"))

    def test_matches_naive_random(self):
        rng = random.Random(7777)
        done = 0
        while done < 150:
            language, delta, alpha = random_instance(rng, max_kb=5, max_vars=5)
            if not delta:
                continue
            psi = rng.randrange(len(delta))
            want = naive_argrel(delta, alpha, psi)
            assert argrel(delta, alpha, psi) == want
            assert argrel(delta, alpha, psi, engine="generic") == want
            done += 1

    def test_budget(self):
        # A disequality base sidesteps the monotone shortcut, forcing the
        # subset search and with it the knowledge-base budget.
        delta = [gamma(Constraint(NEQ, ("a", f"b{i}"))) for i in range(21)]
        with pytest.raises(BudgetExceededError):
            argrel(delta, gamma(Constraint(NEQ, ("x", "y"))), 0)


class TestMonotoneArgrel:
    def test_positive_language_dispatch(self):
        rng = random.Random(909)
        language = ConstraintLanguage.of(OR2, T)
        variables = ["p", "q", "r", "s"]
        done = 0
        while done < 120:
            delta = [
                random_formula(rng, language, variables)
                for _ in range(rng.randint(1, 5))
            ]
            alpha = random_formula(rng, language, variables)
            psi = rng.randrange(len(delta))
            want = naive_argrel(delta, alpha, psi)
            assert argrel(delta, alpha, psi) == want
            assert argrel_positive(delta, alpha, psi) == want
            done += 1

    def test_negative_language_dispatch(self):
        rng = random.Random(910)
        nand = Relation("NAND", 2, frozenset({0b00, 0b01, 0b10}))
        language = ConstraintLanguage.of(nand, F)
        variables = ["p", "q", "r"]
        done = 0
        while done < 120:
            delta = [
                random_formula(rng, language, variables)
                for _ in range(rng.randint(1, 5))
            ]
            alpha = random_formula(rng, language, variables)
            psi = rng.randrange(len(delta))
            want = naive_argrel(delta, alpha, psi)
            assert argrel(delta, alpha, psi) == want
            assert argrel_negative(delta, alpha, psi) == want
            done += 1

    def test_positive_precondition(self):
        delta = [gamma(Constraint(NEQ, ("a", "b")))]
        with pytest.raises(PreconditionError, match="upward-closed"):
            argrel_positive(delta, or2("a", "b"), 0)

    def test_negative_precondition(self):
        delta = [or2("a", "b")]
        with pytest.raises(PreconditionError, match="downward-closed"):
            argrel_negative(delta, or2("a", "b"), 0)


# A 1-valid ternary relation closed under none of the four operations:
# 100 & 010, 100 | 001, maj(100, 010, 001), and 100 ^ 010 ^ 110 all
# leave the tuple set.
RC3 = Relation("RC3", 3, frozenset({0b111, 0b100, 0b010, 0b001, 0b110}))


class TestClassifyComplexity:
    def test_polynomial_monotone(self):
        report = classify_complexity(ConstraintLanguage.of(OR2))
        assert (report.arg, report.argcheck, report.argrel) == ("P", "P", "P")

    def test_tractable_existence_hard_relevance(self):
        report = classify_complexity(ConstraintLanguage.of(IMPL))
        assert (report.arg, report.argcheck, report.argrel) == (
            "P",
            "P",
            "NP-complete",
        )

    def test_no_valid_constant(self):
        report = classify_complexity(ConstraintLanguage.of(NEQ))
        assert (report.arg, report.argcheck, report.argrel) == (
            "NP-complete",
            "P",
            "NP-complete",
        )

    def test_one_valid_outside_schaefer(self):
        rep = relation_properties(RC3)
        assert rep.one_valid and not rep.schaefer
        report = classify_complexity(ConstraintLanguage.of(RC3))
        assert (report.arg, report.argcheck, report.argrel) == (
            "coNP-complete",
            "DP-complete",
            "SigmaP2-complete",
        )

    def test_fully_hard(self):
        for rel in (NAE3, ONE_IN_THREE):
            report = classify_complexity(ConstraintLanguage.of(rel))
            assert (report.arg, report.argcheck, report.argrel) == (
                "SigmaP2-complete",
                "DP-complete",
                "SigmaP2-complete",
            )

    def test_dual_horn_without_monotonicity(self):
        report = classify_complexity(ConstraintLanguage.of(RPRIME))
        assert (report.arg, report.argcheck, report.argrel) == (
            "P",
            "P",
            "NP-complete",
        )

    def test_combination_keeps_shared_closure_only(self):
        # NEQ kills Horn, dual Horn, and both valid constants; bijunctive
        # closure is the one property both relations share.
        report = classify_complexity(ConstraintLanguage.of(NEQ, IMPL))
        assert (report.arg, report.argcheck, report.argrel) == (
            "NP-complete",
            "P",
            "NP-complete",
        )
        assert report == classify_complexity(ConstraintLanguage.of(IMPL, NEQ))
