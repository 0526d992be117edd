"""Shared fixtures: a catalog of named relations, seeded instance
generators, and naive oracles.

The oracles deliberately avoid the package's model-enumeration machinery:
they walk dict assignments with itertools and test tuple membership
directly, so engine results are checked against an independent
implementation of the definitions.
"""

from __future__ import annotations

import itertools
import random

import pytest

from argcl import Constraint, ConstraintLanguage, GammaFormula, Relation

NEQ = Relation("NEQ", 2, frozenset({0b01, 0b10}))
T = Relation("T", 1, frozenset({0b1}))
F = Relation("F", 1, frozenset({0b0}))
IMPL = Relation("IMPL", 2, frozenset({0b00, 0b01, 0b11}))
OR2 = Relation("OR2", 2, frozenset({0b01, 0b10, 0b11}))
OR3 = Relation("OR3", 3, frozenset(range(1, 8)))
EQ2 = Relation("EQ2", 2, frozenset({0b00, 0b11}))
AND_NOT = Relation("AND_NOT", 2, frozenset({0b10}))
NAE3 = Relation("NAE3", 3, frozenset(range(8)) - frozenset({0b000, 0b111}))
ONE_IN_THREE = Relation("ONE_IN_THREE", 3, frozenset({0b100, 0b010, 0b001}))
# (x1 or x2) and (x2 = x3)
RPRIME = Relation("RPRIME", 3, frozenset({0b011, 0b100, 0b111}))

CATALOG = (
    NEQ,
    T,
    F,
    IMPL,
    OR2,
    OR3,
    EQ2,
    AND_NOT,
    NAE3,
    ONE_IN_THREE,
    RPRIME,
)


@pytest.fixture
def catalog():
    return {r.name: r for r in CATALOG}


# ---------------------------------------------------------------------------
# Naive oracles.
# ---------------------------------------------------------------------------


def constraint_value(constraint: Constraint, assignment: dict[str, int]) -> bool:
    mask = 0
    for arg in constraint.args:
        mask = (mask << 1) | assignment[arg]
    return mask in constraint.relation.tuples


def naive_models(formulas, variables) -> list[dict[str, int]]:
    """Every satisfying dict assignment over the sorted variable list."""
    order = sorted(variables)
    out = []
    for bits in itertools.product((0, 1), repeat=len(order)):
        assignment = dict(zip(order, bits))
        if all(
            constraint_value(c, assignment)
            for f in formulas
            for c in f.constraints
        ):
            out.append(assignment)
    return out


def formulas_vars(formulas) -> set[str]:
    return {v for f in formulas for v in f.variables}


def naive_consistent(delta) -> bool:
    return bool(naive_models(delta, formulas_vars(delta)))


def naive_entails(delta, alpha) -> bool:
    scope = formulas_vars(delta) | set(alpha.variables)
    return all(
        all(constraint_value(c, m) for c in alpha.constraints)
        for m in naive_models(delta, scope)
    )


def _dedup(delta):
    out = []
    for f in delta:
        if f not in out:
            out.append(f)
    return out


def naive_arg_exists(delta, alpha) -> bool:
    delta = _dedup(delta)
    for size in range(len(delta) + 1):
        for subset in itertools.combinations(range(len(delta)), size):
            chosen = [delta[i] for i in subset]
            if naive_consistent(chosen) and naive_entails(chosen, alpha):
                return True
    return False


def naive_min_supports(delta, alpha) -> list[tuple[int, ...]]:
    """Index sets of minimal supports, using full proper-subset minimality."""
    delta = _dedup(delta)
    qualifying = []
    for size in range(len(delta) + 1):
        for subset in itertools.combinations(range(len(delta)), size):
            chosen = [delta[i] for i in subset]
            if naive_consistent(chosen) and naive_entails(chosen, alpha):
                qualifying.append(frozenset(subset))
    minimal = [
        s for s in qualifying if not any(o < s for o in qualifying)
    ]
    return [tuple(sorted(s)) for s in minimal]


def naive_argcheck(delta, alpha) -> bool:
    indices = tuple(range(len(_dedup(delta))))
    return indices in naive_min_supports(delta, alpha)


def naive_argrel(delta, alpha, psi) -> bool:
    deduped = _dedup(delta)
    formula = delta[psi] if isinstance(psi, int) else psi
    idx = deduped.index(formula)
    return any(idx in s for s in naive_min_supports(delta, alpha))


# ---------------------------------------------------------------------------
# Seeded random generators.
# ---------------------------------------------------------------------------


def random_relation(rng: random.Random, name: str, max_arity: int = 3) -> Relation:
    arity = rng.randint(1, max_arity)
    full = 1 << arity
    size = rng.randint(1, full - 1)
    return Relation(name, arity, frozenset(rng.sample(range(full), size)))


def random_language(rng: random.Random, max_relations: int = 2) -> ConstraintLanguage:
    count = rng.randint(1, max_relations)
    return ConstraintLanguage(
        tuple(random_relation(rng, f"R{i}") for i in range(count))
    )


def random_formula(
    rng: random.Random,
    language: ConstraintLanguage,
    variables,
    max_constraints: int = 3,
) -> GammaFormula:
    constraints = []
    for _ in range(rng.randint(1, max_constraints)):
        relation = rng.choice(language.relations)
        args = tuple(rng.choice(variables) for _ in range(relation.arity))
        constraints.append(Constraint(relation, args))
    return GammaFormula(tuple(constraints))


def random_instance(rng: random.Random, max_kb: int = 6, max_vars: int = 6):
    """A random language, knowledge base, and claim sharing one variable pool."""
    language = random_language(rng)
    variables = [f"v{i}" for i in range(rng.randint(1, max_vars))]
    delta = [
        random_formula(rng, language, variables)
        for _ in range(rng.randint(0, max_kb))
    ]
    alpha = random_formula(rng, language, variables)
    return language, delta, alpha
