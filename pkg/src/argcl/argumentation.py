"""Argument existence, verification, relevance, and complexity classification.

An argument for a claim is a consistent subset of the knowledge base that
entails the claim and is subset-minimal with that property. Everything
here reduces to is_consistent/entails calls; the "auto" engine adds
answer-identical shortcuts (constant-assignment validity, whole-base
consistency, maximal-satisfied-subset search by assignment), while
"generic" forces plain canonical subset enumeration for differential
testing.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError, PreconditionError
from .formulas import DEFAULT_MAX_MODELS, GammaFormula, models_mask, variables_of
from .logic import entails, is_consistent, negative_cnf_of, positive_cnf_of
from .relations import ConstraintLanguage, language_properties, relation_properties

__all__ = [
    "DEFAULT_MAX_KB",
    "Support",
    "ComplexityReport",
    "COMPLEXITY_CLASSES",
    "argcheck",
    "arg_exists",
    "find_minimal_support",
    "enumerate_minimal_supports",
    "argrel",
    "argrel_positive",
    "argrel_negative",
    "classify_complexity",
]

logger = logging.getLogger(__name__)

DEFAULT_MAX_KB = 20

# Assignment spaces up to this size use the matrix method for existence
# checks over inconsistent knowledge bases.
_MATRIX_LIMIT = 1 << 12

# Subset searches precompute one satisfaction mask per formula when the
# joint assignment space stays below this bound; beyond it they fall
# back to per-subset consistency and entailment calls.
_SUBSET_MASK_LIMIT = 1 << 20

COMPLEXITY_CLASSES = (
    "P",
    "NP-complete",
    "coNP-complete",
    "DP-complete",
    "SigmaP2-complete",
)


@dataclass(frozen=True)
class Support:
    """An index set into a knowledge base, strictly ascending."""

    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("support indices must be strictly ascending")

    def formulas(self, delta: Sequence[GammaFormula]) -> tuple[GammaFormula, ...]:
        return tuple(delta[i] for i in self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, index: int) -> bool:
        return index in self.indices


@dataclass(frozen=True)
class ComplexityReport:
    """Predicted complexity classes of the three decision problems."""

    arg: str
    argcheck: str
    argrel: str

    def __post_init__(self):
        for value in (self.arg, self.argcheck, self.argrel):
            if value not in COMPLEXITY_CLASSES:
                raise ValueError(f"unknown complexity class {value!r}")


def _dedup(formulas: Iterable[GammaFormula]) -> list[GammaFormula]:
    seen: set[GammaFormula] = set()
    out = []
    for f in formulas:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def argcheck(
    phi: Iterable[GammaFormula],
    alpha: GammaFormula,
    *,
    engine: str = "auto",
    max_models: int = DEFAULT_MAX_MODELS,
) -> bool:
    """Verify that a formula set is an argument for the claim.

    True iff phi is consistent, entails alpha, and no proper subset
    entails alpha. By monotonicity of entailment the last condition is
    equivalent to single-element removal never preserving entailment,
    which is what gets checked. Duplicate formulas are collapsed first
    (set semantics).
    """
    formulas = _dedup(phi)
    if not is_consistent(formulas, engine=engine, max_models=max_models):
        return False
    if not entails(formulas, alpha, engine=engine, max_models=max_models):
        return False
    for i in range(len(formulas)):
        rest = formulas[:i] + formulas[i + 1 :]
        if entails(rest, alpha, engine=engine, max_models=max_models):
            return False
    return True


def _check_subset_budget(delta: Sequence[GammaFormula], max_kb: int):
    if len(delta) > max_kb:
        raise BudgetExceededError(
            f"subset search over {len(delta)} formulas exceeds the budget {max_kb}"
        )


def _subsets(n: int):
    """All index subsets by cardinality, then lexicographic."""
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def _satisfaction_matrix(
    delta: Sequence[GammaFormula], alpha: GammaFormula
) -> tuple[np.ndarray, np.ndarray, tuple[str, ...]]:
    order = tuple(sorted(variables_of(delta) | alpha.variables))
    rows = [models_mask(f.constraints, order) for f in delta]
    alpha_mask = models_mask(alpha.constraints, order)
    if not rows:
        return np.zeros((0, alpha_mask.size), dtype=np.bool_), alpha_mask, order
    return np.array(rows), alpha_mask, order


def _subset_masks(
    delta: Sequence[GammaFormula], alpha: GammaFormula, max_models: int
) -> tuple[np.ndarray, np.ndarray] | None:
    """Satisfaction masks for subset search, or None past the size bound."""
    order_size = len(variables_of(delta) | alpha.variables)
    if (1 << order_size) > min(max_models, _SUBSET_MASK_LIMIT):
        return None
    sat, alpha_mask, _ = _satisfaction_matrix(delta, alpha)
    return sat, alpha_mask


def _models_of_subset(sat: np.ndarray, indices: Sequence[int]) -> np.ndarray:
    if not indices:
        return np.ones(sat.shape[1], dtype=np.bool_)
    return np.bitwise_and.reduce(sat[list(indices)], axis=0)


def _matrix_entailing_assignments(
    sat: np.ndarray, alpha_mask: np.ndarray
) -> np.ndarray:
    """For each assignment m, does the subset satisfied at m entail alpha.

    Entry [m, c] of the intermediate product counts formulas satisfied
    at m but not at c; c is a model of that subset exactly when the
    count is zero, and the subset entails alpha when all its models
    land in alpha's satisfaction mask.
    """
    sat_f = sat.astype(np.float32)
    violations = sat_f.T @ (1.0 - sat_f)
    is_model = violations == 0.0
    bad = is_model & ~alpha_mask[np.newaxis, :]
    return ~bad.any(axis=1)


def _eps_shortcut_applies(delta: Sequence[GammaFormula]) -> bool:
    relations = {c.relation for f in delta for c in f.constraints}
    if not relations:
        return True
    reports = [relation_properties(r) for r in relations]
    return all(r.zero_valid for r in reports) or all(r.one_valid for r in reports)


def arg_exists(
    delta: Sequence[GammaFormula],
    alpha: GammaFormula,
    *,
    engine: str = "auto",
    max_models: int = DEFAULT_MAX_MODELS,
    max_kb: int = DEFAULT_MAX_KB,
) -> bool:
    """Decide whether some consistent subset of delta entails alpha.

    The auto engine tries three answer-identical routes in order: if
    every knowledge-base relation is 0-valid or every one is 1-valid,
    the base is consistent and the answer is entails(delta, alpha); the
    same holds whenever the base happens to be consistent, since
    entailment is monotone. Otherwise a support exists iff for some
    assignment m the subset of formulas satisfied at m entails alpha,
    which is decided by matrix arithmetic on small assignment spaces and
    by canonical subset search beyond them.

    Raises:
        BudgetExceededError: the instance exceeds the model or subset
            budget on the path that needs it.
    """
    delta = list(delta)
    if engine == "generic":
        _check_subset_budget(delta, max_kb)
        masks = _subset_masks(delta, alpha, max_models)
        for subset in _subsets(len(delta)):
            if masks is not None:
                models = _models_of_subset(masks[0], subset)
                if models.any() and not (models & ~masks[1]).any():
                    return True
            else:
                chosen = [delta[i] for i in subset]
                if is_consistent(
                    chosen, engine="generic", max_models=max_models
                ) and entails(chosen, alpha, engine="generic", max_models=max_models):
                    return True
        return False
    if _eps_shortcut_applies(delta):
        logger.debug("arg_exists: constant-assignment shortcut")
        return entails(delta, alpha, engine=engine, max_models=max_models)
    if is_consistent(delta, engine=engine, max_models=max_models):
        return entails(delta, alpha, engine=engine, max_models=max_models)
    order_size = len(variables_of(delta) | alpha.variables)
    if (1 << order_size) <= _MATRIX_LIMIT:
        sat, alpha_mask, _ = _satisfaction_matrix(delta, alpha)
        return bool(_matrix_entailing_assignments(sat, alpha_mask).any())
    _check_subset_budget(delta, max_kb)
    masks = _subset_masks(delta, alpha, max_models)
    for subset in _subsets(len(delta)):
        if masks is not None:
            models = _models_of_subset(masks[0], subset)
            if models.any() and not (models & ~masks[1]).any():
                return True
        else:
            chosen = [delta[i] for i in subset]
            if is_consistent(chosen, engine=engine, max_models=max_models) and entails(
                chosen, alpha, engine=engine, max_models=max_models
            ):
                return True
    return False


def _removal_pass(
    candidate: list[int],
    delta: Sequence[GammaFormula],
    alpha: GammaFormula,
    engine: str,
    max_models: int,
) -> Support:
    """Greedily drop indices in ascending order while entailment holds."""
    kept = list(candidate)
    for idx in sorted(candidate):
        rest = [delta[i] for i in kept if i != idx]
        if entails(rest, alpha, engine=engine, max_models=max_models):
            kept.remove(idx)
    return Support(tuple(sorted(kept)))


def find_minimal_support(
    delta: Sequence[GammaFormula],
    alpha: GammaFormula,
    *,
    engine: str = "auto",
    max_models: int = DEFAULT_MAX_MODELS,
    max_kb: int = DEFAULT_MAX_KB,
) -> Support | None:
    """Return one minimal support for alpha, or None when none exists.

    The result is deterministic per engine: a consistent entailing
    candidate is located (the whole base, the subset satisfied at the
    first qualifying assignment, or the first subset in canonical
    search order), then indices are removed in ascending order whenever
    entailment survives. The returned support always passes argcheck.
    """
    delta = list(delta)
    if engine == "generic":
        _check_subset_budget(delta, max_kb)
        masks = _subset_masks(delta, alpha, max_models)
        for subset in _subsets(len(delta)):
            if masks is not None:
                models = _models_of_subset(masks[0], subset)
                hit = models.any() and not (models & ~masks[1]).any()
            else:
                chosen = [delta[i] for i in subset]
                hit = is_consistent(
                    chosen, engine="generic", max_models=max_models
                ) and entails(chosen, alpha, engine="generic", max_models=max_models)
            if hit:
                return _removal_pass(list(subset), delta, alpha, "generic", max_models)
        return None
    if _eps_shortcut_applies(delta) or is_consistent(
        delta, engine=engine, max_models=max_models
    ):
        if not entails(delta, alpha, engine=engine, max_models=max_models):
            return None
        return _removal_pass(list(range(len(delta))), delta, alpha, engine, max_models)
    order_size = len(variables_of(delta) | alpha.variables)
    if (1 << order_size) <= _MATRIX_LIMIT:
        sat, alpha_mask, _ = _satisfaction_matrix(delta, alpha)
        good = _matrix_entailing_assignments(sat, alpha_mask)
        if not good.any():
            return None
        m = int(np.argmax(good))
        candidate = [i for i in range(len(delta)) if sat[i, m]]
        return _removal_pass(candidate, delta, alpha, engine, max_models)
    _check_subset_budget(delta, max_kb)
    masks = _subset_masks(delta, alpha, max_models)
    for subset in _subsets(len(delta)):
        if masks is not None:
            models = _models_of_subset(masks[0], subset)
            hit = models.any() and not (models & ~masks[1]).any()
        else:
            chosen = [delta[i] for i in subset]
            hit = is_consistent(
                chosen, engine=engine, max_models=max_models
            ) and entails(chosen, alpha, engine=engine, max_models=max_models)
        if hit:
            return _removal_pass(list(subset), delta, alpha, engine, max_models)
    return None


def enumerate_minimal_supports(
    delta: Sequence[GammaFormula],
    alpha: GammaFormula,
    *,
    engine: str = "auto",
    max_models: int = DEFAULT_MAX_MODELS,
    max_kb: int = DEFAULT_MAX_KB,
) -> list[Support]:
    """List every minimal support in canonical order.

    Subsets are visited by cardinality then lexicographically; any
    superset of an already-accepted support is skipped, after which
    consistency plus entailment suffices for minimality (a smaller
    qualifying subset would have been accepted first). Complete within
    the subset budget.

    Raises:
        BudgetExceededError: when len(delta) exceeds max_kb.
    """
    delta = list(delta)
    _check_subset_budget(delta, max_kb)
    masks = _subset_masks(delta, alpha, max_models)
    accepted: list[Support] = []
    accepted_sets: list[frozenset[int]] = []
    for subset in _subsets(len(delta)):
        as_set = frozenset(subset)
        if any(prev <= as_set for prev in accepted_sets):
            continue
        if masks is not None:
            models = _models_of_subset(masks[0], subset)
            hit = models.any() and not (models & ~masks[1]).any()
        else:
            chosen = [delta[i] for i in subset]
            hit = is_consistent(
                chosen, engine=engine, max_models=max_models
            ) and entails(chosen, alpha, engine=engine, max_models=max_models)
        if hit:
            accepted.append(Support(subset))
            accepted_sets.append(as_set)
    return accepted


def _psi_index(delta: Sequence[GammaFormula], psi: int | GammaFormula) -> int:
    if isinstance(psi, int):
        if not 0 <= psi < len(delta):
            raise ValueError(f"index {psi} out of range for a base of {len(delta)}")
        return psi
    for i, f in enumerate(delta):
        if f == psi:
            return i
    raise ValueError("the queried formula is not in the knowledge base")


def _positive_clauses(alpha: GammaFormula) -> list[frozenset[str]]:
    """Positive clause decomposition of a claim, deduplicated keep-first."""
    clauses: list[frozenset[str]] = []
    for c in alpha.constraints:
        for clause in positive_cnf_of(c.relation):
            lits = frozenset(c.args[i - 1] for i in clause.pos)
            if lits not in clauses:
                clauses.append(lits)
    return clauses


def _negative_clauses(alpha: GammaFormula) -> list[frozenset[str]]:
    clauses: list[frozenset[str]] = []
    for c in alpha.constraints:
        for clause in negative_cnf_of(c.relation):
            lits = frozenset(c.args[i - 1] for i in clause.neg)
            if lits not in clauses:
                clauses.append(lits)
    return clauses


def _entails_literal_clause(
    formula: GammaFormula, clause: frozenset[str], value: bool
) -> bool:
    """Does the formula force some clause variable to the given value."""
    overlap = clause & formula.variables
    if not overlap:
        return False
    order = tuple(sorted(formula.variables))
    n = len(order)
    mask = models_mask(formula.constraints, order)
    hit = np.zeros(1 << n, dtype=np.bool_)
    assignments = np.arange(1 << n, dtype=np.int64)
    for i, v in enumerate(order):
        if v in overlap:
            bit = (assignments >> (n - 1 - i)) & 1
            hit |= bit == int(value)
    return bool(np.all(~mask | hit))


def _check_monotone_language(delta, alpha, flag: str):
    relations = {c.relation for f in (*delta, alpha) for c in f.constraints}
    if not all(getattr(relation_properties(r), flag) for r in relations):
        direction = "upward" if flag == "positive" else "downward"
        raise PreconditionError(f"instance relations are not all {direction}-closed")


def argrel_positive(
    delta: Sequence[GammaFormula],
    alpha: GammaFormula,
    psi: int | GammaFormula,
    *,
    engine: str = "auto",
    max_models: int = DEFAULT_MAX_MODELS,
) -> bool:
    """Relevance over an upward-closed language by clause decomposition.

    The claim is split into its positive clauses C_i; for each, the
    candidate base keeps psi plus every formula not entailing C_i, and
    psi is relevant iff one candidate still entails the whole claim.
    Sound because entailment of a positive clause by a conjunction of
    upward-closed formulas requires a single conjunct to entail it.

    Raises:
        PreconditionError: some relation in the instance is not
            upward-closed.
    """
    delta = list(delta)
    _check_monotone_language(delta, alpha, "positive")
    idx = _psi_index(delta, psi)
    for clause in _positive_clauses(alpha):
        candidate = [delta[idx]] + [
            f
            for i, f in enumerate(delta)
            if i != idx and not _entails_literal_clause(f, clause, True)
        ]
        if entails(candidate, alpha, engine=engine, max_models=max_models):
            return True
    return False


def argrel_negative(
    delta: Sequence[GammaFormula],
    alpha: GammaFormula,
    psi: int | GammaFormula,
    *,
    engine: str = "auto",
    max_models: int = DEFAULT_MAX_MODELS,
) -> bool:
    """Dual of argrel_positive for downward-closed languages."""
    delta = list(delta)
    _check_monotone_language(delta, alpha, "negative")
    idx = _psi_index(delta, psi)
    for clause in _negative_clauses(alpha):
        candidate = [delta[idx]] + [
            f
            for i, f in enumerate(delta)
            if i != idx and not _entails_literal_clause(f, clause, False)
        ]
        if entails(candidate, alpha, engine=engine, max_models=max_models):
            return True
    return False


def argrel(
    delta: Sequence[GammaFormula],
    alpha: GammaFormula,
    psi: int | GammaFormula,
    *,
    engine: str = "auto",
    max_models: int = DEFAULT_MAX_MODELS,
    max_kb: int = DEFAULT_MAX_KB,
) -> bool:
    """Decide whether psi belongs to some minimal support for alpha.

    psi may be given as an index into delta or as a formula (its first
    occurrence is used). On monotone languages the clause-decomposition
    algorithm runs; otherwise the general criterion searches for a
    subset containing psi that is consistent, entails alpha, and stops
    entailing when psi is removed. Greedy deletion of other members
    preserves those conditions, so such a subset exists exactly when a
    minimal support contains psi. The generic engine instead checks
    membership in the enumerated minimal supports.

    Raises:
        BudgetExceededError: subset search beyond max_kb.
    """
    delta = list(delta)
    idx = _psi_index(delta, psi)
    if engine == "generic":
        supports = enumerate_minimal_supports(
            delta, alpha, engine="generic", max_models=max_models, max_kb=max_kb
        )
        return any(idx in s for s in supports)
    relations = {c.relation for f in (*delta, alpha) for c in f.constraints}
    reports = [relation_properties(r) for r in relations]
    if all(r.positive for r in reports):
        logger.debug("argrel: clause decomposition (upward-closed)")
        return argrel_positive(delta, alpha, idx, engine=engine, max_models=max_models)
    if all(r.negative for r in reports):
        logger.debug("argrel: clause decomposition (downward-closed)")
        return argrel_negative(delta, alpha, idx, engine=engine, max_models=max_models)
    _check_subset_budget(delta, max_kb)
    masks = _subset_masks(delta, alpha, max_models)
    others = [i for i in range(len(delta)) if i != idx]
    for size in range(len(others) + 1):
        for combo in itertools.combinations(others, size):
            if masks is not None:
                base = _models_of_subset(masks[0], combo)
                models = base & masks[0][idx]
                if (
                    models.any()
                    and not (models & ~masks[1]).any()
                    and (base & ~masks[1]).any()
                ):
                    return True
                continue
            subset = sorted((idx, *combo))
            chosen = [delta[i] for i in subset]
            without = [delta[i] for i in subset if i != idx]
            if (
                is_consistent(chosen, engine=engine, max_models=max_models)
                and entails(chosen, alpha, engine=engine, max_models=max_models)
                and not entails(without, alpha, engine=engine, max_models=max_models)
            ):
                return True
    return False


def classify_complexity(language: ConstraintLanguage) -> ComplexityReport:
    """Predict the complexity class of each decision problem.

    Existence is polynomial for Schaefer and eps-valid languages,
    NP-complete for Schaefer ones lacking a valid constant, coNP-complete
    for eps-valid non-Schaefer ones, and SigmaP2-complete otherwise.
    Verification is polynomial exactly on Schaefer languages and
    DP-complete elsewhere. Relevance is polynomial on monotone
    (upward- or downward-closed) languages, NP-complete on other
    Schaefer languages, and SigmaP2-complete beyond Schaefer.
    """
    props = language_properties(language)
    if props.schaefer:
        arg = "P" if props.eps_valid else "NP-complete"
    else:
        arg = "coNP-complete" if props.eps_valid else "SigmaP2-complete"
    check = "P" if props.schaefer else "DP-complete"
    if props.positive or props.negative:
        rel = "P"
    elif props.schaefer:
        rel = "NP-complete"
    else:
        rel = "SigmaP2-complete"
    return ComplexityReport(arg=arg, argcheck=check, argrel=rel)
