"""Solver and classifier toolkit for logic-based argumentation over
conjunctive formulas from finite Boolean constraint languages.

The package decides argument existence, verification, and relevance,
predicts the complexity class of each problem from closure properties of
the language, expresses auxiliary relations as verified gadget formulas,
and materializes classic reductions as executable instance generators.
"""

from .argumentation import (
    COMPLEXITY_CLASSES,
    DEFAULT_MAX_KB,
    ComplexityReport,
    Support,
    arg_exists,
    argcheck,
    argrel,
    argrel_negative,
    argrel_positive,
    classify_complexity,
    enumerate_minimal_supports,
    find_minimal_support,
)
from .errors import (
    ArgclError,
    BudgetExceededError,
    ConstructionError,
    ParseError,
    PreconditionError,
)
from .expressibility import (
    GadgetTarget,
    TARGET_RELATIONS,
    drop_quantifiers,
    express,
    precondition_met,
    verify_expresses,
)
from .formulas import (
    ArgInstance,
    Constraint,
    DEFAULT_MAX_MODELS,
    GammaFormula,
    QuantifiedFormula,
    Variable,
    conjoin,
    enumerate_models,
    models_mask,
    parse_instance,
    satisfies,
    serialize_instance,
    substitute,
    variables_of,
)
from .kernels import NUMBA_AVAILABLE, kernel_mode
from .logic import (
    Clause,
    cnf_of,
    entails,
    is_consistent,
    negative_cnf_of,
    positive_cnf_of,
)
from .reductions import (
    AbdInstance,
    CnfInput,
    REDUCTION_KINDS,
    SOURCE_PROBLEMS,
    parse_abduction,
    parse_dimacs,
    reduce,
    small_abduction_family,
    small_cnf_family,
    small_instance_family,
    small_pos1in3_family,
    solve_source,
    source_type_of,
)
from .relations import (
    EQUALITY,
    FLAG_NAMES,
    MAX_ARITY,
    ConstraintLanguage,
    PropertyReport,
    Relation,
    language_properties,
    parse_relations,
    relation_properties,
    serialize_relations,
    truth_table,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ArgclError",
    "ParseError",
    "PreconditionError",
    "BudgetExceededError",
    "ConstructionError",
    "MAX_ARITY",
    "Relation",
    "ConstraintLanguage",
    "PropertyReport",
    "FLAG_NAMES",
    "EQUALITY",
    "relation_properties",
    "language_properties",
    "truth_table",
    "parse_relations",
    "serialize_relations",
    "Variable",
    "Constraint",
    "GammaFormula",
    "QuantifiedFormula",
    "ArgInstance",
    "DEFAULT_MAX_MODELS",
    "substitute",
    "conjoin",
    "variables_of",
    "models_mask",
    "enumerate_models",
    "satisfies",
    "parse_instance",
    "serialize_instance",
    "Clause",
    "cnf_of",
    "positive_cnf_of",
    "negative_cnf_of",
    "is_consistent",
    "entails",
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
    "GadgetTarget",
    "TARGET_RELATIONS",
    "precondition_met",
    "express",
    "verify_expresses",
    "drop_quantifiers",
    "CnfInput",
    "AbdInstance",
    "SOURCE_PROBLEMS",
    "REDUCTION_KINDS",
    "parse_dimacs",
    "parse_abduction",
    "solve_source",
    "reduce",
    "source_type_of",
    "small_cnf_family",
    "small_pos1in3_family",
    "small_abduction_family",
    "small_instance_family",
    "NUMBA_AVAILABLE",
    "kernel_mode",
]
