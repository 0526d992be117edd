"""Conjunctive formulas over a constraint language and the instance file model.

A formula is a conjunction of constraints R(v1,...,vk); no other connective
exists in this framework. Assignments are encoded as bitmasks over the
sorted variable list, with the lexically first variable in the most
significant bit, so ascending mask order is lexicographic model order.
"""

from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import kernels
from .errors import BudgetExceededError, ParseError
from .relations import (
    ConstraintLanguage,
    Relation,
    parse_relation_line,
    parse_relations,
    truth_table,
)

__all__ = [
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
]

Variable = str

DEFAULT_MAX_MODELS = 2**22

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Constraint:
    """One applied constraint: a relation on a variable tuple.

    Variables may repeat; the arg count must match the relation arity.
    """

    relation: Relation
    args: tuple[Variable, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.relation.arity:
            raise ValueError(
                f"{self.relation.name} expects {self.relation.arity} args, "
                f"got {len(self.args)}"
            )
        for v in self.args:
            if not _IDENT_RE.match(v):
                raise ValueError(f"invalid variable name {v!r}")

    @property
    def variables(self) -> frozenset[Variable]:
        return frozenset(self.args)

    def __str__(self):
        return f"{self.relation.name}({','.join(self.args)})"


def substitute(constraint: Constraint, variables: Iterable[Variable], replacement: Variable) -> Constraint:
    """Replace every occurrence of the given variables by one variable.

    Args:
        constraint: the constraint to rewrite.
        variables: occurrences of these variables are replaced.
        replacement: the variable substituted in.

    Returns:
        A constraint on the same relation with args rewritten; arity is
        unchanged since substitution only merges argument positions.
    """
    targets = set(variables)
    args = tuple(replacement if a in targets else a for a in constraint.args)
    return Constraint(constraint.relation, args)


@dataclass(frozen=True)
class GammaFormula:
    """A nonempty conjunction of constraints."""

    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if not self.constraints:
            raise ValueError("formula must contain at least one constraint")

    @property
    def variables(self) -> frozenset[Variable]:
        out: set[Variable] = set()
        for c in self.constraints:
            out.update(c.args)
        return frozenset(out)

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.constraints)

    def __str__(self):
        return " & ".join(str(c) for c in self.constraints)


def conjoin(*formulas: GammaFormula) -> GammaFormula:
    """Concatenate the constraint lists of several formulas."""
    constraints: list[Constraint] = []
    for f in formulas:
        constraints.extend(f.constraints)
    return GammaFormula(tuple(constraints))


def variables_of(formulas: Iterable[GammaFormula]) -> frozenset[Variable]:
    """Union of the variable sets of a formula collection."""
    out: set[Variable] = set()
    for f in formulas:
        out.update(f.variables)
    return frozenset(out)


@dataclass(frozen=True)
class QuantifiedFormula:
    """A conjunction with some variables existentially bound.

    The body may additionally use the built-in equality relation; plain
    formulas may not. The projection semantics is onto the free variables
    in sorted order.
    """

    existential_vars: frozenset[Variable]
    body: GammaFormula

    def __post_init__(self):
        object.__setattr__(self, "existential_vars", frozenset(self.existential_vars))
        if not self.existential_vars <= self.body.variables:
            extra = sorted(self.existential_vars - self.body.variables)
            raise ValueError(f"bound variables not in body: {extra}")

    @property
    def free_variables(self) -> frozenset[Variable]:
        return self.body.variables - self.existential_vars

    def __str__(self):
        if not self.existential_vars:
            return str(self.body)
        bound = " ".join(sorted(self.existential_vars))
        return f"exists {bound} . {self.body}"


@dataclass(frozen=True)
class ArgInstance:
    """An argumentation problem input: knowledge base, claim, focus formula.

    Args:
        language: the constraint language every constraint must come from.
        delta: the knowledge base, an ordered tuple of formulas.
        alpha: the claim.
        relevant: optional index into delta naming the formula whose
            relevance is queried.
    """

    language: ConstraintLanguage
    delta: tuple[GammaFormula, ...]
    alpha: GammaFormula
    relevant: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(self.delta))
        if self.relevant is not None and not 0 <= self.relevant < len(self.delta):
            raise ValueError(f"relevant index {self.relevant} out of range")
        for formula in (*self.delta, self.alpha):
            for c in formula.constraints:
                if c.relation not in self.language.relations:
                    raise ValueError(
                        f"constraint uses relation {c.relation.name} "
                        "outside the instance language"
                    )


# ---------------------------------------------------------------------------
# Model enumeration. Internally everything works on satisfaction masks:
# boolean arrays over all 2^n assignments to a sorted variable tuple.
# ---------------------------------------------------------------------------


def _constraint_arrays(
    constraints: Iterable[Constraint], order: tuple[Variable, ...]
) -> tuple[list[np.ndarray], list[tuple[int, ...]]]:
    index = {v: i for i, v in enumerate(order)}
    tables = []
    positions = []
    for c in constraints:
        tables.append(truth_table(c.relation))
        positions.append(tuple(index[a] for a in c.args))
    return tables, positions


def models_mask(constraints: Iterable[Constraint], order: tuple[Variable, ...]) -> np.ndarray:
    """Satisfaction mask of a constraint conjunction over ordered variables.

    Entry m of the result says whether assignment mask m (variable at
    order position i holds bit n-1-i) satisfies every constraint.
    """
    tables, positions = _constraint_arrays(constraints, order)
    return kernels.filter_models(len(order), tables, positions)


def _as_constraints(phi: GammaFormula | Iterable[GammaFormula]) -> list[Constraint]:
    if isinstance(phi, GammaFormula):
        return list(phi.constraints)
    out: list[Constraint] = []
    for f in phi:
        out.extend(f.constraints)
    return out


def enumerate_models(
    phi: GammaFormula | Iterable[GammaFormula],
    over: Iterable[Variable] | None = None,
    *,
    max_models: int = DEFAULT_MAX_MODELS,
) -> list[dict[Variable, bool]]:
    """List every satisfying assignment in lexicographic order.

    Args:
        phi: a formula or a collection of formulas, taken conjunctively.
        over: variables to assign; must cover the formula variables.
            Defaults to exactly the formula variables.
        max_models: cap on 2^|over| enumerated assignments.

    Returns:
        Assignments as dicts over `over`, ordered lexicographically with
        False < True on the sorted variable list.

    Raises:
        BudgetExceededError: when the assignment space exceeds max_models.
        ValueError: when `over` misses a formula variable.
    """
    constraints = _as_constraints(phi)
    used: set[Variable] = set()
    for c in constraints:
        used.update(c.args)
    if over is None:
        scope = used
    else:
        scope = set(over)
        if not used <= scope:
            missing = sorted(used - scope)
            raise ValueError(f"assignment scope misses variables: {missing}")
    order = tuple(sorted(scope))
    n = len(order)
    if 1 << n > max_models:
        raise BudgetExceededError(
            f"2^{n} assignments exceed the model budget {max_models}"
        )
    mask = models_mask(constraints, order)
    models = []
    for m in np.flatnonzero(mask):
        m = int(m)
        models.append({v: bool((m >> (n - 1 - i)) & 1) for i, v in enumerate(order)})
    return models


def satisfies(assignment: Mapping[Variable, bool], constraint: Constraint) -> bool:
    """Evaluate one constraint under a variable assignment."""
    k = constraint.relation.arity
    mask = 0
    for j, v in enumerate(constraint.args):
        if assignment[v]:
            mask |= 1 << (k - 1 - j)
    return mask in constraint.relation.tuples


# ---------------------------------------------------------------------------
# Instance file format:
#   use <relation-file-path>
#   relation <NAME> <arity> { <tuples> }     # inline alternative to `use`
#   formula <name> = <REL>(<v>,...) & ...
#   kb <name> <name> ...
#   claim <REL>(...) & ...
#   relevant <name>
# ---------------------------------------------------------------------------

_CONSTRAINT_RE = re.compile(
    r"(?P<rel>[A-Za-z_][A-Za-z0-9_]*)\s*\(\s*(?P<args>[^()]*)\)\s*\Z"
)


def _parse_constraints(
    text: str, relations: dict[str, Relation], lineno: int
) -> GammaFormula:
    parts = [p.strip() for p in text.split("&")]
    constraints = []
    for part in parts:
        m = _CONSTRAINT_RE.match(part)
        if not m:
            raise ParseError(f"malformed constraint {part!r}", lineno)
        name = m.group("rel")
        if name not in relations:
            raise ParseError(f"unknown relation {name}", lineno)
        relation = relations[name]
        args = tuple(a.strip() for a in m.group("args").split(","))
        if len(args) != relation.arity:
            raise ParseError(
                f"{name} expects {relation.arity} args, got {len(args)}", lineno
            )
        for a in args:
            if not _IDENT_RE.match(a):
                raise ParseError(f"invalid variable name {a!r}", lineno)
        constraints.append(Constraint(relation, args))
    return GammaFormula(tuple(constraints))


def parse_instance(
    text: str,
    *,
    base_dir: str | None = None,
    language: ConstraintLanguage | None = None,
) -> ArgInstance:
    """Parse an instance file into an ArgInstance.

    Args:
        text: instance file contents.
        base_dir: directory against which `use` paths are resolved.
        language: relations made available in addition to any `use` files
            and inline declarations.

    Returns:
        The parsed instance; the knowledge base order is the kb line order.

    Raises:
        ParseError: on syntax errors, unknown relations or formulas,
            arity mismatches, duplicate names, a missing claim, or a
            `relevant` target outside the kb.
    """
    relations: dict[str, Relation] = {}
    if language is not None:
        relations.update({r.name: r for r in language})
    formulas: dict[str, GammaFormula] = {}
    kb_names: list[str] = []
    claim: GammaFormula | None = None
    relevant_name: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "use":
            if not rest:
                raise ParseError("use needs a file path", lineno)
            path = os.path.join(base_dir or ".", rest)
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    used = parse_relations(fh.read())
            except OSError as exc:
                raise ParseError(f"cannot read {rest}: {exc}", lineno) from None
            for r in used:
                if r.name in relations:
                    raise ParseError(f"duplicate relation {r.name}", lineno)
                relations[r.name] = r
        elif keyword == "relation":
            r = parse_relation_line(line, lineno)
            if r.name in relations:
                raise ParseError(f"duplicate relation {r.name}", lineno)
            relations[r.name] = r
        elif keyword == "formula":
            name, eq, body = rest.partition("=")
            name = name.strip()
            if not eq or not _IDENT_RE.match(name):
                raise ParseError("expected `formula <name> = <constraints>`", lineno)
            if name in formulas:
                raise ParseError(f"duplicate formula {name}", lineno)
            formulas[name] = _parse_constraints(body.strip(), relations, lineno)
        elif keyword == "kb":
            for name in rest.split():
                if name not in formulas:
                    raise ParseError(f"unknown formula {name}", lineno)
                if name in kb_names:
                    raise ParseError(f"formula {name} repeated in kb", lineno)
                kb_names.append(name)
        elif keyword == "claim":
            if claim is not None:
                raise ParseError("multiple claim lines", lineno)
            claim = _parse_constraints(rest, relations, lineno)
        elif keyword == "relevant":
            if relevant_name is not None:
                raise ParseError("multiple relevant lines", lineno)
            if not rest or len(rest.split()) != 1:
                raise ParseError("relevant needs exactly one formula name", lineno)
            relevant_name = rest
        else:
            raise ParseError(f"unknown directive {keyword!r}", lineno)

    if claim is None:
        raise ParseError("missing claim")
    if not relations:
        raise ParseError("no relations available; add `use` or `relation` lines")
    relevant = None
    if relevant_name is not None:
        if relevant_name not in kb_names:
            raise ParseError(f"relevant formula {relevant_name} is not in the kb")
        relevant = kb_names.index(relevant_name)
    return ArgInstance(
        language=ConstraintLanguage(tuple(relations.values())),
        delta=tuple(formulas[n] for n in kb_names),
        alpha=claim,
        relevant=relevant,
    )


def serialize_instance(instance: ArgInstance, *, use: str | None = None) -> str:
    """Render an instance in the instance file format.

    Formula names are regenerated as f0, f1, ...; with `use` given, a
    `use` line replaces inline relation declarations so the language can
    live in a separate relation file.
    """
    lines: list[str] = []
    if use is not None:
        lines.append(f"use {use}")
    else:
        for r in instance.language:
            lines.append(f"relation {r.name} {r.arity} {{ {' '.join(r.tuple_strings)} }}")
    names = []
    for i, formula in enumerate(instance.delta):
        name = f"f{i}"
        names.append(name)
        lines.append(f"formula {name} = {formula}")
    if names:
        lines.append(f"kb {' '.join(names)}")
    lines.append(f"claim {instance.alpha}")
    if instance.relevant is not None:
        lines.append(f"relevant {names[instance.relevant]}")
    return "\n".join(lines) + "\n"
