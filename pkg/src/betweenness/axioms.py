"""The nine axiom schemas: templates, instantiation, and matching.

Every schema is a curried implication chain over possibly negated atoms
whose set positions are unions (and one difference) of set variables.
Writing the templates as data keeps instantiation, inverse matching, and
the exhaustive sweeps in the decision module all reading from one source.

Comma-unions in an instance lose the split between variables, so matching
accepts any way of reading a position as the template union; where a
variable is not pinned by a singleton position (the A2 of left
monotonicity, the B2 of central monotonicity) the minimal leftover set is
chosen and the candidate is verified by re-instantiation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .errors import (
    MissingSubstituentError,
    SideConditionViolatedError,
    SubstitutionError,
)
from .syntax import Atom, AtomNode, Formula, Implies, Not, Signature


class AxiomSchema(Enum):
    TRIVIAL_PATH = "TrivialPath"
    EMPTY_SET = "EmptySet"
    SHORTEST_PATH = "ShortestPath"
    AGGREGATION = "Aggregation"
    SYMMETRY = "Symmetry"
    LEFT_MONOTONICITY = "LeftMonotonicity"
    CENTRAL_MONOTONICITY = "CentralMonotonicity"
    INSERTION = "Insertion"
    TRANSITIVITY = "Transitivity"

    @classmethod
    def from_name(cls, name: str) -> "AxiomSchema":
        for schema in cls:
            if schema.value == name:
                return schema
        raise SubstitutionError(f"unknown axiom schema {name!r}")


@dataclass(frozen=True)
class _SetExpr:
    """A set position: union of the plus variables minus the minus ones."""

    plus: tuple[str, ...]
    minus: tuple[str, ...] = ()

    def value(self, subst: Mapping[str, tuple[str, ...]]) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for var in self.plus:
            out |= frozenset(subst[var])
        for var in self.minus:
            out -= frozenset(subst[var])
        return out


@dataclass(frozen=True)
class _Template:
    variables: tuple[str, ...]
    # Each literal is (negated, (left, middle, right)); the chain
    # L1 -> (L2 -> ... -> Lk) is the schema body, a lone literal for k = 1.
    literals: tuple[tuple[bool, tuple[_SetExpr, _SetExpr, _SetExpr]], ...]
    singletons: tuple[str, ...] = ()
    side_condition: str = ""


def _e(*plus: str, minus: tuple[str, ...] = ()) -> _SetExpr:
    return _SetExpr(plus, minus)


_TEMPLATES: dict[AxiomSchema, _Template] = {
    AxiomSchema.TRIVIAL_PATH: _Template(
        variables=("A", "B", "C"),
        literals=((True, (_e("A"), _e("B"), _e("C"))),),
        side_condition="A and C must share a vertex",
    ),
    AxiomSchema.EMPTY_SET: _Template(
        variables=("B", "C"),
        literals=((False, (_e(), _e("B"), _e("C"))),),
    ),
    AxiomSchema.SHORTEST_PATH: _Template(
        variables=("A", "B", "C"),
        literals=(
            (False, (_e("A"), _e("B"), _e("C"))),
            (False, (_e("A"), _e("B", minus=("A",)), _e("C"))),
        ),
    ),
    AxiomSchema.AGGREGATION: _Template(
        variables=("A1", "A2", "B", "C"),
        literals=(
            (False, (_e("A1"), _e("B"), _e("C"))),
            (False, (_e("A2"), _e("B"), _e("C"))),
            (False, (_e("A1", "A2"), _e("B"), _e("C"))),
        ),
    ),
    AxiomSchema.SYMMETRY: _Template(
        variables=("A", "B", "C"),
        literals=(
            (False, (_e("A"), _e("B"), _e("C"))),
            (False, (_e("C"), _e("B"), _e("A"))),
        ),
    ),
    AxiomSchema.LEFT_MONOTONICITY: _Template(
        variables=("A1", "A2", "B", "C"),
        literals=(
            (False, (_e("A1", "A2"), _e("B"), _e("C"))),
            (False, (_e("A1"), _e("B"), _e("C"))),
        ),
    ),
    AxiomSchema.CENTRAL_MONOTONICITY: _Template(
        variables=("A", "B1", "B2", "C"),
        literals=(
            (False, (_e("A"), _e("B1"), _e("C"))),
            (False, (_e("A"), _e("B1", "B2"), _e("C"))),
        ),
    ),
    AxiomSchema.INSERTION: _Template(
        variables=("A", "B1", "B2", "I", "C"),
        literals=(
            (False, (_e("A"), _e("B1", "I", "B2"), _e("C"))),
            (False, (_e("A"), _e("I", "C"), _e("B1"))),
            (False, (_e("B2"), _e("A", "I"), _e("C"))),
            (False, (_e("A"), _e("I"), _e("C"))),
        ),
    ),
    AxiomSchema.TRANSITIVITY: _Template(
        variables=("A", "B", "C", "d"),
        literals=(
            (True, (_e("A"), _e("B"), _e("d"))),
            (True, (_e("d"), _e("B"), _e("C"))),
            (True, (_e("A"), _e("B"), _e("C"))),
        ),
        singletons=("d",),
        side_condition="d must not belong to B",
    ),
}


class InsertionForm(Enum):
    """The three insertion principles, weakest to strongest."""

    WEAK1 = "weak1"
    WEAK2 = "weak2"
    STRONGEST = "strongest"


_PRINCIPLES: dict[InsertionForm, _Template] = {
    InsertionForm.WEAK1: _Template(
        variables=("A", "B1", "B2", "I", "C"),
        literals=(
            (False, (_e("A"), _e("B1", "B2"), _e("C"))),
            (False, (_e("A"), _e("I"), _e("B1"))),
            (False, (_e("B2"), _e("I"), _e("C"))),
            (False, (_e("A"), _e("I"), _e("C"))),
        ),
    ),
    InsertionForm.WEAK2: _Template(
        variables=("A", "B1", "B2", "I", "C"),
        literals=(
            (False, (_e("A"), _e("B1", "I", "B2"), _e("C"))),
            (False, (_e("A"), _e("I"), _e("B1"))),
            (False, (_e("B2"), _e("I"), _e("C"))),
            (False, (_e("A"), _e("I"), _e("C"))),
        ),
    ),
    InsertionForm.STRONGEST: _TEMPLATES[AxiomSchema.INSERTION],
}


@dataclass(eq=True)
class AxiomInstance:
    """A schema together with the substitution that produced its formula."""

    schema: AxiomSchema
    substitution: dict[str, tuple[str, ...]]
    formula: Formula = field(repr=False)

    def __str__(self) -> str:
        parts = ",".join(f"{k}={{{','.join(v)}}}" for k, v in sorted(self.substitution.items()))
        return f"{self.schema.value}[{parts}]"


def _canon_substitution(
    tpl: _Template, substitution: Mapping[str, Iterable[str]], sig: Signature
) -> dict[str, tuple[str, ...]]:
    given = set(substitution)
    wanted = set(tpl.variables)
    missing = wanted - given
    if missing:
        raise MissingSubstituentError(
            "missing substituent(s): " + ", ".join(sorted(missing))
        )
    extra = given - wanted
    if extra:
        raise SubstitutionError("unexpected substituent(s): " + ", ".join(sorted(extra)))
    out: dict[str, tuple[str, ...]] = {}
    for var in tpl.variables:
        value = substitution[var]
        names = (value,) if isinstance(value, str) else tuple(value)
        out[var] = sig.canon(names)
    for var in tpl.singletons:
        if len(out[var]) != 1:
            raise SideConditionViolatedError(f"{var} must be a single vertex")
    return out


def _check_side_condition(schema: AxiomSchema, subst: Mapping[str, tuple[str, ...]]) -> bool:
    if schema is AxiomSchema.TRIVIAL_PATH:
        return not frozenset(subst["A"]).isdisjoint(subst["C"])
    if schema is AxiomSchema.TRANSITIVITY:
        return subst["d"][0] not in subst["B"]
    return True


def _build(tpl: _Template, subst: Mapping[str, tuple[str, ...]], sig: Signature) -> Formula:
    literals = [
        Not(AtomNode(Atom(sig, *(pos.value(subst) for pos in positions))))
        if negated
        else AtomNode(Atom(sig, *(pos.value(subst) for pos in positions)))
        for negated, positions in tpl.literals
    ]
    formula = literals[-1]
    for lit in reversed(literals[:-1]):
        formula = Implies(lit, formula)
    return formula


def instantiate_schema(
    schema: AxiomSchema, substitution: Mapping[str, Iterable[str]], sig: Signature
) -> Formula:
    """Fill a schema template; comma-unions become set unions.

    The substitution must supply exactly the schema's set variables (``d``
    may be a bare string). Side conditions are enforced: trivial path needs
    A and C to intersect, transitivity needs a single vertex d outside B.
    """
    tpl = _TEMPLATES[schema]
    subst = _canon_substitution(tpl, substitution, sig)
    if not _check_side_condition(schema, subst):
        raise SideConditionViolatedError(tpl.side_condition or "side condition failed")
    return _build(tpl, subst, sig)


def insertion_principle(
    form: InsertionForm, substitution: Mapping[str, Iterable[str]], sig: Signature
) -> Formula:
    """Build one of the three insertion principles over A, B1, B2, I, C.

    The strongest form coincides with the Insertion axiom schema.
    """
    tpl = _PRINCIPLES[form]
    subst = _canon_substitution(tpl, substitution, sig)
    return _build(tpl, subst, sig)


def _peel_chain(f: Formula, count: int) -> list[Formula] | None:
    literals: list[Formula] = []
    for _ in range(count - 1):
        if not isinstance(f, Implies):
            return None
        literals.append(f.left)
        f = f.right
    literals.append(f)
    return literals


def _match_template(
    tpl: _Template, f: Formula, sig: Signature
) -> dict[str, tuple[str, ...]] | None:
    literals = _peel_chain(f, len(tpl.literals))
    if literals is None:
        return None
    observed: list[tuple[frozenset[str], frozenset[str], frozenset[str]]] = []
    for (negated, _), lit in zip(tpl.literals, literals):
        if negated:
            if not isinstance(lit, Not) or not isinstance(lit.child, AtomNode):
                return None
            atom = lit.child.atom
        else:
            if not isinstance(lit, AtomNode):
                return None
            atom = lit.atom
        observed.append(tuple(frozenset(s) for s in atom.key()))
    bound: dict[str, frozenset[str]] = {}
    # Positions naming a single variable pin it outright.
    for (_, positions), sets in zip(tpl.literals, observed):
        for expr, value in zip(positions, sets):
            if len(expr.plus) == 1 and not expr.minus and expr.plus[0] not in bound:
                bound[expr.plus[0]] = value
    # A union position with one unknown left determines it minimally.
    for (_, positions), sets in zip(tpl.literals, observed):
        for expr, value in zip(positions, sets):
            if expr.minus:
                continue
            unknown = [v for v in expr.plus if v not in bound]
            if len(unknown) != 1:
                continue
            known: frozenset[str] = frozenset()
            for var in expr.plus:
                if var in bound:
                    known |= bound[var]
            if not known <= value:
                return None
            bound[unknown[0]] = value - known
    if set(bound) != set(tpl.variables):
        return None
    return {var: sig.canon(bound[var]) for var in tpl.variables}


def match_axiom_instance(
    f: Formula, sig: Signature, schema: AxiomSchema | None = None
) -> AxiomInstance | None:
    """Recover an axiom instance whose instantiation equals ``f``, if any.

    ``f`` must be desugared. With ``schema`` given only that template is
    tried; otherwise templates are tried in declaration order and the first
    hit wins (a formula can instantiate several schemas at once). Candidate
    substitutions are verified by re-instantiation, so a returned instance
    always reproduces ``f`` exactly.
    """
    candidates = [schema] if schema is not None else list(AxiomSchema)
    for cand in candidates:
        tpl = _TEMPLATES[cand]
        subst = _match_template(tpl, f, sig)
        if subst is None:
            continue
        if any(len(subst[var]) != 1 for var in tpl.singletons):
            continue
        if not _check_side_condition(cand, subst):
            continue
        built = _build(tpl, subst, sig)
        if built == f:
            return AxiomInstance(cand, subst, built)
    return None


def enumerate_substitutions(schema: AxiomSchema, sig: Signature) -> Iterator[dict[str, tuple[str, ...]]]:
    """All substitutions for a schema, side conditions honored.

    Set variables range over every subset of the universe in bitmask order;
    singleton variables range over single vertices. Deterministic.
    """
    tpl = _TEMPLATES[schema]
    pools = []
    for var in tpl.variables:
        if var in tpl.singletons:
            pools.append([(v,) for v in sig])
        else:
            pools.append(list(sig.subsets()))
    for combo in itertools.product(*pools):
        subst = dict(zip(tpl.variables, combo))
        if _check_side_condition(schema, subst):
            yield subst


def schema_atom_plan(
    schema_or_form: AxiomSchema | InsertionForm,
    subst: Mapping[str, tuple[str, ...]],
    sig: Signature,
) -> tuple[tuple[bool, Atom], ...]:
    """The schema body as (negated, atom) literals, cheapest form to evaluate.

    The implication chain holds on a graph unless every antecedent literal
    is true and the consequent literal is false.
    """
    tpl = _TEMPLATES[schema_or_form] if isinstance(schema_or_form, AxiomSchema) else _PRINCIPLES[schema_or_form]
    return tuple(
        (negated, Atom(sig, *(pos.value(subst) for pos in positions)))
        for negated, positions in tpl.literals
    )


def schema_variables(schema: AxiomSchema) -> tuple[str, ...]:
    """The set variables a schema's substitution must supply."""
    return _TEMPLATES[schema].variables
