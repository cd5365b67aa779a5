"""Hilbert-style proof objects and the checking kernel.

A proof is a sequence of lines, each carrying a formula and the rule that
justifies it: a hypothesis (by 0-based position in the hypothesis list), a
propositional tautology, an axiom-schema instance, or modus ponens from
two earlier lines (by 1-based line number, matching error reports and the
JSON file format). Verification is a single linear pass; nothing is ever
searched except the optional axiom match when a line omits its
substitution.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .axioms import AxiomInstance, AxiomSchema, instantiate_schema, match_axiom_instance
from .errors import (
    BetweennessError,
    ProofFormatError,
    SignatureMismatchError,
    TooManyAtomsError,
)
from .syntax import (
    Atom,
    AtomNode,
    Formula,
    Implies,
    Not,
    Signature,
    atoms_of,
    desugar,
    parse_formula,
    render_formula,
    validate_formula,
)

DEFAULT_ATOM_CAP = 20


def _eval_under(f: Formula, env: Mapping[Atom, bool]) -> bool:
    if isinstance(f, AtomNode):
        return env[f.atom]
    if isinstance(f, Not):
        return not _eval_under(f.child, env)
    if isinstance(f, Implies):
        return not _eval_under(f.left, env) or _eval_under(f.right, env)
    raise TypeError(f"formula not desugared: {f!r}")


def is_tautology(f: Formula, max_atoms: int = DEFAULT_ATOM_CAP) -> bool:
    """Truth-table check treating distinct atoms as opaque propositions.

    Raises TooManyAtomsError past ``max_atoms`` distinct atoms rather than
    grinding through 2^k rows; restructure the proof instead.
    """
    g = desugar(f)
    atoms = sorted(atoms_of(g), key=Atom.key)
    if len(atoms) > max_atoms:
        raise TooManyAtomsError(len(atoms), max_atoms)
    for bits in range(1 << len(atoms)):
        env = {atom: bool(bits >> i & 1) for i, atom in enumerate(atoms)}
        if not _eval_under(g, env):
            return False
    return True


@dataclass(frozen=True)
class Hypothesis:
    """Justified by hypotheses[index] (0-based)."""

    index: int


@dataclass(frozen=True)
class Tautology:
    """Justified by the truth-table check."""


@dataclass(eq=True)
class AxiomRule:
    """Justified as a schema instance.

    With a substitution the kernel verifies it directly; with only a schema
    (or nothing) it falls back to matching, which costs a small search.
    """

    schema: AxiomSchema | None = None
    substitution: dict[str, tuple[str, ...]] | None = None


@dataclass(frozen=True)
class ModusPonens:
    """From line ``premise`` (some p) and line ``implication`` (p -> q); 1-based."""

    premise: int
    implication: int


Rule = Hypothesis | Tautology | AxiomRule | ModusPonens


@dataclass(eq=True)
class ProofLine:
    formula: Formula
    rule: Rule


@dataclass(eq=True)
class Proof:
    sig: Signature
    hypotheses: list[Formula] = field(default_factory=list)
    lines: list[ProofLine] = field(default_factory=list)

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula


class RejectionReason(str, Enum):
    EMPTY_PROOF = "EmptyProof"
    SIGNATURE_MISMATCH = "SignatureMismatch"
    BAD_REFERENCE = "BadReference"
    HYPOTHESIS_MISMATCH = "HypothesisMismatch"
    NOT_A_TAUTOLOGY = "NotATautology"
    TOO_MANY_ATOMS = "TooManyAtoms"
    AXIOM_MISMATCH = "AxiomMismatch"
    SIDE_CONDITION_VIOLATED = "SideConditionViolated"
    MODUS_PONENS_MISMATCH = "ModusPonensMismatch"


@dataclass(frozen=True)
class ProofResult:
    """Accepted, or rejected at a 1-based line for a machine-readable reason."""

    accepted: bool
    line: int | None = None
    reason: RejectionReason | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.accepted


_ACCEPTED = ProofResult(True)


def _rejected(line: int, reason: RejectionReason, detail: str = "") -> ProofResult:
    return ProofResult(False, line, reason, detail)


def check_proof(proof: Proof, max_atoms: int = DEFAULT_ATOM_CAP) -> ProofResult:
    """Verify every line of a proof; the first bad line rejects it.

    Modus ponens compares desugared formulas structurally, so a sugared
    line and its desugared twin are interchangeable as premises.
    """
    if not proof.lines:
        return _rejected(0, RejectionReason.EMPTY_PROOF)
    sig = proof.sig
    hypotheses = [desugar(h) for h in proof.hypotheses]
    derived: list[Formula] = []
    for number, line in enumerate(proof.lines, 1):
        try:
            validate_formula(line.formula, sig)
        except SignatureMismatchError as exc:
            return _rejected(number, RejectionReason.SIGNATURE_MISMATCH, str(exc))
        current = desugar(line.formula)
        rule = line.rule
        if isinstance(rule, Hypothesis):
            if not 0 <= rule.index < len(hypotheses):
                return _rejected(
                    number, RejectionReason.BAD_REFERENCE, f"no hypothesis {rule.index}"
                )
            if hypotheses[rule.index] != current:
                return _rejected(number, RejectionReason.HYPOTHESIS_MISMATCH)
        elif isinstance(rule, Tautology):
            try:
                if not is_tautology(current, max_atoms):
                    return _rejected(number, RejectionReason.NOT_A_TAUTOLOGY)
            except TooManyAtomsError as exc:
                return _rejected(number, RejectionReason.TOO_MANY_ATOMS, str(exc))
        elif isinstance(rule, AxiomRule):
            outcome = _check_axiom_line(rule, current, sig)
            if outcome is not None:
                return _rejected(number, *outcome)
        elif isinstance(rule, ModusPonens):
            for ref in (rule.premise, rule.implication):
                if not 1 <= ref < number:
                    return _rejected(
                        number, RejectionReason.BAD_REFERENCE, f"line {ref} not earlier"
                    )
            premise = derived[rule.premise - 1]
            implication = derived[rule.implication - 1]
            if implication != Implies(premise, current):
                return _rejected(number, RejectionReason.MODUS_PONENS_MISMATCH)
        else:
            raise TypeError(f"unknown rule {rule!r}")
        derived.append(current)
    return _ACCEPTED


def _check_axiom_line(
    rule: AxiomRule, current: Formula, sig: Signature
) -> tuple[RejectionReason, str] | None:
    if rule.substitution is not None:
        if rule.schema is None:
            return (RejectionReason.AXIOM_MISMATCH, "substitution given without a schema")
        try:
            built = instantiate_schema(rule.schema, rule.substitution, sig)
        except BetweennessError as exc:
            return (RejectionReason.SIDE_CONDITION_VIOLATED, str(exc))
        if built != current:
            return (
                RejectionReason.AXIOM_MISMATCH,
                f"instance renders as {render_formula(built)}",
            )
        return None
    if match_axiom_instance(current, sig, rule.schema) is None:
        wanted = rule.schema.value if rule.schema else "any schema"
        return (RejectionReason.AXIOM_MISMATCH, f"no match against {wanted}")
    return None


# --- JSON proof files ---------------------------------------------------
#
# {
#   "universe": ["a", "b", "c"],
#   "hypotheses": ["a|b|c"],
#   "lines": [
#     {"formula": "a|b|c",          "rule": "hypothesis", "refs": [1]},
#     {"formula": "a|b|c -> c|b|a", "rule": "axiom", "schema": "Symmetry",
#      "subst": {"A": ["a"], "B": ["b"], "C": ["c"]}},
#     {"formula": "c|b|a",          "rule": "mp", "refs": [1, 2]}
#   ]
# }
#
# All refs are 1-based: hypothesis position for "hypothesis", line numbers
# for "mp". "axiom" may omit "subst" (match within the schema) or both
# "schema" and "subst" (match any schema).


def proof_from_json(text: str) -> Proof:
    """Parse a JSON proof file; malformed structure raises ProofFormatError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProofFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProofFormatError("top level must be an object")
    universe = doc.get("universe")
    if not isinstance(universe, list) or not all(isinstance(v, str) for v in universe):
        raise ProofFormatError("'universe' must be a list of vertex names")
    try:
        sig = Signature(universe)
    except ValueError as exc:
        raise ProofFormatError(str(exc)) from None
    hypotheses = [
        _parse_embedded(h, sig, f"hypotheses[{i}]")
        for i, h in enumerate(doc.get("hypotheses", []))
    ]
    raw_lines = doc.get("lines")
    if not isinstance(raw_lines, list):
        raise ProofFormatError("'lines' must be a list")
    lines = [_line_from_json(entry, sig, i + 1) for i, entry in enumerate(raw_lines)]
    return Proof(sig, hypotheses, lines)


def _parse_embedded(text: object, sig: Signature, where: str) -> Formula:
    if not isinstance(text, str):
        raise ProofFormatError(f"{where}: formula must be a string")
    try:
        return parse_formula(text, sig)
    except BetweennessError as exc:
        raise ProofFormatError(f"{where}: {exc}") from None


def _line_from_json(entry: object, sig: Signature, number: int) -> ProofLine:
    where = f"lines[{number}]"
    if not isinstance(entry, dict):
        raise ProofFormatError(f"{where}: must be an object")
    formula = _parse_embedded(entry.get("formula"), sig, where)
    rule_name = entry.get("rule")
    refs = entry.get("refs", [])
    if not isinstance(refs, list) or not all(isinstance(r, int) for r in refs):
        raise ProofFormatError(f"{where}: 'refs' must be a list of integers")
    if rule_name == "hypothesis":
        if len(refs) != 1:
            raise ProofFormatError(f"{where}: hypothesis takes one ref")
        rule: Rule = Hypothesis(refs[0] - 1)
    elif rule_name == "tautology":
        rule = Tautology()
    elif rule_name == "axiom":
        schema_name = entry.get("schema")
        schema = None
        if schema_name is not None:
            if not isinstance(schema_name, str):
                raise ProofFormatError(f"{where}: 'schema' must be a string")
            try:
                schema = AxiomSchema.from_name(schema_name)
            except BetweennessError as exc:
                raise ProofFormatError(f"{where}: {exc}") from None
        subst = entry.get("subst")
        if subst is not None:
            if not isinstance(subst, dict):
                raise ProofFormatError(f"{where}: 'subst' must be an object")
            subst = {
                str(var): tuple(val) if isinstance(val, list) else (str(val),)
                for var, val in subst.items()
            }
        rule = AxiomRule(schema, subst)
    elif rule_name == "mp":
        if len(refs) != 2:
            raise ProofFormatError(f"{where}: mp takes two refs")
        rule = ModusPonens(refs[0], refs[1])
    else:
        raise ProofFormatError(f"{where}: unknown rule {rule_name!r}")
    return ProofLine(formula, rule)


def proof_to_json(proof: Proof) -> str:
    """Serialize a proof in the JSON file format (1-based refs)."""
    lines = []
    for line in proof.lines:
        entry: dict[str, object] = {"formula": render_formula(line.formula)}
        rule = line.rule
        if isinstance(rule, Hypothesis):
            entry["rule"] = "hypothesis"
            entry["refs"] = [rule.index + 1]
        elif isinstance(rule, Tautology):
            entry["rule"] = "tautology"
        elif isinstance(rule, AxiomRule):
            entry["rule"] = "axiom"
            if rule.schema is not None:
                entry["schema"] = rule.schema.value
            if rule.substitution is not None:
                entry["subst"] = {k: list(v) for k, v in rule.substitution.items()}
        elif isinstance(rule, ModusPonens):
            entry["rule"] = "mp"
            entry["refs"] = [rule.premise, rule.implication]
        lines.append(entry)
    doc = {
        "universe": list(proof.sig.universe),
        "hypotheses": [render_formula(h) for h in proof.hypotheses],
        "lines": lines,
    }
    return json.dumps(doc, indent=2) + "\n"


def load_proof(path) -> Proof:
    """Read and parse a proof file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        return proof_from_json(fh.read())


def corpus_dir():
    """Directory holding the sample proofs shipped with the package."""
    from importlib.resources import files

    return files("betweenness") / "corpus"


def corpus_proofs() -> list[tuple[str, Proof]]:
    """The shipped sample proofs as (name, proof) pairs, sorted by name."""
    out = []
    for entry in sorted(corpus_dir().iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out.append((entry.name[: -len(".json")], proof_from_json(entry.read_text())))
    return out
