"""Vertex signatures, betweenness atoms, and the formula language.

A formula is built from atoms ``A|B|C`` (read: every journey from the left
set to the right set is interrupted by the middle set) using negation and
implication as the core connectives; conjunction, disjunction, and
biconditional are surface sugar removed by :func:`desugar`.

Concrete grammar (whitespace insignificant, ``#`` starts a line comment)::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?
    or      := and ("\\/" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "(" formula ")" | atom
    atom    := setexpr "|" setexpr "|" setexpr
    setexpr := "{" [idlist] "}" | idlist
    idlist  := id ("," id)*
    id      := [A-Za-z_][A-Za-z0-9_]*

``|`` only ever joins the three set positions of an atom; disjunction is
spelled ``\\/`` so the lexer never has to guess.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import (
    EmptyFormulaError,
    FormulaSyntaxError,
    SignatureMismatchError,
    UnknownVertexError,
)

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Signature:
    """An ordered, finite universe of vertex names.

    The declared order is the canonical order used whenever vertex sets are
    rendered or enumerated, so identical inputs always print identically.
    """

    __slots__ = ("_names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("universe must not be empty")
        index: dict[str, int] = {}
        for pos, name in enumerate(names):
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise ValueError(f"invalid vertex name {name!r}")
            if name in index:
                raise ValueError(f"duplicate vertex name {name!r}")
            index[name] = pos
        self._names = names
        self._index = index

    @classmethod
    def from_spec(cls, spec: str) -> "Signature":
        """Build a signature from a comma-separated list such as ``"a,b,c"``."""
        return cls(part.strip() for part in spec.split(",") if part.strip())

    @property
    def universe(self) -> tuple[str, ...]:
        return self._names

    def __len__(self) -> int:
        return len(self._names)

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._names == other._names

    def __hash__(self) -> int:
        return hash(self._names)

    def __repr__(self) -> str:
        return f"Signature({','.join(self._names)})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVertexError(name) from None

    def canon(self, names: Iterable[str]) -> tuple[str, ...]:
        """Validate, deduplicate, and order vertex names into universe order.

        This is the constructor for vertex sets: every set handled by the
        package is one of these canonical tuples.
        """
        members = set(names)
        for name in members:
            if name not in self._index:
                raise UnknownVertexError(name)
        return tuple(sorted(members, key=self._index.__getitem__))

    def subsets(self) -> Iterator[tuple[str, ...]]:
        """All subsets of the universe, in bitmask order (bit i = name i)."""
        n = len(self._names)
        for mask in range(1 << n):
            yield tuple(self._names[i] for i in range(n) if mask >> i & 1)


class Atom:
    """A single betweenness statement over three vertex sets.

    Sets are stored as tuples in universe order, so atoms built from any
    spelling of the same three sets compare and hash equal.
    """

    __slots__ = ("left", "middle", "right")

    def __init__(self, sig: Signature, left: Iterable[str], middle: Iterable[str], right: Iterable[str]):
        self.left = sig.canon(left)
        self.middle = sig.canon(middle)
        self.right = sig.canon(right)

    def key(self) -> tuple[tuple[str, ...], ...]:
        return (self.left, self.middle, self.right)

    def names(self) -> frozenset[str]:
        """All vertex names mentioned by the atom."""
        return frozenset(self.left) | frozenset(self.middle) | frozenset(self.right)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Atom) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((Atom, self.left, self.middle, self.right))

    def __repr__(self) -> str:
        return f"Atom({render_atom(self)!r})"


class Formula:
    """Base class for formula AST nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return render_formula(self)


@dataclass(frozen=True, slots=True)
class AtomNode(Formula):
    atom: Atom


@dataclass(frozen=True, slots=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


_TOKEN_RE = re.compile(
    r"""
      (?P<skip>\s+|\#[^\n]*)
    | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op><->|->|\\/|[&~(){},|])
    """,
    re.VERBOSE,
)

_EOF = "end of input"


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.sig = sig
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
            if m.lastgroup != "skip":
                self.tokens.append((m.group(), m.start()))
            pos = m.end()
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def here(self) -> int:
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else -1

    def take(self) -> tuple[str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, token: str) -> None:
        got = self.peek()
        if got != token:
            raise FormulaSyntaxError(
                f"found {got!r}" if got is not None else _EOF, self.here(), expected=(repr(token),)
            )
        self.pos += 1

    def parse(self) -> Formula:
        f = self.formula()
        if self.pos < len(self.tokens):
            raise FormulaSyntaxError(f"trailing input {self.peek()!r}", self.here())
        return f

    def formula(self) -> Formula:
        left = self.implication()
        while self.peek() == "<->":
            self.take()
            left = Iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek() == "\\/":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom()

    def atom(self) -> Formula:
        left = self.setexpr()
        self.expect("|")
        middle = self.setexpr()
        self.expect("|")
        right = self.setexpr()
        return AtomNode(Atom(self.sig, left, middle, right))

    def setexpr(self) -> list[str]:
        tok = self.peek()
        if tok == "{":
            self.take()
            names = [] if self.peek() == "}" else self.idlist()
            self.expect("}")
            return names
        if tok is not None and _NAME_RE.match(tok):
            return self.idlist()
        raise FormulaSyntaxError(
            f"found {tok!r}" if tok is not None else _EOF,
            self.here(),
            expected=("a vertex name", "'{'"),
        )

    def idlist(self) -> list[str]:
        names = [self.name()]
        while self.peek() == ",":
            self.take()
            names.append(self.name())
        return names

    def name(self) -> str:
        tok = self.peek()
        if tok is None or not _NAME_RE.match(tok):
            raise FormulaSyntaxError(
                f"found {tok!r}" if tok is not None else _EOF, self.here(), expected=("a vertex name",)
            )
        name, pos = self.take()
        if name not in self.sig:
            raise UnknownVertexError(name, pos)
        return name


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse formula text against a signature.

    Set positions are deduplicated and put in universe order; the sugar
    connectives ``&``, ``\\/``, ``<->`` are kept until :func:`desugar`.
    """
    parser = _Parser(text, sig)
    if not parser.tokens:
        raise EmptyFormulaError("formula text contains no tokens")
    return parser.parse()


def render_set(names: tuple[str, ...]) -> str:
    return ",".join(names) if names else "{}"


def render_atom(atom: Atom) -> str:
    return "|".join(render_set(s) for s in atom.key())


# Binding strength, loosest first; a node is parenthesized when it appears
# in a context that binds tighter than the node itself.
_IFF, _IMP, _OR, _AND, _UNARY = range(5)


def render_formula(f: Formula) -> str:
    """Render a formula so that parsing the result rebuilds it exactly."""
    return _render(f, _IFF)


def _render(f: Formula, context: int) -> str:
    if isinstance(f, AtomNode):
        return render_atom(f.atom)
    if isinstance(f, Not):
        return "~(" + _render(f.child, _IFF) + ")"
    if isinstance(f, Iff):
        level = _IFF
        text = _render(f.left, _IFF) + " <-> " + _render(f.right, _IMP)
    elif isinstance(f, Implies):
        level = _IMP
        text = _render(f.left, _OR) + " -> " + _render(f.right, _IMP)
    elif isinstance(f, Or):
        level = _OR
        text = _render(f.left, _OR) + " \\/ " + _render(f.right, _AND)
    elif isinstance(f, And):
        level = _AND
        text = _render(f.left, _AND) + " & " + _render(f.right, _UNARY)
    else:
        raise TypeError(f"not a formula node: {f!r}")
    return "(" + text + ")" if level < context else text


def desugar(f: Formula) -> Formula:
    """Rewrite sugar connectives into the negation/implication core.

    ``p & q`` becomes ``~(p -> ~q)``, ``p \\/ q`` becomes ``~p -> q``, and
    ``p <-> q`` becomes the conjunction of the two implications, desugared.
    Idempotent, and equivalent under any truth assignment to atoms.
    """
    if isinstance(f, AtomNode):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.child))
    if isinstance(f, Implies):
        return Implies(desugar(f.left), desugar(f.right))
    if isinstance(f, And):
        return Not(Implies(desugar(f.left), Not(desugar(f.right))))
    if isinstance(f, Or):
        return Implies(Not(desugar(f.left)), desugar(f.right))
    if isinstance(f, Iff):
        left, right = desugar(f.left), desugar(f.right)
        return Not(Implies(Implies(left, right), Not(Implies(right, left))))
    raise TypeError(f"not a formula node: {f!r}")


def atoms_of(f: Formula) -> set[Atom]:
    """The distinct atoms occurring in a formula (sugar included)."""
    found: set[Atom] = set()
    _collect_atoms(f, found)
    return found


def _collect_atoms(f: Formula, found: set[Atom]) -> None:
    if isinstance(f, AtomNode):
        found.add(f.atom)
    elif isinstance(f, Not):
        _collect_atoms(f.child, found)
    elif isinstance(f, (Implies, And, Or, Iff)):
        _collect_atoms(f.left, found)
        _collect_atoms(f.right, found)
    else:
        raise TypeError(f"not a formula node: {f!r}")


def validate_formula(f: Formula, sig: Signature) -> None:
    """Check that every atom of ``f`` only mentions vertices of ``sig``."""
    for atom in atoms_of(f):
        for name in atom.names():
            if name not in sig:
                raise SignatureMismatchError(
                    f"formula mentions {name!r}, not in universe {','.join(sig.universe)}"
                )
