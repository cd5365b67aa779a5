"""Finite undirected graphs with loops, and betweenness evaluation.

An atom ``A|B|C`` holds on a graph when every path from a vertex of A to a
vertex of C passes through B. Under strict semantics the B-vertex must be
interior to the path (a single-vertex or two-vertex path has no interior);
under non-strict semantics the endpoints count too.

The production evaluator decides atoms by blocked-set reachability, which
is linear per source vertex. :func:`enumerate_simple_paths` and
:func:`oracle_eval_atom` keep the exponential path-by-path definition
around as an independent cross-check for small graphs.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Iterator

from .errors import GraphFormatError, SignatureMismatchError, UnknownVertexError
from .syntax import And, Atom, AtomNode, Formula, Iff, Implies, Not, Or, Signature


class Semantics(Enum):
    """Whether the separating vertex must be interior to the path."""

    STRICT = "strict"
    NONSTRICT = "nonstrict"


class Graph:
    """Undirected graph over a signature; loops allowed, multi-edges not.

    Edges are unordered pairs stored with endpoints in universe order; a
    loop is the pair (v, v). Immutable after construction.
    """

    __slots__ = ("sig", "_edges", "_adj")

    def __init__(self, sig: Signature, edges: Iterable[tuple[str, str]] = ()):
        self.sig = sig
        pairs = set()
        adj: dict[str, set[str]] = {v: set() for v in sig}
        for u, v in edges:
            pairs.add(self._pair(sig, u, v))
        for u, v in pairs:
            adj[u].add(v)
            adj[v].add(u)
        self._edges = frozenset(pairs)
        self._adj = {v: tuple(sorted(adj[v], key=sig.index)) for v in sig}

    @staticmethod
    def _pair(sig: Signature, u: str, v: str) -> tuple[str, str]:
        iu, iv = sig.index(u), sig.index(v)
        return (u, v) if iu <= iv else (v, u)

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return self._edges

    def sorted_edges(self) -> list[tuple[str, str]]:
        """Edges ordered by endpoint positions, for deterministic output."""
        index = self.sig.index
        return sorted(self._edges, key=lambda e: (index(e[0]), index(e[1])))

    def neighbors(self, v: str) -> tuple[str, ...]:
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertexError(v) from None

    def has_edge(self, u: str, v: str) -> bool:
        return self._pair(self.sig, u, v) in self._edges

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.sig == other.sig and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.sig, self._edges))

    def __repr__(self) -> str:
        edges = ";".join(f"{u}-{v}" for u, v in self.sorted_edges())
        return f"Graph({','.join(self.sig.universe)} | {edges})"


def parse_graph(text: str) -> Graph:
    """Parse the line-oriented graph format.

    The first non-comment line must be ``vertices a b c ...`` (declaring the
    universe in order, isolated vertices included); each following line is
    ``edge u v`` (``edge v v`` is a loop). ``#`` starts a comment. Repeating
    an edge, in either endpoint order, is an error.
    """
    sig: Signature | None = None
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if sig is None:
            if fields[0] != "vertices":
                raise GraphFormatError("expected a 'vertices' line first", lineno)
            try:
                sig = Signature(fields[1:])
            except ValueError as exc:
                raise GraphFormatError(str(exc), lineno) from None
        elif fields[0] == "vertices":
            raise GraphFormatError("duplicate 'vertices' line", lineno)
        elif fields[0] == "edge":
            if len(fields) != 3:
                raise GraphFormatError("'edge' takes exactly two vertex names", lineno)
            try:
                pair = Graph._pair(sig, fields[1], fields[2])
            except UnknownVertexError as exc:
                raise GraphFormatError(str(exc), lineno) from None
            if pair in seen:
                raise GraphFormatError(f"duplicate edge {fields[1]} {fields[2]}", lineno)
            seen.add(pair)
            edges.append(pair)
        else:
            raise GraphFormatError(f"unknown directive {fields[0]!r}", lineno)
    if sig is None:
        raise GraphFormatError("missing 'vertices' line")
    return Graph(sig, edges)


def render_graph(g: Graph) -> str:
    """Render a graph in the same line-oriented format parse_graph reads."""
    lines = ["vertices " + " ".join(g.sig.universe)]
    lines.extend(f"edge {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def reachable_avoiding(g: Graph, start: str, blocked: Iterable[str]) -> frozenset[str]:
    """Vertices reachable from ``start`` by paths whose interior avoids ``blocked``.

    Least fixpoint: start is reachable; from any reachable vertex that is
    the start or is unblocked, every neighbor is reachable. The start and
    the final vertex may themselves be blocked, since path endpoints are
    not interior.
    """
    if start not in g.sig:
        raise UnknownVertexError(start)
    blocked = frozenset(blocked)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        if u != start and u in blocked:
            continue
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def _check_atom(g: Graph, atom: Atom) -> None:
    for name in atom.names():
        if name not in g.sig:
            raise SignatureMismatchError(
                f"atom mentions {name!r}, not in universe {','.join(g.sig.universe)}"
            )


class GraphEvaluator:
    """Evaluates atoms and formulas on one graph, caching reachability.

    Within a decision sweep the same atoms recur across thousands of
    formulas, so both the per-(start, blocked) reachable sets and the final
    atom verdicts are memoized. Evaluation is pure; instances are cheap.
    """

    __slots__ = ("graph", "mode", "_reach", "_atoms")

    def __init__(self, graph: Graph, mode: Semantics = Semantics.STRICT):
        self.graph = graph
        self.mode = mode
        self._reach: dict[tuple[str, frozenset[str]], frozenset[str]] = {}
        self._atoms: dict[Atom, bool] = {}

    def reach(self, start: str, blocked: frozenset[str]) -> frozenset[str]:
        key = (start, blocked)
        cached = self._reach.get(key)
        if cached is None:
            cached = self._reach[key] = reachable_avoiding(self.graph, start, blocked)
        return cached

    def atom(self, atom: Atom) -> bool:
        cached = self._atoms.get(atom)
        if cached is None:
            cached = self._atoms[atom] = self._eval_atom(atom)
        return cached

    def _eval_atom(self, atom: Atom) -> bool:
        _check_atom(self.graph, atom)
        blocked = frozenset(atom.middle)
        targets = frozenset(atom.right)
        if self.mode is Semantics.STRICT:
            return all(self.reach(a, blocked).isdisjoint(targets) for a in atom.left)
        # Non-strict: a path escapes only if no vertex at all lies in the
        # middle set, so sources and targets inside it are already covered.
        targets = targets - blocked
        return all(
            a in blocked or self.reach(a, blocked).isdisjoint(targets) for a in atom.left
        )

    def formula(self, f: Formula) -> bool:
        if isinstance(f, AtomNode):
            return self.atom(f.atom)
        if isinstance(f, Not):
            return not self.formula(f.child)
        if isinstance(f, Implies):
            return not self.formula(f.left) or self.formula(f.right)
        if isinstance(f, And):
            return self.formula(f.left) and self.formula(f.right)
        if isinstance(f, Or):
            return self.formula(f.left) or self.formula(f.right)
        if isinstance(f, Iff):
            return self.formula(f.left) == self.formula(f.right)
        raise TypeError(f"not a formula node: {f!r}")


def eval_atom(g: Graph, atom: Atom, mode: Semantics = Semantics.STRICT) -> bool:
    """Decide one atom on one graph via blocked reachability."""
    return GraphEvaluator(g, mode).atom(atom)


def eval_formula(g: Graph, f: Formula, mode: Semantics = Semantics.STRICT) -> bool:
    """Evaluate a formula on a graph; sugar connectives are handled directly."""
    return GraphEvaluator(g, mode).formula(f)


def enumerate_simple_paths(g: Graph, a: str, c: str) -> Iterator[tuple[str, ...]]:
    """All simple paths from ``a`` to ``c``, depth-first over sorted neighbors.

    Vertices along a simple path are pairwise distinct, so loops never
    contribute and ``a == c`` yields exactly the trivial one-vertex path.
    If any path witnesses an escape past a blocking set, a simple one does
    (cutting a revisited stretch only removes interior vertices), which is
    what makes this enumeration a complete oracle for :func:`eval_atom`.
    """
    if a not in g.sig:
        raise UnknownVertexError(a)
    if c not in g.sig:
        raise UnknownVertexError(c)
    path = [a]
    seen = {a}

    def extend(u: str) -> Iterator[tuple[str, ...]]:
        if u == c:
            yield tuple(path)
            return
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                path.append(w)
                yield from extend(w)
                path.pop()
                seen.remove(w)

    yield from extend(a)


def oracle_eval_atom(g: Graph, atom: Atom, mode: Semantics = Semantics.STRICT) -> bool:
    """Path-enumeration reference for :func:`eval_atom`; exponential.

    Checks every simple path between every source/target pair for a vertex
    in the middle set (interior only under strict semantics). Keep to small
    graphs.
    """
    _check_atom(g, atom)
    middle = frozenset(atom.middle)
    strict = mode is Semantics.STRICT
    for a in atom.left:
        for c in atom.right:
            for path in enumerate_simple_paths(g, a, c):
                checked = path[1:-1] if strict else path
                if middle.isdisjoint(checked):
                    return False
    return True
