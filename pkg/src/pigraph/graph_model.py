"""Finite and periodic row-finite directed graphs, paths, and tails.

Edges run from ``src`` to ``dst`` (``src`` is the source map, ``dst`` the
target map). Some authors swap the two; this package never does.

A :class:`PeriodicGraph` is the infinite graph obtained from a finite
*stem* followed by infinitely many copies of a finite *pattern*::

    stem --stem_links--> copy 1 --period_links--> copy 2 --> copy 3 --> ...

Links only ever point forward, so every cycle lives inside the stem or
inside a single copy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Union


class GraphError(Exception):
    """Base class for errors raised by this package."""


class NotComposable(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class UnknownEdge(GraphError):
    pass


class InvalidGraph(GraphError):
    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))


class BadReference(GraphError, ValueError):
    pass


class NoSinksWarning(UserWarning):
    """Raised through :mod:`warnings` when tails are added to a sink-free graph."""


def _parse_ref(text: str) -> tuple[str, int]:
    if text.startswith("copy:"):
        try:
            _, k, ident = text.split(":", 2)
            copy = int(k)
        except ValueError:
            raise BadReference(f"malformed reference {text!r}") from None
        if copy < 1:
            raise BadReference(f"copy index must be positive in {text!r}")
        return ident, copy
    if text.startswith("stem:"):
        return text[5:], 0
    return text, 0


@dataclass(frozen=True)
class VertexRef:
    """A vertex of the stem (``copy == 0``) or of pattern copy ``copy >= 1``."""

    id: str
    copy: int = 0

    def __str__(self) -> str:
        return f"stem:{self.id}" if self.copy == 0 else f"copy:{self.copy}:{self.id}"

    @classmethod
    def parse(cls, text: str) -> "VertexRef":
        ident, k = _parse_ref(text)
        return cls(ident, k)

    @property
    def in_stem(self) -> bool:
        return self.copy == 0

    def shifted(self, delta: int) -> "VertexRef":
        return self if self.copy == 0 else VertexRef(self.id, self.copy + delta)


@dataclass(frozen=True)
class EdgeRef:
    """An edge addressed like :class:`VertexRef`; stem edges print bare."""

    id: str
    copy: int = 0

    def __str__(self) -> str:
        return self.id if self.copy == 0 else f"copy:{self.copy}:{self.id}"

    @classmethod
    def parse(cls, text: str) -> "EdgeRef":
        ident, k = _parse_ref(text)
        return cls(ident, k)

    def shifted(self, delta: int) -> "EdgeRef":
        return self if self.copy == 0 else EdgeRef(self.id, self.copy + delta)


def as_vertex(v: Union[VertexRef, str]) -> VertexRef:
    return v if isinstance(v, VertexRef) else VertexRef.parse(v)


def as_edge(e: Union[EdgeRef, str]) -> EdgeRef:
    return e if isinstance(e, EdgeRef) else EdgeRef.parse(e)


@dataclass(frozen=True)
class Edge:
    """A declared edge. ``step`` is only read on period links."""

    id: str
    src: str
    dst: str
    step: int = 1


class Arc(NamedTuple):
    """A concrete edge of a (possibly infinite) graph."""

    ref: EdgeRef
    src: VertexRef
    dst: VertexRef


@dataclass(frozen=True)
class Issue:
    kind: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.where}: {self.message}"


@dataclass(frozen=True)
class Path:
    """A finite path: a base vertex plus composable edges.

    The empty path at ``v`` stands for the vertex ``v`` itself. Build paths
    with :meth:`FiniteGraph.path` / :meth:`PeriodicGraph.path` (which check
    composability) or :meth:`Path.at`.
    """

    base: VertexRef
    edges: tuple[EdgeRef, ...] = ()
    end: Optional[VertexRef] = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.end is None:
            if self.edges:
                raise ValueError("a nonempty Path needs its end vertex; use graph.path()")
            object.__setattr__(self, "end", self.base)

    @classmethod
    def at(cls, v: Union[VertexRef, str]) -> "Path":
        return cls(as_vertex(v))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def source(self) -> VertexRef:
        return self.base

    @property
    def target(self) -> VertexRef:
        return self.end

    @property
    def is_cycle(self) -> bool:
        return bool(self.edges) and self.base == self.end

    def is_prefix_of(self, other: "Path") -> bool:
        n = len(self.edges)
        return self.base == other.base and other.edges[:n] == self.edges

    def comparable(self, other: "Path") -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def shifted(self, delta: int) -> "Path":
        return Path(
            self.base.shifted(delta),
            tuple(e.shifted(delta) for e in self.edges),
            self.end.shifted(delta),
        )

    def word(self) -> str:
        return ".".join(str(e) for e in self.edges)

    def __str__(self) -> str:
        return f"{self.base}[{self.word()}]"


def path_source(p: Path) -> VertexRef:
    return p.base


def path_target(p: Path) -> VertexRef:
    return p.end


def path_concat(p: Path, q: Path) -> Path:
    if p.end != q.base:
        raise NotComposable(f"{p} ends at {p.end} but {q} starts at {q.base}")
    return Path(p.base, p.edges + q.edges, q.end)


class _GraphBase:
    """Behaviour shared by both graph kinds."""

    @cached_property
    def memo(self) -> dict:
        """Scratch space for derived analyses of this (immutable) graph."""
        return {}

    def out_edges(self, v) -> list[Arc]:
        raise NotImplementedError

    def edge(self, ref) -> Arc:
        raise NotImplementedError

    def path(self, base, edges: Iterable = ()) -> Path:
        """Build a :class:`Path`, checking that consecutive edges compose."""
        base = as_vertex(base)
        if not self.has_vertex(base):
            raise UnknownVertex(str(base))
        refs = []
        cur = base
        for e in edges:
            arc = self.edge(as_edge(e))
            if arc.src != cur:
                raise NotComposable(f"edge {arc.ref} leaves {arc.src}, path is at {cur}")
            refs.append(arc.ref)
            cur = arc.dst
        return Path(base, tuple(refs), cur)

    def successors(self, v: VertexRef):
        for arc in self.out_edges(v):
            yield arc.ref, arc.dst


@dataclass(frozen=True)
class FiniteGraph(_GraphBase):
    vertices: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "edges", tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        )

    @cached_property
    def adjacency(self) -> dict[str, list[Edge]]:
        adj: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            adj.setdefault(e.src, []).append(e)
        return adj

    @cached_property
    def _edge_index(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def has_vertex(self, v) -> bool:
        v = as_vertex(v)
        return v.copy == 0 and v.id in self._vertex_set

    def out_edges(self, v) -> list[Arc]:
        v = as_vertex(v)
        if not self.has_vertex(v):
            raise UnknownVertex(str(v))
        return [Arc(EdgeRef(e.id), v, VertexRef(e.dst)) for e in self.adjacency[v.id]]

    def edge(self, ref) -> Arc:
        ref = as_edge(ref)
        e = self._edge_index.get(ref.id) if ref.copy == 0 else None
        if e is None:
            raise UnknownEdge(str(ref))
        return Arc(ref, VertexRef(e.src), VertexRef(e.dst))

    def canonical_vertices(self) -> list[VertexRef]:
        return [VertexRef(v) for v in self.vertices]

    @property
    def is_periodic(self) -> bool:
        return False


@dataclass(frozen=True)
class PeriodicGraph(_GraphBase):
    stem: FiniteGraph = field(default_factory=FiniteGraph)
    pattern: FiniteGraph = field(default_factory=FiniteGraph)
    stem_links: tuple[Edge, ...] = ()
    period_links: tuple[Edge, ...] = ()

    def __post_init__(self):
        for name in ("stem_links", "period_links"):
            links = tuple(e if isinstance(e, Edge) else Edge(*e) for e in getattr(self, name))
            object.__setattr__(self, name, links)

    @cached_property
    def _stem_links_from(self) -> dict[str, list[Edge]]:
        out: dict[str, list[Edge]] = {}
        for e in self.stem_links:
            out.setdefault(e.src, []).append(e)
        return out

    @cached_property
    def _period_links_from(self) -> dict[str, list[Edge]]:
        out: dict[str, list[Edge]] = {}
        for e in self.period_links:
            out.setdefault(e.src, []).append(e)
        return out

    @cached_property
    def _link_index(self) -> tuple[dict, dict]:
        return {e.id: e for e in self.stem_links}, {e.id: e for e in self.period_links}

    def has_vertex(self, v) -> bool:
        v = as_vertex(v)
        if v.copy == 0:
            return self.stem.has_vertex(v)
        return v.copy >= 1 and VertexRef(v.id) in self._pattern_refs

    @cached_property
    def _pattern_refs(self) -> frozenset:
        return frozenset(VertexRef(x) for x in self.pattern.vertices)

    def out_edges(self, v) -> list[Arc]:
        v = as_vertex(v)
        if not self.has_vertex(v):
            raise UnknownVertex(str(v))
        if v.copy == 0:
            arcs = self.stem.out_edges(v)
            arcs += [
                Arc(EdgeRef(e.id), v, VertexRef(e.dst, 1))
                for e in self._stem_links_from.get(v.id, ())
            ]
            return arcs
        k = v.copy
        arcs = [
            Arc(EdgeRef(e.id, k), v, VertexRef(e.dst, k))
            for e in self.pattern.adjacency[v.id]
        ]
        arcs += [
            Arc(EdgeRef(e.id, k), v, VertexRef(e.dst, k + e.step))
            for e in self._period_links_from.get(v.id, ())
        ]
        return arcs

    def edge(self, ref) -> Arc:
        ref = as_edge(ref)
        stem_links, period_links = self._link_index
        if ref.copy == 0:
            if ref.id in stem_links:
                e = stem_links[ref.id]
                return Arc(ref, VertexRef(e.src), VertexRef(e.dst, 1))
            return self.stem.edge(ref)
        if ref.copy < 1:
            raise UnknownEdge(str(ref))
        k = ref.copy
        if ref.id in period_links:
            e = period_links[ref.id]
            return Arc(ref, VertexRef(e.src, k), VertexRef(e.dst, k + e.step))
        try:
            arc = self.pattern.edge(EdgeRef(ref.id))
        except UnknownEdge:
            raise UnknownEdge(str(ref)) from None
        return Arc(ref, VertexRef(arc.src.id, k), VertexRef(arc.dst.id, k))

    def canonical_vertices(self) -> list[VertexRef]:
        """Stem vertices, then pattern vertices of copy 1.

        Copy ``k`` and everything after it is isomorphic to copy 1 and
        everything after it, so copy 1 represents every copy.
        """
        return self.stem.canonical_vertices() + [VertexRef(x, 1) for x in self.pattern.vertices]

    @property
    def is_periodic(self) -> bool:
        return True


GraphHandle = Union[FiniteGraph, PeriodicGraph]


class Presentation(NamedTuple):
    stem: FiniteGraph
    pattern: FiniteGraph
    stem_links: tuple[Edge, ...]
    period_links: tuple[Edge, ...]


_EMPTY = FiniteGraph()


def presentation(g: GraphHandle) -> Presentation:
    """View any graph as stem + pattern (empty pattern for finite graphs)."""
    if isinstance(g, PeriodicGraph):
        return Presentation(g.stem, g.pattern, g.stem_links, g.period_links)
    return Presentation(g, _EMPTY, (), ())


def _check_finite(g: FiniteGraph, where: str, seen_edges: dict) -> list[Issue]:
    issues = []
    seen_vertices: set = set()
    for v in g.vertices:
        if v in seen_vertices:
            issues.append(Issue("DuplicateId", f"{where}.vertices", f"vertex {v!r} declared twice"))
        seen_vertices.add(v)
    for e in g.edges:
        if e.id in seen_edges:
            issues.append(
                Issue("DuplicateId", f"{where}.edges", f"edge {e.id!r} also declared in {seen_edges[e.id]}")
            )
        seen_edges.setdefault(e.id, where)
        for end in ("src", "dst"):
            if getattr(e, end) not in seen_vertices:
                issues.append(
                    Issue("DanglingEdge", f"{where}.edges[{e.id}]", f"{end} {getattr(e, end)!r} is not a vertex")
                )
    return issues


def validate(g: GraphHandle) -> list[Issue]:
    """All invariant violations of ``g``; an empty list means valid."""
    seen_edges: dict[str, str] = {}
    if isinstance(g, FiniteGraph):
        return _check_finite(g, "graph", seen_edges)
    issues = _check_finite(g.stem, "stem", seen_edges)
    issues += _check_finite(g.pattern, "pattern", seen_edges)
    stem_vs, pat_vs = set(g.stem.vertices), set(g.pattern.vertices)
    for e in g.stem_links:
        where = f"stem_links[{e.id}]"
        if e.id in seen_edges:
            issues.append(Issue("DuplicateId", where, f"edge {e.id!r} also declared in {seen_edges[e.id]}"))
        seen_edges.setdefault(e.id, "stem_links")
        if e.src not in stem_vs:
            kind = "BackwardLink" if e.src in pat_vs else "DanglingEdge"
            issues.append(Issue(kind, where, f"src {e.src!r} is not a stem vertex"))
        if e.dst not in pat_vs:
            kind = "BackwardLink" if e.dst in stem_vs else "DanglingEdge"
            issues.append(Issue(kind, where, f"dst {e.dst!r} is not a pattern vertex"))
    for e in g.period_links:
        where = f"period_links[{e.id}]"
        if e.id in seen_edges:
            issues.append(Issue("DuplicateId", where, f"edge {e.id!r} also declared in {seen_edges[e.id]}"))
        seen_edges.setdefault(e.id, "period_links")
        for end in ("src", "dst"):
            if getattr(e, end) not in pat_vs:
                issues.append(Issue("DanglingEdge", where, f"{end} {getattr(e, end)!r} is not a pattern vertex"))
        if e.step != 1:
            issues.append(
                Issue("BackwardLink", where, f"links must go from copy k to copy k+1, got step {e.step}")
            )
    return issues


def ensure_valid(g: GraphHandle) -> GraphHandle:
    issues = validate(g)
    if issues:
        raise InvalidGraph(issues)
    return g


def validate_no_sinks(g: GraphHandle) -> list[VertexRef]:
    """Vertices without out-edges. Periodic graphs are checked on copy 1."""
    stem, pattern, stem_links, period_links = presentation(g)
    linked_stem = {e.src for e in stem_links}
    linked_pat = {e.src for e in period_links}
    sinks = [VertexRef(v) for v in stem.vertices if not stem.adjacency[v] and v not in linked_stem]
    sinks += [VertexRef(x, 1) for x in pattern.vertices if not pattern.adjacency[x] and x not in linked_pat]
    return sinks


def _fresh(base: str, taken: set) -> str:
    name, n = base, 1
    while name in taken:
        n += 1
        name = f"{base}~{n}"
    taken.add(name)
    return name


def add_tails(g: FiniteGraph) -> PeriodicGraph:
    """Attach an infinite tail ``s -> t1 -> t2 -> ...`` to every sink ``s``.

    The tail vertex of sink ``s`` in copy ``k`` is ``copy:k:s``. A graph
    without sinks comes back unchanged as a stem with an empty pattern,
    and a :class:`NoSinksWarning` is issued.
    """
    ensure_valid(g)
    sinks = [v.id for v in validate_no_sinks(g)]
    if not sinks:
        warnings.warn("graph has no sinks; nothing to add", NoSinksWarning, stacklevel=2)
        return PeriodicGraph(stem=g)
    taken = {e.id for e in g.edges}
    stem_links = tuple(Edge(_fresh(f"tail_in_{s}", taken), s, s) for s in sinks)
    period_links = tuple(Edge(_fresh(f"tail_{s}", taken), s, s) for s in sinks)
    return PeriodicGraph(
        stem=g,
        pattern=FiniteGraph(tuple(sinks), ()),
        stem_links=stem_links,
        period_links=period_links,
    )


def materialize(g: GraphHandle, depth: int) -> tuple[FiniteGraph, frozenset]:
    """The stem plus copies ``1..depth`` as an ordinary finite graph.

    Vertex and edge ids of the result are the string forms of the
    corresponding :class:`VertexRef` / :class:`EdgeRef`, so
    ``VertexRef.parse`` maps them back. The frontier holds copy-``depth``
    vertices whose period links were cut off.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    if isinstance(g, FiniteGraph):
        return g, frozenset()
    stem, pattern, stem_links, period_links = presentation(g)
    vertices = [str(VertexRef(v)) for v in stem.vertices]
    edges = [Edge(str(EdgeRef(e.id)), str(VertexRef(e.src)), str(VertexRef(e.dst))) for e in stem.edges]
    if pattern.vertices:
        edges += [
            Edge(str(EdgeRef(e.id)), str(VertexRef(e.src)), str(VertexRef(e.dst, 1))) for e in stem_links
        ]
    frontier = set()
    for k in range(1, depth + 1):
        vertices += [str(VertexRef(x, k)) for x in pattern.vertices]
        edges += [
            Edge(str(EdgeRef(e.id, k)), str(VertexRef(e.src, k)), str(VertexRef(e.dst, k)))
            for e in pattern.edges
        ]
        for e in period_links:
            if k < depth:
                edges.append(
                    Edge(str(EdgeRef(e.id, k)), str(VertexRef(e.src, k)), str(VertexRef(e.dst, k + 1)))
                )
            else:
                frontier.add(VertexRef(e.src, k))
    return FiniteGraph(tuple(vertices), tuple(edges)), frozenset(frontier)
