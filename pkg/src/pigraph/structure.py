"""Reachability, first-return cycles and the V0/V1/V2 vertex partition.

Periodic graphs are handled through :class:`Sweep`: starting from a root,
the set of reachable pattern vertices (optionally tagged with a "has passed
a marker vertex" flag) is pushed copy by copy through the period links.
Each copy's state depends only on the previous copy's state, so the
sequence of states is eventually periodic and a repeat pins down the
infinite reachable set exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional

from pigraph._search import bfs_find, bfs_tree, find_lasso, labels_to
from pigraph.graph_model import (
    EdgeRef,
    FiniteGraph,
    GraphError,
    GraphHandle,
    Path,
    UnknownVertex,
    VertexRef,
    as_vertex,
    presentation,
)


class NotACycle(GraphError):
    pass


class ReturnCount(enum.IntEnum):
    ZERO = 0
    ONE = 1
    MANY = 2


class VertexClass(enum.Enum):
    V0 = "V0"
    V1 = "V1"
    V2 = "V2"


_CLASS_OF_COUNT = {ReturnCount.ZERO: VertexClass.V0, ReturnCount.ONE: VertexClass.V1, ReturnCount.MANY: VertexClass.V2}


@dataclass(frozen=True)
class FirstReturnOutcome:
    count: ReturnCount
    witnesses: tuple[Path, ...]


@dataclass(frozen=True)
class IsotropyCertificate:
    """The eventually periodic infinite path ``prefix . cycle . cycle ...``."""

    prefix: Path
    cycle: Path

    def __post_init__(self):
        if not self.cycle.is_cycle or self.cycle.base != self.prefix.end:
            raise ValueError("cycle must be a nonempty cycle at the end of the prefix")


@dataclass(frozen=True)
class VertexClassification:
    """Classes of canonical vertices; pattern vertices are keyed by copy 1."""

    classes: dict
    witnesses: dict

    def of(self, v) -> VertexClass:
        return self.classes[_canon(as_vertex(v))]

    def cycles_at(self, v) -> tuple[Path, ...]:
        v = as_vertex(v)
        return tuple(p.shifted(v.copy - 1) for p in self.witnesses[_canon(v)]) if v.copy else self.witnesses[v]

    def members(self, *wanted: VertexClass) -> list[VertexRef]:
        return [v for v, c in self.classes.items() if c in wanted]


def _canon(v: VertexRef) -> VertexRef:
    return v if v.copy <= 1 else VertexRef(v.id, 1)


def _check_vertex(g: GraphHandle, v) -> VertexRef:
    v = as_vertex(v)
    if not g.has_vertex(v):
        raise UnknownVertex(str(v))
    return v


# ---------------------------------------------------------------------------
# reachability


def _bounded_successors(g: GraphHandle, limit: Optional[int]):
    def succ(v):
        for arc in g.out_edges(v):
            if limit is None or arc.dst.copy <= limit:
                yield arc.ref, arc.dst

    return succ


def reaches(g: GraphHandle, v, w) -> bool:
    """Is there a finite path (possibly empty) from ``v`` to ``w``?"""
    v, w = _check_vertex(g, v), _check_vertex(g, w)
    if v == w:
        return True
    if v.copy > w.copy:
        # links only go forward; the stem is copy 0
        return False
    limit = w.copy if g.is_periodic else None
    return w in bfs_tree([v], _bounded_successors(g, limit))


def path_between(g: GraphHandle, v, w) -> Optional[Path]:
    """A shortest path from ``v`` to ``w``, or ``None``."""
    v, w = _check_vertex(g, v), _check_vertex(g, w)
    if v.copy > w.copy:
        return None
    limit = w.copy if g.is_periodic else None
    found = bfs_find([v], _bounded_successors(g, limit), lambda x: x == w)
    return None if found is None else g.path(v, found[1])


@dataclass(frozen=True)
class Sweep:
    """Everything reachable from ``root``, copy by copy.

    States are ``(vertex id, flag)`` pairs where ``flag`` records whether some
    walk from the root to that vertex met the marker set (endpoints count).
    ``layers[i]`` holds the states of copy ``first_copy + i``; from index
    ``loop_start`` on, the layers repeat with period ``period``.
    """

    root: VertexRef
    stem: frozenset
    layers: tuple
    first_copy: int
    loop_start: int

    @property
    def period(self) -> int:
        return len(self.layers) - self.loop_start

    @property
    def preperiod(self) -> int:
        return self.loop_start

    def phase(self, copy: int) -> int:
        i = copy - self.first_copy
        if i < len(self.layers):
            return i
        return self.loop_start + (i - self.loop_start) % self.period

    def next_phase(self, i: int) -> int:
        return i + 1 if i + 1 < len(self.layers) else self.loop_start

    def states(self, v: VertexRef) -> set:
        if v.copy == 0:
            layer = self.stem
        elif v.copy < self.first_copy:
            return set()
        else:
            layer = self.layers[self.phase(v.copy)]
        return {flag for ident, flag in layer if ident == v.id}

    def reached(self, v) -> bool:
        return bool(self.states(as_vertex(v)))

    def flagged(self, v) -> bool:
        return True in self.states(as_vertex(v))

    def reached_ids(self, i: int) -> set:
        return {ident for ident, _ in self.layers[i]}


def _closure(part: FiniteGraph, seeds: Iterable, marked: frozenset) -> frozenset:
    seen = set(seeds)
    stack = list(seen)
    while stack:
        ident, flag = stack.pop()
        for e in part.adjacency[ident]:
            nxt = (e.dst, flag or e.dst in marked)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(seen)


def sweep(g: GraphHandle, root, marker: Optional[tuple[frozenset, frozenset]] = None) -> Sweep:
    """Propagate reachable states from ``root`` until the copy states repeat.

    ``marker`` is ``(stem ids, pattern ids)`` of marker vertices; pattern
    membership is the same in every copy.
    """
    root = _check_vertex(g, root)
    stem, pattern, stem_links, period_links = presentation(g)
    m_stem, m_pat = marker if marker is not None else (frozenset(), frozenset())
    if root.copy == 0:
        stem_states = _closure(stem, [(root.id, root.id in m_stem)], m_stem)
        links_from: dict = {}
        for e in stem_links:
            links_from.setdefault(e.src, []).append(e)
        seeds = [
            (e.dst, flag or e.dst in m_pat)
            for ident, flag in stem_states
            for e in links_from.get(ident, ())
        ]
        first_copy = 1
    else:
        stem_states = frozenset()
        seeds = [(root.id, root.id in m_pat)]
        first_copy = root.copy
    period_from: dict = {}
    for e in period_links:
        period_from.setdefault(e.src, []).append(e)
    layer = _closure(pattern, seeds, m_pat)
    layers = [layer]
    index = {layer: 0}
    while True:
        seeds = [
            (e.dst, flag or e.dst in m_pat)
            for ident, flag in layer
            for e in period_from.get(ident, ())
        ]
        layer = _closure(pattern, seeds, m_pat)
        if layer in index:
            return Sweep(root, stem_states, tuple(layers), first_copy, index[layer])
        index[layer] = len(layers)
        layers.append(layer)


def layered_successors(g: GraphHandle, sw: Sweep, keep_stem, keep_layer):
    """Successor function of the phase quotient of a sweep.

    Nodes are ``("stem", id)`` or ``(phase, id)``. ``keep_stem`` and
    ``keep_layer(phase)`` select which nodes exist. Pattern edges stay in a
    phase, period links advance it, so walks in the quotient lift to walks
    in the infinite graph and back.
    """
    stem, pattern, stem_links, period_links = presentation(g)
    stem_links_from: dict = {}
    for e in stem_links:
        stem_links_from.setdefault(e.src, []).append(e)
    period_from: dict = {}
    for e in period_links:
        period_from.setdefault(e.src, []).append(e)
    keep_cache = {i: keep_layer(i) for i in range(len(sw.layers))}

    def succ(node):
        where, ident = node
        if where == "stem":
            for e in stem.adjacency[ident]:
                if e.dst in keep_stem:
                    yield e.id, ("stem", e.dst)
            if sw.first_copy == 1:
                for e in stem_links_from.get(ident, ()):
                    if e.dst in keep_cache[0]:
                        yield e.id, (0, e.dst)
            return
        for e in pattern.adjacency[ident]:
            if e.dst in keep_cache[where]:
                yield e.id, (where, e.dst)
        nxt = sw.next_phase(where)
        for e in period_from.get(ident, ()):
            if e.dst in keep_cache[nxt]:
                yield e.id, (nxt, e.dst)

    return succ


# ---------------------------------------------------------------------------
# first-return cycles


def _first_return_local(part: FiniteGraph, v: str) -> tuple[ReturnCount, list[list[str]]]:
    """Count first-return cycles at ``v`` inside a finite graph (capped at 2).

    Only vertices that are both reachable from ``v`` and able to return to
    ``v`` while avoiding ``v`` can be interior to a return path. If that
    region contains a cycle, inserting it gives infinitely many return
    paths; otherwise the region is acyclic and return paths are counted
    exhaustively.
    """
    adj = part.adjacency
    loops = [[e.id] for e in adj[v] if e.dst == v]

    def fwd(x):
        for e in adj[x]:
            if e.dst != v:
                yield e.id, e.dst

    forward = set(bfs_tree([e.dst for e in adj[v] if e.dst != v], fwd))
    into_v = [e.src for e in part.edges if e.dst == v and e.src != v]
    radj: dict = {}
    for e in part.edges:
        radj.setdefault(e.dst, []).append(e)

    def bwd(x):
        for e in radj.get(x, ()):
            if e.src != v:
                yield e.id, e.src

    region = forward & set(bfs_tree(into_v, bwd))

    def inner(x):
        for e in adj[x]:
            if e.dst in region:
                yield e.id, e.dst

    lasso = find_lasso(sorted(region), inner)
    if lasso is not None:
        _, _, u, cycle = lasso

        def enter(x):
            if x == v:
                for e in adj[v]:
                    if e.dst in region:
                        yield e.id, e.dst
            else:
                yield from inner(x)

        def leave(x):
            for e in adj[x]:
                if e.dst == v or e.dst in region:
                    yield e.id, e.dst

        to_u = labels_to(bfs_tree([v], enter), u)
        _, back = bfs_find([u], leave, lambda x: x == v)
        return ReturnCount.MANY, (loops + [to_u + back, to_u + cycle + back])[:2]

    found = list(loops)

    def walk(x, acc):
        for e in adj[x]:
            if len(found) >= 2:
                return
            if e.dst == v:
                found.append(acc + [e.id])
            elif e.dst in region:
                walk(e.dst, acc + [e.id])

    if len(found) < 2:
        for e in adj[v]:
            if len(found) >= 2:
                break
            if e.dst in region:
                walk(e.dst, [e.id])
    return ReturnCount(min(len(found), 2)), found[:2]


def first_return_cycles(g: GraphHandle, v) -> FirstReturnOutcome:
    """Cycles based at ``v`` that visit ``v`` only at their two ends.

    ``count`` is exact up to the threshold ``MANY`` (two or more); up to two
    distinct witnesses are returned.
    """
    v = _check_vertex(g, v)
    stem, pattern, _, _ = presentation(g)
    part = stem if v.copy == 0 else pattern
    count, words = _first_return_local(part, v.id)
    witnesses = tuple(g.path(v, [EdgeRef(e, v.copy) for e in w]) for w in words)
    return FirstReturnOutcome(count, witnesses)


def classify_vertices(g: GraphHandle) -> VertexClassification:
    """Map every canonical vertex to V0, V1 or V2 by its first-return count."""
    cached = g.memo.get("classification")
    if cached is not None:
        return cached
    classes, witnesses = {}, {}
    for v in g.canonical_vertices():
        out = first_return_cycles(g, v)
        classes[v] = _CLASS_OF_COUNT[out.count]
        witnesses[v] = out.witnesses
    result = VertexClassification(classes, witnesses)
    g.memo["classification"] = result
    return result


def marker_ids(g: GraphHandle, *wanted: VertexClass) -> tuple[frozenset, frozenset]:
    """Stem ids and pattern ids of the canonical vertices in the given classes."""
    cls = classify_vertices(g)
    members = cls.members(*wanted)
    return (
        frozenset(v.id for v in members if v.copy == 0),
        frozenset(v.id for v in members if v.copy != 0),
    )


def has_cycles(g: GraphHandle) -> bool:
    return bool(classify_vertices(g).members(VertexClass.V1, VertexClass.V2))


# ---------------------------------------------------------------------------
# loops and exits


def loop_has_exit(g: GraphHandle, cycle: Path) -> bool:
    """Does some vertex of ``cycle`` emit an edge other than the cycle's own?"""
    if not cycle.is_cycle:
        raise NotACycle(str(cycle))
    cur = cycle.base
    for ref in cycle.edges:
        if any(arc.ref != ref for arc in g.out_edges(cur)):
            return True
        cur = g.edge(ref).dst
    return False


def exitless_cycle(g: GraphHandle) -> Optional[Path]:
    """A cycle without an exit, if one exists.

    A cycle lacks an exit exactly when each of its vertices has a single
    out-edge, so it suffices to follow single out-edges.
    """
    for v in g.canonical_vertices():
        cur, seen = v, [v]
        while True:
            arcs = g.out_edges(cur)
            if len(arcs) != 1 or arcs[0].dst.copy != cur.copy:
                break
            cur = arcs[0].dst
            if cur in seen:
                start = seen.index(cur)
                refs = []
                x = cur
                for _ in seen[start:]:
                    arc = g.out_edges(x)[0]
                    refs.append(arc.ref)
                    x = arc.dst
                return g.path(cur, refs)
            seen.append(cur)
    return None


def every_loop_has_exit(g: GraphHandle) -> bool:
    return exitless_cycle(g) is None


def _reaches_marked(g: GraphHandle, v, marked: tuple[frozenset, frozenset]) -> bool:
    return any(flag for _, flag in _flags(sweep(g, v, marked)))


def _flags(sw: Sweep):
    yield from sw.stem
    for layer in sw.layers:
        yield from layer


def connects_to_loop(g: GraphHandle, v) -> bool:
    """Does ``v`` reach a vertex lying on a cycle?"""
    return _reaches_marked(g, v, marker_ids(g, VertexClass.V1, VertexClass.V2))


def has_property_IH(g: GraphHandle) -> bool:
    """Every vertex connects to a loop and every loop has an exit."""
    all_connect = all(connects_to_loop(g, v) for v in g.canonical_vertices())
    return all_connect and every_loop_has_exit(g)


def locally_contracting_criterion(g: GraphHandle) -> bool:
    """Every vertex reaches a vertex having a return path with an exit.

    At a V2 vertex two distinct first-return cycles must diverge, which is
    an exit. At a V1 vertex every return path runs around the single
    first-return cycle, so it is enough to test that cycle.
    """
    cls = classify_vertices(g)
    good = [v for v, c in cls.classes.items() if c is VertexClass.V2]
    good += [
        v
        for v, c in cls.classes.items()
        if c is VertexClass.V1 and loop_has_exit(g, cls.witnesses[v][0])
    ]
    marked = (
        frozenset(v.id for v in good if v.copy == 0),
        frozenset(v.id for v in good if v.copy != 0),
    )
    return all(_reaches_marked(g, v, marked) for v in g.canonical_vertices())


# ---------------------------------------------------------------------------
# cofinality


def unreached_infinite_path(g: GraphHandle, v):
    """A lasso in the quotient of the part of the graph ``v`` cannot reach.

    Reachable sets are forward closed, so an infinite path has a tail that
    ``v`` reaches iff the path ever enters the reachable set; ``v`` violates
    cofinality iff the unreached part carries an infinite path.
    """
    stem, pattern, _, _ = presentation(g)
    sw = sweep(g, v)
    reached_stem = {ident for ident, _ in sw.stem}
    keep_stem = set(stem.vertices) - reached_stem
    all_pattern = set(pattern.vertices)

    def keep_layer(i):
        return all_pattern - sw.reached_ids(i)

    succ = layered_successors(g, sw, keep_stem, keep_layer)
    starts = [("stem", x) for x in stem.vertices if x in keep_stem]
    starts += [(i, x) for i in range(len(sw.layers)) for x in pattern.vertices if x in keep_layer(i)]
    return find_lasso(starts, succ)


def is_cofinal(g: GraphHandle) -> bool:
    """Every vertex reaches the tail of every infinite path.

    For ``v`` in copy ``k`` the situation is a shift of ``v`` in copy 1, so
    checking canonical vertices is enough.
    """
    return all(unreached_infinite_path(g, v) is None for v in g.canonical_vertices())


def is_simple_verdict(g: GraphHandle) -> bool:
    return is_cofinal(g) and every_loop_has_exit(g)


# ---------------------------------------------------------------------------
# isotropy


def nontrivial_isotropy_certificate(g: GraphHandle, root=None) -> Optional[IsotropyCertificate]:
    """An eventually periodic infinite path, if the graph has any cycle.

    With ``root`` given, the path starts there (``None`` if ``root`` reaches
    no cycle); otherwise the first canonical vertex that reaches a cycle is
    used. The prefix is empty when the root itself lies on a cycle.
    """
    cls = classify_vertices(g)
    marked = marker_ids(g, VertexClass.V1, VertexClass.V2)
    roots = [_check_vertex(g, root)] if root is not None else g.canonical_vertices()
    for r in roots:
        if not _reaches_marked(g, r, marked):
            continue
        target, labels = bfs_find([r], g.successors, lambda x: cls.of(x) is not VertexClass.V0)
        prefix = g.path(r, labels)
        return IsotropyCertificate(prefix, cls.cycles_at(target)[0])
    return None
