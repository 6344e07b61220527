"""Conditions (K), (I), (DI), (DL) and essential principality.

(DI) and (DL) are decided through obstruction sets. Fix a root ``v`` and a
marker set (V2 vertices for (DI), vertices on cycles for (DL)). A reachable
vertex ``w`` is *good* if some path ``v -> w`` meets the marker set, and
*bad* otherwise. If a path from ``v`` ends in a bad vertex then every vertex
on it is bad (a good vertex on the way would make the end good too).

``Z(v)`` splits into cylinders ending in good vertices exactly when the
tree of all-bad paths from ``v`` is finite; by Koenig's lemma that fails
exactly when an infinite path from ``v`` stays inside the bad set.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from pigraph._search import bfs_find, find_lasso
from pigraph.graph_model import GraphError, GraphHandle, Path, VertexRef, as_vertex
from pigraph.structure import (
    IsotropyCertificate,
    Sweep,
    VertexClass,
    _check_vertex,
    classify_vertices,
    layered_successors,
    marker_ids,
    sweep,
)


class NotDI(GraphError):
    pass


class Marker(enum.Enum):
    V2 = "V2"
    LOOP = "loop"

    @property
    def classes(self) -> tuple[VertexClass, ...]:
        if self is Marker.V2:
            return (VertexClass.V2,)
        return (VertexClass.V1, VertexClass.V2)


@dataclass(frozen=True)
class ObstructionSets:
    """Good/bad split of everything reachable from ``root``.

    Stored as a :class:`Sweep`, i.e. stem states plus eventually periodic
    per-copy states; ``phase_bad`` lists the bad pattern vertices per phase.
    """

    root: VertexRef
    marker: Marker
    sweep: Sweep

    def reachable(self, v) -> bool:
        return self.sweep.reached(v)

    def good(self, v) -> bool:
        return self.sweep.flagged(v)

    def bad(self, v) -> bool:
        v = as_vertex(v)
        return self.sweep.reached(v) and not self.sweep.flagged(v)

    @property
    def preperiod(self) -> int:
        return self.sweep.preperiod

    @property
    def period(self) -> int:
        return self.sweep.period

    @property
    def stem_bad(self) -> frozenset:
        flagged = {i for i, f in self.sweep.stem if f}
        return frozenset(i for i, _ in self.sweep.stem if i not in flagged)

    @property
    def phase_bad(self) -> tuple[frozenset, ...]:
        out = []
        for layer in self.sweep.layers:
            flagged = {i for i, f in layer if f}
            out.append(frozenset(i for i, _ in layer if i not in flagged))
        return tuple(out)

    def vertices(self, max_copy: int) -> tuple[set, set]:
        """Explicit ``(good, bad)`` vertex sets for copies up to ``max_copy``."""
        good: set = set()
        bad: set = set()

        def split(states, k):
            flagged = {i for i, f in states if f}
            for i, _ in states:
                (good if i in flagged else bad).add(VertexRef(i, k))

        split(self.sweep.stem, 0)
        for k in range(self.sweep.first_copy, max_copy + 1):
            split(self.sweep.layers[self.sweep.phase(k)], k)
        return good, bad


@dataclass(frozen=True)
class BadPathCertificate:
    """Presentation of an infinite path that never becomes good.

    ``prefix`` leads from the root node to ``cycle_node`` and ``cycle``
    returns to it, in the phase quotient: nodes are ``("stem", id)`` or
    ``(phase, id)``, labels are edge ids. When the cycle crosses period
    links the lifted path runs through infinitely many copies.
    """

    root: VertexRef
    marker: Marker
    prefix: tuple
    cycle_node: tuple
    cycle: tuple


@dataclass
class ConditionReport:
    K: bool
    I: bool
    DI: bool
    DL: bool
    essentially_principal: bool
    certificates: dict = field(default_factory=dict)


def _marked(g: GraphHandle, marker: Marker):
    return marker_ids(g, *marker.classes)


def bad_set(g: GraphHandle, v, marker: Marker = Marker.V2) -> ObstructionSets:
    v = _check_vertex(g, v)
    return ObstructionSets(v, marker, sweep(g, v, _marked(g, marker)))


def has_unbounded_bad_paths(g: GraphHandle, v, marker: Marker = Marker.V2):
    """Are there arbitrarily long paths from ``v`` through bad vertices only?

    Returns ``(verdict, certificate)``. The search runs on the finite phase
    quotient of the bad set, where a reachable cycle is either a genuine
    cycle or the image of an infinite chain through the copies.
    """
    obs = bad_set(g, v, marker)
    if not obs.bad(obs.root):
        return False, None
    phase_bad = obs.phase_bad
    succ = layered_successors(g, obs.sweep, obs.stem_bad, lambda i: phase_bad[i])
    root = obs.root
    start = ("stem", root.id) if root.copy == 0 else (0, root.id)
    lasso = find_lasso([start], succ)
    if lasso is None:
        return False, None
    _, prefix, node, cycle = lasso
    return True, BadPathCertificate(root, marker, tuple(prefix), node, tuple(cycle))


def condition_K(g: GraphHandle):
    """(K): no vertex has exactly one first-return cycle."""
    cls = classify_vertices(g)
    v1 = cls.members(VertexClass.V1)
    if not v1:
        return True, None
    return False, (v1[0], cls.witnesses[v1[0]][0])


def condition_I(g: GraphHandle):
    """(I): every vertex reaches a V2 vertex."""
    marked = _marked(g, Marker.V2)
    for v in g.canonical_vertices():
        sw = sweep(g, v, marked)
        if not (any(f for _, f in sw.stem) or any(f for layer in sw.layers for _, f in layer)):
            return False, v
    return True, None


def _condition_D(g: GraphHandle, marker: Marker):
    for v in g.canonical_vertices():
        unbounded, cert = has_unbounded_bad_paths(g, v, marker)
        if unbounded:
            return False, cert
    return True, None


def condition_DI(g: GraphHandle):
    return _condition_D(g, Marker.V2)


def condition_DL(g: GraphHandle):
    return _condition_D(g, Marker.LOOP)


def essentially_principal(g: GraphHandle):
    """Decided as Condition (K); a V1 cycle yields an eventually periodic path."""
    ok, cert = condition_K(g)
    if ok:
        return True, None
    v, cycle = cert
    return False, IsotropyCertificate(Path.at(v), cycle)


def path_through_marker(g: GraphHandle, v, w, marker: Marker = Marker.V2) -> Optional[Path]:
    """A shortest path ``v -> w`` meeting the marker set, or ``None``."""
    v, w = _check_vertex(g, v), _check_vertex(g, w)
    cls = classify_vertices(g)
    wanted = marker.classes
    limit = w.copy if g.is_periodic else None

    def succ(state):
        x, hit = state
        for arc in g.out_edges(x):
            if limit is None or arc.dst.copy <= limit:
                yield arc.ref, (arc.dst, hit or cls.of(arc.dst) in wanted)

    start = (v, cls.of(v) in wanted)
    found = bfs_find([start], succ, lambda s: s == (w, True))
    return None if found is None else g.path(v, found[1])


def di_decomposition(g: GraphHandle, v, marker: Marker = Marker.V2) -> list[tuple[Path, Path]]:
    """Partition ``Z(v)`` into cylinders ``Z(beta_i)`` with companions ``alpha_i``.

    Each ``beta_i`` is a shortest extension ending in a good vertex, found
    breadth first; ``alpha_i`` runs from ``v`` to the same end through the
    marker set. Returns ``[(beta_i, alpha_i), ...]``.
    """
    v = _check_vertex(g, v)
    unbounded, _ = has_unbounded_bad_paths(g, v, marker)
    if unbounded:
        raise NotDI(f"no finite decomposition of Z({v}) through {marker.value} vertices")
    obs = bad_set(g, v, marker)
    out = []
    queue = deque([Path.at(v)])
    while queue:
        beta = queue.popleft()
        if obs.good(beta.end):
            out.append((beta, path_through_marker(g, v, beta.end, marker)))
            continue
        for arc in g.out_edges(beta.end):
            queue.append(Path(beta.base, beta.edges + (arc.ref,), arc.dst))
    return out


def check_conditions(g: GraphHandle) -> ConditionReport:
    K, k_cert = condition_K(g)
    I, i_cert = condition_I(g)
    DI, di_cert = condition_DI(g)
    DL, dl_cert = condition_DL(g)
    ep, ep_cert = essentially_principal(g)
    certs = {}
    if k_cert is not None:
        certs["K"] = k_cert
    if i_cert is not None:
        certs["I"] = i_cert
    if di_cert is not None:
        certs["DI"] = di_cert
    if dl_cert is not None:
        certs["DL"] = dl_cert
    if ep_cert is not None:
        certs["essentially_principal"] = ep_cert
    return ConditionReport(K, I, DI, DL, ep, certs)
