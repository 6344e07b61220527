"""Maximal tails of finite graphs and the tail form of pure infiniteness.

Every maximal tail ``M`` of a finite graph has the form
``T(y) = {u : u >= y}``: clause (3) makes ``M`` downward directed, so the
finitely many members have a common lower bound ``y`` in ``M``, and then
clause (1) gives ``T(y) ⊆ M ⊆ T(y)``. :func:`enumerate_maximal_tails`
therefore only tests the sets ``T(y)``; :func:`brute_force_tails` tests
every subset and is kept as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from pigraph._search import bfs_tree, find_lasso
from pigraph.graph_model import FiniteGraph, GraphError


class EmptySet(GraphError):
    pass


class CapExceeded(GraphError):
    pass


@dataclass(frozen=True)
class MaximalTail:
    members: frozenset
    generator: Optional[str] = None


@dataclass(frozen=True)
class TailReport:
    tails: tuple[MaximalTail, ...]
    loop_condition: bool
    exit_condition: bool


def _require_finite(g) -> FiniteGraph:
    if not isinstance(g, FiniteGraph):
        raise TypeError("maximal tails are only enumerated for finite graphs")
    return g


def reach_table(g: FiniteGraph) -> dict[str, frozenset]:
    """``table[v]`` is the set of vertices ``w`` with ``v >= w``."""
    cached = g.memo.get("reach_table")
    if cached is None:
        adj = g.adjacency

        def succ(x):
            return ((e.id, e.dst) for e in adj[x])

        cached = {v: frozenset(bfs_tree([v], succ)) for v in g.vertices}
        g.memo["reach_table"] = cached
    return cached


def violated_clause(g: FiniteGraph, members: Iterable[str]) -> Optional[int]:
    """First clause (1, 2 or 3) of the maximal-tail definition that fails."""
    g = _require_finite(g)
    m = set(members)
    if not m:
        raise EmptySet("a maximal tail is nonempty")
    reach = reach_table(g)
    for v in g.vertices:
        if v not in m and reach[v] & m:
            return 1
    for v in m:
        outs = g.adjacency[v]
        if outs and not any(e.dst in m for e in outs):
            return 2
    for v, w in combinations(sorted(m), 2):
        if not (reach[v] & reach[w] & m):
            return 3
    return None


def is_maximal_tail(g: FiniteGraph, members: Iterable[str]):
    """Returns ``(verdict, violated clause or None)``."""
    clause = violated_clause(g, members)
    return clause is None, clause


def enumerate_maximal_tails(g: FiniteGraph) -> list[MaximalTail]:
    g = _require_finite(g)
    reach = reach_table(g)
    seen = set()
    tails = []
    for y in g.vertices:
        members = frozenset(u for u in g.vertices if y in reach[u])
        if members in seen:
            continue
        seen.add(members)
        if violated_clause(g, members) is None:
            tails.append(MaximalTail(members, y))
    return tails


def brute_force_tails(g: FiniteGraph, cap: int = 12) -> list[frozenset]:
    """Every vertex subset that passes the maximal-tail test (oracle)."""
    g = _require_finite(g)
    if len(g.vertices) > cap:
        raise CapExceeded(f"{len(g.vertices)} vertices exceeds cap {cap}")
    out = []
    verts = list(g.vertices)
    for r in range(1, len(verts) + 1):
        for subset in combinations(verts, r):
            if violated_clause(g, subset) is None:
                out.append(frozenset(subset))
    return out


def _induced(g: FiniteGraph, m: frozenset):
    adj = g.adjacency

    def succ(x):
        for e in adj[x]:
            if e.dst in m:
                yield e.id, e.dst

    return succ


def _loop_vertices(g: FiniteGraph, m: frozenset) -> set:
    """Vertices of ``M`` lying on a cycle of the subgraph induced on ``M``."""
    succ = _induced(g, m)
    out = set()
    for v in m:
        reach = bfs_tree([d for _, d in succ(v)], succ)
        if v in reach:
            out.add(v)
    return out


def _tail_loop_ok(g: FiniteGraph, m: frozenset) -> bool:
    loops = _loop_vertices(g, m)
    succ = _induced(g, m)
    return all(loops & set(bfs_tree([v], succ)) for v in m)


def _tail_exit_ok(g: FiniteGraph, m: frozenset) -> bool:
    # a cycle in M lacks an exit in M iff every vertex on it has one edge into M
    single = {}
    for v in m:
        into = [e.dst for e in g.adjacency[v] if e.dst in m]
        if len(into) == 1:
            single[v] = into[0]

    def succ(x):
        if single.get(x) in single:
            yield None, single[x]

    return find_lasso(sorted(single), succ) is None


def tail_loop_condition(g: FiniteGraph, tails: Optional[list] = None) -> bool:
    """Each vertex of every maximal tail ``M`` connects to a loop in ``M``."""
    tails = enumerate_maximal_tails(g) if tails is None else tails
    return all(_tail_loop_ok(g, _members(t)) for t in tails)


def tail_exit_condition(g: FiniteGraph, tails: Optional[list] = None) -> bool:
    """All loops in each maximal tail ``M`` have exits in ``M``."""
    tails = enumerate_maximal_tails(g) if tails is None else tails
    return all(_tail_exit_ok(g, _members(t)) for t in tails)


def _members(t) -> frozenset:
    return t.members if isinstance(t, MaximalTail) else frozenset(t)


def tail_report(g: FiniteGraph) -> TailReport:
    tails = enumerate_maximal_tails(g)
    return TailReport(tuple(tails), tail_loop_condition(g, tails), tail_exit_condition(g, tails))
