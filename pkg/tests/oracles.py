"""Independent reference computations for the test suite.

Everything here works by brute force on small finite graphs: explicit
path enumeration and plain breadth-first reachability. None of it calls
the sweep, the phase quotient or the lasso search used by the library.
"""

from __future__ import annotations

import random
from collections import deque

from pigraph.graph_model import Edge, FiniteGraph, Path


def random_graph(rng: random.Random, max_vertices: int = 8, max_parallel: int = 3, density=None) -> FiniteGraph:
    """A random finite graph without sinks."""
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    p = rng.uniform(0.08, 0.45) if density is None else density
    edges = []
    for s in names:
        outs = []
        for t in names:
            if rng.random() < p:
                outs += [t] * rng.randint(1, max_parallel)
        if not outs:
            outs = [rng.choice(names)]
        edges += [(s, t) for t in outs]
    rng.shuffle(edges)
    return FiniteGraph(names, [Edge(f"e{i}", s, t) for i, (s, t) in enumerate(edges)])


def out_edges(g: FiniteGraph) -> dict:
    out = {v: [] for v in g.vertices}
    for e in g.edges:
        out[e.src].append(e)
    return out


def reach(g: FiniteGraph, v: str) -> set:
    """Vertices reachable from ``v`` by a path of length >= 0."""
    adj = out_edges(g)
    seen, todo = {v}, deque([v])
    while todo:
        x = todo.popleft()
        for e in adj[x]:
            if e.dst not in seen:
                seen.add(e.dst)
                todo.append(e.dst)
    return seen


def first_return_count(g: FiniteGraph, v: str, cap: int = 2) -> int:
    """Number of first-return cycles at ``v``, counted up to ``cap``.

    Enumerates walks that leave ``v`` and come back without passing it in
    between, up to length ``3n``: if two first-return cycles exist then two
    exist within that length (a simple one plus, if needed, a detour
    around one extra cycle).
    """
    adj = out_edges(g)
    limit = 3 * len(g.vertices)
    # vertices that can still get back to v without passing through it
    back = {v}
    changed = True
    while changed:
        changed = False
        for e in g.edges:
            if e.src not in back and e.dst in back and e.src != v:
                back.add(e.src)
                changed = True
    found = 0
    stack = [(v, 0, True)]
    while stack:
        x, depth, at_start = stack.pop()
        if x == v and not at_start:
            found += 1
            if found >= cap:
                return found
            continue
        if depth == limit:
            continue
        for e in adj[x]:
            if e.dst in back:
                stack.append((e.dst, depth + 1, False))
    return found


def brute_classes(g: FiniteGraph) -> dict:
    return {v: min(first_return_count(g, v), 2) for v in g.vertices}


def good_set(g: FiniteGraph, v: str, marked: set) -> set:
    """``w`` is good iff some marked ``m`` has ``v >= m >= w``."""
    out = set()
    for m in reach(g, v) & marked:
        out |= reach(g, m)
    return out


def unbounded_bad(g: FiniteGraph, v: str, marked: set) -> bool:
    """Is there an all-bad path from ``v`` of length ``n`` (hence a bad cycle)?"""
    good = good_set(g, v, marked)
    if v in good:
        return False
    adj = out_edges(g)
    n = len(g.vertices)
    level = {v}
    for _ in range(n):
        level = {e.dst for x in level for e in adj[x] if e.dst not in good}
        if not level:
            return False
    return True


def conditions_oracle(g: FiniteGraph) -> dict:
    cls = brute_classes(g)
    v2 = {v for v, c in cls.items() if c == 2}
    loops = {v for v, c in cls.items() if c >= 1}
    K = 1 not in cls.values()
    I = all(reach(g, v) & v2 for v in g.vertices)
    DI = not any(unbounded_bad(g, v, v2) for v in g.vertices)
    DL = not any(unbounded_bad(g, v, loops) for v in g.vertices)
    return {"K": K, "I": I, "DI": DI, "DL": DL, "classes": cls}


def extensions(g, p: Path, length: int) -> list[Path]:
    """All extensions of ``p`` with exactly ``length`` edges."""
    layer = [p]
    for _ in range(length - len(p)):
        layer = [Path(q.base, q.edges + (a.ref,), a.dst) for q in layer for a in g.out_edges(q.end)]
    return layer


def covers_oracle(g, family, mu: Path) -> bool:
    depth = max([len(mu)] + [len(p) for p in family])
    return all(any(p.is_prefix_of(x) for p in family) for x in extensions(g, mu, depth))


def meet_oracle(g, p: Path, q: Path) -> bool:
    """Do ``Z(p)`` and ``Z(q)`` share an infinite path?"""
    if p.base != q.base:
        return False
    depth = max(len(p), len(q))
    return any(p.is_prefix_of(x) and q.is_prefix_of(x) for x in extensions(g, Path.at(p.base), depth))


def partitions_oracle(g, family, mu: Path) -> bool:
    if not covers_oracle(g, family, mu):
        return False
    return not any(meet_oracle(g, family[i], family[j]) for i in range(len(family)) for j in range(i))


def random_path(g, rng: random.Random, start, max_len: int) -> Path:
    p = Path.at(start)
    for _ in range(rng.randint(0, max_len)):
        arcs = g.out_edges(p.end)
        a = rng.choice(arcs)
        p = Path(p.base, p.edges + (a.ref,), a.dst)
    return p


def cycle_vertices(g: FiniteGraph) -> set:
    adj = out_edges(g)
    return {v for v in g.vertices if any(v in reach(g, e.dst) for e in adj[v])}


def cofinal_oracle(g: FiniteGraph) -> bool:
    """Every infinite path recurs at some cycle vertex, and every cycle vertex
    carries an infinite path, so cofinality means: all reach all cycle vertices."""
    loops = cycle_vertices(g)
    return all(loops <= reach(g, v) for v in g.vertices)


def exitless_cycle_oracle(g: FiniteGraph) -> bool:
    """A cycle without exit is a strongly connected component that is a bare cycle."""
    adj = out_edges(g)
    for v in cycle_vertices(g):
        comp = {w for w in reach(g, v) if v in reach(g, w)}
        if all(len(adj[w]) == 1 for w in comp):
            return True
    return False


def first_difference(p: Path, q: Path):
    """First index where ``p`` and ``q`` read different edges, or ``None``.

    Two cylinders at the same base are disjoint exactly when such an index
    exists below both lengths.
    """
    for i, (a, b) in enumerate(zip(p.edges, q.edges)):
        if a != b:
            return i
    return None
