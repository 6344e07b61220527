"""Generic graph searches over successor functions.

A successor function maps a node to an iterable of ``(label, node)`` pairs.
Labels are typically edge references, so every search can report the
edges it walked along, not only the nodes.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Hashable, Iterable, Optional, TypeVar

N = TypeVar("N", bound=Hashable)
L = TypeVar("L")

Successors = Callable[[N], Iterable[tuple[L, N]]]


def bfs_tree(starts: Iterable[N], succ: Successors) -> dict[N, Optional[tuple[N, L]]]:
    """Breadth-first search; maps every reached node to ``(parent, label)``.

    Start nodes map to ``None``. Insertion order is discovery order.
    """
    parent: dict = {}
    queue: deque = deque()
    for s in starts:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    while queue:
        node = queue.popleft()
        for label, nxt in succ(node):
            if nxt not in parent:
                parent[nxt] = (node, label)
                queue.append(nxt)
    return parent


def labels_to(parent: dict, node) -> list:
    """Edge labels along the BFS-tree path ending at ``node``."""
    out = []
    step = parent[node]
    while step is not None:
        node, label = step
        out.append(label)
        step = parent[node]
    out.reverse()
    return out


def bfs_find(starts: Iterable[N], succ: Successors, goal: Callable[[N], bool]):
    """Shortest labelled walk from a start to a node satisfying ``goal``.

    Returns ``(node, labels)`` or ``None``. Terminates on infinite graphs
    whenever a goal node is reachable and ``succ`` is finitely branching.
    """
    parent: dict = {}
    queue: deque = deque()
    for s in starts:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    while queue:
        node = queue.popleft()
        if goal(node):
            return node, labels_to(parent, node)
        for label, nxt in succ(node):
            if nxt not in parent:
                parent[nxt] = (node, label)
                queue.append(nxt)
    return None


def find_lasso(starts: Iterable[N], succ: Successors):
    """Find a cycle reachable from ``starts`` in a finite graph.

    Returns ``(start, prefix_labels, cycle_node, cycle_labels)`` where the
    prefix walks from ``start`` to ``cycle_node`` and the cycle returns to it,
    or ``None`` when the reachable part is acyclic.
    """
    done: set = set()
    for s in starts:
        if s in done:
            continue
        # iterative DFS; stack holds (node, iterator, label used to enter node)
        on_stack: dict = {s: 0}
        stack = [(s, iter(succ(s)), None)]
        while stack:
            node, it, _ = stack[-1]
            advanced = False
            for label, nxt in it:
                if nxt in on_stack:
                    idx = on_stack[nxt]
                    prefix = [entry[2] for entry in stack[1 : idx + 1]]
                    cycle = [entry[2] for entry in stack[idx + 1 :]] + [label]
                    return s, prefix, nxt, cycle
                if nxt not in done:
                    on_stack[nxt] = len(stack)
                    stack.append((nxt, iter(succ(nxt)), label))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                del on_stack[node]
                done.add(node)
    return None
