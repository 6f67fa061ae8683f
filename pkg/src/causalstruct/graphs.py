"""Small directed-graph helpers: SCCs, condensation levels, topo order."""

from __future__ import annotations

import heapq
from collections.abc import Sequence

from .errors import CycleError


def strongly_connected_components(n: int, adjacency: Sequence[Sequence[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative to keep recursion depth flat.

    Vertices are 0..n-1.  Each component is returned with its members
    sorted; the component list itself is in reverse topological order
    (every edge leaves a later component toward an earlier one or stays
    inside its own).
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for k in range(pos, len(adjacency[v])):
                w = adjacency[v][k]
                if index[w] == -1:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(sorted(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return components


def condensation_edges(
    components: Sequence[Sequence[int]], adjacency: Sequence[Sequence[int]]
) -> set[tuple[int, int]]:
    """Edges between distinct components, as pairs of component indices."""
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(components):
        for v in comp:
            comp_of[v] = ci
    edges = set()
    for v, targets in enumerate(adjacency):
        for w in targets:
            if comp_of[v] != comp_of[w]:
                edges.add((comp_of[v], comp_of[w]))
    return edges


def longest_path_levels(n: int, edges: set[tuple[int, int]]) -> list[int]:
    """Level of each node in a DAG: 0 at sources, else 1 + max over preds."""
    preds: list[list[int]] = [[] for _ in range(n)]
    succs: list[list[int]] = [[] for _ in range(n)]
    indegree = [0] * n
    for u, v in edges:
        preds[v].append(u)
        succs[u].append(v)
        indegree[v] += 1

    levels = [0] * n
    ready = [v for v in range(n) if indegree[v] == 0]
    done = 0
    while ready:
        v = ready.pop()
        done += 1
        for w in succs[v]:
            levels[w] = max(levels[w], levels[v] + 1)
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
    if done != n:
        raise ValueError("edge set contains a cycle")
    return levels


def topological_order(n: int, parents: Sequence[Sequence[int]]) -> list[int]:
    """Kahn's algorithm with ascending-index tie-breaking.

    ``parents[v]`` lists the vertices that must precede ``v``.  Raises
    ``CycleError`` carrying one directed cycle if no order exists.
    """
    children: list[list[int]] = [[] for _ in range(n)]
    indegree = [0] * n
    for v in range(n):
        for p in parents[v]:
            children[p].append(v)
            indegree[v] += 1
    order = []
    ready = [v for v in range(n) if indegree[v] == 0]
    heapq.heapify(ready)
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in children[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != n:
        raise CycleError(find_cycle(n, parents))
    return order


def find_cycle(n: int, parents: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Return the vertices of one directed cycle of the parent relation.

    The cycle is reported in arrow order (each listed vertex is a parent of
    the next, the last wrapping to the first), rotated to start at its
    smallest vertex.
    """
    color = [0] * n  # 0 unvisited, 1 in progress, 2 done
    trail: list[int] = []

    def visit(v: int) -> tuple[int, ...] | None:
        color[v] = 1
        trail.append(v)
        for p in parents[v]:
            if color[p] == 1:
                cycle = trail[trail.index(p):]
                cycle.reverse()  # walk was child-to-parent; arrows run the other way
                at = cycle.index(min(cycle))
                return tuple(cycle[at:] + cycle[:at])
            if color[p] == 0:
                found = visit(p)
                if found is not None:
                    return found
        trail.pop()
        color[v] = 2
        return None

    for v in range(n):
        if color[v] == 0:
            found = visit(v)
            if found is not None:
                return found
    raise ValueError("graph is acyclic; no cycle to report")


def reachable_from(start: int, edges: set[tuple[int, int]]) -> set[int]:
    """All nodes reachable from ``start`` along directed edges (excluding it
    unless it lies on a cycle)."""
    succs: dict[int, list[int]] = {}
    for u, v in edges:
        succs.setdefault(u, []).append(v)
    seen: set[int] = set()
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for w in succs.get(v, ()):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen
