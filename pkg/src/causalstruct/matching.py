"""Bipartite matching between equations and variables.

Augmenting-path (Kuhn) matching is ample for desk-scale systems; rows and
adjacency lists are visited in ascending index order so results, and the
Hall violators derived from them, are deterministic.
"""

from __future__ import annotations

from collections.abc import Sequence


def maximum_matching(n_right: int, adjacency: Sequence[Sequence[int]]) -> list[int]:
    """Match each left vertex to a distinct right vertex where possible.

    ``adjacency[i]`` lists the right vertices reachable from left vertex
    ``i``.  Returns ``match`` with ``match[i]`` the right vertex assigned to
    left vertex ``i``, or -1 if ``i`` is unmatched.
    """
    match_left = [-1] * len(adjacency)
    match_right = [-1] * n_right

    def try_augment(i: int, seen: set[int]) -> bool:
        for j in adjacency[i]:
            if j in seen:
                continue
            seen.add(j)
            if match_right[j] == -1 or try_augment(match_right[j], seen):
                match_left[i] = j
                match_right[j] = i
                return True
        return False

    for i in range(len(adjacency)):
        try_augment(i, set())
    return match_left


def hall_violator(adjacency: Sequence[Sequence[int]], match_left: Sequence[int]) -> frozenset[int]:
    """Extract a set of left vertices with fewer neighbours than members.

    Requires an unmatched left vertex under a maximum matching.  Starting
    from the lowest such vertex, alternating reachability (left -> neighbour
    -> neighbour's match) closes over a set whose joint neighbourhood is one
    smaller than the set itself.
    """
    unmatched = [i for i, j in enumerate(match_left) if j == -1]
    if not unmatched:
        raise ValueError("matching saturates the left side; no violator exists")
    match_right: dict[int, int] = {j: i for i, j in enumerate(match_left) if j != -1}

    lefts = {unmatched[0]}
    frontier = [unmatched[0]]
    seen_right: set[int] = set()
    while frontier:
        nxt = []
        for i in frontier:
            for j in adjacency[i]:
                if j in seen_right:
                    continue
                seen_right.add(j)
                owner = match_right.get(j)
                if owner is not None and owner not in lefts:
                    lefts.add(owner)
                    nxt.append(owner)
        frontier = nxt
    return frozenset(lefts)
