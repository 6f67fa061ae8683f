"""Causal ordering of a self-contained structure matrix.

The ordering partitions equations and variables into clusters (minimal
self-contained subsets), stamps each cluster with the step at which the
recursive identify-solve-substitute procedure would reach it, and draws
precedence edges from already-solved variables into each cluster.

Instead of enumerating subsets, the implementation matches each equation to
one of its variables, orients the remaining participations toward the
matched variable, and reads the clusters off as strongly connected
components; the condensation's longest-path levels are the orders.  The
result is matching-independent and is held against a brute-force oracle in
the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .dotutil import dot_id
from .errors import NotSelfContainedError
from .graphs import condensation_edges, longest_path_levels, strongly_connected_components
from .matching import maximum_matching
from .structure import EquationSubset, StructureMatrix, check_system


@dataclass(frozen=True)
class Cluster:
    """A minimal self-contained subset: equations, their variables, order."""

    equations: frozenset[int]
    variables: frozenset[int]
    order: int

    @property
    def degree(self) -> int:
        return len(self.equations)


@dataclass(frozen=True)
class CausalOrdering:
    """Clusters in canonical order plus cluster- and variable-level edges.

    Clusters are sorted by (order, smallest variable index).  Cluster edges
    are pairs of positions in ``clusters``; variable edges are pairs of
    variable indices, each meaning the source is a direct causal predecessor
    of the target.
    """

    matrix: StructureMatrix
    clusters: tuple[Cluster, ...]
    cluster_edges: frozenset[tuple[int, int]]
    variable_edges: frozenset[tuple[int, int]]

    @cached_property
    def _cluster_of_variable(self) -> dict[int, int]:
        return {
            v: ci for ci, cluster in enumerate(self.clusters) for v in cluster.variables
        }

    @cached_property
    def _cluster_of_equation(self) -> dict[int, int]:
        return {
            e: ci for ci, cluster in enumerate(self.clusters) for e in cluster.equations
        }

    def cluster_of_variable(self, v: int) -> int:
        return self._cluster_of_variable[v]

    def cluster_of_equation(self, e: int) -> int:
        try:
            return self._cluster_of_equation[e]
        except KeyError:
            raise KeyError(f"equation index {e} not in this system") from None


def causal_ordering(matrix: StructureMatrix) -> CausalOrdering:
    """Compute clusters, orders and precedence edges for a self-contained system."""
    report = check_system(matrix)
    if not report.self_contained:
        raise NotSelfContainedError(report.describe(), report)

    n = matrix.n
    match = maximum_matching(n, [sorted(row) for row in matrix.rows])
    equation_of = {v: e for e, v in enumerate(match)}

    # Orient every unmatched participation toward the matched variable.
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for e, v in enumerate(match):
        for u in sorted(matrix.rows[e]):
            if u != v:
                adjacency[u].append(v)

    components = strongly_connected_components(n, adjacency)
    comp_edges = condensation_edges(components, adjacency)
    levels = longest_path_levels(len(components), comp_edges)

    raw = []
    for ci, comp in enumerate(components):
        variables = frozenset(comp)
        equations = frozenset(equation_of[v] for v in comp)
        raw.append(Cluster(equations, variables, levels[ci]))

    by_canonical = sorted(range(len(raw)), key=lambda ci: (raw[ci].order, min(raw[ci].variables)))
    clusters = tuple(raw[ci] for ci in by_canonical)
    new_index = {old: new for new, old in enumerate(by_canonical)}
    cluster_edges = frozenset((new_index[a], new_index[b]) for a, b in comp_edges)

    variable_edges = set()
    for cluster in clusters:
        for e in cluster.equations:
            for u in matrix.rows[e] - cluster.variables:
                variable_edges.update((u, w) for w in cluster.variables)

    return CausalOrdering(
        matrix=matrix,
        clusters=clusters,
        cluster_edges=cluster_edges,
        variable_edges=frozenset(variable_edges),
    )


def minimal_self_contained_subsets(matrix: StructureMatrix) -> list[EquationSubset]:
    """The self-contained subsets containing no smaller one: the order-0 clusters."""
    ordering = causal_ordering(matrix)
    return [
        EquationSubset(cluster.equations, cluster.variables)
        for cluster in ordering.clusters
        if cluster.order == 0
    ]


def ordering_to_dot(ordering: CausalOrdering) -> str:
    """Render the variable-level causal graph as DOT text.

    Feedback clusters (degree above one) become boxed same-rank subgraphs
    annotated with their degree; no edges are drawn inside them.
    """
    matrix = ordering.matrix
    lines = ["digraph causal_ordering {"]
    box = 0
    for cluster in ordering.clusters:
        names = [dot_id(matrix.variable_names[v]) for v in sorted(cluster.variables)]
        if cluster.degree > 1:
            lines.append(f"  subgraph cluster_{box} {{")
            lines.append(f'    label="degree={cluster.degree}";')
            lines.append("    rank=same;")
            lines.extend(f"    {name};" for name in names)
            lines.append("  }")
            box += 1
        else:
            lines.extend(f"  {name};" for name in names)
    for u, v in sorted(ordering.variable_edges):
        lines.append(
            f"  {dot_id(matrix.variable_names[u])} -> {dot_id(matrix.variable_names[v])};"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
