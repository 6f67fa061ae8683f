"""Discrete belief networks: DAG over variables plus conditional tables.

Each node carries one probability row per configuration of its parents.
Rows are indexed in mixed-radix order with the first parent as the most
significant digit, a convention that also fixes the on-disk row order.
Construction accepts semantically broken networks (cycles, bad row sums,
wrong row counts) so that ``validate`` can report every violation; the
probability operations assume a network that validates cleanly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Iterator, Sequence

from .dotutil import dot_id
from .errors import CycleError, FormatError
from .graphs import find_cycle, topological_order as _topo

VariableId = int

ROW_SUM_TOLERANCE = 1e-9

Assignment = tuple[int, ...]


def config_index(radices: Sequence[int], digits: Sequence[int]) -> int:
    """Mixed-radix rank of ``digits``, first digit most significant."""
    rank = 0
    for radix, digit in zip(radices, digits):
        rank = rank * radix + digit
    return rank


@dataclass(frozen=True)
class BbnNode:
    """One variable: outcome labels, parent indices, conditional table."""

    name: str
    outcomes: tuple[str, ...]
    parents: tuple[int, ...]
    cpt: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("node name must be non-empty")
        if len(self.outcomes) < 2:
            raise ValueError(f"node {self.name!r} needs at least two outcomes")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError(f"node {self.name!r} has duplicate outcome labels")

    @property
    def outcome_count(self) -> int:
        return len(self.outcomes)


@dataclass(frozen=True)
class Bbn:
    """Belief network over an indexed tuple of nodes."""

    nodes: tuple[BbnNode, ...]

    def __post_init__(self):
        names = [node.name for node in self.nodes]
        if len(set(names)) != len(names):
            raise ValueError("node names must be distinct")
        for node in self.nodes:
            for p in node.parents:
                if p < 0 or p >= len(self.nodes):
                    raise ValueError(
                        f"node {node.name!r} references parent index {p} out of range"
                    )

    @property
    def n(self) -> int:
        return len(self.nodes)

    @cached_property
    def _name_to_index(self) -> dict[str, int]:
        return {node.name: i for i, node in enumerate(self.nodes)}

    def index_of(self, name: str) -> int:
        try:
            return self._name_to_index[name]
        except KeyError:
            raise KeyError(f"unknown node {name!r}") from None

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        """Directed arcs (parent, child) derived from the parent lists."""
        return frozenset(
            (p, child) for child, node in enumerate(self.nodes) for p in node.parents
        )

    def outcome_counts(self) -> tuple[int, ...]:
        return tuple(node.outcome_count for node in self.nodes)

    def assignments(self) -> Iterator[Assignment]:
        """All joint outcome assignments, in row-major index order."""
        return product(*(range(k) for k in self.outcome_counts()))

    def row_index(self, child: int, assignment: Sequence[int]) -> int:
        node = self.nodes[child]
        radices = [self.nodes[p].outcome_count for p in node.parents]
        return config_index(radices, [assignment[p] for p in node.parents])


@dataclass(frozen=True)
class BbnIssue:
    """One invariant violation found by ``validate``."""

    kind: str  # "cycle" | "row-count" | "row-length" | "row-sum" | "entry-range" | "duplicate-parent"
    node: int | None
    row: int | None
    detail: str
    amount: float | None = None


@dataclass(frozen=True)
class BbnReport:
    bbn: Bbn
    issues: tuple[BbnIssue, ...]
    cycle: tuple[int, ...] | None

    @property
    def valid(self) -> bool:
        return not self.issues

    def describe(self) -> str:
        if self.valid:
            return "valid"
        lines = []
        for issue in self.issues:
            where = "" if issue.node is None else f" [{self.bbn.nodes[issue.node].name}]"
            lines.append(f"{issue.kind}{where}: {issue.detail}")
        return "\n".join(lines)


def validate(bbn: Bbn) -> BbnReport:
    """Report every invariant violation; an empty report means valid."""
    issues: list[BbnIssue] = []
    cycle = None

    parent_lists = [node.parents for node in bbn.nodes]
    try:
        _topo(bbn.n, parent_lists)
    except CycleError:
        cycle = find_cycle(bbn.n, parent_lists)
        issues.append(
            BbnIssue(
                kind="cycle",
                node=None,
                row=None,
                detail="cycle through "
                + " -> ".join(bbn.nodes[v].name for v in cycle),
            )
        )

    for i, node in enumerate(bbn.nodes):
        if len(set(node.parents)) != len(node.parents):
            issues.append(
                BbnIssue("duplicate-parent", i, None, "parent list repeats a variable")
            )
        expected_rows = math.prod(bbn.nodes[p].outcome_count for p in node.parents)
        if len(node.cpt) != expected_rows:
            issues.append(
                BbnIssue(
                    "row-count",
                    i,
                    None,
                    f"expected {expected_rows} rows, found {len(node.cpt)}",
                )
            )
        for r, row in enumerate(node.cpt):
            if len(row) != node.outcome_count:
                issues.append(
                    BbnIssue(
                        "row-length",
                        i,
                        r,
                        f"row {r} has {len(row)} entries for "
                        f"{node.outcome_count} outcomes",
                    )
                )
                continue
            if any(p < 0.0 or p > 1.0 for p in row):
                issues.append(
                    BbnIssue("entry-range", i, r, f"row {r} has entries outside [0, 1]")
                )
            deviation = abs(math.fsum(row) - 1.0)
            if deviation > ROW_SUM_TOLERANCE:
                issues.append(
                    BbnIssue(
                        "row-sum",
                        i,
                        r,
                        f"row {r} sums to {math.fsum(row)!r}",
                        amount=deviation,
                    )
                )
    return BbnReport(bbn=bbn, issues=tuple(issues), cycle=cycle)


def topological_order(bbn: Bbn) -> list[int]:
    """Parents before children, ties broken by ascending node index."""
    return _topo(bbn.n, [node.parents for node in bbn.nodes])


def joint_probability(bbn: Bbn, assignment: Sequence[int]) -> float:
    """Product of the table entries selected by a total assignment."""
    if len(assignment) != bbn.n:
        raise ValueError(
            f"assignment covers {len(assignment)} of {bbn.n} variables"
        )
    p = 1.0
    for i, node in enumerate(bbn.nodes):
        p *= node.cpt[bbn.row_index(i, assignment)][assignment[i]]
    return p


def marginals(bbn: Bbn) -> list[list[float]]:
    """Per-variable outcome marginals by exact enumeration of the joint."""
    buckets: list[list[list[float]]] = [
        [[] for _ in node.outcomes] for node in bbn.nodes
    ]
    for assignment in bbn.assignments():
        p = joint_probability(bbn, assignment)
        for i, outcome in enumerate(assignment):
            buckets[i][outcome].append(p)
    return [[math.fsum(cell) for cell in rows] for rows in buckets]


def bbn_to_dot(bbn: Bbn) -> str:
    """DOT digraph of the network's arcs."""
    lines = ["digraph bbn {"]
    lines.extend(f"  {dot_id(node.name)};" for node in bbn.nodes)
    for p, child in sorted(bbn.edges):
        lines.append(f"  {dot_id(bbn.nodes[p].name)} -> {dot_id(bbn.nodes[child].name)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# File format:
# {"nodes": [{"name":..., "outcomes":[...], "parents":[...], "cpt":[[...],...]}]}

def bbn_from_dict(doc: object) -> Bbn:
    """Parse a network document; node order fixes variable indices."""
    if not isinstance(doc, dict):
        raise FormatError("network document must be a JSON object")
    extra = set(doc) - {"nodes"}
    if extra:
        raise FormatError(f"unknown keys in network document: {sorted(extra)}")
    raw_nodes = doc.get("nodes")
    if not isinstance(raw_nodes, list):
        raise FormatError('"nodes" must be a list')

    names: list[str] = []
    for k, raw in enumerate(raw_nodes):
        if not isinstance(raw, dict) or not isinstance(raw.get("name"), str):
            raise FormatError(f'node {k}: missing or non-string "name"')
        names.append(raw["name"])
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise FormatError("node names must be distinct")

    nodes = []
    for raw in raw_nodes:
        name = raw["name"]
        extra = set(raw) - {"name", "outcomes", "parents", "cpt"}
        if extra:
            raise FormatError(f"node {name!r}: unknown keys {sorted(extra)}")
        outcomes = raw.get("outcomes")
        parents = raw.get("parents")
        cpt = raw.get("cpt")
        if not isinstance(outcomes, list) or not all(isinstance(o, str) for o in outcomes):
            raise FormatError(f'node {name!r}: "outcomes" must be a list of strings')
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise FormatError(f'node {name!r}: "parents" must be a list of names')
        unknown = [p for p in parents if p not in index]
        if unknown:
            raise FormatError(f"node {name!r}: unknown parent {unknown[0]!r}")
        if not isinstance(cpt, list):
            raise FormatError(f'node {name!r}: "cpt" must be a list of rows')
        rows = []
        for r, row in enumerate(cpt):
            if not isinstance(row, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in row
            ):
                raise FormatError(f"node {name!r}: cpt row {r} must be a list of numbers")
            rows.append(tuple(float(x) for x in row))
        try:
            nodes.append(
                BbnNode(
                    name=name,
                    outcomes=tuple(outcomes),
                    parents=tuple(index[p] for p in parents),
                    cpt=tuple(rows),
                )
            )
        except ValueError as exc:
            raise FormatError(f"node {name!r}: {exc}") from None
    return Bbn(tuple(nodes))


def bbn_to_dict(bbn: Bbn) -> dict:
    return {
        "nodes": [
            {
                "name": node.name,
                "outcomes": list(node.outcomes),
                "parents": [bbn.nodes[p].name for p in node.parents],
                "cpt": [list(row) for row in node.cpt],
            }
            for node in bbn.nodes
        ]
    }


def load_bbn(path: str | Path) -> Bbn:
    with open(path, encoding="utf-8") as handle:
        return bbn_from_dict(json.load(handle))


def save_bbn(bbn: Bbn, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(bbn_to_dict(bbn), handle, indent=2)
        handle.write("\n")
