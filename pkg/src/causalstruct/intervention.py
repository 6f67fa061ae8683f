"""Changes in structure: edits to the mechanisms of a system.

On the equation side a change replaces one equation's participation row or
adds a fresh exogenous variable with its defining equation; the edited
system must come out self-contained.  On the network side a change severs a
node from its parents and installs a fixed distribution (arc cutting), the
degenerate one-hot case covering value-fixing interventions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bbn import Bbn, BbnNode, marginals
from .errors import FormatError, NotSelfContainedError
from .graphs import reachable_from
from .ordering import CausalOrdering
from .structure import StructureMatrix, check_system

DIST_SUM_TOLERANCE = 1e-9

CHANGE_KINDS = ("replace_equation", "add_exogenous_variable", "set_bbn_node")


@dataclass(frozen=True)
class StructuralChange:
    """One edit to a system's mechanisms.

    ``replace_equation``: ``target`` is an equation label, ``vars`` the new
    participation row.  ``add_exogenous_variable``: ``target`` is the new
    variable's name, ``vars`` the row of its defining equation (it may
    mention the new variable itself).  ``set_bbn_node``: ``target`` is a
    node name and ``dist`` the replacement parentless distribution.
    """

    kind: str
    target: str
    vars: tuple[str, ...] | None = None
    dist: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in CHANGE_KINDS:
            raise ValueError(f"unknown change kind {self.kind!r}")
        if self.kind == "set_bbn_node":
            if self.dist is None or self.vars is not None:
                raise ValueError('set_bbn_node takes "dist" and no "vars"')
        else:
            if self.vars is None or self.dist is not None:
                raise ValueError(f'{self.kind} takes "vars" and no "dist"')


def apply_change(matrix: StructureMatrix, change: StructuralChange) -> StructureMatrix:
    """Apply an equation-side change and re-check self-containment.

    Raises ``NotSelfContainedError`` with the witness report when the edit
    breaks the system.
    """
    if change.kind == "replace_equation":
        e = matrix.equation_index(change.target)
        row = frozenset(matrix.variable_index(name) for name in change.vars)
        if not row:
            raise ValueError("replacement row must mention at least one variable")
        rows = list(matrix.rows)
        rows[e] = row
        edited = StructureMatrix(matrix.variable_names, matrix.equation_labels, tuple(rows))
    elif change.kind == "add_exogenous_variable":
        if change.target in matrix.variable_names:
            raise ValueError(f"variable {change.target!r} already exists")
        names = matrix.variable_names + (change.target,)
        label = f"e{matrix.n + 1}"
        if label in matrix.equation_labels:
            raise ValueError(f"generated equation label {label!r} already exists")
        index = {name: i for i, name in enumerate(names)}
        try:
            row = frozenset(index[name] for name in change.vars)
        except KeyError as exc:
            raise ValueError(f"unknown variable {exc.args[0]!r} in new row") from None
        if not row:
            raise ValueError("defining row must mention at least one variable")
        edited = StructureMatrix(
            variable_names=names,
            equation_labels=matrix.equation_labels + (label,),
            rows=matrix.rows + (row,),
        )
    else:
        raise ValueError("set_bbn_node does not apply to a structure matrix")

    report = check_system(edited)
    if not report.self_contained:
        raise NotSelfContainedError(
            f"change leaves the system {report.describe()}", report
        )
    return edited


def affected_variables(ordering: CausalOrdering, changed_equation: int) -> frozenset[int]:
    """Variables whose values a change to this equation can touch.

    The changed equation's cluster plus everything downstream of it along
    the cluster edges; all other variables are insulated by their own
    mechanisms.
    """
    start = ordering.cluster_of_equation(changed_equation)
    hit = {start} | reachable_from(start, set(ordering.cluster_edges))
    result: set[int] = set()
    for ci in hit:
        result |= ordering.clusters[ci].variables
    return frozenset(result)


def intervene_bbn(bbn: Bbn, node: int, dist: Sequence[float]) -> Bbn:
    """Cut a node loose from its parents and impose ``dist`` on it."""
    if node < 0 or node >= bbn.n:
        raise IndexError(f"node index {node} out of range")
    target = bbn.nodes[node]
    if len(dist) != target.outcome_count:
        raise ValueError(
            f"distribution has {len(dist)} entries for {target.outcome_count} outcomes"
        )
    if any(p < 0.0 or p > 1.0 for p in dist):
        raise ValueError("distribution entries must lie in [0, 1]")
    if abs(math.fsum(dist) - 1.0) > DIST_SUM_TOLERANCE:
        raise ValueError(f"distribution sums to {math.fsum(dist)!r}, not 1")
    nodes = list(bbn.nodes)
    nodes[node] = BbnNode(
        name=target.name,
        outcomes=target.outcomes,
        parents=(),
        cpt=(tuple(float(p) for p in dist),),
    )
    return Bbn(tuple(nodes))


def compare_marginals(before: Bbn, after: Bbn) -> dict[str, float]:
    """Per-variable max absolute marginal gap, by exact enumeration."""
    names = [node.name for node in before.nodes]
    if set(names) != {node.name for node in after.nodes}:
        raise ValueError("networks name different variable sets")
    for name in names:
        a = before.nodes[before.index_of(name)]
        b = after.nodes[after.index_of(name)]
        if a.outcomes != b.outcomes:
            raise ValueError(f"outcome space of {name!r} differs between networks")
    before_marg = marginals(before)
    after_marg = marginals(after)
    result = {}
    for name in names:
        rows_a = before_marg[before.index_of(name)]
        rows_b = after_marg[after.index_of(name)]
        result[name] = max(abs(x - y) for x, y in zip(rows_a, rows_b))
    return result


# ---------------------------------------------------------------------------
# File format: {"kind":..., "target":..., "vars":[...]} or {"kind":...,
# "target":..., "dist":[...]}

def change_from_dict(doc: object) -> StructuralChange:
    if not isinstance(doc, dict):
        raise FormatError("change document must be a JSON object")
    extra = set(doc) - {"kind", "target", "vars", "dist"}
    if extra:
        raise FormatError(f"unknown keys in change document: {sorted(extra)}")
    kind = doc.get("kind")
    target = doc.get("target")
    if not isinstance(kind, str):
        raise FormatError('"kind" must be a string')
    if not isinstance(target, str) or not target:
        raise FormatError('"target" must be a non-empty string')
    vars_field = doc.get("vars")
    dist_field = doc.get("dist")
    if vars_field is not None and (
        not isinstance(vars_field, list)
        or not all(isinstance(v, str) for v in vars_field)
    ):
        raise FormatError('"vars" must be a list of variable names')
    if dist_field is not None and (
        not isinstance(dist_field, list)
        or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in dist_field
        )
    ):
        raise FormatError('"dist" must be a list of numbers')
    try:
        return StructuralChange(
            kind=kind,
            target=target,
            vars=None if vars_field is None else tuple(vars_field),
            dist=None if dist_field is None else tuple(float(x) for x in dist_field),
        )
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def change_to_dict(change: StructuralChange) -> dict:
    doc: dict = {"kind": change.kind, "target": change.target}
    if change.vars is not None:
        doc["vars"] = list(change.vars)
    if change.dist is not None:
        doc["dist"] = list(change.dist)
    return doc


def load_change(path: str | Path) -> StructuralChange:
    with open(path, encoding="utf-8") as handle:
        return change_from_dict(json.load(handle))
