"""Threshold-equation systems: deterministic equations with latent uniforms.

A discrete network is rewritten as one equation per variable.  The equation
for y carries a private latent variable, uniform on (0, 1], and a table of
cumulative thresholds, one row per parent configuration: with row
(c_1, ..., c_k), outcome j is selected exactly when the latent falls in
(c_{j-1}, c_j].  Interval lengths therefore reproduce the conditional
probabilities, making the equation system and the source network agree on
the full joint distribution, which ``check_equivalence`` verifies by
enumeration.

Thresholds are cumulative sums of the conditional rows.  The final
threshold is clamped to exactly 1.0 (after checking it lands within 1e-9 of
1) so that a latent drawn at 1.0 always selects the last outcome with a
non-empty interval.  Zero-probability entries yield empty intervals, which
no latent can hit.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Mapping, Sequence

from .bbn import Assignment, Bbn, config_index, joint_probability, validate
from .errors import FormatError, InvalidBbnError
from .ordering import causal_ordering
from .structure import StructureMatrix
from .graphs import topological_order as _topo

FINAL_THRESHOLD_TOLERANCE = 1e-9

MAX_ENUMERABLE_CONFIGURATIONS = 2 ** 20


@dataclass(frozen=True)
class ThresholdEquation:
    """Deterministic equation for one variable.

    ``thresholds[r]`` holds the cumulative outcome thresholds used when the
    parents take the configuration of mixed-radix rank r (first parent most
    significant, matching the conditional-table row order).
    """

    target: int
    parents: tuple[int, ...]
    thresholds: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.thresholds:
            raise ValueError("an equation needs at least one threshold row")
        width = len(self.thresholds[0])
        if width < 2:
            raise ValueError("threshold rows need at least two outcomes")
        clamped = []
        for r, row in enumerate(self.thresholds):
            if len(row) != width:
                raise ValueError(f"threshold row {r} has inconsistent length")
            if any(b < a for a, b in zip(row, row[1:])):
                raise ValueError(f"threshold row {r} is not non-decreasing")
            if row[0] < 0.0:
                raise ValueError(f"threshold row {r} has a negative entry")
            if abs(row[-1] - 1.0) > FINAL_THRESHOLD_TOLERANCE:
                raise ValueError(
                    f"threshold row {r} ends at {row[-1]!r}, not 1"
                )
            # Clamping keeps a latent of exactly 1.0 inside the last interval;
            # min() guards entries that overshoot 1 within the tolerance.
            clamped.append(tuple(min(c, 1.0) for c in row[:-1]) + (1.0,))
        object.__setattr__(self, "thresholds", tuple(clamped))

    @property
    def outcome_count(self) -> int:
        return len(self.thresholds[0])


@dataclass(frozen=True)
class ThresholdEquationSystem:
    """One threshold equation per variable, each with its own latent.

    Equation i targets variable i; the latent variables are mutually
    independent and never shared between equations.
    """

    variable_names: tuple[str, ...]
    equations: tuple[ThresholdEquation, ...]

    def __post_init__(self):
        if len(self.variable_names) != len(self.equations):
            raise ValueError("need exactly one equation per variable")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise ValueError("variable names must be distinct")
        n = len(self.equations)
        for i, eq in enumerate(self.equations):
            if eq.target != i:
                raise ValueError(f"equation {i} targets variable {eq.target}")
            for p in eq.parents:
                if p < 0 or p >= n or p == i:
                    raise ValueError(
                        f"equation for {self.variable_names[i]!r} has a bad "
                        f"parent index {p}"
                    )
        for i, eq in enumerate(self.equations):
            expected = math.prod(self.equations[p].outcome_count for p in eq.parents)
            if len(eq.thresholds) != expected:
                raise ValueError(
                    f"equation for {self.variable_names[i]!r} needs {expected} "
                    f"threshold rows, found {len(eq.thresholds)}"
                )

    @property
    def n(self) -> int:
        return len(self.equations)

    def outcome_counts(self) -> tuple[int, ...]:
        return tuple(eq.outcome_count for eq in self.equations)

    @cached_property
    def evaluation_order(self) -> tuple[int, ...]:
        """Topological order of targets; raises ``CycleError`` on feedback."""
        return tuple(_topo(self.n, [eq.parents for eq in self.equations]))

    def index_of(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None


def bbn_to_sem(bbn: Bbn) -> ThresholdEquationSystem:
    """Rewrite a valid network as a threshold-equation system.

    Parentless nodes get a single row built from their prior; every row is
    the cumulative sum of the corresponding conditional row.
    """
    report = validate(bbn)
    if not report.valid:
        raise InvalidBbnError(report.describe(), report)
    equations = []
    for i, node in enumerate(bbn.nodes):
        rows = []
        for row in node.cpt:
            acc = 0.0
            cumulative = []
            for p in row:
                acc += p
                cumulative.append(acc)
            rows.append(tuple(cumulative))
        equations.append(
            ThresholdEquation(target=i, parents=node.parents, thresholds=tuple(rows))
        )
    return ThresholdEquationSystem(
        variable_names=tuple(node.name for node in bbn.nodes),
        equations=tuple(equations),
    )


def evaluate(
    sem: ThresholdEquationSystem, latents: Mapping[int, float]
) -> Assignment:
    """Resolve every variable from the latent draws, parents first.

    Outcome j is selected for variable v when ``latents[v]`` lies in
    (c_{j-1}, c_j] of the threshold row picked by v's parent values.
    """
    for v in range(sem.n):
        u = latents[v]
        if not 0.0 < u <= 1.0:
            raise ValueError(
                f"latent for {sem.variable_names[v]!r} is {u!r}, outside (0, 1]"
            )
    values = [0] * sem.n
    for v in sem.evaluation_order:
        eq = sem.equations[v]
        radices = [sem.equations[p].outcome_count for p in eq.parents]
        row = eq.thresholds[config_index(radices, [values[p] for p in eq.parents])]
        values[v] = bisect_left(row, latents[v])
    return tuple(values)


def sem_joint(sem: ThresholdEquationSystem, assignment: Sequence[int]) -> float:
    """Probability of a total assignment: product of selected interval lengths."""
    if len(assignment) != sem.n:
        raise ValueError(f"assignment covers {len(assignment)} of {sem.n} variables")
    p = 1.0
    for eq in sem.equations:
        radices = [sem.equations[q].outcome_count for q in eq.parents]
        row = eq.thresholds[config_index(radices, [assignment[q] for q in eq.parents])]
        j = assignment[eq.target]
        p *= row[j] - (row[j - 1] if j else 0.0)
    return p


def check_equivalence(bbn: Bbn, sem: ThresholdEquationSystem) -> float:
    """Max absolute joint-probability gap between network and equation system."""
    report = validate(bbn)
    if not report.valid:
        raise InvalidBbnError(report.describe(), report)
    if tuple(node.name for node in bbn.nodes) != sem.variable_names:
        raise ValueError("network and equation system name different variables")
    counts = bbn.outcome_counts()
    if counts != sem.outcome_counts():
        raise ValueError("network and equation system disagree on outcome counts")
    total = math.prod(counts)
    if total > MAX_ENUMERABLE_CONFIGURATIONS:
        raise ValueError(
            f"{total} joint configurations exceed the enumeration bound "
            f"{MAX_ENUMERABLE_CONFIGURATIONS}"
        )
    worst = 0.0
    for assignment in product(*(range(k) for k in counts)):
        gap = abs(joint_probability(bbn, assignment) - sem_joint(sem, assignment))
        if gap > worst:
            worst = gap
    return worst


def sample(
    sem: ThresholdEquationSystem, seed: int, count: int
) -> Counter[Assignment]:
    """Tally ``count`` forward evaluations under seeded latent draws.

    The generator is the stdlib Mersenne Twister (``random.Random``); each
    draw takes one uniform per variable in ascending variable order, mapped
    from [0, 1) to (0, 1].  Fixed (seed, count) reproduces tallies exactly.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = random.Random(seed)
    n = sem.n
    plan = []
    for v in sem.evaluation_order:
        eq = sem.equations[v]
        radices = tuple(sem.equations[p].outcome_count for p in eq.parents)
        plan.append((v, eq.parents, radices, eq.thresholds))
    counts: Counter[Assignment] = Counter()
    values = [0] * n
    for _ in range(count):
        latents = [1.0 - rng.random() for _ in range(n)]
        for v, parents, radices, rows in plan:
            r = 0
            for p, k in zip(parents, radices):
                r = r * k + values[p]
            values[v] = bisect_left(rows[r], latents[v])
        counts[tuple(values)] += 1
    return counts


def sem_structure(sem: ThresholdEquationSystem) -> StructureMatrix:
    """Participation matrix: each equation involves its target and parents.

    Latent variables stay implicit; they are never columns.
    """
    return StructureMatrix(
        variable_names=sem.variable_names,
        equation_labels=tuple(f"f_{name}" for name in sem.variable_names),
        rows=tuple(
            frozenset((eq.target, *eq.parents)) for eq in sem.equations
        ),
    )


def roundtrip_check(bbn: Bbn) -> bool:
    """Whether the ordering of the derived equation system restores the DAG.

    True iff every cluster has degree one and the variable-level precedence
    edges equal the network's arcs exactly.
    """
    sem = bbn_to_sem(bbn)
    ordering = causal_ordering(sem_structure(sem))
    if any(cluster.degree != 1 for cluster in ordering.clusters):
        return False
    return ordering.variable_edges == bbn.edges


# ---------------------------------------------------------------------------
# File format:
# {"equations": [{"target":..., "parents":[...], "thresholds":[[...],...]}]}
# Equation order fixes variable indices; row order matches the conditional-
# table convention (first parent most significant).

def sem_from_dict(doc: object) -> ThresholdEquationSystem:
    if not isinstance(doc, dict):
        raise FormatError("equation-system document must be a JSON object")
    extra = set(doc) - {"equations"}
    if extra:
        raise FormatError(f"unknown keys in equation-system document: {sorted(extra)}")
    raw_eqs = doc.get("equations")
    if not isinstance(raw_eqs, list):
        raise FormatError('"equations" must be a list')

    names: list[str] = []
    for k, raw in enumerate(raw_eqs):
        if not isinstance(raw, dict) or not isinstance(raw.get("target"), str):
            raise FormatError(f'equation {k}: missing or non-string "target"')
        names.append(raw["target"])
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise FormatError("equation targets must be distinct")

    equations = []
    for i, raw in enumerate(raw_eqs):
        target = names[i]
        extra = set(raw) - {"target", "parents", "thresholds"}
        if extra:
            raise FormatError(f"equation {target!r}: unknown keys {sorted(extra)}")
        parents = raw.get("parents")
        thresholds = raw.get("thresholds")
        if not isinstance(parents, list) or not all(isinstance(p, str) for p in parents):
            raise FormatError(f'equation {target!r}: "parents" must be a list of names')
        unknown = [p for p in parents if p not in index]
        if unknown:
            raise FormatError(f"equation {target!r}: unknown parent {unknown[0]!r}")
        if not isinstance(thresholds, list):
            raise FormatError(f'equation {target!r}: "thresholds" must be a list of rows')
        rows = []
        for r, row in enumerate(thresholds):
            if not isinstance(row, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in row
            ):
                raise FormatError(
                    f"equation {target!r}: threshold row {r} must be a list of numbers"
                )
            rows.append(tuple(float(x) for x in row))
        try:
            equations.append(
                ThresholdEquation(
                    target=i,
                    parents=tuple(index[p] for p in parents),
                    thresholds=tuple(rows),
                )
            )
        except ValueError as exc:
            raise FormatError(f"equation {target!r}: {exc}") from None
    try:
        return ThresholdEquationSystem(tuple(names), tuple(equations))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def sem_to_dict(sem: ThresholdEquationSystem) -> dict:
    return {
        "equations": [
            {
                "target": sem.variable_names[eq.target],
                "parents": [sem.variable_names[p] for p in eq.parents],
                "thresholds": [list(row) for row in eq.thresholds],
            }
            for eq in sem.equations
        ]
    }


def load_sem(path: str | Path) -> ThresholdEquationSystem:
    with open(path, encoding="utf-8") as handle:
        return sem_from_dict(json.load(handle))


def save_sem(sem: ThresholdEquationSystem, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(sem_to_dict(sem), handle, indent=2)
        handle.write("\n")
