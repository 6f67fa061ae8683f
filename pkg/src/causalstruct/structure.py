"""Structure matrices for simultaneous structural equation systems.

A system of n equations over n variables is recorded qualitatively: entry
(i, j) says only whether variable j participates in equation i.  Numeric
coefficients and functional forms are deliberately absent; self-containment
and the causal ordering depend on participation alone.  Each equation is
understood to carry its own implicit error term, which is never a column.

Equations are assumed to be solvable for the variables they mention; the
boolean representation cannot check solvability, so it is a documented
assumption rather than a verified property.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import FormatError
from .matching import hall_violator, maximum_matching

VariableId = int
EquationId = int


@dataclass(frozen=True)
class StructureMatrix:
    """Boolean incidence of variables in equations, always square.

    ``rows[i]`` is the set of variable indices participating in equation i.
    Variable and equation identity is positional; names and labels are
    carried for presentation and file IO.
    """

    variable_names: tuple[str, ...]
    equation_labels: tuple[str, ...]
    rows: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.variable_names)
        if len(self.equation_labels) != n or len(self.rows) != n:
            raise ValueError(
                f"system must be square: {n} variables, "
                f"{len(self.equation_labels)} equations, {len(self.rows)} rows"
            )
        if any(not name for name in self.variable_names):
            raise ValueError("variable names must be non-empty")
        if len(set(self.variable_names)) != n:
            raise ValueError("variable names must be distinct")
        if len(set(self.equation_labels)) != n:
            raise ValueError("equation labels must be distinct")
        for i, row in enumerate(self.rows):
            if not row:
                raise ValueError(
                    f"equation {self.equation_labels[i]!r} mentions no variables"
                )
            if any(v < 0 or v >= n for v in row):
                raise ValueError(
                    f"equation {self.equation_labels[i]!r} references a variable "
                    "index out of range"
                )

    @property
    def n(self) -> int:
        return len(self.variable_names)

    def entry(self, i: int, j: int) -> bool:
        """Whether variable j participates in equation i."""
        return j in self.rows[i]

    @cached_property
    def _name_to_var(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.variable_names)}

    @cached_property
    def _label_to_eq(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.equation_labels)}

    def variable_index(self, name: str) -> int:
        try:
            return self._name_to_var[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def equation_index(self, label: str) -> int:
        try:
            return self._label_to_eq[label]
        except KeyError:
            raise KeyError(f"unknown equation {label!r}") from None

    def permuted(self, row_perm: Iterable[int], col_perm: Iterable[int]) -> StructureMatrix:
        """Reorder equations by ``row_perm`` and variables by ``col_perm``.

        ``row_perm[k]`` names the old equation placed at new position k, and
        likewise for columns.
        """
        row_perm = tuple(row_perm)
        col_perm = tuple(col_perm)
        if sorted(row_perm) != list(range(self.n)) or sorted(col_perm) != list(range(self.n)):
            raise ValueError("permutations must cover all indices exactly once")
        new_col = {old: new for new, old in enumerate(col_perm)}
        return StructureMatrix(
            variable_names=tuple(self.variable_names[j] for j in col_perm),
            equation_labels=tuple(self.equation_labels[i] for i in row_perm),
            rows=tuple(
                frozenset(new_col[v] for v in self.rows[i]) for i in row_perm
            ),
        )

    @staticmethod
    def from_names(
        variables: Iterable[str],
        equations: Iterable[tuple[str, Iterable[str]]],
    ) -> StructureMatrix:
        """Build a matrix from variable names and (label, var names) pairs."""
        variable_names = tuple(variables)
        index = {name: i for i, name in enumerate(variable_names)}
        labels = []
        rows = []
        for label, var_names in equations:
            labels.append(label)
            try:
                rows.append(frozenset(index[name] for name in var_names))
            except KeyError as exc:
                raise ValueError(
                    f"equation {label!r} references unknown variable {exc.args[0]!r}"
                ) from None
        return StructureMatrix(variable_names, tuple(labels), tuple(rows))


@dataclass(frozen=True)
class EquationSubset:
    """A set of equations together with the variables they mention."""

    equations: frozenset[int]
    variables: frozenset[int]

    @staticmethod
    def of(matrix: StructureMatrix, equations: Iterable[int]) -> EquationSubset:
        eqs = frozenset(equations)
        return EquationSubset(eqs, variables_of(matrix, eqs))

    def describe(self, matrix: StructureMatrix) -> str:
        eqs = ", ".join(matrix.equation_labels[e] for e in sorted(self.equations))
        vs = ", ".join(matrix.variable_names[v] for v in sorted(self.variables))
        return f"{{{eqs}}} covering variables {{{vs}}}"


@dataclass(frozen=True)
class SystemReport:
    """Outcome of ``check_system`` with a witness when the check fails.

    At most one failure is needed to reject a system, but both witness kinds
    are reported when both can be derived.
    """

    matrix: StructureMatrix
    self_contained: bool
    unused_variables: tuple[int, ...] = ()
    violation: EquationSubset | None = None

    def describe(self) -> str:
        if self.self_contained:
            return "self-contained"
        parts = []
        if self.unused_variables:
            names = ", ".join(
                self.matrix.variable_names[v] for v in self.unused_variables
            )
            parts.append(f"variables in no equation: {names}")
        if self.violation is not None:
            parts.append(
                "equation subset with fewer variables than equations: "
                + self.violation.describe(self.matrix)
            )
        return "not self-contained; " + "; ".join(parts)


def variables_of(matrix: StructureMatrix, subset: Iterable[int]) -> frozenset[int]:
    """Union of the variables participating in the given equations."""
    result: set[int] = set()
    for e in subset:
        if e < 0 or e >= matrix.n:
            raise IndexError(f"equation index {e} out of range for n={matrix.n}")
        result |= matrix.rows[e]
    return frozenset(result)


def is_self_contained(matrix: StructureMatrix, subset: Iterable[int]) -> bool:
    """Whether the equations determine exactly the variables they mention.

    True iff the subset has as many variables as equations and every
    sub-subset has at least as many variables as equations.  The subset
    condition is decided by a saturating equation-to-variable matching,
    which Hall's theorem makes equivalent to checking all sub-subsets.
    """
    eqs = sorted(set(subset))
    if not eqs:
        raise ValueError("self-containment is undefined for the empty subset")
    vars_union = variables_of(matrix, eqs)
    if len(vars_union) != len(eqs):
        return False
    adjacency = [sorted(matrix.rows[e]) for e in eqs]
    match = maximum_matching(matrix.n, adjacency)
    return all(j != -1 for j in match)


def check_system(matrix: StructureMatrix) -> SystemReport:
    """Diagnose whether the full system is self-contained.

    On failure the report carries a variable that occurs in no equation
    and/or an equation subset with fewer variables than equations (a Hall
    violator recovered from the failed matching).
    """
    used = variables_of(matrix, range(matrix.n))
    unused = tuple(v for v in range(matrix.n) if v not in used)

    adjacency = [sorted(row) for row in matrix.rows]
    match = maximum_matching(matrix.n, adjacency)
    violation = None
    if any(j == -1 for j in match):
        violating = hall_violator(adjacency, match)
        violation = EquationSubset.of(matrix, violating)

    ok = not unused and violation is None
    return SystemReport(
        matrix=matrix,
        self_contained=ok,
        unused_variables=unused,
        violation=violation,
    )


# ---------------------------------------------------------------------------
# File format: {"variables": [...], "equations": [{"label":..., "vars":[...]}]}

def system_from_dict(doc: object) -> StructureMatrix:
    """Parse the system file document; list order fixes all indices."""
    if not isinstance(doc, dict):
        raise FormatError("system document must be a JSON object")
    extra = set(doc) - {"variables", "equations"}
    if extra:
        raise FormatError(f"unknown keys in system document: {sorted(extra)}")
    variables = doc.get("variables")
    equations = doc.get("equations")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise FormatError('"variables" must be a list of strings')
    if not isinstance(equations, list):
        raise FormatError('"equations" must be a list')
    parsed = []
    for k, eq in enumerate(equations):
        if not isinstance(eq, dict):
            raise FormatError(f"equation {k} must be an object")
        extra = set(eq) - {"label", "vars"}
        if extra:
            raise FormatError(f"unknown keys in equation {k}: {sorted(extra)}")
        label = eq.get("label")
        var_names = eq.get("vars")
        if not isinstance(label, str) or not label:
            raise FormatError(f'equation {k}: "label" must be a non-empty string')
        if not isinstance(var_names, list) or not all(isinstance(v, str) for v in var_names):
            raise FormatError(f'equation {label!r}: "vars" must be a list of strings')
        parsed.append((label, var_names))
    try:
        return StructureMatrix.from_names(variables, parsed)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def system_to_dict(matrix: StructureMatrix) -> dict:
    return {
        "variables": list(matrix.variable_names),
        "equations": [
            {
                "label": matrix.equation_labels[i],
                "vars": [matrix.variable_names[v] for v in sorted(matrix.rows[i])],
            }
            for i in range(matrix.n)
        ],
    }


def load_system(path: str | Path) -> StructureMatrix:
    with open(path, encoding="utf-8") as handle:
        return system_from_dict(json.load(handle))


def save_system(matrix: StructureMatrix, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(system_to_dict(matrix), handle, indent=2)
        handle.write("\n")
