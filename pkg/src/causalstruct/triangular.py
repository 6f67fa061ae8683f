"""Permuting a structure matrix to lower-triangular form.

A self-contained system can be rearranged so the matrix is lower-triangular
with a full diagonal exactly when every cluster of its causal ordering has
degree one; the diagonal then reads off which equation determines which
variable.  Feedback makes some pivot step run out of single-variable rows,
which is reported with the remaining equations as the witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CyclicStructureError, NotSelfContainedError
from .structure import StructureMatrix, check_system


@dataclass(frozen=True)
class Triangularization:
    """Row/column permutations bringing the matrix to lower-triangular form.

    ``row_perm[k]`` is the equation placed at position k, ``col_perm[k]``
    the variable on the diagonal there.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]

    @property
    def determined_by(self) -> dict[int, int]:
        """Equation index -> the variable its diagonal position determines."""
        return dict(zip(self.row_perm, self.col_perm))


def triangularize(matrix: StructureMatrix) -> Triangularization:
    """Pivot single-variable rows to the diagonal until none remain.

    At each step the rows are scanned for one with exactly one participation
    among the not-yet-pivoted columns; ties go to the lowest equation index.
    Raises ``CyclicStructureError`` with the unplaced equations if no such
    row exists, and ``NotSelfContainedError`` if the system fails the
    entry precondition.
    """
    report = check_system(matrix)
    if not report.self_contained:
        raise NotSelfContainedError(report.describe(), report)

    remaining_eqs = list(range(matrix.n))
    remaining_vars = set(range(matrix.n))
    row_perm: list[int] = []
    col_perm: list[int] = []
    for _ in range(matrix.n):
        pivot = None
        for e in remaining_eqs:
            live = matrix.rows[e] & remaining_vars
            if len(live) == 1:
                pivot = (e, next(iter(live)))
                break
        if pivot is None:
            raise CyclicStructureError(frozenset(remaining_eqs))
        e, v = pivot
        row_perm.append(e)
        col_perm.append(v)
        remaining_eqs.remove(e)
        remaining_vars.remove(v)
    return Triangularization(tuple(row_perm), tuple(col_perm))


def is_triangularizable(matrix: StructureMatrix) -> bool:
    """Whether the system can be rearranged to lower-triangular form."""
    try:
        triangularize(matrix)
    except CyclicStructureError:
        return False
    return True
