"""Exact rational linear feasibility with Farkas certificates.

Decides whether M p = d has a solution p >= 0, by a phase-one simplex over
`fractions.Fraction` with Bland's anti-cycling rule.  Infeasible problems
yield a dual vector y with y^T M <= 0 and y^T d > 0, extracted from the
final tableau; both outcomes are checkable by `verify` with no access to
solver state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class FeasibilityProblem:
    """Find p >= 0 with matrix @ p == rhs (all entries Fraction)."""

    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.matrix) != len(self.rhs):
            raise ValueError(
                f"{len(self.matrix)} rows but {len(self.rhs)} rhs entries"
            )
        widths = {len(row) for row in self.matrix}
        if len(widths) > 1:
            raise ValueError("ragged constraint matrix")

    @property
    def num_rows(self) -> int:
        return len(self.matrix)

    @property
    def num_cols(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0


@dataclass(frozen=True)
class FeasibleSolution:
    p: tuple[Fraction, ...]


@dataclass(frozen=True)
class FarkasCertificate:
    y: tuple[Fraction, ...]


def make_problem(matrix, rhs) -> FeasibilityProblem:
    return FeasibilityProblem(
        matrix=tuple(tuple(Fraction(v) for v in row) for row in matrix),
        rhs=tuple(Fraction(v) for v in rhs),
    )


def solve_feasibility(
    problem: FeasibilityProblem,
) -> FeasibleSolution | FarkasCertificate:
    """Phase-one simplex; deterministic for a fixed problem (Bland's rule)."""
    m, n = problem.num_rows, problem.num_cols

    # Flip rows so the rhs is nonnegative; remember flips to map the
    # certificate back to original coordinates.
    flip = [(-1 if problem.rhs[i] < 0 else 1) for i in range(m)]
    # Tableau columns: n original variables, m artificials, then rhs.
    tab = [
        [flip[i] * v for v in problem.matrix[i]]
        + [ONE if j == i else ZERO for j in range(m)]
        + [flip[i] * problem.rhs[i]]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]

    # Objective: minimize the sum of artificials.  Reduced-cost row starts
    # as c - sum of constraint rows on the artificial basis.
    obj = [ZERO] * (n + m) + [ZERO]
    for j in range(n + m):
        cj = ZERO if j < n else ONE
        obj[j] = cj - sum(tab[i][j] for i in range(m))
    obj[n + m] = -sum(tab[i][n + m] for i in range(m))

    while True:
        # Bland: lowest-index column with negative reduced cost.
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        # Ratio test; ties broken by lowest basic variable index (Bland).
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][n + m] / tab[i][enter]
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            # Phase-one objective is bounded below by 0; unboundedness
            # cannot happen for well-formed input.
            raise RuntimeError("phase-one simplex reported unbounded")
        pivot = tab[leave][enter]
        tab[leave] = [v / pivot for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tab[leave])]
        basis[leave] = enter

    if obj[n + m] == 0:
        p = [ZERO] * n
        for i, b in enumerate(basis):
            if b < n:
                p[b] = tab[i][n + m]
        return FeasibleSolution(p=tuple(p))

    # Infeasible: the optimal dual of the phase-one LP is a Farkas vector.
    # Artificial column j of the final tableau holds B^{-1} e_j, so the
    # dual value is y_j = c_j - obj[n + j] = 1 - obj[n + j]; undo row flips.
    y = tuple(flip[i] * (ONE - obj[n + i]) for i in range(m))
    return FarkasCertificate(y=y)


def verify(
    problem: FeasibilityProblem,
    outcome: FeasibleSolution | FarkasCertificate,
) -> bool:
    """Re-check the defining (in)equalities exactly, independent of the solver."""
    m, n = problem.num_rows, problem.num_cols
    if isinstance(outcome, FeasibleSolution):
        if len(outcome.p) != n or any(v < 0 for v in outcome.p):
            return False
        for row, d in zip(problem.matrix, problem.rhs):
            if sum(r * v for r, v in zip(row, outcome.p)) != d:
                return False
        return True
    if isinstance(outcome, FarkasCertificate):
        if len(outcome.y) != m:
            return False
        for j in range(n):
            if sum(outcome.y[i] * problem.matrix[i][j] for i in range(m)) > 0:
                return False
        return sum(y * d for y, d in zip(outcome.y, problem.rhs)) > 0
    return False
