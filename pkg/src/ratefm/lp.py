"""Exact rational linear programming over equality constraints.

Problems arrive as  A x = b  with columns tagged nonnegative or free and
an optional objective row to minimize.  The solver is a dense two-phase
primal simplex with Bland's pivot rule (entering: lowest-index negative
reduced cost; leaving: lowest basis index among minimum ratios), which
guarantees termination on degenerate instances.  Free columns are split
internally into differences of nonnegative parts.

No floating point anywhere: arithmetic runs on gmpy2.mpq when available
(identical semantics, several times faster) and falls back to
fractions.Fraction.  Outcomes re-verify exactly:

  * optimal/feasible -> a point satisfying every row with zero residual;
  * infeasible       -> row multipliers y with y.A_j >= 0 on nonnegative
                        columns, y.A_j = 0 on free columns, and y.b < 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

try:  # pragma: no cover - exercised implicitly by every solve
    from gmpy2 import mpq as _rat
except ImportError:  # pragma: no cover
    _rat = Fraction

_ZERO = _rat(0)
_ONE = _rat(1)


class LpError(Exception):
    """Internal solver failure; never silently reported as an answer."""


@dataclass(frozen=True)
class LpColumn:
    name: str
    nonnegative: bool = True


@dataclass
class LpProblem:
    """min objective . x  subject to  rows (a . x = b)  and column signs."""

    columns: List[LpColumn]
    rows: List[Tuple[Sequence[Fraction], Fraction]] = field(default_factory=list)
    objective: Optional[Sequence[Fraction]] = None


@dataclass
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    point: Optional[Dict[str, Fraction]] = None
    witness: Optional[List[Fraction]] = None


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    """Dense simplex tableau with explicit artificial columns."""

    def __init__(self, matrix, rhs, row_signs, n_struct):
        self.m = len(matrix)
        self.n_struct = n_struct
        self.row_signs = row_signs
        # columns: structural | artificial; artificial j has id n_struct + j
        self.rows = []
        for i, row in enumerate(matrix):
            art = [_ZERO] * self.m
            art[i] = _ONE
            self.rows.append(list(row) + art)
        self.rhs = list(rhs)
        self.basis = [self.n_struct + i for i in range(self.m)]
        self.ncols = self.n_struct + self.m

    def pivot(self, r: int, jcol: int, cost: List, keep_cost: bool) -> None:
        # zero guards skip most rational work: these tableaus stay sparse
        rows, rhs = self.rows, self.rhs
        piv = rows[r][jcol]
        if not piv:
            raise LpError("zero pivot")
        inv = _ONE / piv
        prow = [v * inv if v else v for v in rows[r]]
        rows[r] = prow
        rhs[r] = rhs[r] * inv
        for i in range(self.m):
            if i == r:
                continue
            f = rows[i][jcol]
            if f:
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], prow)]
                if rhs[r]:
                    rhs[i] = rhs[i] - f * rhs[r]
        if keep_cost:
            f = cost[jcol]
            if f:
                cost[:] = [a - f * b if b else a for a, b in zip(cost, prow)]
        self.basis[r] = jcol

    def bland(self, cost: List, allowed: int) -> str:
        """Minimize cost over the current basis; `allowed` caps entering ids.

        Basic columns carry an exactly-zero reduced cost, so the entering
        scan never picks one.
        """
        while True:
            enter = -1
            for j in range(allowed):
                if cost[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best = None
            for i in range(self.m):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (
                        ratio == best and self.basis[i] < self.basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter, cost, keep_cost=True)


def _phase1(tab: _Tableau):
    """Drive artificial variables to zero; return the final phase-1 cost row."""
    # reduced costs of min(sum of artificials) with artificial basis
    cost = [_ZERO] * tab.ncols
    for j in range(tab.n_struct):
        s = _ZERO
        for i in range(tab.m):
            s += tab.rows[i][j]
        cost[j] = -s
    status = tab.bland(cost, allowed=tab.n_struct)
    if status != "optimal":  # pragma: no cover - sum of artificials is bounded below
        raise LpError("phase 1 reported unbounded")
    return cost


def _phase1_objective(tab: _Tableau):
    w = _ZERO
    for i in range(tab.m):
        if tab.basis[i] >= tab.n_struct:
            w += tab.rhs[i]
    return w


def _cleanup_artificials(tab: _Tableau, cost: List) -> None:
    """Pivot basic artificials (at level zero) out, dropping redundant rows."""
    drop = []
    for i in range(tab.m):
        if tab.basis[i] < tab.n_struct:
            continue
        pivot_col = -1
        for j in range(tab.n_struct):
            if tab.rows[i][j]:
                pivot_col = j
                break
        if pivot_col >= 0:
            tab.pivot(i, pivot_col, cost, keep_cost=True)
        else:
            drop.append(i)  # all-zero structural row: redundant constraint
    if drop:
        keep = [i for i in range(tab.m) if i not in set(drop)]
        tab.rows = [tab.rows[i] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        tab.m = len(keep)


def solve(problem: LpProblem) -> LpOutcome:
    """Exact simplex; see module docstring for the outcome contracts."""
    ncols = len(problem.columns)
    for a, _ in problem.rows:
        if len(a) != ncols:
            raise ValueError("row length does not match column count")
    if problem.objective is not None and len(problem.objective) != ncols:
        raise ValueError("objective length does not match column count")

    # split free columns into nonnegative differences
    split: List[Tuple[int, int]] = []  # (original column, sign)
    for j, col in enumerate(problem.columns):
        split.append((j, 1))
        if not col.nonnegative:
            split.append((j, -1))
    n_int = len(split)

    matrix = []
    rhs = []
    row_signs = []
    for a, b in problem.rows:
        b = _rat(b)
        row = [_rat(a[j]) if s > 0 else -_rat(a[j]) for j, s in split]
        if b < 0:
            row = [-v for v in row]
            b = -b
            row_signs.append(-1)
        else:
            row_signs.append(1)
        matrix.append(row)
        rhs.append(b)

    tab = _Tableau(matrix, rhs, row_signs, n_struct=n_int)
    cost1 = _phase1(tab)
    w = _phase1_objective(tab)
    if w > 0:
        # infeasible: read duals off the artificial reduced costs
        y = [(_ONE - cost1[tab.n_struct + i]) * tab.row_signs[i] for i in range(tab.m)]
        witness = [-_to_fraction(v) for v in y]
        _check_witness(problem, witness)
        return LpOutcome(status="infeasible", witness=witness)

    cost = cost1
    if problem.objective is not None:
        _cleanup_artificials(tab, cost1)
        cost = [_ZERO] * tab.ncols
        for jint, (j, s) in enumerate(split):
            cost[jint] = _rat(problem.objective[j]) if s > 0 else -_rat(problem.objective[j])
        # reduce against the current basis
        for i in range(tab.m):
            f = cost[tab.basis[i]]
            if f:
                row = tab.rows[i]
                for j in range(tab.ncols):
                    cost[j] = cost[j] - f * row[j]
        status = tab.bland(cost, allowed=tab.n_struct)
        if status == "unbounded":
            return LpOutcome(status="unbounded")

    values = [_ZERO] * n_int
    for i in range(tab.m):
        if tab.basis[i] < tab.n_struct:
            values[tab.basis[i]] = tab.rhs[i]
        elif tab.rhs[i]:  # pragma: no cover - phase 1 ended at zero
            raise LpError("artificial variable stuck at a positive level")
    point: Dict[str, Fraction] = {c.name: Fraction(0) for c in problem.columns}
    for jint, (j, s) in enumerate(split):
        if values[jint]:
            point[problem.columns[j].name] += (1 if s > 0 else -1) * _to_fraction(values[jint])
    _check_point(problem, point)
    return LpOutcome(status="optimal", point=point)


def feasibility(problem: LpProblem) -> LpOutcome:
    """solve() with a zero objective: pure feasibility with the same contracts."""
    return solve(LpProblem(columns=problem.columns, rows=problem.rows, objective=None))


def _check_point(problem: LpProblem, point: Dict[str, Fraction]) -> None:
    names = [c.name for c in problem.columns]
    for idx, (a, b) in enumerate(problem.rows):
        total = sum(a[j] * point[names[j]] for j in range(len(names)) if a[j])
        if total != b:
            raise LpError(f"solution violates row {idx}")
    for j, c in enumerate(problem.columns):
        if c.nonnegative and point[c.name] < 0:
            raise LpError(f"negative value on nonnegative column {c.name}")


def _check_witness(problem: LpProblem, witness: List[Fraction]) -> None:
    yb = sum(b * witness[i] for i, (_, b) in enumerate(problem.rows) if witness[i])
    if not yb < 0:
        raise LpError("infeasibility witness fails y.b < 0")
    for j, col in enumerate(problem.columns):
        ya = sum(a[j] * witness[i] for i, (a, _) in enumerate(problem.rows) if a[j] and witness[i])
        if col.nonnegative:
            if ya < 0:
                raise LpError(f"witness sign fails on column {col.name}")
        elif ya != 0:
            raise LpError(f"witness not orthogonal to free column {col.name}")
