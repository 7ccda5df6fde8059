"""Brute-force feasibility oracle for small equality-form LPs.

Independent route for checking the simplex: a system {A x = b, signs}
with every free variable split into nonnegative parts is pointed, so it
is feasible iff some basic solution (square subsystem on an independent
row set) is feasible.  Everything runs on Fractions; sizes are tiny.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Tuple

from ratefm.lp import LpProblem


def _split_columns(problem: LpProblem):
    cols = []
    for j, col in enumerate(problem.columns):
        cols.append((j, 1))
        if not col.nonnegative:
            cols.append((j, -1))
    return cols


def _row_echelon(rows: List[Tuple[List[Fraction], Fraction]]):
    """Reduce to an independent row set; returns None when inconsistent."""
    matrix = [list(a) + [b] for a, b in rows]
    ncols = len(matrix[0]) - 1 if matrix else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c]), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = 1 / matrix[r][c]
        matrix[r] = [v * inv for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c]:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    for i in range(r, len(matrix)):
        if matrix[i][-1]:
            return None  # 0 = nonzero
    return [(row[:-1], row[-1]) for row in matrix[:r]]


def _solve_square(rows, cols) -> Optional[List[Fraction]]:
    """Solve the square system on the chosen columns by elimination."""
    m = len(rows)
    matrix = [[rows[i][0][c] for c in cols] + [rows[i][1]] for i in range(m)]
    for r in range(m):
        pivot = next((i for i in range(r, m) if matrix[i][r]), None)
        if pivot is None:
            return None
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = 1 / matrix[r][r]
        matrix[r] = [v * inv for v in matrix[r]]
        for i in range(m):
            if i != r and matrix[i][r]:
                f = matrix[i][r]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
    return [matrix[r][-1] for r in range(m)]


def brute_force_feasible(problem: LpProblem) -> bool:
    """Feasibility of {rows, column signs} by basic-solution enumeration."""
    split = _split_columns(problem)
    rows = []
    for a, b in problem.rows:
        rows.append(([Fraction(a[j]) * s for j, s in split], Fraction(b)))
    reduced = _row_echelon(rows)
    if reduced is None:
        return False
    m = len(reduced)
    if m == 0:
        return True  # only trivially-satisfied rows
    n = len(split)
    for cols in combinations(range(n), m):
        values = _solve_square(reduced, cols)
        if values is None:
            continue
        if all(v >= 0 for v in values):
            return True
    return False
