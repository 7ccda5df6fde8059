from __future__ import annotations

import random
from fractions import Fraction

import pytest

from enum_oracle import brute_force_feasible
from ratefm.lp import LpColumn, LpProblem, feasibility, solve


def F(x):
    return Fraction(x)


def test_minimize_single_variable():
    p = LpProblem(columns=[LpColumn("x")], rows=[([F(1)], F(1))], objective=[F(1)])
    out = solve(p)
    assert out.status == "optimal"
    assert out.point == {"x": F(1)}


def test_simple_infeasible_with_witness():
    p = LpProblem(columns=[LpColumn("x")], rows=[([F(1)], F(-1))])
    out = feasibility(p)
    assert out.status == "infeasible"
    assert len(out.witness) == 1
    # y.A >= 0 on the nonnegative column and y.b < 0, by hand
    y = out.witness[0]
    assert y * F(1) >= 0 and y * F(-1) < 0


def test_empty_constraint_set_feasible_at_origin():
    p = LpProblem(columns=[LpColumn("x"), LpColumn("y", nonnegative=False)], rows=[])
    out = feasibility(p)
    assert out.status == "optimal"
    assert out.point == {"x": F(0), "y": F(0)}


def test_duplicate_consistent_equalities():
    row = ([F(1), F(1)], F(2))
    p = LpProblem(columns=[LpColumn("x"), LpColumn("y")], rows=[row, row, row])
    out = feasibility(p)
    assert out.status == "optimal"


def test_free_variable_negative_solution():
    p = LpProblem(
        columns=[LpColumn("x", nonnegative=False)],
        rows=[([F(1)], F(-5))],
        objective=[F(0)],
    )
    out = solve(p)
    assert out.status == "optimal"
    assert out.point == {"x": F(-5)}


def test_unbounded_detection():
    # min -x subject to x - y = 0, x,y >= 0: ray x = y -> infinity
    p = LpProblem(
        columns=[LpColumn("x"), LpColumn("y")],
        rows=[([F(1), F(-1)], F(0))],
        objective=[F(-1), F(0)],
    )
    assert solve(p).status == "unbounded"


def test_optimum_with_fractional_data():
    # min x + y  s.t.  2x + 3y = 7, x - y = 1/2  ->  x = 17/10, y = 6/5
    p = LpProblem(
        columns=[LpColumn("x", nonnegative=False), LpColumn("y", nonnegative=False)],
        rows=[([F(2), F(3)], F(7)), ([F(1), F(-1)], Fraction(1, 2))],
        objective=[F(1), F(1)],
    )
    out = solve(p)
    assert out.status == "optimal"
    assert out.point == {"x": Fraction(17, 10), "y": Fraction(6, 5)}


def test_degenerate_instance_terminates():
    # highly degenerate: many redundant rows through the same vertex
    cols = [LpColumn(f"x{i}") for i in range(4)]
    rows = [
        ([F(1), F(1), F(0), F(0)], F(0)),
        ([F(0), F(1), F(1), F(0)], F(0)),
        ([F(1), F(0), F(1), F(0)], F(0)),
        ([F(1), F(1), F(1), F(1)], F(1)),
    ]
    out = solve(LpProblem(columns=cols, rows=rows, objective=[F(-1), F(2), F(-1), F(3)]))
    assert out.status == "optimal"
    assert out.point["x3"] == F(1)


def test_inconsistent_rank_deficient():
    rows = [([F(1), F(1)], F(1)), ([F(2), F(2)], F(3))]
    out = feasibility(LpProblem(columns=[LpColumn("x"), LpColumn("y")], rows=rows))
    assert out.status == "infeasible"


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        feasibility(LpProblem(columns=[LpColumn("x")], rows=[([F(1), F(2)], F(1))]))
    with pytest.raises(ValueError):
        solve(LpProblem(columns=[LpColumn("x")], rows=[], objective=[F(1), F(1)]))


def _random_problem(rng: random.Random) -> LpProblem:
    n = rng.randint(1, 6)
    m = rng.randint(1, min(10, n + 4))
    cols = [LpColumn(f"x{j}", nonnegative=rng.random() < 0.7) for j in range(n)]
    rows = []
    for _ in range(m):
        a = [F(rng.randint(-3, 3)) for _ in range(n)]
        b = F(rng.randint(-4, 4))
        rows.append((a, b))
    if rng.random() < 0.3 and rows:
        rows.append(rows[0])  # duplicate row for degeneracy
    return LpProblem(columns=cols, rows=rows)


def test_agreement_with_enumeration_oracle_200_instances():
    rng = random.Random(20240811)
    feasible_seen = infeasible_seen = 0
    for _ in range(200):
        p = _random_problem(rng)
        got = feasibility(p)
        expected = brute_force_feasible(p)
        assert (got.status == "optimal") == expected, p
        if expected:
            feasible_seen += 1
            assert got.point is not None  # solve() already replayed it exactly
        else:
            infeasible_seen += 1
            assert got.witness is not None  # witness replayed inside solve()
    assert feasible_seen > 20 and infeasible_seen > 20


def test_point_and_witness_replay_exactly():
    rng = random.Random(7)
    for _ in range(40):
        p = _random_problem(rng)
        out = feasibility(p)
        if out.status == "optimal":
            for a, b in p.rows:
                total = sum(
                    c * out.point[col.name] for c, col in zip(a, p.columns) if c
                )
                assert total == b
            for col in p.columns:
                if col.nonnegative:
                    assert out.point[col.name] >= 0
        else:
            y = out.witness
            yb = sum(b * y[i] for i, (_, b) in enumerate(p.rows))
            assert yb < 0
            for j, col in enumerate(p.columns):
                ya = sum(a[j] * y[i] for i, (a, _) in enumerate(p.rows))
                if col.nonnegative:
                    assert ya >= 0
                else:
                    assert ya == 0
