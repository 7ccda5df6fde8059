from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3_golden import golden_final, golden_master
from ratefm import (
    EntropyFunctional,
    GroundSet,
    InequalitySystem,
    RateInequality,
    RateVar,
    build_master_region,
    build_target_region,
    mutual_information,
    system_equal,
)
from ratefm.entropy import ZERO
from ratefm.regions import dedupe, parse_rate_var, var_key


def test_count_laws():
    for k in range(1, 6):
        assert len(build_master_region(k)) == 2 * (2**k - 1) + k
        assert len(build_target_region(k)) == 3**k - 1


def test_builders_reject_bad_k():
    with pytest.raises(ValueError):
        build_master_region(0)
    with pytest.raises(ValueError):
        build_target_region(0)


def test_master_k1():
    gs = GroundSet(1)
    x1 = gs.x_mask([1])
    expected = InequalitySystem(
        gs,
        [
            RateInequality(
                {RateVar(1, "s"): 1, RateVar(1, "o"): 1, RateVar(1, "g"): 1},
                mutual_information(x1, gs.y),
                "u",
            ),
            RateInequality({RateVar(1, "g"): -1}, ZERO, "g"),
            RateInequality(
                {RateVar(1, "o"): -1, RateVar(1, "g"): -1},
                -mutual_information(x1, gs.z),
                "z",
            ),
        ],
    )
    assert system_equal(build_master_region(1), expected)


def test_target_k1():
    gs = GroundSet(1)
    x1 = gs.x_mask([1])
    expected = InequalitySystem(
        gs,
        [
            RateInequality(
                {RateVar(1, "s"): 1, RateVar(1, "o"): 1}, mutual_information(x1, gs.y), "a"
            ),
            RateInequality(
                {RateVar(1, "s"): 1},
                mutual_information(x1, gs.y) - mutual_information(x1, gs.z),
                "b",
            ),
        ],
    )
    assert system_equal(build_target_region(1), expected)


def test_master_k3_matches_golden_one_for_one():
    built = build_master_region(3)
    golden = golden_master()
    assert len(built) == len(golden) == 17
    built_by_key = {q.key(): q.label for q in built}
    for g in golden:
        assert g.key() in built_by_key, f"missing {g.label}"
        assert built_by_key[g.key()] == g.label
    assert built.labels() == tuple(f"({i})" for i in range(3, 20))


def test_target_k3_matches_golden_set():
    built = build_target_region(3)
    golden = InequalitySystem(GroundSet(3), golden_final())
    assert system_equal(built, golden)


def test_target_never_mentions_garbage():
    for k in (1, 2, 3, 4):
        for q in build_target_region(k):
            assert all(v.kind != "g" for v in q.lhs)


def test_system_equal_ignores_order_and_labels():
    sys3 = build_master_region(3)
    shuffled = list(sys3)
    random.Random(5).shuffle(shuffled)
    relabeled = [q.relabeled(f"row{i}") for i, q in enumerate(shuffled)]
    assert system_equal(sys3, InequalitySystem(sys3.ground, relabeled))


def test_system_equal_mismatched_ground_sets():
    with pytest.raises(ValueError):
        system_equal(build_master_region(2), build_master_region(3))


def test_master_vs_target_differ():
    assert not system_equal(build_master_region(3), build_target_region(3))


def test_duplicate_content_rejected():
    gs = GroundSet(1)
    q = RateInequality({RateVar(1, "s"): 1}, mutual_information(gs.x_mask([1]), gs.y), "a")
    with pytest.raises(ValueError):
        InequalitySystem(gs, [q, q.relabeled("b")])


def test_duplicate_label_rejected():
    gs = GroundSet(1)
    x1 = gs.x_mask([1])
    q1 = RateInequality({RateVar(1, "s"): 1}, mutual_information(x1, gs.y), "a")
    q2 = RateInequality({RateVar(1, "o"): 1}, mutual_information(x1, gs.y), "a")
    with pytest.raises(ValueError):
        InequalitySystem(gs, [q1, q2])


def test_dedupe_reports_twin():
    gs = GroundSet(1)
    q = RateInequality({RateVar(1, "s"): 1}, mutual_information(gs.x_mask([1]), gs.y), "a")
    kept, dropped = dedupe([q, q.relabeled("b")])
    assert [x.label for x in kept] == ["a"]
    assert [(x.label, twin) for x, twin in dropped] == [("b", "a")]


def test_normalization_scales_to_integer_gcd_one():
    gs = GroundSet(2)
    f = mutual_information(gs.x_mask([1]), gs.y)
    q = RateInequality(
        {RateVar(1, "s"): Fraction(2, 3), RateVar(2, "s"): Fraction(4, 3)},
        f * Fraction(2, 3),
        "q",
    )
    assert q.lhs == {RateVar(1, "s"): 1, RateVar(2, "s"): 2}
    assert q.rhs == f


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(
    st.dictionaries(
        st.tuples(st.integers(1, 3), st.sampled_from("sog")).map(lambda t: RateVar(*t)),
        coeffs,
        max_size=5,
    ),
    st.dictionaries(st.integers(1, 31), coeffs, max_size=4),
)
def test_normalization_idempotent(lhs, rhs_coeffs):
    q = RateInequality(lhs, EntropyFunctional(rhs_coeffs), "q")
    again = RateInequality(q.lhs, q.rhs, "q")
    assert again.key() == q.key()


def test_parse_rate_var_round_trip():
    for v in (RateVar(1, "s"), RateVar(12, "o"), RateVar(3, "g")):
        assert parse_rate_var(v.name) == v
    with pytest.raises(ValueError):
        parse_rate_var("R1x")
    assert var_key(RateVar(1, "g")) < var_key(RateVar(2, "s"))


def test_system_json_round_trip():
    for k in (1, 3):
        sys_k = build_master_region(k)
        again = InequalitySystem.from_json(sys_k.to_json())
        assert system_equal(sys_k, again)
        assert again.labels() == sys_k.labels()
