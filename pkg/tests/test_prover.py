from __future__ import annotations

from fractions import Fraction

import pytest

from ratefm import (
    GroundSet,
    InequalitySystem,
    RateVar,
    build_master_region,
    build_target_region,
    eliminate_variable,
    is_redundant,
    joint_entropy,
    mutual_information,
    prove_nonneg,
    prune,
    shannon_context,
)
from ratefm.elimination import bound_letters, bound_numbers
from ratefm.prover import verify_nonneg, verify_redundancy


@pytest.fixture(scope="module")
def ctx3():
    return shannon_context(GroundSet(3))


def step2_system():
    """System state right after the second elimination (no pruning needed
    before it: the first prune round removes nothing)."""
    sys0 = build_master_region(3)
    letters, numbers = bound_letters(), bound_numbers()
    sys1, _ = eliminate_variable(sys0, RateVar(1, "g"), letters, numbers)
    sys2, _ = eliminate_variable(sys1, RateVar(2, "g"), letters, numbers)
    return sys2


def test_prove_elemental_is_itself(ctx3):
    gs = ctx3.ground
    f = mutual_information(gs.x_mask([1]), gs.x_mask([2]), gs.y | gs.x_mask([3]))
    cert = prove_nonneg(f, ctx3)
    assert cert is not None
    assert verify_nonneg(cert, f, ctx3)
    assert not cert.combo
    assert list(cert.elemental_weights.values()) == [Fraction(1)]
    assert not cert.hypothesis_weights and not cert.independence_weights


def test_prove_conditioning_drop_under_independence(ctx3):
    gs = ctx3.ground
    x1, x3 = gs.x_mask([1]), gs.x_mask([3])
    f = mutual_information(x1, gs.y, gs.x_mask([2, 3])) - mutual_information(x1, gs.y, x3)
    cert = prove_nonneg(f, ctx3)
    assert cert is not None
    assert verify_nonneg(cert, f, ctx3)
    assert cert.independence_weights  # needs the product-input structure


def test_prove_hypothesis_member(ctx3):
    gs = ctx3.ground
    f = mutual_information(gs.x_mask([1, 2]), gs.y, gs.x_mask([3])) - mutual_information(
        gs.x_mask([1, 2]), gs.z
    )
    cert = prove_nonneg(f, ctx3)
    assert cert is not None
    assert verify_nonneg(cert, f, ctx3)
    assert list(cert.hypothesis_weights.values()) == [Fraction(1)]
    assert not cert.elemental_weights and not cert.independence_weights


def test_not_provable_cases(ctx3):
    gs = ctx3.ground
    assert prove_nonneg(joint_entropy(gs.x_mask([1])) - joint_entropy(gs.x_mask([2])), ctx3) is None
    # reversed hypothesis direction
    x1 = gs.x_mask([1])
    rev = mutual_information(x1, gs.z) - mutual_information(x1, gs.y, gs.x_mask([2, 3]))
    assert prove_nonneg(rev, ctx3) is None


def test_prove_rejects_foreign_ground_set(ctx3):
    big = GroundSet(4)
    f = joint_entropy(big.full)
    with pytest.raises(ValueError):
        prove_nonneg(f, ctx3)


def test_e9_redundant_via_b3(ctx3):
    sys2 = step2_system()
    e9 = sys2.get("e9")
    cert = is_redundant(e9, sys2.without("e9"), ctx3)
    assert cert is not None
    assert verify_redundancy(cert, e9, sys2.without("e9"), ctx3)
    assert cert.combo == {"b3": Fraction(1)}


def test_b3_not_redundant_in_final(ctx3):
    from k3_golden import golden_final

    final = build_target_region(3)
    b3 = {q.label: q for q in golden_final()}["b3"]
    others = InequalitySystem(final.ground, (q for q in final if q.key() != b3.key()))
    assert is_redundant(b3, others, ctx3) is None


def test_exact_duplicate_is_trivially_redundant(ctx3):
    sys3 = build_master_region(3)
    twin = sys3.get("(4)").relabeled("copy")
    cert = is_redundant(twin, sys3, ctx3)
    assert cert is not None
    assert cert.combo == {"(4)": Fraction(1)}
    assert not cert.elemental_weights
    assert not cert.hypothesis_weights
    assert not cert.independence_weights
    assert verify_redundancy(cert, twin, sys3, ctx3)


def test_is_redundant_rejects_member_target(ctx3):
    sys3 = build_master_region(3)
    with pytest.raises(ValueError):
        is_redundant(sys3.get("(4)"), sys3, ctx3)


def test_prune_keeps_target_region_untouched(ctx3):
    target = build_target_region(3)
    pruned, events = prune(target, ctx3)
    assert not events
    assert pruned.labels() == target.labels()


def test_prune_is_idempotent_on_step2(ctx3):
    sys2 = step2_system()
    once, events = prune(sys2, ctx3)
    assert events
    twice, events2 = prune(once, ctx3)
    assert not events2
    assert twice.labels() == once.labels()


def test_prune_certificates_replay(ctx3):
    sys2 = step2_system()
    pruned, events = prune(sys2, ctx3)
    assert events
    # each removal was certified against the members still present at that
    # moment: everything except the candidate and the previously removed
    removed_so_far = set()
    for label, cert in events:
        target = sys2.get(label)
        reference = InequalitySystem(
            sys2.ground,
            (q for q in sys2 if q.label != label and q.label not in removed_so_far),
        )
        assert verify_redundancy(cert, target, reference, ctx3), label
        removed_so_far.add(label)


def test_verify_rejects_tampered_certificate(ctx3):
    sys2 = step2_system()
    e9 = sys2.get("e9")
    others = sys2.without("e9")
    cert = is_redundant(e9, others, ctx3)
    cert.combo["b3"] = Fraction(2)
    assert not verify_redundancy(cert, e9, others, ctx3)
