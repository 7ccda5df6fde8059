"""Fourier-Motzkin elimination of garbage rates with a full derivation trace.

Eliminating a variable partitions the system into upper bounds (positive
coefficient), lower bounds (negative) and neutrals.  Bounds are scaled so
the eliminated coefficient is +1/-1; every upper/lower pair is summed to
cancel the variable.  Upper bounds take letter labels a, b, c, ... (with
the lowercase el replaced by L, which reads badly next to digit labels)
and lower bounds take number labels 1, 2, 3, ...; the pairing of upper x
with lower n is labelled "xn".  Label counters run across steps, so a
run's derived labels are globally unique.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .entropy import GroundSet, ShannonContext, shannon_context
from .prover import Certificate, is_redundant, prune
from .regions import (
    InequalitySystem,
    RateInequality,
    RateVar,
    build_master_region,
    build_target_region,
    combine,
    dedupe,
    parse_rate_var,
    system_equal,
    var_key,
)

_LETTERS = "abcdefghijkLmnopqrstuvwxyz"


def bound_letters() -> Iterator[str]:
    """a, b, ..., z (el written as L), then aa, ab, ... for deep runs."""
    yield from _LETTERS
    for width in itertools.count(2):
        for combo in itertools.product(_LETTERS, repeat=width):
            yield "".join(combo)


def bound_numbers() -> Iterator[str]:
    return (str(i) for i in itertools.count(1))


@dataclass(frozen=True)
class Pairing:
    upper: str  # letter label of the upper bound
    lower: str  # number label of the lower bound
    result: RateInequality  # labelled upper+lower, normalized


@dataclass(frozen=True)
class EliminationStep:
    variable: RateVar
    uppers: Tuple[Tuple[str, str], ...]  # (letter, source inequality label)
    lowers: Tuple[Tuple[str, str], ...]  # (number, source inequality label)
    neutrals: Tuple[str, ...]  # labels carried through unchanged
    pairings: Tuple[Pairing, ...]
    duplicates: Tuple[Tuple[str, str], ...] = ()  # (dropped label, twin label)


@dataclass(frozen=True)
class PruneEvent:
    step: int  # 1-based elimination step the removal happened after
    label: str
    certificate: Certificate


@dataclass(frozen=True)
class Trace:
    k: int
    order: Tuple[RateVar, ...]
    steps: Tuple[EliminationStep, ...]
    prune_events: Tuple[PruneEvent, ...]
    final: InequalitySystem


def eliminate_variable(
    sys: InequalitySystem,
    v: RateVar,
    letters: Optional[Iterator[str]] = None,
    numbers: Optional[Iterator[str]] = None,
) -> Tuple[InequalitySystem, EliminationStep]:
    """One elimination step.  A variable absent from the system yields the
    identity step with empty bound lists and pairings."""
    letters = letters if letters is not None else bound_letters()
    numbers = numbers if numbers is not None else bound_numbers()

    uppers: List[Tuple[str, RateInequality]] = []
    lowers: List[Tuple[str, RateInequality]] = []
    neutrals: List[RateInequality] = []
    for q in sys:
        c = q.coefficient(v)
        if c > 0:
            uppers.append((next(letters), q))
        elif c < 0:
            lowers.append((next(numbers), q))
        else:
            neutrals.append(q)

    pairings: List[Pairing] = []
    for letter, up in uppers:
        up_lhs, up_rhs = up.scaled(1 / up.coefficient(v))
        for number, low in lowers:
            low_lhs, low_rhs = low.scaled(-1 / low.coefficient(v))
            lhs = dict(up_lhs)
            for var, c in low_lhs.items():
                lhs[var] = lhs.get(var, Fraction(0)) + c
            assert not lhs.get(v), "eliminated variable must cancel"
            result = RateInequality(lhs, up_rhs + low_rhs, f"{letter}{number}")
            pairings.append(Pairing(upper=letter, lower=number, result=result))

    kept, dropped = dedupe(neutrals + [p.result for p in pairings])
    out = InequalitySystem(sys.ground, kept)
    step = EliminationStep(
        variable=v,
        uppers=tuple((letter, q.label) for letter, q in uppers),
        lowers=tuple((number, q.label) for number, q in lowers),
        neutrals=tuple(q.label for q in neutrals),
        pairings=tuple(pairings),
        duplicates=tuple((q.label, twin) for q, twin in dropped),
    )
    return out, step


def default_order(sys: InequalitySystem) -> Tuple[RateVar, ...]:
    """Garbage variables present in the system, ascending user index."""
    return tuple(v for v in sys.variables() if v.kind == "g")


def eliminate_all(
    sys: InequalitySystem,
    variables: Optional[Sequence[RateVar]] = None,
    prune_steps: bool = True,
    ctx: Optional[ShannonContext] = None,
) -> Tuple[InequalitySystem, Trace]:
    """Eliminate the variables in order, optionally pruning redundant
    inequalities (with certificates) after every step."""
    order = tuple(variables) if variables is not None else default_order(sys)
    if len(set(order)) != len(order):
        raise ValueError("elimination variables must be distinct")
    if prune_steps and ctx is None:
        ctx = shannon_context(sys.ground)

    letters = bound_letters()
    numbers = bound_numbers()
    steps: List[EliminationStep] = []
    events: List[PruneEvent] = []
    current = sys
    for step_no, v in enumerate(order, start=1):
        current, step = eliminate_variable(current, v, letters, numbers)
        steps.append(step)
        for label, twin in step.duplicates:
            events.append(
                PruneEvent(step=step_no, label=label,
                           certificate=Certificate(combo={twin: Fraction(1)}))
            )
        if prune_steps:
            current, removals = prune(current, ctx)
            events.extend(
                PruneEvent(step=step_no, label=label, certificate=cert)
                for label, cert in removals
            )
    trace = Trace(
        k=sys.ground.k,
        order=order,
        steps=tuple(steps),
        prune_events=tuple(events),
        final=current,
    )
    return current, trace


def mutually_implied(
    a: InequalitySystem, b: InequalitySystem, ctx: ShannonContext
) -> bool:
    """True iff each system's inequalities are certified redundant given
    the other (same polyhedron over the admissible cone)."""
    for target_sys, reference in ((a, b), (b, a)):
        for q in target_sys:
            candidate = q
            if any(r.label == q.label for r in reference):
                candidate = q.relabeled(q.label + "'")
            if is_redundant(candidate, reference, ctx) is None:
                return False
    return True


def project_and_verify(k: int, ctx: Optional[ShannonContext] = None) -> bool:
    """Eliminate all garbage rates from the k-user master region with
    pruning and compare against the directly-built target region.

    Set equality decides; if the normalized sets differ, mutual
    implication over the cone is checked as a safety net.
    """
    master = build_master_region(k)
    if ctx is None:
        ctx = shannon_context(master.ground)
    final, _ = eliminate_all(master, prune_steps=True, ctx=ctx)
    target = build_target_region(k)
    if system_equal(final, target):
        return True
    return mutually_implied(final, target, ctx)


# ---------------------------------------------------------------------------
# trace (de)serialization


def trace_to_json(trace: Trace) -> Dict[str, object]:
    gs = trace.final.ground
    return {
        "k": trace.k,
        "order": [v.name for v in trace.order],
        "steps": [
            {
                "variable": s.variable.name,
                "uppers": [[letter, src] for letter, src in s.uppers],
                "lowers": [[number, src] for number, src in s.lowers],
                "neutrals": list(s.neutrals),
                "pairings": [
                    {
                        "upper": p.upper,
                        "lower": p.lower,
                        "inequality": p.result.to_json(gs),
                    }
                    for p in s.pairings
                ],
                "duplicates": [[label, twin] for label, twin in s.duplicates],
            }
            for s in trace.steps
        ],
        "prune_events": [
            {"step": e.step, "label": e.label, "certificate": e.certificate.to_json()}
            for e in trace.prune_events
        ],
        "final": trace.final.to_json(),
    }


def trace_from_json(data: Dict[str, object]) -> Trace:
    final = InequalitySystem.from_json(data["final"])
    gs = final.ground
    steps = tuple(
        EliminationStep(
            variable=parse_rate_var(s["variable"]),
            uppers=tuple((letter, src) for letter, src in s["uppers"]),
            lowers=tuple((number, src) for number, src in s["lowers"]),
            neutrals=tuple(s["neutrals"]),
            pairings=tuple(
                Pairing(
                    upper=p["upper"],
                    lower=p["lower"],
                    result=RateInequality.from_json(gs, p["inequality"]),
                )
                for p in s["pairings"]
            ),
            duplicates=tuple((label, twin) for label, twin in s.get("duplicates", [])),
        )
        for s in data["steps"]
    )
    events = tuple(
        PruneEvent(
            step=int(e["step"]),
            label=e["label"],
            certificate=Certificate.from_json(e["certificate"]),
        )
        for e in data["prune_events"]
    )
    return Trace(
        k=int(data["k"]),
        order=tuple(parse_rate_var(name) for name in data["order"]),
        steps=steps,
        prune_events=events,
        final=final,
    )
