"""Certified reasoning over the admissible entropy cone.

prove_nonneg decides whether an entropy functional is a nonnegative
combination of elemental facts and hypothesis inequalities plus a signed
combination of independence equalities.  is_redundant decides whether a
rate inequality is implied by a nonnegative combination of others whose
left-hand sides match the target exactly, with the leftover right-hand
slack certified nonnegative the same way.  Both return replayable
Certificates; replay is exact rational arithmetic with zero residual.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .entropy import EntropyFunctional, ShannonContext, format_fraction, parse_fraction
from .lp import LpColumn, LpProblem, feasibility
from .regions import InequalitySystem, RateInequality, RateVar, var_key


@dataclass
class Certificate:
    """Replayable weights proving a redundancy or nonnegativity claim.

    combo:                label -> lambda >= 0 over system inequalities
    elemental_weights:    index -> mu >= 0 over ctx.elemental
    hypothesis_weights:   index -> rho >= 0 over ctx.hypothesis
    independence_weights: index -> nu (sign-free) over ctx.independence
    """

    combo: Dict[str, Fraction] = field(default_factory=dict)
    elemental_weights: Dict[int, Fraction] = field(default_factory=dict)
    hypothesis_weights: Dict[int, Fraction] = field(default_factory=dict)
    independence_weights: Dict[int, Fraction] = field(default_factory=dict)

    def cone_part(self, ctx: ShannonContext) -> EntropyFunctional:
        total = EntropyFunctional()
        for idx, w in sorted(self.elemental_weights.items()):
            total = total + ctx.elemental[idx] * w
        for idx, w in sorted(self.hypothesis_weights.items()):
            total = total + ctx.hypothesis[idx] * w
        for idx, w in sorted(self.independence_weights.items()):
            total = total + ctx.independence[idx] * w
        return total

    def to_json(self) -> Dict[str, object]:
        return {
            "combo": {k: format_fraction(v) for k, v in sorted(self.combo.items())},
            "elemental_weights": {str(k): format_fraction(v) for k, v in sorted(self.elemental_weights.items())},
            "hypothesis_weights": {str(k): format_fraction(v) for k, v in sorted(self.hypothesis_weights.items())},
            "independence_weights": {str(k): format_fraction(v) for k, v in sorted(self.independence_weights.items())},
        }

    @classmethod
    def from_json(cls, data) -> "Certificate":
        return cls(
            combo={k: parse_fraction(v) for k, v in data["combo"].items()},
            elemental_weights={int(k): parse_fraction(v) for k, v in data["elemental_weights"].items()},
            hypothesis_weights={int(k): parse_fraction(v) for k, v in data["hypothesis_weights"].items()},
            independence_weights={int(k): parse_fraction(v) for k, v in data["independence_weights"].items()},
        )


def _cone_columns(ctx: ShannonContext) -> Tuple[List[LpColumn], List[Tuple[str, int, EntropyFunctional]]]:
    """LP columns for the cone families, tagged for certificate extraction."""
    cols: List[LpColumn] = []
    tagged: List[Tuple[str, int, EntropyFunctional]] = []
    for idx, f in enumerate(ctx.elemental):
        cols.append(LpColumn(f"mu:{idx}"))
        tagged.append(("mu", idx, f))
    for idx, f in enumerate(ctx.hypothesis):
        cols.append(LpColumn(f"rho:{idx}"))
        tagged.append(("rho", idx, f))
    for idx, f in enumerate(ctx.independence):
        cols.append(LpColumn(f"nu:{idx}", nonnegative=False))
        tagged.append(("nu", idx, f))
    return cols, tagged


def _certificate_from_point(point: Dict[str, Fraction], combo_labels: Sequence[str]) -> Certificate:
    cert = Certificate()
    for label in combo_labels:
        w = point.get(f"lam:{label}", Fraction(0))
        if w:
            cert.combo[label] = w
    for name, value in point.items():
        if not value:
            continue
        kind, _, idx = name.partition(":")
        if kind == "mu":
            cert.elemental_weights[int(idx)] = value
        elif kind == "rho":
            cert.hypothesis_weights[int(idx)] = value
        elif kind == "nu":
            cert.independence_weights[int(idx)] = value
    return cert


def prove_nonneg(f: EntropyFunctional, ctx: ShannonContext) -> Optional[Certificate]:
    """Certificate decomposing f over the cone families, or None if the
    decomposition LP is infeasible (not provable within this cone)."""
    for mask in f.support:
        if mask > ctx.ground.full:
            raise ValueError("functional lives outside the context ground set")
    cols, tagged = _cone_columns(ctx)
    masks = sorted(
        set(f.support).union(*[g.support for _, _, g in tagged]) if tagged else set(f.support)
    )
    rows = []
    for mask in masks:
        rows.append(([g[mask] for _, _, g in tagged], f[mask]))
    outcome = feasibility(LpProblem(columns=cols, rows=rows))
    if outcome.status != "optimal":
        return None
    cert = _certificate_from_point(outcome.point, combo_labels=())
    if not verify_nonneg(cert, f, ctx):  # pragma: no cover - exactness guard
        raise AssertionError("certificate failed replay")
    return cert


def is_redundant(
    target: RateInequality, others: InequalitySystem, ctx: ShannonContext
) -> Optional[Certificate]:
    """Certificate writing target as a nonnegative combination of `others`
    plus cone slack, or None when the joint LP is infeasible.

    The lambda-combination must reproduce target's coefficient on every
    rate variable exactly, including garbage variables still present.
    """
    if any(q.label == target.label for q in others):
        raise ValueError(f"target {target.label!r} is a member of the reference system")
    members = list(others)

    # fast paths: an exact twin, then a single source with identical lhs whose
    # rhs gap is cone-provable; both are far cheaper than the joint LP below
    for q in members:
        if q.lhs == target.lhs:
            if q.rhs == target.rhs:
                return Certificate(combo={q.label: Fraction(1)})
            slack = prove_nonneg(target.rhs - q.rhs, ctx)
            if slack is not None:
                return Certificate(
                    combo={q.label: Fraction(1)},
                    elemental_weights=slack.elemental_weights,
                    hypothesis_weights=slack.hypothesis_weights,
                    independence_weights=slack.independence_weights,
                )

    cols = [LpColumn(f"lam:{q.label}") for q in members]
    cone_cols, tagged = _cone_columns(ctx)
    cols.extend(cone_cols)

    rate_vars = sorted({v for q in members for v in q.lhs} | set(target.lhs), key=var_key)
    rows = []
    for v in rate_vars:
        coeffs = [q.coefficient(v) for q in members] + [Fraction(0)] * len(tagged)
        rows.append((coeffs, target.coefficient(v)))
    masks = sorted(
        set(target.rhs.support)
        .union(*[q.rhs.support for q in members])
        .union(*[g.support for _, _, g in tagged])
    ) if members or tagged else sorted(target.rhs.support)
    for mask in masks:
        coeffs = [q.rhs[mask] for q in members] + [g[mask] for _, _, g in tagged]
        rows.append((coeffs, target.rhs[mask]))

    outcome = feasibility(LpProblem(columns=cols, rows=rows))
    if outcome.status != "optimal":
        return None
    cert = _certificate_from_point(outcome.point, combo_labels=[q.label for q in members])
    if not verify_redundancy(cert, target, others, ctx):  # pragma: no cover
        raise AssertionError("certificate failed replay")
    return cert


def prune(
    sys: InequalitySystem, ctx: ShannonContext
) -> Tuple[InequalitySystem, List[Tuple[str, Certificate]]]:
    """Greedy redundancy removal in system order.

    Each member is tested against all current survivors; it is removed
    exactly when a certificate exists.  The result is irreducible: no
    survivor is redundant with respect to the rest (implication is
    monotone in the reference set, so one pass suffices).
    """
    survivors: List[RateInequality] = list(sys)
    events: List[Tuple[str, Certificate]] = []
    pos = 0
    while pos < len(survivors):
        candidate = survivors[pos]
        rest = InequalitySystem(
            sys.ground, (q for q in survivors if q.label != candidate.label)
        )
        cert = is_redundant(candidate, rest, ctx)
        if cert is None:
            pos += 1
        else:
            events.append((candidate.label, cert))
            del survivors[pos]
    return InequalitySystem(sys.ground, survivors), events


def verify_nonneg(cert: Certificate, f: EntropyFunctional, ctx: ShannonContext) -> bool:
    """Exact replay of a nonnegativity certificate (zero residual)."""
    if cert.combo:
        return False
    if any(w < 0 for w in cert.elemental_weights.values()):
        return False
    if any(w < 0 for w in cert.hypothesis_weights.values()):
        return False
    return cert.cone_part(ctx) == f


def verify_redundancy(
    cert: Certificate,
    target: RateInequality,
    others: InequalitySystem,
    ctx: ShannonContext,
) -> bool:
    """Exact replay of a redundancy certificate against its source system."""
    if any(w < 0 for w in cert.combo.values()):
        return False
    if any(w < 0 for w in cert.elemental_weights.values()):
        return False
    if any(w < 0 for w in cert.hypothesis_weights.values()):
        return False
    lhs: Dict[RateVar, Fraction] = {}
    rhs = EntropyFunctional()
    try:
        for label, w in sorted(cert.combo.items()):
            q = others.get(label)
            for v, c in q.lhs.items():
                lhs[v] = lhs.get(v, Fraction(0)) + w * c
            rhs = rhs + q.rhs * w
    except KeyError:
        return False
    if {v: c for v, c in lhs.items() if c} != target.lhs:
        return False
    return cert.cone_part(ctx) == target.rhs - rhs
