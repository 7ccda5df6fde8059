"""Rate-inequality systems over per-user secret/open/garbage rates.

Every inequality is stored in the orientation  lhs . r <= rhs(h)  where
lhs has exact rational coefficients on rate variables and rhs is an
EntropyFunctional.  Lower bounds enter negated.  Construction normalizes
by the unique positive scaling that makes all coefficients integers with
overall gcd 1, so content comparison is plain key equality.
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Tuple

from .entropy import (
    ZERO,
    EntropyFunctional,
    GroundSet,
    format_fraction,
    mutual_information,
    parse_fraction,
    user_subsets,
)

KIND_ORDER = {"s": 0, "o": 1, "g": 2}

_VAR_RE = re.compile(r"^R(\d+)([sog])$")


class RateVar(NamedTuple):
    index: int
    kind: str  # "s" secret, "o" open, "g" garbage

    @property
    def name(self) -> str:
        return f"R{self.index}{self.kind}"


def var_key(v: RateVar) -> Tuple[int, int]:
    return (v.index, KIND_ORDER[v.kind])


def parse_rate_var(name: str) -> RateVar:
    m = _VAR_RE.match(name)
    if not m:
        raise ValueError(f"not a rate variable name: {name!r}")
    return RateVar(int(m.group(1)), m.group(2))


def _normalization_scale(values: Iterable[Fraction]) -> Fraction:
    """Positive scale mapping the values to integers with overall gcd 1."""
    nums: List[int] = []
    denom_lcm = 1
    for v in values:
        if v:
            denom_lcm = lcm(denom_lcm, v.denominator)
            nums.append(v)
    if not nums:
        return Fraction(1)
    g = 0
    for v in nums:
        g = gcd(g, abs(v.numerator) * (denom_lcm // v.denominator))
    return Fraction(denom_lcm, g)


class RateInequality:
    """One inequality  lhs . r <= rhs(h)  with provenance label."""

    __slots__ = ("lhs", "rhs", "label")

    def __init__(self, lhs: Mapping[RateVar, Fraction], rhs: EntropyFunctional, label: str = ""):
        terms = {}
        for v, c in lhs.items():
            if v.kind not in KIND_ORDER or v.index < 1:
                raise ValueError(f"bad rate variable {v!r}")
            c = Fraction(c)
            if c:
                terms[v] = c
        if not isinstance(rhs, EntropyFunctional):
            rhs = EntropyFunctional(rhs)
        scale = _normalization_scale(
            list(terms.values()) + [c for _, c in rhs.items()]
        )
        if scale != 1:
            terms = {v: c * scale for v, c in terms.items()}
            rhs = rhs * scale
        self.lhs: Dict[RateVar, Fraction] = terms
        self.rhs = rhs
        self.label = label

    def key(self) -> Tuple:
        """Content identity: normalized lhs and rhs, label excluded."""
        return (tuple(sorted(self.lhs.items(), key=lambda t: var_key(t[0]))), self.rhs)

    def coefficient(self, v: RateVar) -> Fraction:
        return self.lhs.get(v, Fraction(0))

    def variables(self) -> Tuple[RateVar, ...]:
        return tuple(sorted(self.lhs, key=var_key))

    def mentions(self, v: RateVar) -> bool:
        return v in self.lhs

    def scaled(self, factor: Fraction) -> Tuple[Dict[RateVar, Fraction], EntropyFunctional]:
        """Raw positive scaling (pre-normalization pieces for pairing sums)."""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("inequalities only scale by positive factors")
        return ({v: c * factor for v, c in self.lhs.items()}, self.rhs * factor)

    def relabeled(self, label: str) -> "RateInequality":
        return RateInequality(self.lhs, self.rhs, label)

    def __eq__(self, other) -> bool:
        return isinstance(other, RateInequality) and other.key() == self.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        lhs = " ".join(
            f"{'+' if c > 0 else '-'} {abs(c)}*{v.name}"
            for v, c in sorted(self.lhs.items(), key=lambda t: var_key(t[0]))
        )
        return f"RateInequality({self.label}: {lhs or '0'} <= {self.rhs!r})"

    def to_json(self, gs: GroundSet) -> Dict[str, object]:
        return {
            "label": self.label,
            "lhs": {
                v.name: format_fraction(c)
                for v, c in sorted(self.lhs.items(), key=lambda t: var_key(t[0]))
            },
            "rhs": self.rhs.to_json(gs),
        }

    @classmethod
    def from_json(cls, gs: GroundSet, data: Mapping[str, object]) -> "RateInequality":
        lhs = {parse_rate_var(name): parse_fraction(c) for name, c in data["lhs"].items()}
        rhs = EntropyFunctional.from_json(gs, data["rhs"])
        return cls(lhs, rhs, str(data.get("label", "")))


def combine(a: RateInequality, b: RateInequality, label: str) -> RateInequality:
    """Sum of two inequalities (valid since both are <=)."""
    lhs = dict(a.lhs)
    for v, c in b.lhs.items():
        lhs[v] = lhs.get(v, Fraction(0)) + c
    return RateInequality(lhs, a.rhs + b.rhs, label)


def dedupe(
    inequalities: Iterable[RateInequality],
) -> Tuple[List[RateInequality], List[Tuple[RateInequality, str]]]:
    """Keep first occurrence of each content key; report dropped ones with twin label."""
    kept: List[RateInequality] = []
    by_key: Dict[Tuple, RateInequality] = {}
    dropped: List[Tuple[RateInequality, str]] = []
    for q in inequalities:
        twin = by_key.get(q.key())
        if twin is None:
            by_key[q.key()] = q
            kept.append(q)
        else:
            dropped.append((q, twin.label))
    return kept, dropped


class InequalitySystem:
    """Ordered, content-deduplicated inequality set over one ground set."""

    __slots__ = ("ground", "inequalities", "_by_label")

    def __init__(self, ground: GroundSet, inequalities: Iterable[RateInequality]):
        self.ground = ground
        items: List[RateInequality] = []
        by_label: Dict[str, RateInequality] = {}
        keys = set()
        for q in inequalities:
            if q.key() in keys:
                raise ValueError(f"duplicate inequality content under label {q.label!r}")
            if q.label in by_label:
                raise ValueError(f"duplicate label {q.label!r}")
            for v in q.lhs:
                if v.index > ground.k:
                    raise ValueError(f"variable {v.name} outside ground set k={ground.k}")
            keys.add(q.key())
            by_label[q.label] = q
            items.append(q)
        self.inequalities: Tuple[RateInequality, ...] = tuple(items)
        self._by_label = by_label

    def __iter__(self) -> Iterator[RateInequality]:
        return iter(self.inequalities)

    def __len__(self) -> int:
        return len(self.inequalities)

    def get(self, label: str) -> RateInequality:
        return self._by_label[label]

    def labels(self) -> Tuple[str, ...]:
        return tuple(q.label for q in self.inequalities)

    def key_set(self) -> frozenset:
        return frozenset(q.key() for q in self.inequalities)

    def variables(self) -> Tuple[RateVar, ...]:
        seen = {v for q in self.inequalities for v in q.lhs}
        return tuple(sorted(seen, key=var_key))

    def without(self, label: str) -> "InequalitySystem":
        return InequalitySystem(
            self.ground, (q for q in self.inequalities if q.label != label)
        )

    def to_json(self) -> Dict[str, object]:
        return {
            "k": self.ground.k,
            "inequalities": [q.to_json(self.ground) for q in self.inequalities],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> "InequalitySystem":
        gs = GroundSet(int(data["k"]))
        return cls(gs, (RateInequality.from_json(gs, q) for q in data["inequalities"]))

    def __repr__(self) -> str:
        return f"InequalitySystem(k={self.ground.k}, {len(self)} inequalities)"


def system_equal(a: InequalitySystem, b: InequalitySystem) -> bool:
    """True iff the normalized inequality sets coincide (labels ignored)."""
    if a.ground.k != b.ground.k:
        raise ValueError("systems live over different ground sets")
    return a.key_set() == b.key_set()


def _subset_label(users: Tuple[int, ...]) -> str:
    return "".join(str(u) for u in users)


def build_master_region(k: int) -> InequalitySystem:
    """Pre-projection region with garbage rates: for every nonempty S,
    sum_{i in S}(Ris + Rio + Rig) <= I(X_S; Y | X_{S^c}) and
    sum_{i in S}(Rio + Rig) >= I(X_S; Z), plus Rig >= 0 per user.

    Count: 2(2^k - 1) + k.  For k = 3 the members carry the numeric labels
    (3)..(19) used throughout the derivation trace.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    gs = GroundSet(k)
    rows: List[RateInequality] = []
    for s in user_subsets(k):
        lhs = {}
        for u in s:
            lhs[RateVar(u, "s")] = Fraction(1)
            lhs[RateVar(u, "o")] = Fraction(1)
            lhs[RateVar(u, "g")] = Fraction(1)
        rhs = mutual_information(gs.x_mask(s), gs.y, gs.x_mask(gs.complement_users(s)))
        rows.append(RateInequality(lhs, rhs, f"(Y,{_subset_label(s)})"))
    for u in range(1, k + 1):
        rows.append(RateInequality({RateVar(u, "g"): Fraction(-1)}, ZERO, f"(g,{u})"))
    for s in user_subsets(k):
        lhs = {}
        for u in s:
            lhs[RateVar(u, "o")] = Fraction(-1)
            lhs[RateVar(u, "g")] = Fraction(-1)
        rhs = -mutual_information(gs.x_mask(s), gs.z)
        rows.append(RateInequality(lhs, rhs, f"(Z,{_subset_label(s)})"))
    if k == 3:
        rows = [q.relabeled(f"({i + 3})") for i, q in enumerate(rows)]
    return InequalitySystem(gs, rows)


def build_target_region(k: int) -> InequalitySystem:
    """Projected region without garbage rates: for every nonempty S and
    every S1 inside S,
    sum_{i in S} Ris + sum_{i in S\\S1} Rio <= I(X_S; Y | X_{S^c}) - I(X_S1; Z).

    Count: 3^k - 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    gs = GroundSet(k)
    rows: List[RateInequality] = []
    for s in user_subsets(k):
        base = mutual_information(gs.x_mask(s), gs.y, gs.x_mask(gs.complement_users(s)))
        for size in range(len(s) + 1):
            for s1 in combinations(s, size):
                lhs = {RateVar(u, "s"): Fraction(1) for u in s}
                for u in s:
                    if u not in s1:
                        lhs[RateVar(u, "o")] = Fraction(1)
                rhs = base - mutual_information(gs.x_mask(s1), gs.z) if s1 else base
                label = f"(T,{_subset_label(s)}|{_subset_label(s1)})"
                rows.append(RateInequality(lhs, rhs, label))
    return InequalitySystem(gs, rows)
