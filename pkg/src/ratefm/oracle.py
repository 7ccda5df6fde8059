"""Numeric ground truth from explicit small channel models.

Models are product-input channels X1..XK -> Y with Z drawn from Y alone,
so input independence holds by construction and the degraded structure
forces I(X_S;Z) <= I(X_S;Y) <= I(X_S;Y|X_{S^c}) for every S.  Entropy
vectors come from exhaustive joint-pmf marginalization, in bits.  All
soundness claims of the symbolic layers are cross-checked against these
vectors at a uniform 1e-9 tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .entropy import GroundSet
from .lp import LpColumn, LpProblem, solve
from .regions import InequalitySystem, RateInequality, RateVar, var_key

TOL = 1e-9

_PMF_TOL = 1e-12
_MAX_STATES = 10**6


@dataclass(frozen=True)
class ChannelModel:
    """Explicit finite model: per-input pmfs, p(y|x1..xk), and p(z|y)."""

    input_pmfs: Tuple[np.ndarray, ...]
    channel: np.ndarray  # shape (*input sizes, ny)
    degrader: np.ndarray  # shape (ny, nz)

    def __post_init__(self):
        for pmf in self.input_pmfs:
            _check_pmf(pmf)
        ny = self.channel.shape[-1]
        if self.channel.shape[:-1] != tuple(len(p) for p in self.input_pmfs):
            raise ValueError("channel shape does not match input alphabets")
        if self.degrader.shape[0] != ny:
            raise ValueError("degrader rows must match the channel output alphabet")
        _check_pmf(self.channel, axis=-1)
        _check_pmf(self.degrader, axis=-1)

    @property
    def k(self) -> int:
        return len(self.input_pmfs)

    @property
    def state_count(self) -> int:
        sizes = [len(p) for p in self.input_pmfs]
        return int(np.prod(sizes)) * self.channel.shape[-1] * self.degrader.shape[-1]


def _check_pmf(arr: np.ndarray, axis: Optional[int] = None) -> None:
    if np.any(arr < 0):
        raise ValueError("probabilities must be nonnegative")
    sums = arr.sum(axis=axis) if axis is not None else arr.sum()
    if np.any(np.abs(sums - 1.0) > _PMF_TOL):
        raise ValueError("probabilities must sum to 1")


@dataclass(frozen=True)
class EntropyVector:
    """Joint entropies in bits for every nonempty subset mask."""

    k: int
    values: Dict[int, float]

    def __getitem__(self, mask: int) -> float:
        return self.values[mask]


def sample_model(k: int, seed: int) -> ChannelModel:
    """Deterministic pseudo-random model for the seed; alphabets 2..4."""
    if not 1 <= k <= 4:
        raise ValueError("sampled models support 1 <= k <= 4")
    rng = np.random.default_rng(seed)
    sizes = [int(rng.integers(2, 5)) for _ in range(k)]
    ny = int(rng.integers(2, 5))
    nz = int(rng.integers(2, 5))
    pmfs = tuple(rng.dirichlet(np.ones(size)) for size in sizes)
    channel = rng.dirichlet(np.ones(ny), size=int(np.prod(sizes))).reshape(*sizes, ny)
    degrader = rng.dirichlet(np.ones(nz), size=ny)
    return ChannelModel(input_pmfs=pmfs, channel=channel, degrader=degrader)


def _entropy_bits(p: np.ndarray) -> float:
    p = p.ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def entropy_vector(m: ChannelModel) -> EntropyVector:
    """All 2^(k+2) - 1 subset entropies by direct marginal summation."""
    if m.state_count > _MAX_STATES:
        raise ValueError(f"joint alphabet too large ({m.state_count} states)")
    inputs = reduce(np.multiply.outer, m.input_pmfs)
    joint = np.einsum("...y,yz->...yz", m.channel, m.degrader) * inputs[..., None, None]
    n = m.k + 2
    values: Dict[int, float] = {}
    for mask in range(1, 1 << n):
        drop = tuple(axis for axis in range(n) if not mask >> axis & 1)
        values[mask] = _entropy_bits(joint.sum(axis=drop))
    return EntropyVector(k=m.k, values=values)


def _rate_point_problem(
    sys: InequalitySystem,
    rhs_values: Sequence[Fraction],
    variables: Sequence[RateVar],
    box: Fraction,
    objective: Sequence[Fraction],
) -> LpProblem:
    """Equality-form LP whose feasible set is the system boxed to |v| <= box."""
    cols = [LpColumn(v.name, nonnegative=False) for v in variables]
    rows: List[Tuple[List[Fraction], Fraction]] = []
    n = len(variables)
    slack = 0

    def add_leq(coeffs: Dict[RateVar, Fraction], bound: Fraction):
        nonlocal slack
        cols.append(LpColumn(f"_slack{slack}"))
        slack += 1
        for r, _ in rows:
            r.append(Fraction(0))
        row = [coeffs.get(v, Fraction(0)) for v in variables]
        row += [Fraction(0)] * (len(cols) - n - 1) + [Fraction(1)]
        rows.append((row, bound))

    for q, bound in zip(sys, rhs_values):
        add_leq(dict(q.lhs), bound)
    for v in variables:
        add_leq({v: Fraction(1)}, box)
        add_leq({v: Fraction(-1)}, box)
    obj = list(objective) + [Fraction(0)] * (len(cols) - n)
    return LpProblem(columns=cols, rows=rows, objective=obj)


def sample_rate_points(
    sys: InequalitySystem,
    ev: EntropyVector,
    trials: int,
    seed: int = 0,
    extra_objectives: Iterable[Dict[RateVar, Fraction]] = (),
) -> List[Dict[RateVar, Fraction]]:
    """Vertices of the boxed system at the given entropy vector, found by
    minimizing seeded random rate directions (plus any extra directions)."""
    variables = sys.variables()
    rhs_values = [Fraction(q.rhs.evaluate(ev.values)) for q in sys]
    scale = max((abs(b) for b in rhs_values), default=Fraction(0))
    box = Fraction(16) * (1 + scale)
    rng = np.random.default_rng(seed)
    objectives: List[List[Fraction]] = []
    for direction in extra_objectives:
        objectives.append([direction.get(v, Fraction(0)) for v in variables])
    for _ in range(trials):
        while True:
            c = [Fraction(int(x)) for x in rng.integers(-3, 4, size=len(variables))]
            if any(c):
                break
        objectives.append(c)
    points: List[Dict[RateVar, Fraction]] = []
    for obj in objectives:
        outcome = solve(_rate_point_problem(sys, rhs_values, variables, box, obj))
        if outcome.status == "optimal":
            points.append({v: outcome.point[v.name] for v in variables})
    return points


def check_implication(
    sys: InequalitySystem,
    ineq: RateInequality,
    m: ChannelModel,
    trials: int = 6,
    seed: int = 0,
    slack: float = 0.0,
) -> bool:
    """Sample rate points satisfying `sys` at the model's entropy vector and
    report whether `ineq` held at all of them (violations beyond 1e-9 fail).

    The direction maximizing `ineq` is always among the samples, so a bound
    that the system genuinely fails to imply is found whenever the gap at
    this entropy vector exceeds the tolerance.  `slack` shifts the bound by
    a constant number of bits; slack=-1.0 checks a deliberately falsified
    one-bit-tighter version of the inequality.
    """
    ev = entropy_vector(m)
    maximize_target = {v: -c for v, c in ineq.lhs.items()}
    points = sample_rate_points(
        sys, ev, trials=trials, seed=seed, extra_objectives=[maximize_target]
    )
    bound = float(ineq.rhs.evaluate(ev.values)) + slack
    for point in points:
        value = float(sum(c * point.get(v, Fraction(0)) for v, c in ineq.lhs.items()))
        if value - bound > TOL:
            return False
    return True
