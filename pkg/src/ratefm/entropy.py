"""Exact-rational linear functionals over joint-entropy coordinates.

The variable universe for K transmitters is the ordered list
[X1, ..., XK, Y, Z] (n = K + 2 elements).  Nonempty subsets are encoded
as bitmasks over that order (bit i = element i); the empty set carries
entropy 0 and is never stored.  All coefficients are fractions.Fraction,
so functional arithmetic is bit-exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, Iterable, Iterator, Mapping, Tuple


def parse_fraction(text: str) -> Fraction:
    """Parse "p/q" or a bare integer string into a Fraction."""
    return Fraction(text)


def format_fraction(value: Fraction) -> str:
    """Lowest-terms string form ("p/q", or "p" when the denominator is 1)."""
    return str(Fraction(value))


def submasks(mask: int) -> Iterator[int]:
    """All submasks of `mask` (including 0 and mask itself), ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def user_subsets(k: int, min_size: int = 1) -> Iterator[Tuple[int, ...]]:
    """Subsets of {1..k} ordered by size, then lexicographically."""
    for size in range(min_size, k + 1):
        yield from combinations(range(1, k + 1), size)


class GroundSet:
    """Ordered variable universe X1..XK, Y, Z with bitmask subset encoding."""

    __slots__ = ("k", "n", "names", "full", "y", "z")

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("need at least one transmitter (k >= 1)")
        self.k = k
        self.n = k + 2
        self.names: Tuple[str, ...] = tuple(f"X{i}" for i in range(1, k + 1)) + ("Y", "Z")
        self.full = (1 << self.n) - 1
        self.y = 1 << k
        self.z = 1 << (k + 1)

    def x_mask(self, users: Iterable[int]) -> int:
        """Mask for {X_u : u in users}; users are 1-based transmitter indices."""
        mask = 0
        for u in users:
            if not 1 <= u <= self.k:
                raise ValueError(f"no transmitter {u} in a k={self.k} ground set")
            mask |= 1 << (u - 1)
        return mask

    def complement_users(self, users: Iterable[int]) -> Tuple[int, ...]:
        inside = set(users)
        return tuple(u for u in range(1, self.k + 1) if u not in inside)

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            try:
                mask |= 1 << self.names.index(name)
            except ValueError:
                raise ValueError(f"unknown element {name!r}") from None
        return mask

    def names_of(self, mask: int) -> Tuple[str, ...]:
        if mask <= 0 or mask > self.full:
            raise ValueError(f"mask {mask} out of range for n={self.n}")
        return tuple(self.names[i] for i in range(self.n) if mask >> i & 1)

    def subset_key(self, mask: int) -> str:
        """Canonical string key for JSON maps, e.g. "X1,X2,Y"."""
        return ",".join(self.names_of(mask))

    def mask_from_key(self, key: str) -> int:
        return self.mask_of(key.split(","))

    def nonempty_masks(self) -> Iterator[int]:
        return iter(range(1, self.full + 1))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroundSet) and other.k == self.k

    def __hash__(self) -> int:
        return hash(("GroundSet", self.k))

    def __repr__(self) -> str:
        return f"GroundSet(k={self.k})"


class EntropyFunctional:
    """Sparse functional  sum_T c_T * H(T)  with exact rational c_T.

    Immutable; zero coefficients are never stored, so two functionals are
    equal iff they are the same linear form.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, Fraction] | Iterable[Tuple[int, Fraction]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean: Dict[int, Fraction] = {}
        for mask, c in items:
            if mask <= 0:
                raise ValueError("entropy coordinates are nonempty subsets (mask > 0)")
            c = Fraction(c)
            if mask in clean:
                c += clean[mask]
            if c:
                clean[mask] = c
            elif mask in clean:
                del clean[mask]
        self._coeffs = clean

    def items(self) -> Tuple[Tuple[int, Fraction], ...]:
        return tuple(sorted(self._coeffs.items()))

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self._coeffs))

    def __getitem__(self, mask: int) -> Fraction:
        return self._coeffs.get(mask, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "EntropyFunctional") -> "EntropyFunctional":
        merged = dict(self._coeffs)
        for mask, c in other._coeffs.items():
            merged[mask] = merged.get(mask, Fraction(0)) + c
        return EntropyFunctional(merged)

    def __sub__(self, other: "EntropyFunctional") -> "EntropyFunctional":
        merged = dict(self._coeffs)
        for mask, c in other._coeffs.items():
            merged[mask] = merged.get(mask, Fraction(0)) - c
        return EntropyFunctional(merged)

    def __neg__(self) -> "EntropyFunctional":
        return EntropyFunctional({m: -c for m, c in self._coeffs.items()})

    def __mul__(self, scalar) -> "EntropyFunctional":
        scalar = Fraction(scalar)
        return EntropyFunctional({m: c * scalar for m, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, EntropyFunctional) and other._coeffs == self._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def evaluate(self, values: Mapping[int, object]):
        """Linear evaluation at an entropy vector (rational or float values)."""
        total = None
        for mask, c in self._coeffs.items():
            term = c * values[mask]
            total = term if total is None else total + term
        return 0 if total is None else total

    def to_json(self, gs: GroundSet) -> Dict[str, str]:
        return {gs.subset_key(m): format_fraction(c) for m, c in self.items()}

    @classmethod
    def from_json(cls, gs: GroundSet, data: Mapping[str, str]) -> "EntropyFunctional":
        return cls({gs.mask_from_key(key): parse_fraction(val) for key, val in data.items()})

    def __repr__(self) -> str:
        terms = " ".join(f"{'+' if c > 0 else '-'} {abs(c)}*H[{m:b}]" for m, c in self.items())
        return f"EntropyFunctional({terms or '0'})"


ZERO = EntropyFunctional()


def joint_entropy(mask: int) -> EntropyFunctional:
    """The single coordinate H(T) for a nonempty subset mask."""
    return EntropyFunctional({mask: Fraction(1)})


def mutual_information(a: int, b: int, c: int = 0) -> EntropyFunctional:
    """I(A;B|C) expanded as H(AC) + H(BC) - H(ABC) - H(C).

    a and b must be nonempty; a, b, c pairwise disjoint subset masks.
    """
    if a <= 0 or b <= 0:
        raise ValueError("mutual information needs nonempty first two subsets")
    if (a & b) or (a & c) or (b & c):
        raise ValueError("mutual information arguments must be pairwise disjoint")
    coeffs: Dict[int, Fraction] = {a | c: Fraction(1)}
    for mask, delta in ((b | c, 1), (a | b | c, -1), (c, -1)):
        if mask:
            coeffs[mask] = coeffs.get(mask, Fraction(0)) + delta
    return EntropyFunctional(coeffs)


def elemental_inequalities(gs: GroundSet) -> Tuple[EntropyFunctional, ...]:
    """Minimal generating inequalities of the polymatroid cone on gs.

    Monotonicity H(full) - H(full \\ {i}) >= 0 for every element, then
    I(i;j|T) >= 0 for every pair i < j and every T inside the rest.
    Count: n + C(n,2) * 2^(n-2).
    """
    out = []
    for i in range(gs.n):
        out.append(joint_entropy(gs.full) - joint_entropy(gs.full ^ (1 << i)))
    for i in range(gs.n):
        for j in range(i + 1, gs.n):
            rest = gs.full & ~((1 << i) | (1 << j))
            for t in submasks(rest):
                out.append(mutual_information(1 << i, 1 << j, t))
    assert len(out) == gs.n + comb(gs.n, 2) * (1 << (gs.n - 2))
    return tuple(out)


def independence_equalities(gs: GroundSet) -> Tuple[EntropyFunctional, ...]:
    """H(X_S) - sum_k H(X_k) = 0 for every transmitter subset S with |S| >= 2."""
    out = []
    for s in user_subsets(gs.k, min_size=2):
        f = joint_entropy(gs.x_mask(s))
        for u in s:
            f = f - joint_entropy(gs.x_mask((u,)))
        out.append(f)
    return tuple(out)


def hypothesis_inequalities(gs: GroundSet) -> Tuple[EntropyFunctional, ...]:
    """I(X_S; Y | X_{S^c}) - I(X_S; Z) >= 0 for every nonempty transmitter S."""
    out = []
    for s in user_subsets(gs.k):
        xs = gs.x_mask(s)
        cond = gs.x_mask(gs.complement_users(s))
        out.append(mutual_information(xs, gs.y, cond) - mutual_information(xs, gs.z))
    return tuple(out)


@dataclass(frozen=True)
class ShannonContext:
    """Constraint families carving out the admissible entropy cone.

    elemental and hypothesis functionals are required >= 0, independence
    functionals are required = 0 on every admissible entropy vector.
    """

    ground: GroundSet
    elemental: Tuple[EntropyFunctional, ...]
    independence: Tuple[EntropyFunctional, ...]
    hypothesis: Tuple[EntropyFunctional, ...]


def shannon_context(gs: GroundSet) -> ShannonContext:
    return ShannonContext(
        ground=gs,
        elemental=elemental_inequalities(gs),
        independence=independence_equalities(gs),
        hypothesis=hypothesis_inequalities(gs),
    )
