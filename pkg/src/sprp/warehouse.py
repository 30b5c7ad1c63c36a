"""Warehouse geometry and the four instance variants.

Aisles are indexed left to right from 0, positions top to bottom from 0.
All distances are exact (``int`` or ``Fraction``).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

TOP = "top"
BOTTOM = "bottom"
SIDES = (TOP, BOTTOM)

STANDARD = "standard"
SCATTERED = "scattered"
DECOUPLING = "decoupling"
MULTIDEPOT = "multidepot"
VARIANTS = (STANDARD, SCATTERED, DECOUPLING, MULTIDEPOT)

DEFAULT_CROSS_GAP = 5


class InstanceError(ValueError):
    pass


def _frac(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class Geometry:
    num_aisles: int
    positions_per_aisle: int
    cross_gap: tuple[Fraction, ...]
    depth: tuple[Fraction, ...]
    aisle_length: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cross_gap", tuple(_frac(g) for g in self.cross_gap))
        object.__setattr__(self, "depth", tuple(_frac(y) for y in self.depth))
        object.__setattr__(self, "aisle_length", _frac(self.aisle_length))
        if self.num_aisles < 1 or self.positions_per_aisle < 1:
            raise InstanceError("warehouse needs at least one aisle and one position")
        if len(self.cross_gap) != self.num_aisles - 1:
            raise InstanceError(
                f"expected {self.num_aisles - 1} cross gaps, got {len(self.cross_gap)}")
        if len(self.depth) != self.positions_per_aisle:
            raise InstanceError(
                f"expected {self.positions_per_aisle} depths, got {len(self.depth)}")
        if any(g < 0 for g in self.cross_gap):
            raise InstanceError("cross gaps must be nonnegative")
        if self.depth[0] <= 0:
            raise InstanceError("first position must lie strictly below the top cross aisle")
        if any(b <= a for a, b in zip(self.depth, self.depth[1:])):
            raise InstanceError("depths must be strictly increasing")
        if self.depth[-1] >= self.aisle_length:
            raise InstanceError("aisle length must exceed the deepest position")

    @classmethod
    def default(cls, num_aisles: int, positions_per_aisle: int,
                cross_gap=DEFAULT_CROSS_GAP) -> "Geometry":
        """Unit cell spacing: y_i = i + 1, L = n + 1."""
        n = positions_per_aisle
        return cls(num_aisles, n, (cross_gap,) * (num_aisles - 1),
                   tuple(range(1, n + 1)), n + 1)

    def x(self, aisle: int) -> Fraction:
        return sum(self.cross_gap[:aisle], Fraction(0))

    def span(self, lo: int, hi: int) -> Fraction:
        """Horizontal distance between aisles ``lo`` and ``hi``."""
        if lo > hi:
            lo, hi = hi, lo
        return sum(self.cross_gap[lo:hi], Fraction(0))

    def sub(self, lo: int, hi: int) -> "Geometry":
        """Geometry restricted to aisles ``lo..hi`` inclusive."""
        return Geometry(hi - lo + 1, self.positions_per_aisle, self.cross_gap[lo:hi],
                        self.depth, self.aisle_length)

    def mirrored(self) -> "Geometry":
        return replace(self, cross_gap=tuple(reversed(self.cross_gap)))

    def flipped(self) -> "Geometry":
        L = self.aisle_length
        return replace(self, depth=tuple(L - y for y in reversed(self.depth)))


@dataclass(frozen=True)
class Depot:
    aisle: int
    side: str = BOTTOM

    def __post_init__(self):
        if self.side not in SIDES:
            raise InstanceError(f"depot side must be 'top' or 'bottom', got {self.side!r}")

    @property
    def top(self) -> bool:
        return self.side == TOP

    def shifted(self, offset: int) -> "Depot":
        return Depot(self.aisle - offset, self.side)


def _check_depot(depot: Depot, geometry: Geometry) -> None:
    if not 0 <= depot.aisle < geometry.num_aisles:
        raise InstanceError(f"depot aisle {depot.aisle} outside warehouse")


def _normalize_required(required, geometry: Geometry) -> tuple[tuple[int, ...], ...]:
    if isinstance(required, Mapping):
        rows = [required.get(j, ()) for j in range(geometry.num_aisles)]
        extra = set(required) - set(range(geometry.num_aisles))
        if extra:
            raise InstanceError(f"required positions in unknown aisles {sorted(extra)}")
    else:
        rows = list(required)
        if len(rows) != geometry.num_aisles:
            raise InstanceError("one required-position set per aisle expected")
    out = []
    for row in rows:
        row = tuple(sorted(set(int(i) for i in row)))
        if row and not (0 <= row[0] and row[-1] < geometry.positions_per_aisle):
            raise InstanceError(f"required position outside 0..{geometry.positions_per_aisle - 1}")
        out.append(row)
    return tuple(out)


def _span(aisles) -> tuple[int, int]:
    aisles = list(aisles)
    return min(aisles), max(aisles)


@dataclass(frozen=True)
class StandardInstance:
    geometry: Geometry
    depot: Depot
    required: tuple[tuple[int, ...], ...]

    variant = STANDARD

    def __post_init__(self):
        _check_depot(self.depot, self.geometry)
        object.__setattr__(self, "required", _normalize_required(self.required, self.geometry))
        if not any(self.required):
            raise InstanceError("nothing to pick")

    @property
    def m(self) -> int:
        return self.geometry.num_aisles

    @property
    def n(self) -> int:
        return self.geometry.positions_per_aisle

    def pick_positions(self) -> list[tuple[int, int]]:
        return [(j, i) for j, row in enumerate(self.required) for i in row]

    def relevant_span(self) -> tuple[int, int]:
        return _span([self.depot.aisle] + [j for j, row in enumerate(self.required) if row])

    def _trim(self, lo: int, hi: int):
        return StandardInstance(self.geometry.sub(lo, hi), self.depot.shifted(lo),
                                self.required[lo:hi + 1])

    def is_reduced(self) -> bool:
        return self.relevant_span() == (0, self.m - 1)


@dataclass(frozen=True)
class ScatteredInstance:
    """Scattered storage: SKUs may be stored at several positions.

    ``supply`` maps ``(aisle, position, sku)`` to the available item count and
    ``demand`` maps each requested SKU to its requested count.
    """
    geometry: Geometry
    depot: Depot
    demand: Mapping[str, int]
    supply: Mapping[tuple[int, int, str], int]

    variant = SCATTERED

    def __post_init__(self):
        _check_depot(self.depot, self.geometry)
        demand = {str(h): int(b) for h, b in self.demand.items()}
        supply = {}
        for (j, i, h), s in self.supply.items():
            if s < 0:
                raise InstanceError("supply counts must be nonnegative")
            if not (0 <= j < self.geometry.num_aisles and 0 <= i < self.geometry.positions_per_aisle):
                raise InstanceError(f"supply at ({j}, {i}) outside warehouse")
            if s:
                supply[(int(j), int(i), str(h))] = int(s)
        if not demand:
            raise InstanceError("nothing to pick")
        for h, b in demand.items():
            if b <= 0:
                raise InstanceError(f"demand of SKU {h!r} must be positive")
            total = sum(s for (_, _, g), s in supply.items() if g == h)
            if total < b:
                raise InstanceError(f"SKU {h!r}: supply {total} below demand {b}")
        object.__setattr__(self, "demand", dict(sorted(demand.items())))
        object.__setattr__(self, "supply", dict(sorted(supply.items())))

    @property
    def m(self) -> int:
        return self.geometry.num_aisles

    @property
    def n(self) -> int:
        return self.geometry.positions_per_aisle

    @property
    def skus(self) -> tuple[str, ...]:
        return tuple(self.demand)

    @property
    def required(self) -> tuple[tuple[int, ...], ...]:
        """Candidate positions per aisle (positions holding any demanded SKU)."""
        rows = [set() for _ in range(self.m)]
        for (j, i, h) in self.supply:
            if h in self.demand:
                rows[j].add(i)
        return tuple(tuple(sorted(r)) for r in rows)

    def positions_of(self, sku: str, aisle: int | None = None) -> list[tuple[int, int]]:
        return [(j, i) for (j, i, h) in self.supply
                if h == sku and (aisle is None or j == aisle)]

    def relevant_span(self) -> tuple[int, int]:
        return _span([self.depot.aisle] + [j for j, row in enumerate(self.required) if row])

    def _trim(self, lo: int, hi: int):
        supply = {(j - lo, i, h): s for (j, i, h), s in self.supply.items()
                  if lo <= j <= hi and h in self.demand}
        return ScatteredInstance(self.geometry.sub(lo, hi), self.depot.shifted(lo),
                                 self.demand, supply)

    def is_reduced(self) -> bool:
        return self.relevant_span() == (0, self.m - 1)


@dataclass(frozen=True)
class DecouplingInstance:
    """Dedicated storage; ``demand_at`` maps (aisle, position) to item count."""
    geometry: Geometry
    depot: Depot
    demand_at: Mapping[tuple[int, int], int]
    capacity: int
    beta: Fraction

    variant = DECOUPLING

    def __post_init__(self):
        _check_depot(self.depot, self.geometry)
        object.__setattr__(self, "beta", _frac(self.beta))
        if self.capacity < 1:
            raise InstanceError("picker capacity must be at least 1")
        if not 0 < self.beta <= 1:
            raise InstanceError("beta must lie in (0, 1]")
        demand = {}
        for (j, i), r in self.demand_at.items():
            if not (0 <= j < self.geometry.num_aisles and 0 <= i < self.geometry.positions_per_aisle):
                raise InstanceError(f"demand at ({j}, {i}) outside warehouse")
            if r <= 0:
                raise InstanceError("requested item counts must be positive")
            demand[(int(j), int(i))] = int(r)
        if not demand:
            raise InstanceError("nothing to pick")
        object.__setattr__(self, "demand_at", dict(sorted(demand.items())))

    @property
    def m(self) -> int:
        return self.geometry.num_aisles

    @property
    def n(self) -> int:
        return self.geometry.positions_per_aisle

    @property
    def required(self) -> tuple[tuple[int, ...], ...]:
        rows = [[] for _ in range(self.m)]
        for (j, i) in self.demand_at:
            rows[j].append(i)
        return tuple(tuple(sorted(r)) for r in rows)

    def relevant_span(self) -> tuple[int, int]:
        return _span([self.depot.aisle] + [j for j, _ in self.demand_at])

    def _trim(self, lo: int, hi: int):
        return DecouplingInstance(self.geometry.sub(lo, hi), self.depot.shifted(lo),
                                  {(j - lo, i): r for (j, i), r in self.demand_at.items()},
                                  self.capacity, self.beta)

    def is_reduced(self) -> bool:
        return self.relevant_span() == (0, self.m - 1)

    def standard(self) -> StandardInstance:
        return StandardInstance(self.geometry, self.depot, self.required)

    def with_params(self, capacity: int | None = None, beta=None) -> "DecouplingInstance":
        return replace(self, capacity=self.capacity if capacity is None else capacity,
                       beta=self.beta if beta is None else _frac(beta))


@dataclass(frozen=True)
class MultiDepotInstance:
    geometry: Geometry
    depot: Depot
    required: tuple[tuple[int, ...], ...]
    end_candidates: frozenset = field(default_factory=frozenset)

    variant = MULTIDEPOT

    def __post_init__(self):
        _check_depot(self.depot, self.geometry)
        object.__setattr__(self, "required", _normalize_required(self.required, self.geometry))
        if not any(self.required):
            raise InstanceError("nothing to pick")
        cands = set()
        for c in self.end_candidates:
            d = c if isinstance(c, Depot) else Depot(*c)
            _check_depot(d, self.geometry)
            cands.add(d)
        cands.add(self.depot)
        object.__setattr__(self, "end_candidates", frozenset(cands))

    @property
    def m(self) -> int:
        return self.geometry.num_aisles

    @property
    def n(self) -> int:
        return self.geometry.positions_per_aisle

    def sorted_candidates(self) -> list[Depot]:
        return sorted(self.end_candidates, key=lambda d: (d.aisle, d.side))

    def relevant_span(self) -> tuple[int, int]:
        return _span([d.aisle for d in self.end_candidates]
                     + [j for j, row in enumerate(self.required) if row])

    def _trim(self, lo: int, hi: int):
        return MultiDepotInstance(self.geometry.sub(lo, hi), self.depot.shifted(lo),
                                  self.required[lo:hi + 1],
                                  frozenset(d.shifted(lo) for d in self.end_candidates))

    def is_reduced(self) -> bool:
        return self.relevant_span() == (0, self.m - 1)

    def standard(self) -> StandardInstance:
        return StandardInstance(self.geometry, self.depot, self.required)


Instance = StandardInstance | ScatteredInstance | DecouplingInstance | MultiDepotInstance


def reduce_to_relevant(instance):
    """Trim aisles outside the relevant span; returns ``(reduced, offset)``.

    ``offset`` is added to a reduced aisle index to recover the original one.
    """
    lo, hi = instance.relevant_span()
    if (lo, hi) == (0, instance.m - 1):
        return instance, 0
    return instance._trim(lo, hi), lo


def items_prefix(instance: DecouplingInstance, aisle: int, position: int, side: str) -> int:
    """Requested items between the given cross aisle and ``position`` (inclusive)."""
    if side == TOP:
        return sum(r for (j, i), r in instance.demand_at.items() if j == aisle and i <= position)
    if side == BOTTOM:
        return sum(r for (j, i), r in instance.demand_at.items() if j == aisle and i >= position)
    raise ValueError(f"unknown side {side!r}")


def mirror_horizontal(instance: StandardInstance) -> StandardInstance:
    m = instance.m
    return StandardInstance(instance.geometry.mirrored(),
                            Depot(m - 1 - instance.depot.aisle, instance.depot.side),
                            tuple(reversed(instance.required)))


def mirror_vertical(instance: StandardInstance) -> StandardInstance:
    n = instance.n
    side = BOTTOM if instance.depot.top else TOP
    return StandardInstance(instance.geometry.flipped(), Depot(instance.depot.aisle, side),
                            tuple(tuple(n - 1 - i for i in row) for row in instance.required))


def as_required_map(rows: Sequence[Sequence[int]]) -> dict[int, list[int]]:
    return {j: list(row) for j, row in enumerate(rows) if row}
