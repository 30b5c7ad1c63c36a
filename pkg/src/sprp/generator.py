"""Seeded instance generators for the benchmark grids.

Randomness comes from SplitMix64 streams, one per decision category. A stream
is seeded with ``splitmix64_mix(seed ^ fnv1a64(category))`` so that adding a
new category never perturbs the draws of an existing one. Integers in
``[0, n)`` use rejection sampling on the raw 64-bit output; probabilities use
the top 53 bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .warehouse import (BOTTOM, DECOUPLING, MULTIDEPOT, SCATTERED, SIDES, STANDARD,
                        VARIANTS, DecouplingInstance, Depot, Geometry, InstanceError,
                        MultiDepotInstance, ScatteredInstance, StandardInstance)

MASK64 = (1 << 64) - 1

CLASS_SHARES = (Fraction(2, 10), Fraction(3, 10))  # A and B; C takes the rest
CLASS_PICK_PROBS = (0.80, 0.15, 0.05)
MAX_SUPPLY = 3
MAX_DEMAND = 6


def splitmix64_mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    h = 0xCBF29CE484222325
    for byte in text.encode():
        h = ((h ^ byte) * 0x100000001B3) & MASK64
    return h


class SplitMix64:
    GOLDEN = 0x9E3779B97F4A7C15

    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def stream(cls, seed: int, category: str) -> "SplitMix64":
        return cls(splitmix64_mix((seed & MASK64) ^ fnv1a64(category)))

    def next_u64(self) -> int:
        self.state = (self.state + self.GOLDEN) & MASK64
        return splitmix64_mix(self.state)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def shuffle(self, items: list) -> None:
        for k in range(len(items) - 1, 0, -1):
            r = self.below(k + 1)
            items[k], items[r] = items[r], items[k]

    def sample(self, population: int, k: int) -> list[int]:
        """``k`` distinct values from ``range(population)`` (partial Fisher-Yates)."""
        pool = list(range(population))
        for t in range(k):
            r = t + self.below(population - t)
            pool[t], pool[r] = pool[r], pool[t]
        return pool[:k]

    def weighted(self, weights) -> int:
        total = sum(weights)
        u = self.random() * total
        acc = 0.0
        last = 0
        for idx, w in enumerate(weights):
            if w <= 0:
                continue
            last = idx
            acc += w
            if u < acc:
                return idx
        return last


@dataclass(frozen=True)
class GeneratorSpec:
    variant: str
    m: int
    n: int
    a: int
    alpha: int = 1
    capacity: int = 2
    beta: Fraction = Fraction(1, 2)
    sigma: float = 0.5
    max_demand: int = 1
    cross_gap: int = 5

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InstanceError(f"unknown variant {self.variant!r}")
        if self.m < 1 or self.n < 1:
            raise InstanceError("m and n must be positive")
        if not 1 <= self.a <= self.m * self.n:
            raise InstanceError(f"a = {self.a} must lie in 1..m*n = {self.m * self.n}")
        if self.alpha < 1:
            raise InstanceError("alpha must be at least 1")
        object.__setattr__(self, "beta", Fraction(self.beta))

    @property
    def num_skus(self) -> int:
        """Distinct SKUs stored: max(a, ceil(m*n / alpha))."""
        return max(self.a, math.ceil(self.m * self.n / self.alpha))


def class_sizes(num_skus: int) -> tuple[int, int, int]:
    na = math.floor(num_skus * CLASS_SHARES[0])
    nb = math.floor(num_skus * CLASS_SHARES[1])
    return na, nb, num_skus - na - nb


def _positions(spec: GeneratorSpec, seed: int) -> list[tuple[int, int]]:
    rng = SplitMix64.stream(seed, "positions")
    picks = rng.sample(spec.m * spec.n, spec.a)
    return sorted((k // spec.n, k % spec.n) for k in picks)


def _required(spec, positions):
    rows = [[] for _ in range(spec.m)]
    for j, i in positions:
        rows[j].append(i)
    return rows


def scattered_storage(spec: GeneratorSpec, seed: int):
    """Storage assignment: list of (aisle, position, sku_index, supply) and class labels."""
    m, n = spec.m, spec.n
    xi = spec.num_skus
    sizes = class_sizes(xi)
    offsets = (0, sizes[0], sizes[0] + sizes[1])
    classes = [c for c, size in enumerate(sizes) for _ in range(size)]
    rng = SplitMix64.stream(seed, "storage")
    cells = list(range(m * n))
    rng.shuffle(cells)
    sku_at = {}
    for h in range(xi):
        sku_at[cells[h]] = h
    weights = [p if sizes[c] else 0.0 for c, p in enumerate(CLASS_PICK_PROBS)]
    for cell in cells[xi:]:
        c = rng.weighted(weights)
        sku_at[cell] = offsets[c] + rng.below(sizes[c])
    supply_rng = SplitMix64.stream(seed, "supply")
    storage = []
    for cell in range(m * n):
        storage.append((cell // n, cell % n, sku_at[cell], supply_rng.between(1, MAX_SUPPLY)))
    return storage, classes


def generate_instance(spec: GeneratorSpec, seed: int):
    geometry = Geometry.default(spec.m, spec.n, spec.cross_gap)
    depot = Depot(0, BOTTOM)
    if spec.variant == STANDARD:
        return StandardInstance(geometry, depot, _required(spec, _positions(spec, seed)))
    if spec.variant == DECOUPLING:
        positions = _positions(spec, seed)
        rng = SplitMix64.stream(seed, "demand")
        demand = {p: rng.between(1, spec.max_demand) for p in positions}
        return DecouplingInstance(geometry, depot, demand, spec.capacity, spec.beta)
    if spec.variant == MULTIDEPOT:
        required = _required(spec, _positions(spec, seed))
        rng = SplitMix64.stream(seed, "candidates")
        cands = {depot}
        for j in range(spec.m):
            for side in SIDES:
                if rng.random() < spec.sigma:
                    cands.add(Depot(j, side))
        return MultiDepotInstance(geometry, depot, required, frozenset(cands))
    if spec.variant == SCATTERED:
        storage, classes = scattered_storage(spec, seed)
        total = [0] * spec.num_skus
        for _, _, h, s in storage:
            total[h] += s
        sizes = class_sizes(spec.num_skus)
        offsets = (0, sizes[0], sizes[0] + sizes[1])
        rng = SplitMix64.stream(seed, "picklist")
        chosen: list[int] = []
        left = [set(range(offsets[c], offsets[c] + sizes[c])) for c in range(3)]
        while len(chosen) < spec.a:
            weights = [p if left[c] else 0.0 for c, p in enumerate(CLASS_PICK_PROBS)]
            c = rng.weighted(weights)
            h = offsets[c] + rng.below(sizes[c])
            if h in left[c]:
                left[c].discard(h)
                chosen.append(h)
        dem_rng = SplitMix64.stream(seed, "demand")
        demand = {f"s{h}": dem_rng.between(1, min(MAX_DEMAND, total[h])) for h in chosen}
        supply = {(j, i, f"s{h}"): s for j, i, h, s in storage if f"s{h}" in demand}
        return ScatteredInstance(geometry, depot, demand, supply)
    raise InstanceError(f"unknown variant {spec.variant!r}")
