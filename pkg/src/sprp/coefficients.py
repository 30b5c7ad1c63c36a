"""Precomputed travel-cost coefficients for the decision variables."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .warehouse import BOTTOM, TOP, DecouplingInstance

Zero = Fraction(0)


@dataclass(frozen=True)
class CostCoefficients:
    # per aisle j; cross-aisle entries describe the gap between j and j+1 (0 at j = m-1)
    c2t: tuple[Fraction, ...]
    c2b: tuple[Fraction, ...]
    ctb: tuple[Fraction, ...]
    c2tb: tuple[Fraction, ...]
    cu: tuple[Fraction, ...]
    c2u: tuple[Fraction, ...]
    # per (j, i)
    cpt: dict[tuple[int, int], Fraction]
    cpb: dict[tuple[int, int], Fraction]
    # picker-alone variants (decoupling only)
    c2t_alone: tuple[Fraction, ...] = ()
    c2b_alone: tuple[Fraction, ...] = ()
    cpt_alone: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    cpb_alone: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    # cart park depth chosen for each vertical branch (decoupling only)
    park_top: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    park_bottom: dict[tuple[int, int], Fraction] = field(default_factory=dict)


def park_depth(depths: list[Fraction], items: list[int], target: int, capacity: int) -> Fraction:
    """Shallowest park depth for a branch to ``target`` that respects ``capacity``.

    ``depths``/``items`` describe the required positions of the branch measured
    from its entry, sorted by depth; ``target`` indexes the deepest one visited.
    Candidates are the entry (0) and the required-position depths.
    """
    for p in [Fraction(0)] + depths[:target + 1]:
        load = sum(r for y, r in zip(depths[:target + 1], items[:target + 1]) if y > p)
        if load <= capacity:
            return p
    raise AssertionError("parking at the target itself always fits")


def _branch_with_cart(p: Fraction, y: Fraction, beta: Fraction) -> Fraction:
    return 2 * p + 2 * beta * (y - p)


def compute_coefficients(instance) -> CostCoefficients:
    geo = instance.geometry
    m = geo.num_aisles
    L = geo.aisle_length
    gaps = list(geo.cross_gap) + [Zero]
    c2 = tuple(2 * g for g in gaps)
    kwargs = dict(
        c2t=c2, c2b=c2, ctb=c2, c2tb=tuple(4 * g for g in gaps),
        cu=(L,) * m, c2u=(2 * L,) * m,
    )
    required = instance.required
    cpt = {(j, i): 2 * geo.depth[i] for j in range(m) for i in required[j]}
    cpb = {(j, i): 2 * (L - geo.depth[i]) for j in range(m) for i in required[j]}
    if not isinstance(instance, DecouplingInstance):
        return CostCoefficients(cpt=cpt, cpb=cpb, **kwargs)

    beta = instance.beta
    C = instance.capacity
    park_top, park_bottom = {}, {}
    for j in range(m):
        rows = required[j]
        if not rows:
            continue
        down = [geo.depth[i] for i in rows]
        up = [L - geo.depth[i] for i in reversed(rows)]
        r_down = [instance.demand_at[(j, i)] for i in rows]
        r_up = list(reversed(r_down))
        for k, i in enumerate(rows):
            p = park_depth(down, r_down, k, C)
            park_top[(j, i)] = p
            cpt[(j, i)] = _branch_with_cart(p, down[k], beta)
            kk = len(rows) - 1 - k
            p = park_depth(up, r_up, kk, C)
            park_bottom[(j, i)] = p
            cpb[(j, i)] = _branch_with_cart(p, up[kk], beta)
    return CostCoefficients(
        cpt=cpt, cpb=cpb,
        c2t_alone=tuple(beta * c for c in c2), c2b_alone=tuple(beta * c for c in c2),
        cpt_alone={(j, i): 2 * beta * geo.depth[i] for j in range(m) for i in required[j]},
        cpb_alone={(j, i): 2 * beta * (L - geo.depth[i]) for j in range(m) for i in required[j]},
        park_top=park_top, park_bottom=park_bottom,
        **kwargs,
    )


def side_depth(geometry, position: int, side: str) -> Fraction:
    y = geometry.depth[position]
    if side == TOP:
        return y
    if side == BOTTOM:
        return geometry.aisle_length - y
    raise ValueError(side)
