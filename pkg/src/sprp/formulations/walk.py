"""Physical picker walks rebuilt from model solutions.

A walk is an edge multiset on the warehouse graph (see ``oracle.steiner`` for
the node naming). Cart edges and picker-alone edges are kept apart so that
their travel times can be weighted differently. Every reconstruction is
validated: even degrees (or exactly two odd endpoints for an open walk),
connectivity, depot and pick coverage, alone-trip capacity, and a cost
recomputed from the geometry that must equal the model objective.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..warehouse import BOTTOM, TOP, Depot
from ..oracle.steiner import depot_node
from .builders import CONFIGS

CROSS = {"x2t": (2, 0), "x2b": (0, 2), "xtb": (1, 1), "x2tb": (2, 2)}


class WalkError(ValueError):
    pass


def _key(a, b):
    return (a, b) if a <= b else (b, a)


@dataclass
class AloneTrip:
    anchor: tuple
    kind: str                      # "horizontal" or "vertical"
    positions: tuple
    items: int
    length: Fraction


@dataclass
class PickerWalk:
    cart_edges: Counter
    alone_edges: Counter
    start: tuple
    end: tuple
    circuit: list
    alone_trips: list = field(default_factory=list)
    cost: Fraction = Fraction(0)
    beta: Fraction = Fraction(1)

    @property
    def closed(self) -> bool:
        return self.start == self.end

    def visited(self):
        nodes = set()
        for (a, b), k in list(self.cart_edges.items()) + list(self.alone_edges.items()):
            if k:
                nodes.update((a, b))
        return nodes

    def summary(self) -> str:
        kind = "closed walk" if self.closed else f"open walk ending at {self.end}"
        return (f"{kind}, {sum(self.cart_edges.values())} cart edge traversals, "
                f"{len(self.alone_trips)} picker-alone trips, cost {self.cost}")


class _Layout:
    """Aisle chains of one instance: entry nodes plus the positions of interest."""

    def __init__(self, geometry, positions_per_aisle):
        self.geo = geometry
        self.chains = []
        L = geometry.aisle_length
        for j, row in enumerate(positions_per_aisle):
            chain = [(("T", j), Fraction(0))]
            chain += [(("P", j, i), geometry.depth[i]) for i in sorted(row)]
            chain.append((("B", j), L))
            self.chains.append(chain)

    def length(self, a, b) -> Fraction:
        if a[1] != b[1]:
            return self.geo.span(a[1], b[1])
        return abs(self.depth(a) - self.depth(b))

    def depth(self, node) -> Fraction:
        if node[0] == "T":
            return Fraction(0)
        if node[0] == "B":
            return self.geo.aisle_length
        return self.geo.depth[node[2]]

    def segment(self, j, lo: Fraction, hi: Fraction):
        """Aisle edges of aisle ``j`` between depths ``lo`` and ``hi``."""
        nodes = [n for n, y in self.chains[j] if lo <= y <= hi]
        return [_key(a, b) for a, b in zip(nodes, nodes[1:])]

    def node_at(self, j, depth):
        for n, y in self.chains[j]:
            if y == depth:
                return n
        raise KeyError(depth)


def _degrees(*counters):
    deg = Counter()
    for counter in counters:
        for (a, b), k in counter.items():
            if k:
                deg[a] += k
                deg[b] += k
    return deg


def _components(counter):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b), k in counter.items():
        if k:
            parent[find(a)] = find(b)
    groups = {}
    for x in list(parent):
        groups.setdefault(find(x), set()).add(x)
    return list(groups.values())


def _euler(edges: Counter, start):
    """Hierholzer walk over a connected multigraph, smallest neighbour first."""
    adj: dict = {}
    for (a, b), k in edges.items():
        for _ in range(k):
            adj.setdefault(a, Counter())[b] += 1
            adj.setdefault(b, Counter())[a] += 1
    if not adj:
        return [start]
    stack, out = [start], []
    while stack:
        u = stack[-1]
        nbrs = adj.get(u)
        if nbrs:
            w = min(nbrs)
            nbrs[w] -= 1
            if not nbrs[w]:
                del nbrs[w]
            adj[w][u] -= 1
            if not adj[w][u]:
                del adj[w][u]
            stack.append(w)
        else:
            out.append(stack.pop())
    out.reverse()
    return out


def check_walk(cart: Counter, alone: Counter, start, end, required, layout: _Layout,
               beta=Fraction(1), trips=(), capacity=None, expected=None) -> PickerWalk:
    """Validate an edge multiset and return the walk with its Euler tour."""
    for key, k in list(cart.items()) + list(alone.items()):
        if k < 0:
            raise WalkError(f"negative multiplicity on edge {key}: path edge not in the loop")
    deg = _degrees(cart, alone)
    odd = sorted(n for n, d in deg.items() if d % 2)
    if start == end:
        if odd:
            raise WalkError(f"odd degree at {odd[0]}")
    elif odd != sorted([start, end]):
        raise WalkError(f"odd degree at {[n for n in odd if n not in (start, end)] or odd}: "
                        f"open walk must have odd degree exactly at {start} and {end}")
    union = cart + alone
    comps = _components(union)
    if len(comps) > 1:
        raise WalkError(f"walk is disconnected ({len(comps)} components)")
    visited = comps[0] if comps else set()
    if deg and start not in visited:
        raise WalkError(f"depot {start} is not on the walk")
    if not deg and required:
        raise WalkError("empty walk")
    for node in required:
        if node not in visited:
            raise WalkError(f"required position {node} not visited")
    if alone:
        cart_deg = _degrees(cart)
        if any(d % 2 for d in cart_deg.values()):
            raise WalkError("odd degree in the cart tour")
        if len(_components(cart)) > 1:
            raise WalkError("cart tour is disconnected")
        if cart_deg and start not in cart_deg:
            raise WalkError(f"depot {start} is not on the cart tour")
        for trip in trips:
            if trip.anchor not in cart_deg and trip.anchor != start:
                raise WalkError(f"picker-alone trip anchored at {trip.anchor} away from the cart")
            if capacity is not None and trip.items > capacity:
                raise WalkError(f"capacity exceeded on picker-alone trip from {trip.anchor}: "
                                f"{trip.items} > {capacity}")
    cart_len = sum((layout.length(a, b) * k for (a, b), k in cart.items()), Fraction(0))
    alone_len = sum((layout.length(a, b) * k for (a, b), k in alone.items()), Fraction(0))
    cost = cart_len + beta * alone_len
    if expected is not None and cost != expected:
        raise WalkError(f"cost mismatch: walk costs {cost}, model objective is {expected}")
    circuit = _euler(union, start)
    return PickerWalk(+cart, +alone, start, end, circuit, list(trips), cost, Fraction(beta))


# -- reconstruction ------------------------------------------------------------------

def _loop_edges(instance, layout: _Layout, val) -> Counter:
    """Cart edges of the closed loop encoded by the standard variables."""
    edges = Counter()
    m = instance.m
    L = instance.geometry.aisle_length
    for j in range(m - 1):
        for s in CONFIGS:
            if val(s, j):
                t, b = CROSS[s]
                edges[_key(("T", j), ("T", j + 1))] += t
                edges[_key(("B", j), ("B", j + 1))] += b
    for j in range(m):
        times = val("xu", j) + 2 * val("x2u", j)
        for e in layout.segment(j, Fraction(0), L):
            edges[e] += times
    return edges


def _branch(layout, j, i, side, lo=Fraction(0)):
    """Edges of a branch from ``side`` to position ``i``, beyond depth ``lo`` from the entry."""
    y = layout.geo.depth[i]
    L = layout.geo.aisle_length
    if side == TOP:
        return layout.segment(j, lo, y)
    return layout.segment(j, y, L - lo)


def _branch_positions(instance, j, i, side, lo=Fraction(0)):
    geo = instance.geometry
    y = geo.depth[i]
    L = geo.aisle_length
    rows = instance.required[j]
    if side == TOP:
        return tuple((j, k) for k in rows if lo < geo.depth[k] <= y)
    return tuple((j, k) for k in rows if y <= geo.depth[k] < L - lo)


def _add_branches(instance, layout, val, edges):
    for j, row in enumerate(instance.required):
        for i in row:
            for sym, side in (("xpt", TOP), ("xpb", BOTTOM)):
                if val(sym, j, i):
                    for e in _branch(layout, j, i, side):
                        edges[e] += 2


def _values(vmap, values):
    def val(symbol, *idx):
        return vmap.value(values, symbol, *idx)
    return val


def walk_standard(instance, vmap, values, expected=None) -> PickerWalk:
    val = _values(vmap, values)
    layout = _Layout(instance.geometry, instance.required)
    edges = _loop_edges(instance, layout, val)
    _add_branches(instance, layout, val, edges)
    required = [("P", j, i) for j, row in enumerate(instance.required) for i in row]
    d = depot_node(instance.depot)
    return check_walk(edges, Counter(), d, d, required, layout, expected=expected)


def walk_scattered(instance, vmap, values, expected=None) -> PickerWalk:
    val = _values(vmap, values)
    layout = _Layout(instance.geometry, instance.required)
    edges = _loop_edges(instance, layout, val)
    _add_branches(instance, layout, val, edges)
    chosen = [(j, i) for j, row in enumerate(instance.required) for i in row if val("p", j, i)]
    for h, need in instance.demand.items():
        got = sum(s for (j, i, sku), s in instance.supply.items() if sku == h and (j, i) in chosen)
        if got < need:
            raise WalkError(f"demand of SKU {h!r} not met: {got} < {need}")
    d = depot_node(instance.depot)
    return check_walk(edges, Counter(), d, d, [("P", j, i) for j, i in chosen], layout,
                      expected=expected)


def walk_multidepot(instance, vmap, values, expected=None) -> PickerWalk:
    val = _values(vmap, values)
    layout = _Layout(instance.geometry, instance.required)
    edges = _loop_edges(instance, layout, val)
    _add_branches(instance, layout, val, edges)
    L = instance.geometry.aisle_length
    for j in range(instance.m):
        if j < instance.m - 1:
            top = val("yt", j) + val("ytb", j)
            bottom = val("yb", j) + val("ytb", j)
            if top or bottom:
                edges[_key(("T", j), ("T", j + 1))] -= top
                edges[_key(("B", j), ("B", j + 1))] -= bottom
        elif val("yt", j) or val("yb", j) or val("ytb", j):
            raise WalkError(f"path uses a cross aisle right of the last aisle {j}")
        if val("yu", j):
            for e in layout.segment(j, Fraction(0), L):
                edges[e] -= 1
    ends = [Depot(j, side) for j in range(instance.m) for side, sym in ((TOP, "et"), (BOTTOM, "eb"))
            if val(sym, j)]
    if len(ends) > 1:
        raise WalkError("more than one end depot selected")
    start = depot_node(instance.depot)
    end = depot_node(ends[0]) if ends else start
    required = [("P", j, i) for j, row in enumerate(instance.required) for i in row]
    return check_walk(edges, Counter(), start, end, required, layout, expected=expected)


def best_park(instance, j, i, side):
    """Cheapest feasible cart park depth for a cart branch, chosen by full search."""
    geo = instance.geometry
    beta = instance.beta
    y = geo.depth[i] if side == TOP else geo.aisle_length - geo.depth[i]
    rows = instance.required[j]
    depth = {k: (geo.depth[k] if side == TOP else geo.aisle_length - geo.depth[k]) for k in rows}
    best = None
    for p in sorted({Fraction(0)} | {d for d in depth.values() if d <= y}):
        load = sum(instance.demand_at[(j, k)] for k in rows if p < depth[k] <= y)
        if load > instance.capacity:
            continue
        cost = 2 * p + 2 * beta * (y - p)
        if best is None or cost < best[0]:
            best = (cost, p)
    return best[1]


def walk_decoupling(instance, vmap, values, expected=None) -> PickerWalk:
    val = _values(vmap, values)
    geo = instance.geometry
    m = instance.m
    L = geo.aisle_length
    layout = _Layout(geo, instance.required)
    cart = _loop_edges(instance, layout, val)
    alone = Counter()
    trips = []

    def items(positions):
        return sum(instance.demand_at[p] for p in set(positions))

    # cart branches: push the cart to the park depth, walk alone beyond it
    for j, row in enumerate(instance.required):
        for i in row:
            for sym, side in (("xpt", TOP), ("xpb", BOTTOM)):
                if not val(sym, j, i):
                    continue
                p = best_park(instance, j, i, side)
                y = geo.depth[i] if side == TOP else L - geo.depth[i]
                if side == TOP:
                    cart_part = layout.segment(j, Fraction(0), p)
                else:
                    cart_part = layout.segment(j, L - p, L)
                for e in cart_part:
                    cart[e] += 2
                if p < y:
                    part = _branch(layout, j, i, side, lo=p)
                    for e in part:
                        alone[e] += 2
                    anchor = layout.node_at(j, p if side == TOP else L - p)
                    pos = _branch_positions(instance, j, i, side, lo=p)
                    trips.append(AloneTrip(anchor, "vertical", pos, items(pos),
                                           2 * (y - p)))

    # horizontal trips: maximal chains of alone cross-aisle moves
    for side, tag in ((TOP, "t"), (BOTTOM, "b")):
        entry = "T" if side == TOP else "B"
        branch_sym = "xptp" if side == TOP else "xpbp"
        right = [val(f"w{tag}r", j) for j in range(m)]
        left = [val(f"w{tag}l", j) for j in range(m)]
        chains = []  # (anchor aisle, covered aisles, gaps)
        for a in range(m):
            if right[a] and (a == 0 or not right[a - 1]):
                b = a
                while b < m and right[b]:
                    b += 1
                chains.append((a, list(range(a + 1, b + 1)), list(range(a, b))))
        for c in range(m):
            if left[c] and (c == m - 1 or not left[c + 1]):
                d = c
                while d >= 0 and left[d]:
                    d -= 1
                chains.append((c + 1, list(range(d + 1, c + 1)), list(range(d + 1, c + 1))))
        chains.sort(key=lambda t: t[0])
        taken = set()
        for anchor, covered, gaps in chains:
            edges = Counter()
            for g in gaps:
                edges[_key((entry, g), (entry, g + 1))] += 2
            pos = []
            for j in covered:
                if j in taken:
                    continue
                for i in instance.required[j]:
                    if val(branch_sym, j, i):
                        for e in _branch(layout, j, i, side):
                            edges[e] += 2
                        pos += _branch_positions(instance, j, i, side)
                taken.add(j)
            alone.update(edges)
            length = sum((layout.length(a, b) * k for (a, b), k in edges.items()), Fraction(0))
            trips.append(AloneTrip((entry, anchor), "horizontal", tuple(sorted(set(pos))),
                                   items(pos), length))
        for j, row in enumerate(instance.required):
            for i in row:
                if val(branch_sym, j, i) and j not in taken:
                    raise WalkError(f"picker-alone branch into aisle {j} has no alone trip")

    required = [("P", j, i) for j, row in enumerate(instance.required) for i in row]
    d = depot_node(instance.depot)
    return check_walk(cart, alone, d, d, required, layout, beta=instance.beta, trips=trips,
                      capacity=instance.capacity, expected=expected)


WALKERS = {
    "standard": walk_standard,
    "scattered": walk_scattered,
    "decoupling": walk_decoupling,
    "multidepot": walk_multidepot,
}


def reconstruct_walk(variant: str, instance, vmap, values, expected=None) -> PickerWalk:
    """Rebuild and validate the walk; ``expected`` defaults to the model objective."""
    if expected is None:
        expected = vmap.model.objective_value(values)
    return WALKERS[variant](instance, vmap, values, expected=expected)


def walk_from_dp(instance, result) -> PickerWalk:
    """Walk for a DP action trace; its cost must equal the DP objective."""
    from ..dp import BOTTOM_BRANCH, SPLIT, TOP_BRANCH, TRAVERSE, TRAVERSE2
    layout = _Layout(instance.geometry, instance.required)
    L = instance.geometry.aisle_length
    edges = Counter()
    for j, name in enumerate(result.configs):
        t, b = CROSS[name]
        edges[_key(("T", j), ("T", j + 1))] += t
        edges[_key(("B", j), ("B", j + 1))] += b
    for j, act in enumerate(result.actions):
        times = {TRAVERSE: 1, TRAVERSE2: 2}.get(act.kind, 0)
        for e in layout.segment(j, Fraction(0), L):
            edges[e] += times
        if act.kind in (TOP_BRANCH, SPLIT):
            for e in _branch(layout, j, act.top_to, TOP):
                edges[e] += 2
        if act.kind in (BOTTOM_BRANCH, SPLIT):
            for e in _branch(layout, j, act.bottom_from, BOTTOM):
                edges[e] += 2
    required = [("P", j, i) for j, row in enumerate(instance.required) for i in row]
    d = depot_node(instance.depot)
    return check_walk(edges, Counter(), d, d, required, layout, expected=result.objective)
