"""Steiner-TSP ground truth on the physical warehouse graph.

Nodes are the aisle entries ``('T', j)``, ``('B', j)`` and the positions of
interest ``('P', j, i)``; positions in between are contracted into edge
lengths. Distances come from Dijkstra over exact rationals and tours from
Held-Karp on the resulting metric closure.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import count

from ..warehouse import Depot, TOP

HELD_KARP_CAP = 13


class OracleSizeError(ValueError):
    pass


def depot_node(depot: Depot):
    return ("T", depot.aisle) if depot.side == TOP else ("B", depot.aisle)


class WarehouseGraph:
    def __init__(self, geometry, positions):
        """``positions`` is an iterable of ``(aisle, position)`` pairs to keep as nodes."""
        self.geometry = geometry
        m = geometry.num_aisles
        L = geometry.aisle_length
        per_aisle = [set() for _ in range(m)]
        for j, i in positions:
            per_aisle[j].add(i)
        self.adj: dict = {}
        for j in range(m):
            chain = [(("T", j), Fraction(0))]
            chain += [(("P", j, i), geometry.depth[i]) for i in sorted(per_aisle[j])]
            chain.append((("B", j), L))
            for (a, ya), (b, yb) in zip(chain, chain[1:]):
                self._edge(a, b, yb - ya)
        for j in range(m - 1):
            g = geometry.cross_gap[j]
            self._edge(("T", j), ("T", j + 1), g)
            self._edge(("B", j), ("B", j + 1), g)
        self._dist: dict = {}

    def _edge(self, a, b, w):
        self.adj.setdefault(a, []).append((b, w))
        self.adj.setdefault(b, []).append((a, w))

    @property
    def nodes(self):
        return sorted(self.adj)

    def distances_from(self, source) -> dict:
        if source not in self._dist:
            dist = {source: Fraction(0)}
            tie = count()
            heap = [(Fraction(0), next(tie), source)]
            done = set()
            while heap:
                d, _, u = heapq.heappop(heap)
                if u in done:
                    continue
                done.add(u)
                for v, w in self.adj[u]:
                    nd = d + w
                    if v not in dist or nd < dist[v]:
                        dist[v] = nd
                        heapq.heappush(heap, (nd, next(tie), v))
            self._dist[source] = dist
        return self._dist[source]

    def distance(self, a, b) -> Fraction:
        return self.distances_from(a)[b]


def _targets(required, start, end=None):
    nodes = []
    for r in required:
        if r != start and r != end and r not in nodes:
            nodes.append(r)
    if len(nodes) > HELD_KARP_CAP:
        raise OracleSizeError(f"{len(nodes)} required nodes exceed the cap of {HELD_KARP_CAP}")
    return nodes


def _held_karp(graph: WarehouseGraph, nodes, start, end) -> Fraction:
    k = len(nodes)
    if k == 0:
        return graph.distance(start, end)
    d = [[graph.distance(a, b) for b in nodes] for a in nodes]
    from_start = [graph.distance(start, b) for b in nodes]
    to_end = [graph.distance(a, end) for a in nodes]
    full = (1 << k) - 1
    best = [dict() for _ in range(1 << k)]
    for t in range(k):
        best[1 << t][t] = from_start[t]
    for mask in range(1, full + 1):
        row = best[mask]
        if not row:
            continue
        for last, cost in row.items():
            rest = full ^ mask
            while rest:
                bit = rest & -rest
                rest ^= bit
                nxt = bit.bit_length() - 1
                nmask = mask | bit
                c = cost + d[last][nxt]
                cur = best[nmask].get(nxt)
                if cur is None or c < cur:
                    best[nmask][nxt] = c
    return min(cost + to_end[t] for t, cost in best[full].items())


def steiner_tsp_closed(graph: WarehouseGraph, required, depot) -> Fraction:
    """Shortest closed walk from ``depot`` through every node in ``required``."""
    return _held_karp(graph, _targets(required, depot), depot, depot)


def steiner_tsp_open(graph: WarehouseGraph, required, start, end) -> Fraction:
    """Shortest walk from ``start`` to ``end`` through every node in ``required``."""
    return _held_karp(graph, _targets(required, start, end), start, end)


def instance_graph(instance) -> WarehouseGraph:
    return WarehouseGraph(instance.geometry,
                          [(j, i) for j, row in enumerate(instance.required) for i in row])


def required_nodes(instance):
    return [("P", j, i) for j, row in enumerate(instance.required) for i in row]


def standard_oracle(instance) -> Fraction:
    return steiner_tsp_closed(instance_graph(instance), required_nodes(instance),
                              depot_node(instance.depot))


def multidepot_oracle(instance) -> Fraction:
    """Minimum over end candidates of the open-walk optimum."""
    graph = instance_graph(instance)
    req = required_nodes(instance)
    start = depot_node(instance.depot)
    return min(steiner_tsp_open(graph, req, start, depot_node(e))
               for e in instance.sorted_candidates())
