"""Exhaustive selection oracle for scattered storage."""
from __future__ import annotations

from fractions import Fraction

from ..warehouse import ScatteredInstance
from .steiner import OracleSizeError, WarehouseGraph, depot_node, steiner_tsp_closed

SCATTERED_CAP = 16


def covering_sets(instance: ScatteredInstance):
    """All inclusion-minimal position sets whose supply meets every demand."""
    positions = sorted({(j, i) for (j, i, h) in instance.supply if h in instance.demand})
    if len(positions) > SCATTERED_CAP:
        raise OracleSizeError(f"{len(positions)} candidate positions exceed {SCATTERED_CAP}")
    holds = [{h: s for (j, i, h), s in instance.supply.items() if (j, i) == pos and h in instance.demand}
             for pos in positions]
    skus = list(instance.demand)

    def covers(chosen):
        return all(sum(holds[t].get(h, 0) for t in chosen) >= instance.demand[h] for h in skus)

    # depth-first include/exclude with a remaining-supply bound
    suffix = [dict.fromkeys(skus, 0) for _ in range(len(positions) + 1)]
    for t in range(len(positions) - 1, -1, -1):
        suffix[t] = {h: suffix[t + 1][h] + holds[t].get(h, 0) for h in skus}
    found = []

    def walk(t, chosen, need):
        if all(v <= 0 for v in need.values()):
            if not any(covers([u for u in chosen if u != x]) for x in chosen):
                found.append(frozenset(positions[x] for x in chosen))
            return
        if t == len(positions) or any(need[h] > suffix[t][h] for h in skus):
            return
        if any(holds[t].get(h, 0) and need[h] > 0 for h in skus):
            walk(t + 1, chosen + [t], {h: need[h] - holds[t].get(h, 0) for h in skus})
        walk(t + 1, chosen, need)

    walk(0, [], dict(instance.demand))
    return found


def scattered_bruteforce(instance: ScatteredInstance) -> Fraction:
    """Min over demand-covering selections of the exact closed tour.

    Tour length never decreases when positions are added, so minimal covers
    suffice.
    """
    positions = sorted({(j, i) for (j, i, h) in instance.supply if h in instance.demand})
    graph = WarehouseGraph(instance.geometry, positions)
    depot = depot_node(instance.depot)
    best = None
    for chosen in covering_sets(instance):
        cost = steiner_tsp_closed(graph, [("P", j, i) for j, i in sorted(chosen)], depot)
        if best is None or cost < best:
            best = cost
    return best
