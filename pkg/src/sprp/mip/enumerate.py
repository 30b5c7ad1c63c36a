"""Exhaustive search over the integer points of a small model.

Depth-first over variables in declaration order, with interval bound
propagation on the integer-scaled rows after every fixing. Leaves are checked
by the exact evaluator, so propagation only ever removes infeasible points.
"""
from __future__ import annotations

from fractions import Fraction

from .model import EQ, GE, LE, MipModel, evaluate, scaled_rows


class EnumerationLimit(ValueError):
    pass


class _Propagator:
    def __init__(self, model: MipModel):
        rows = []
        for terms, sense, rhs in scaled_rows(model):
            if sense in (LE, EQ):
                rows.append((terms, rhs))
            if sense in (GE, EQ):
                rows.append(([(v, -c) for v, c in terms], -rhs))
        self.rows = rows  # all as sum(c x) <= rhs
        self.var_rows = [[] for _ in range(model.num_vars)]
        for r, (terms, _) in enumerate(rows):
            for v, _ in terms:
                self.var_rows[v].append(r)

    def run(self, lower, upper, touched=None) -> bool:
        """Tighten ``lower``/``upper`` in place; False when a row is violated."""
        queue = list(range(len(self.rows))) if touched is None else \
            sorted({r for v in touched for r in self.var_rows[v]})
        pending = set(queue)
        while queue:
            r = queue.pop()
            pending.discard(r)
            terms, rhs = self.rows[r]
            min_act = 0
            for v, c in terms:
                min_act += c * (lower[v] if c > 0 else upper[v])
            if min_act > rhs:
                return False
            slack = rhs - min_act
            for v, c in terms:
                if c > 0:
                    span = (upper[v] - lower[v]) * c
                    if span > slack:
                        new_up = lower[v] + slack // c
                        upper[v] = new_up
                        changed = v
                    else:
                        continue
                else:
                    span = (upper[v] - lower[v]) * -c
                    if span > slack:
                        new_lo = upper[v] - slack // -c
                        lower[v] = new_lo
                        changed = v
                    else:
                        continue
                for r2 in self.var_rows[changed]:
                    if r2 != r and r2 not in pending:
                        pending.add(r2)
                        queue.append(r2)
        return True


def free_after_propagation(model: MipModel) -> int | None:
    """Number of unfixed variables after root propagation (None if infeasible)."""
    prop = _Propagator(model)
    lower = [v.lower for v in model.variables]
    upper = [v.upper for v in model.variables]
    if not prop.run(lower, upper):
        return None
    return sum(1 for a, b in zip(lower, upper) if a < b)


def enumerate_optimum(model: MipModel, max_free: int | None = None):
    """Minimum objective and a minimizer, or ``(None, None)`` if infeasible.

    Search is exhaustive apart from discarding subtrees whose interval lower
    bound on the objective cannot beat the incumbent.
    """
    prop = _Propagator(model)
    n = model.num_vars
    lower = [v.lower for v in model.variables]
    upper = [v.upper for v in model.variables]
    if not prop.run(lower, upper):
        return None, None
    free = sum(1 for a, b in zip(lower, upper) if a < b)
    if max_free is not None and free > max_free:
        raise EnumerationLimit(f"{free} free variables after propagation exceed {max_free}")
    cost = [Fraction(0)] * n
    for v, c in model.objective:
        cost[v] = c
    best = [None, None]

    def bound(lo, up):
        return sum((c * (lo[v] if c > 0 else up[v]) for v, c in enumerate(cost) if c), Fraction(0))

    def search(lo, up):
        if best[0] is not None and bound(lo, up) >= best[0]:
            return
        v = next((k for k in range(n) if lo[k] < up[k]), None)
        if v is None:
            ev = evaluate(model, lo)
            if ev.feasible and (best[0] is None or ev.objective < best[0]):
                best[0], best[1] = ev.objective, list(lo)
            return
        for value in range(lo[v], up[v] + 1):
            lo2, up2 = list(lo), list(up)
            lo2[v] = up2[v] = value
            if prop.run(lo2, up2, touched=[v]):
                search(lo2, up2)

    search(lower, upper)
    return best[0], best[1]


def enumerate_feasible(model: MipModel, limit: int | None = None):
    """Yield every feasible integer point (in lexicographic order)."""
    prop = _Propagator(model)
    n = model.num_vars
    lower = [v.lower for v in model.variables]
    upper = [v.upper for v in model.variables]
    if not prop.run(lower, upper):
        return
    produced = 0
    stack = [(lower, upper)]
    while stack:
        lo, up = stack.pop()
        v = next((k for k in range(n) if lo[k] < up[k]), None)
        if v is None:
            if evaluate(model, lo).feasible:
                yield list(lo)
                produced += 1
                if limit is not None and produced >= limit:
                    return
            continue
        for value in range(up[v], lo[v] - 1, -1):
            lo2, up2 = list(lo), list(up)
            lo2[v] = up2[v] = value
            if prop.run(lo2, up2, touched=[v]):
                stack.append((lo2, up2))
