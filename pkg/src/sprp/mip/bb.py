"""Best-bound branch-and-bound over LP relaxations.

Incumbents are always certified by the exact rational evaluator. With the
floating-point HiGHS backend a node is pruned only when its bound exceeds the
incumbent minus the objective granularity by more than a relative 1e-6, so a
strictly better integral point can never be discarded through round-off.
"""
from __future__ import annotations

import heapq
import math
import time
from fractions import Fraction

from .model import (BINARY, EQ, GE, INFEASIBLE, LE, NODE_LIMIT, OPTIMAL, TIME_LIMIT,
                    MipModel, MipSolution, evaluate)
from .simplex import solve_lp

INT_TOL = 1e-6
PRUNE_RTOL = 1e-6


class HighsBackend:
    """Float LP relaxation kept alive across nodes for warm starts."""

    exact = False

    def __init__(self, model: MipModel):
        import highspy
        import numpy as np

        self._np = np
        inf = highspy.kHighsInf
        n = model.num_vars
        lp = highspy.HighsLp()
        lp.num_col_ = n
        lp.num_row_ = len(model.constraints)
        cost = np.zeros(n)
        for v, c in model.objective:
            cost[v] = float(c)
        lp.col_cost_ = cost
        lp.col_lower_ = np.array([v.lower for v in model.variables], dtype=float)
        lp.col_upper_ = np.array([v.upper for v in model.variables], dtype=float)
        row_lo, row_up = [], []
        starts, index, value = [0], [], []
        for con in model.constraints:
            rhs = float(con.rhs)
            row_lo.append(rhs if con.sense in (GE, EQ) else -inf)
            row_up.append(rhs if con.sense in (LE, EQ) else inf)
            for v, c in con.terms:
                index.append(v)
                value.append(float(c))
            starts.append(len(index))
        lp.row_lower_ = np.array(row_lo, dtype=float)
        lp.row_upper_ = np.array(row_up, dtype=float)
        lp.a_matrix_.format_ = highspy.MatrixFormat.kRowwise
        lp.a_matrix_.start_ = np.array(starts, dtype=np.int32)
        lp.a_matrix_.index_ = np.array(index, dtype=np.int32)
        lp.a_matrix_.value_ = np.array(value, dtype=float)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("threads", 1)
        h.setOptionValue("presolve", "off")
        h.passModel(lp)
        self._h = h
        self._ok = highspy.HighsModelStatus.kOptimal
        self._idx = np.arange(n, dtype=np.int32)
        self._n = n

    def solve(self, lower, upper):
        np = self._np
        h = self._h
        h.changeColsBounds(self._n, self._idx, np.asarray(lower, dtype=float),
                           np.asarray(upper, dtype=float))
        h.run()
        if h.getModelStatus() != self._ok:
            return None, None
        return h.getInfo().objective_function_value, list(h.getSolution().col_value)


class ExactBackend:
    exact = True

    def __init__(self, model: MipModel):
        self.cost = [Fraction(0)] * model.num_vars
        for v, c in model.objective:
            self.cost[v] = c
        self.rows = [(con.terms, con.sense, con.rhs) for con in model.constraints]

    def solve(self, lower, upper):
        res = solve_lp(self.cost, self.rows, lower, upper)
        if res.status != "optimal":
            return None, None
        return res.objective, res.x


BACKENDS = {"highs": HighsBackend, "exact": ExactBackend}


def _frac_part(x) -> float:
    f = float(x) - math.floor(float(x))
    return min(f, 1 - f)


def _is_integral(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1
    return abs(x - round(x)) <= INT_TOL


def _branch_var(model: MipModel, x, lower, upper):
    best = None
    best_key = None
    for v, var in enumerate(model.variables):
        if lower[v] == upper[v] or _is_integral(x[v]):
            continue
        key = (0 if var.kind == BINARY else 1, -_frac_part(x[v]))
        if best_key is None or key < best_key:
            best, best_key = v, key
    return best


def solve_bb(model: MipModel, time_limit: float | None = None, node_limit: int | None = None,
             lp: str = "highs", warm_start=None) -> MipSolution:
    """Minimize ``model``; status reports optimality or the limit that was hit."""
    start = time.perf_counter()
    backend = BACKENDS[lp](model)
    step = model.objective_granularity()
    incumbent = None
    inc_obj = None
    history = []

    if warm_start is not None:
        ev = evaluate(model, warm_start)
        if ev.feasible:
            incumbent = [int(x) for x in (warm_start if not hasattr(warm_start, "keys")
                                           else [warm_start[v.name] for v in model.variables])]
            inc_obj = ev.objective
            history.append(inc_obj)

    def prunable(bound) -> bool:
        if inc_obj is None:
            return False
        target = inc_obj - step
        if backend.exact:
            return bound > target
        return bound > float(target) + PRUNE_RTOL * max(1.0, abs(float(inc_obj)))

    exact_cache = []

    def exact_backend():
        if not exact_cache:
            exact_cache.append(ExactBackend(model))
        return exact_cache[0]

    heap: list = []
    counter = 0
    nodes = 0
    status = None

    def process(lower, upper):
        nonlocal nodes, counter, incumbent, inc_obj
        nodes += 1
        bound, x = backend.solve(lower, upper)
        if bound is None or prunable(bound):
            return
        v = _branch_var(model, x, lower, upper)
        if v is None:
            candidate = [int(round(float(xi))) if not isinstance(xi, Fraction) else int(xi) for xi in x]
            ev = evaluate(model, candidate)
            if ev.feasible:
                if inc_obj is None or ev.objective < inc_obj:
                    incumbent, inc_obj = candidate, ev.objective
                    history.append(inc_obj)
                return
            if backend.exact:
                return
            # round-off produced a near-integral but infeasible point: redo exactly
            bound, x = exact_backend().solve(lower, upper)
            if bound is None or prunable(bound):
                return
            v = _branch_var(model, x, lower, upper)
            if v is None:
                candidate = [int(xi) for xi in x]
                ev = evaluate(model, candidate)
                if inc_obj is None or ev.objective < inc_obj:
                    incumbent, inc_obj = candidate, ev.objective
                    history.append(inc_obj)
                return
        val = float(x[v])
        down_ub = math.floor(val)
        up_lb = down_ub + 1
        lo_child = list(lower)
        up_child = list(upper)
        up_child[v] = down_ub
        lo_child[v] = up_lb
        for child_lower, child_upper in ((lower, up_child), (lo_child, upper)):
            counter += 1
            heapq.heappush(heap, (bound, counter, child_lower, child_upper))

    lower0 = [v.lower for v in model.variables]
    upper0 = [v.upper for v in model.variables]
    process(lower0, upper0)
    best_bound = None
    while heap:
        if time_limit is not None and time.perf_counter() - start > time_limit:
            status = TIME_LIMIT
            break
        if node_limit is not None and nodes >= node_limit:
            status = NODE_LIMIT
            break
        parent_bound, _, lower, upper = heapq.heappop(heap)
        if prunable(parent_bound):
            continue
        process(lower, upper)
    if status is not None:
        best_bound = min([b for b, *_ in heap], default=None)
    elif incumbent is None:
        status = INFEASIBLE
    else:
        status = OPTIMAL
        best_bound = inc_obj
    return MipSolution(incumbent, inc_obj, status, nodes, time.perf_counter() - start,
                       best_bound, history)
