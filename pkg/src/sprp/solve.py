"""Solver dispatch shared by the command line and the benchmark grid."""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .dp import solve_dp
from .formulations import build_model, reconstruct_walk, walk_from_dp
from .formulations.walk import PickerWalk
from .mip.bb import solve_bb
from .mip.model import OPTIMAL
from .oracle import model_exhaustive, multidepot_oracle, scattered_bruteforce, standard_oracle
from .warehouse import DECOUPLING, MULTIDEPOT, SCATTERED, STANDARD, reduce_to_relevant

SOLVERS = ("bb", "dp", "oracle")


class SolverMismatch(ValueError):
    pass


@dataclass
class SolveReport:
    objective: Fraction | None
    status: str
    seconds: float
    walk: PickerWalk | None = None
    values: list | None = None
    model: object = None
    vmap: object = None
    reduced: object = None
    offset: int = 0
    nodes: int = 0

    @property
    def notes(self) -> list[str]:
        out = []
        beta = getattr(self.reduced, "beta", None)
        if beta is not None and beta < Fraction(1, 2):
            out.append("beta below 0.5: model-optimal, possibly not walk-optimal")
        return out


def solve_instance(instance, solver: str = "bb", time_limit: float | None = 60.0,
                   node_limit: int | None = None, validate: bool = True) -> SolveReport:
    reduced, offset = reduce_to_relevant(instance)
    start = time.perf_counter()
    if solver == "dp":
        if instance.variant != STANDARD:
            raise SolverMismatch(f"the dp solver handles the standard variant only, "
                                 f"not {instance.variant!r}")
        res = solve_dp(reduced)
        walk = walk_from_dp(reduced, res) if validate else None
        return SolveReport(res.objective, OPTIMAL, time.perf_counter() - start, walk,
                           reduced=reduced, offset=offset)
    if solver == "oracle":
        if instance.variant == STANDARD:
            obj = standard_oracle(reduced)
        elif instance.variant == MULTIDEPOT:
            obj = multidepot_oracle(reduced)
        elif instance.variant == SCATTERED:
            obj = scattered_bruteforce(reduced)
        else:
            model, vmap = build_model(reduced)
            res = model_exhaustive(model)
            return SolveReport(res.objective, res.status, time.perf_counter() - start,
                               values=res.values, model=model, vmap=vmap, reduced=reduced,
                               offset=offset)
        return SolveReport(obj, OPTIMAL, time.perf_counter() - start, reduced=reduced,
                           offset=offset)
    if solver != "bb":
        raise SolverMismatch(f"unknown solver {solver!r}")
    model, vmap = build_model(reduced)
    sol = solve_bb(model, time_limit=time_limit, node_limit=node_limit)
    seconds = time.perf_counter() - start
    walk = None
    if validate and sol.values is not None:
        walk = reconstruct_walk(instance.variant, reduced, vmap, sol.values)
    return SolveReport(sol.objective, sol.status, seconds, walk, sol.values, model, vmap,
                       reduced, offset, sol.nodes)


def standard_counterpart(instance):
    """Closed-tour standard instance on the same picks and depot, if it exists."""
    if instance.variant in (DECOUPLING, MULTIDEPOT):
        return instance.standard()
    if instance.variant == STANDARD:
        return instance
    return None
