"""Brute-force certification of small models."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..mip.enumerate import EnumerationLimit, enumerate_optimum
from ..mip.model import INFEASIBLE, OPTIMAL, MipModel
from .steiner import OracleSizeError

EXHAUSTIVE_CAP = 26


@dataclass
class ExhaustiveResult:
    status: str
    objective: Fraction | None
    values: list[int] | None


def model_exhaustive(model: MipModel, cap: int = EXHAUSTIVE_CAP) -> ExhaustiveResult:
    try:
        obj, values = enumerate_optimum(model, max_free=cap)
    except EnumerationLimit as exc:
        raise OracleSizeError(str(exc)) from None
    if obj is None:
        return ExhaustiveResult(INFEASIBLE, None, None)
    return ExhaustiveResult(OPTIMAL, obj, values)
