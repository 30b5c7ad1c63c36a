"""Exact rational two-phase simplex for bounded-variable LPs.

Dense tableau over ``Fraction``; Bland's smallest-index rule for both the
entering and the leaving variable, so the method terminates on degenerate
problems. Intended for desk-scale relaxations where exactness matters more
than speed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import EQ, GE, LE

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: Fraction | None
    x: list[Fraction] | None


class _Tableau:
    def __init__(self, rows, lower, upper):
        self.T = rows            # list of row lists (B^-1 A)
        self.lower = lower       # per column
        self.upper = upper       # per column; None = +inf
        self.m = len(rows)
        self.basis: list[int] = []
        self.xB: list[Fraction] = []
        self.at_upper: set[int] = set()

    def nonbasic_value(self, j):
        return self.upper[j] if j in self.at_upper else self.lower[j]

    def pivot(self, r, j):
        T = self.T
        row = T[r]
        piv = row[j]
        if piv != ONE:
            inv = ONE / piv
            T[r] = row = [a * inv if a else a for a in row]
        nz = [(k, a) for k, a in enumerate(row) if a]
        for i in range(self.m):
            if i == r:
                continue
            f = T[i][j]
            if f:
                Ti = T[i]
                for k, a in nz:
                    Ti[k] -= f * a

    def run(self, cost, allowed) -> str:
        """Minimize ``cost`` over the current basis; ``allowed`` columns may enter."""
        T = self.T
        while True:
            cb = [cost[b] for b in self.basis]
            entering = None
            direction = 0
            for j in allowed:
                if j in self._basic_set:
                    continue
                d = cost[j]
                for i in range(self.m):
                    t = T[i][j]
                    if t and cb[i]:
                        d -= cb[i] * t
                if j in self.at_upper:
                    if d > 0:
                        entering, direction = j, -1
                        break
                elif d < 0:
                    if self.upper[j] is not None and self.upper[j] == self.lower[j]:
                        continue
                    entering, direction = j, 1
                    break
            if entering is None:
                return "optimal"
            j = entering
            best_t = None
            leave = None  # (index for Bland, row or None for bound flip, goes_to_upper)
            if self.upper[j] is not None:
                best_t = self.upper[j] - self.lower[j]
                leave = (j, None, None)
            for i in range(self.m):
                alpha = direction * T[i][j]
                if alpha > 0:
                    t = (self.xB[i] - self.lower[self.basis[i]]) / alpha
                    to_upper = False
                elif alpha < 0:
                    ub = self.upper[self.basis[i]]
                    if ub is None:
                        continue
                    t = (ub - self.xB[i]) / -alpha
                    to_upper = True
                else:
                    continue
                if best_t is None or t < best_t or (t == best_t and self.basis[i] < leave[0]):
                    best_t = t
                    leave = (self.basis[i], i, to_upper)
            if best_t is None:
                return "unbounded"
            for i in range(self.m):
                a = T[i][j]
                if a:
                    self.xB[i] -= direction * best_t * a
            _, r, to_upper = leave
            if r is None:
                if direction > 0:
                    self.at_upper.add(j)
                else:
                    self.at_upper.discard(j)
                continue
            entering_value = self.nonbasic_value(j) + direction * best_t
            old = self.basis[r]
            self.at_upper.discard(j)
            if to_upper:
                self.at_upper.add(old)
            self.pivot(r, j)
            self._basic_set.discard(old)
            self._basic_set.add(j)
            self.basis[r] = j
            self.xB[r] = entering_value


def solve_lp(cost: Sequence, rows: Sequence, lower: Sequence, upper: Sequence) -> LpResult:
    """Minimize ``cost @ x`` subject to ``rows`` and ``lower <= x <= upper``.

    ``rows`` holds ``(terms, sense, rhs)`` with ``terms`` a list of
    ``(column, coeff)`` pairs. All bounds must be finite.
    """
    n = len(cost)
    rows = list(rows)
    m = len(rows)
    slack_of = {}
    ncols = n
    for i, (_, sense, _) in enumerate(rows):
        if sense != EQ:
            slack_of[i] = ncols
            ncols += 1
    art0 = ncols
    ncols += m
    lo = [Fraction(v) for v in lower] + [ZERO] * (ncols - n)
    up: list = [Fraction(v) for v in upper] + [None] * (art0 - n) + [None] * m
    if any(lo[j] > up[j] for j in range(n)):
        return LpResult("infeasible", None, None)

    dense = []
    residual = []
    for i, (terms, sense, rhs) in enumerate(rows):
        row = [ZERO] * ncols
        for v, c in terms:
            row[v] += Fraction(c)
        if sense == LE:
            row[slack_of[i]] = ONE
        elif sense == GE:
            row[slack_of[i]] = -ONE
        r = Fraction(rhs) - sum((row[v] * lo[v] for v in range(n) if row[v]), ZERO)
        sigma = ONE if r >= 0 else -ONE
        row = [sigma * a if a else a for a in row]
        row[art0 + i] = ONE
        dense.append(row)
        residual.append(abs(r))

    tab = _Tableau(dense, lo, up)
    tab.basis = [art0 + i for i in range(m)]
    tab._basic_set = set(tab.basis)
    tab.xB = residual

    phase1 = [ZERO] * art0 + [ONE] * m
    tab.run(phase1, range(ncols))
    infeas = sum((tab.xB[i] for i in range(m) if tab.basis[i] >= art0), ZERO)
    if infeas > 0:
        return LpResult("infeasible", None, None)
    # drive zero-valued artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if tab.basis[r] < art0:
            keep.append(r)
            continue
        col = next((j for j in range(art0) if j not in tab._basic_set and tab.T[r][j]), None)
        if col is None:
            continue
        value = tab.nonbasic_value(col)
        old = tab.basis[r]
        tab.at_upper.discard(col)
        tab.pivot(r, col)
        tab._basic_set.discard(old)
        tab._basic_set.add(col)
        tab.basis[r] = col
        tab.xB[r] = value
        keep.append(r)
    if len(keep) != m:
        tab.T = [tab.T[r] for r in keep]
        tab.basis = [tab.basis[r] for r in keep]
        tab.xB = [tab.xB[r] for r in keep]
        tab.m = len(keep)
    for k in range(m):
        tab.upper[art0 + k] = ZERO

    phase2 = [Fraction(c) for c in cost] + [ZERO] * (ncols - n)
    status = tab.run(phase2, range(art0))
    if status != "optimal":
        return LpResult(status, None, None)
    x = [tab.nonbasic_value(j) for j in range(n)]
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.xB[i]
    obj = sum((Fraction(c) * xi for c, xi in zip(cost, x)), ZERO)
    return LpResult("optimal", obj, x)
