"""Aisle-sweep dynamic program for the standard single-block routing problem.

The sweep moves left to right. Between aisles ``j`` and ``j+1`` the partial
tour is summarised by the cross-aisle configuration used on that gap plus,
for the doubled-both configuration, whether the two frontier nodes already
belong to one component. With the empty start this gives six classes:

    (2,0)   top doubled            (0,2)   bottom doubled
    (1,1)   both once, connected   (2,2,1) both doubled, connected
    (2,2,2) both doubled, two components
    start   nothing visited yet

At each aisle a vertical action is combined with the outgoing configuration.
A transition is admissible when both aisle-entry nodes end with even degree,
no component is left behind without a frontier node, and the depot node is
touched. The final aisle must close everything into a single component.

Vertical actions and their lengths (``y`` are pick depths, ``L`` the aisle
length): traverse ``L``, traverse twice ``2L``, top branch ``2 max y``,
bottom branch ``2 (L - min y)``, and a top plus bottom branch that skips the
largest interior gap between consecutive picks.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .warehouse import InstanceError, StandardInstance

NONE = "none"
TRAVERSE = "traverse"
TRAVERSE2 = "traverse2"
TOP_BRANCH = "top"
BOTTOM_BRANCH = "bottom"
SPLIT = "split"

GAP_CONFIGS = {"x2t": (2, 0), "x2b": (0, 2), "xtb": (1, 1), "x2tb": (2, 2)}

START = ("start",)


@dataclass(frozen=True)
class AisleAction:
    kind: str
    # deepest pick reached from the top / shallowest reached from the bottom
    top_to: int | None = None
    bottom_from: int | None = None


@dataclass
class DpResult:
    objective: Fraction
    actions: list[AisleAction]
    configs: list[str]          # one per gap, len m - 1
    states: list[tuple]


def _actions(instance: StandardInstance, j: int):
    geo = instance.geometry
    L = geo.aisle_length
    picks = instance.required[j]
    if not picks:
        return [(AisleAction(NONE), Fraction(0), 0, 0, False),
                (AisleAction(TRAVERSE), L, 1, 1, True),
                (AisleAction(TRAVERSE2), 2 * L, 2, 2, True)]
    ys = [geo.depth[i] for i in picks]
    out = [(AisleAction(TRAVERSE), L, 1, 1, True),
           (AisleAction(TRAVERSE2), 2 * L, 2, 2, True),
           (AisleAction(TOP_BRANCH, top_to=picks[-1]), 2 * ys[-1], 2, 0, False),
           (AisleAction(BOTTOM_BRANCH, bottom_from=picks[0]), 2 * (L - ys[0]), 0, 2, False)]
    if len(picks) > 1:
        k = max(range(len(picks) - 1), key=lambda t: (ys[t + 1] - ys[t], -t))
        cost = 2 * (L - (ys[k + 1] - ys[k]))
        out.append((AisleAction(SPLIT, top_to=picks[k], bottom_from=picks[k + 1]), cost, 2, 2, False))
    return out


def _transition(state, vt, vb, joins, right, depot_side, last):
    """Next state or ``None``; ``right`` is the outgoing (top, bottom) multiplicity."""
    if state == START:
        lt = lb = 0
        left_connected = False
    else:
        lt, lb = state[0], state[1]
        left_connected = state[0] == 1 or len(state) == 2 or state[2] == 1
    rt, rb = right
    deg_t = lt + vt + rt
    deg_b = lb + vb + rb
    if deg_t % 2 or deg_b % 2:
        return None
    if depot_side == "top" and deg_t == 0 or depot_side == "bottom" and deg_b == 0:
        return None
    # union-find over the two entry nodes: 0 = top, 1 = bottom
    comp = {}
    if lt and lb:
        comp = {0: 0, 1: 0} if left_connected else {0: 0, 1: 1}
    elif lt:
        comp = {0: 0}
    elif lb:
        comp = {1: 1}
    if deg_t and 0 not in comp:
        comp[0] = 2
    if deg_b and 1 not in comp:
        comp[1] = 3
    if joins and comp.get(0) != comp.get(1):
        old = comp[1]
        for key in comp:
            if comp[key] == old:
                comp[key] = comp[0]
    live = {comp[node] for node, r in ((0, rt), (1, rb)) if r and node in comp}
    if last:
        return ("end",) if len(set(comp.values())) == 1 else None
    if set(comp.values()) - live:
        return None  # a component would be closed off before the last aisle
    if rt and rb:
        same = comp[0] == comp[1]
        if (rt, rb) == (1, 1):
            return (1, 1) if same else None
        return (2, 2, 1 if same else 2)
    return (rt, rb)


def solve_dp(instance: StandardInstance) -> DpResult:
    if not instance.is_reduced():
        raise InstanceError("instance must be reduced to its relevant part first")
    m = instance.m
    gaps = instance.geometry.cross_gap
    layer = {START: (Fraction(0), None)}
    history = []
    for j in range(m):
        depot_side = instance.depot.side if instance.depot.aisle == j else None
        last = j == m - 1
        if last:
            rights = [(None, (0, 0), Fraction(0))]
        else:
            rights = [(name, mult, (4 if mult == (2, 2) else 2) * gaps[j])
                      for name, mult in GAP_CONFIGS.items()]
        nxt: dict = {}
        for state in sorted(layer, key=repr):
            cost, _ = layer[state]
            for action, acost, vt, vb, joins in _actions(instance, j):
                for name, mult, gcost in rights:
                    new = _transition(state, vt, vb, joins, mult, depot_side, last)
                    if new is None:
                        continue
                    total = cost + acost + gcost
                    if new not in nxt or total < nxt[new][0]:
                        nxt[new] = (total, (state, action, name))
        if not nxt:
            raise AssertionError("no feasible transition; the instance cannot be routed")
        history.append(nxt)
        layer = nxt
    objective, _ = layer[("end",)]
    actions, configs, states = [], [], []
    state = ("end",)
    for j in range(m - 1, -1, -1):
        _, (prev, action, name) = history[j][state]
        actions.append(action)
        if name is not None:
            configs.append(name)
        states.append(state)
        state = prev
    actions.reverse()
    configs.reverse()
    states.reverse()
    return DpResult(objective, actions, configs, states)
