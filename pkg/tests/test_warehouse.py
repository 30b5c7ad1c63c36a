from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sprp.coefficients import compute_coefficients, park_depth
from sprp.oracle import WarehouseGraph
from sprp.warehouse import (BOTTOM, TOP, DecouplingInstance, Depot, Geometry, InstanceError,
                            StandardInstance, items_prefix, reduce_to_relevant)

from conftest import worked1_instance


def test_worked1_reduction():
    reduced, offset = reduce_to_relevant(worked1_instance())
    assert reduced.m == 6 and offset == 1
    assert reduced.required == ((1,), (9,), (2, 3, 7), (3,), (5, 6), (7,))
    assert reduced.depot == Depot(3, BOTTOM)


def test_reduction_to_depot_aisle_only():
    inst = StandardInstance(Geometry.default(5, 4), Depot(2, TOP), {2: [0, 3]})
    reduced, offset = reduce_to_relevant(inst)
    assert reduced.m == 1 and offset == 2 and reduced.required == ((0, 3),)


def test_reduction_noop_when_every_aisle_has_picks():
    inst = StandardInstance(Geometry.default(3, 4), Depot(0, BOTTOM), {0: [1], 1: [2], 2: [0]})
    reduced, offset = reduce_to_relevant(inst)
    assert reduced is inst and offset == 0


def test_nothing_to_pick():
    with pytest.raises(InstanceError, match="nothing to pick"):
        StandardInstance(Geometry.default(3, 4), Depot(0, BOTTOM), {})


def test_geometry_validation():
    with pytest.raises(InstanceError):
        Geometry(2, 2, (5,), (2, 1), 3)
    with pytest.raises(InstanceError):
        Geometry(2, 2, (5,), (1, 3), 3)
    with pytest.raises(InstanceError):
        Geometry(2, 2, (-1,), (1, 2), 3)
    with pytest.raises(InstanceError):
        Depot(0, "left")


def test_beta_above_one_rejected():
    with pytest.raises(InstanceError):
        DecouplingInstance(Geometry.default(2, 3), Depot(0, BOTTOM), {(0, 1): 1}, 2, Fraction(3, 2))


@st.composite
def standard_instances(draw, max_m=8, max_n=6):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    cells = draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, n - 1)),
                         min_size=1, max_size=6))
    req = {}
    for j, i in cells:
        req.setdefault(j, []).append(i)
    depot = Depot(draw(st.integers(0, m - 1)), draw(st.sampled_from([TOP, BOTTOM])))
    return StandardInstance(Geometry.default(m, n), depot, req)


@given(standard_instances())
def test_reduction_idempotent_and_tight(inst):
    reduced, offset = reduce_to_relevant(inst)
    again, off2 = reduce_to_relevant(reduced)
    assert again == reduced and off2 == 0
    ends = {0, reduced.m - 1}
    for j in ends:
        assert reduced.required[j] or reduced.depot.aisle == j
    for j, row in enumerate(reduced.required):
        assert inst.required[j + offset] == row


def test_coefficients_spec_values():
    geo = Geometry(3, 9, (1, 5), range(1, 10), 10)
    inst = StandardInstance(geo, Depot(0, BOTTOM), {0: [4], 2: [0, 8]})
    c = compute_coefficients(inst)
    assert c.c2tb[0] == 4 and c.c2tb[1] == 20
    # midpoint y = L/2
    assert c.cpt[(0, 4)] == c.cpb[(0, 4)] == 10


@given(standard_instances())
def test_coefficient_identities(inst):
    c = compute_coefficients(inst)
    L = inst.geometry.aisle_length
    for j in range(inst.m):
        assert c.c2tb[j] == 2 * c.c2t[j] == 2 * c.c2b[j] == 2 * c.ctb[j]
        assert c.c2u[j] == 2 * c.cu[j]
    for key in c.cpt:
        assert c.cpt[key] + c.cpb[key] == 2 * L
        assert c.cpt[key] >= 0 and c.cpb[key] >= 0


def test_alone_branch_coefficient_against_grid_distance():
    geo = Geometry(1, 9, (), range(1, 10), 10)
    inst = DecouplingInstance(geo, Depot(0, TOP), {(0, 3): 1}, 1, Fraction(1, 2))
    c = compute_coefficients(inst)
    assert c.cpt_alone[(0, 3)] == 4
    graph = WarehouseGraph(geo, [(0, 3)])
    assert c.cpt_alone[(0, 3)] == inst.beta * 2 * graph.distance(("T", 0), ("P", 0, 3))


def test_park_depth_shallowest_feasible():
    depths = [Fraction(1), Fraction(3), Fraction(6)]
    assert park_depth(depths, [1, 1, 1], 2, 3) == 0
    assert park_depth(depths, [1, 1, 1], 2, 2) == 1
    assert park_depth(depths, [1, 1, 1], 2, 1) == 3
    assert park_depth(depths, [2, 2, 2], 2, 1) == 6


def test_cart_parking_branch_cost():
    geo = Geometry(1, 9, (), range(1, 10), 10)
    inst = DecouplingInstance(geo, Depot(0, TOP), {(0, 1): 1, (0, 3): 1, (0, 6): 1}, 2,
                              Fraction(1, 2))
    c = compute_coefficients(inst)
    # deepest branch parks at depth y_1 = 2, then walks 5 alone
    assert c.park_top[(0, 6)] == 2
    assert c.cpt[(0, 6)] == 2 * 2 + 2 * Fraction(1, 2) * 5


def test_items_prefix_examples():
    geo = Geometry.default(2, 8)
    inst = DecouplingInstance(geo, Depot(0, BOTTOM), {(0, 2): 1, (0, 5): 1, (1, 0): 1}, 2,
                              Fraction(1, 2))
    assert items_prefix(inst, 0, 5, TOP) == 2
    assert items_prefix(inst, 0, 4, TOP) == 1
    assert items_prefix(inst, 1, 7, TOP) == 1
    inst2 = DecouplingInstance(geo, Depot(0, BOTTOM), {(1, 0): 1}, 2, Fraction(1, 2))
    assert all(items_prefix(inst2, 0, i, s) == 0 for i in range(8) for s in (TOP, BOTTOM))


@settings(max_examples=50)
@given(st.dictionaries(st.integers(0, 7), st.integers(1, 4), min_size=1))
def test_items_prefix_split(demands):
    inst = DecouplingInstance(Geometry.default(1, 8), Depot(0, BOTTOM),
                              {(0, i): r for i, r in demands.items()}, 2, Fraction(1, 2))
    total = sum(demands.values())
    for i in range(-1, 8):
        top = items_prefix(inst, 0, i, TOP)
        bottom = items_prefix(inst, 0, i + 1, BOTTOM)
        assert top + bottom == total
