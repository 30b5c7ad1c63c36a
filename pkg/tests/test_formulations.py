import random
from collections import Counter
from fractions import Fraction

import pytest

from sprp.coefficients import compute_coefficients
from sprp.dp import solve_dp
from sprp.formulations import (VarMap, WalkError, build_decoupling, build_model,
                               build_multidepot, build_scattered, build_standard,
                               reconstruct_walk)
from sprp.formulations.builders import standard_size
from sprp.formulations.walk import _Layout, check_walk
from sprp.generator import GeneratorSpec, generate_instance
from sprp.mip.bb import solve_bb
from sprp.mip.model import OPTIMAL, evaluate
from sprp.oracle import standard_oracle
from sprp.solve import solve_instance
from sprp.warehouse import (BOTTOM, SIDES, TOP, DecouplingInstance, Depot, Geometry,
                            InstanceError, MultiDepotInstance, ScatteredInstance,
                            StandardInstance, items_prefix, reduce_to_relevant)

from conftest import (WORKED1_GIVEN, WORKED1_ONES, WORKED2_ONES, WORKED3_ONES, WORKED4_GIVEN, WORKED4_ONES,
                      completions, worked1_instance, random_standard)

WORKED1_OPT = 102  # frozen after agreement of branch-and-bound, DP and Held-Karp


# -- standard ----------------------------------------------------------------------

def test_unreduced_instance_rejected():
    with pytest.raises(InstanceError):
        build_standard(worked1_instance())


def test_worked1_size(worked1_model, worked1):
    model, _ = worked1_model
    a = len(worked1.pick_positions())
    assert (model.num_vars, len(model.constraints)) == standard_size(6, a, 1) == (72, 76)


def test_worked1_published_assignment(worked1_model, worked1):
    model, vmap = worked1_model
    sols = completions(model, vmap, WORKED1_ONES, WORKED1_GIVEN)
    assert len(sols) == 1
    walk = reconstruct_walk("standard", worked1, vmap, sols[0])
    assert walk.closed and walk.cost == evaluate(model, sols[0]).objective == WORKED1_OPT
    picks = {("P", j, i) for j, i in worked1.pick_positions()}
    assert len(picks) == 9 and picks <= walk.visited()


def test_worked1_zero_assignment_violates_f1(worked1_model, worked1):
    model, _ = worked1_model
    ev = evaluate(model, [0] * model.num_vars)
    assert not ev.feasible
    f1 = sorted(name for name in ev.violated if name.startswith("F1_"))
    assert f1 == [f"F1_{j}" for j in range(worked1.m - 1)]


def test_worked1_optimum(worked1_model, worked1):
    model, vmap = worked1_model
    sol = solve_bb(model)
    assert sol.status == OPTIMAL and sol.objective == WORKED1_OPT
    assert solve_dp(worked1).objective == standard_oracle(worked1) == WORKED1_OPT
    walk = reconstruct_walk("standard", worked1, vmap, sol.values)
    assert walk.cost == WORKED1_OPT


def test_single_aisle_bottom_branch():
    geo = Geometry.default(1, 9)
    for i in range(9):
        inst = StandardInstance(geo, Depot(0, BOTTOM), {0: [i]})
        model, vmap = build_standard(inst)
        sol = solve_bb(model)
        cpb = compute_coefficients(inst).cpb[(0, i)]
        assert sol.objective == cpb == 2 * (geo.aisle_length - geo.depth[i])
        assert sol.objective == standard_oracle(inst)
        assert vmap.value(sol.values, "xpb", 0, i) == 1


def test_disconnected_counterexample():
    # picks near the top of aisle 0 and near the bottom of aisle 2: two
    # separate x2tb loops would cover them only as disconnected subtours
    geo = Geometry.default(3, 6)
    inst = StandardInstance(geo, Depot(0, BOTTOM), {0: [0], 1: [2, 3], 2: [5]})
    model, vmap = build_standard(inst)
    ones = [("x2tb", 0), ("x2tb", 1), ("xpt", 0, 0), ("xpt", 1, 2), ("xpb", 1, 3), ("xpb", 2, 5)]
    assert completions(model, vmap, ones, free=("kt", "kb", "z")) == []
    # drop the component rows: the same point then satisfies every other family
    relaxed = model.with_objective(model.objective)
    relaxed.constraints = [c for c in model.constraints if not c.name.startswith("T")]
    witness = completions(relaxed, vmap, ones, free=("kt", "kb", "z"), limit=1)
    assert witness
    ev = evaluate(model, witness[0])
    assert not ev.feasible
    assert ev.violated and all(n.startswith("T") for n in ev.violated)
    assert any(n.startswith(("T3", "T5")) for n in ev.violated)


def test_size_formula_random():
    rnd = random.Random(3)
    for seed in range(60):
        inst = random_standard(rnd, seed, max_m=9, max_n=10, max_a=20)
        model, _ = build_standard(inst)
        a = len(inst.pick_positions())
        size = standard_size(inst.m, a, len(inst.required[inst.depot.aisle]))
        assert (model.num_vars, len(model.constraints)) == size


def test_no_double_traversal_needed():
    # uniform traversal costs: an optimum without x2u exists (lexicographic tie-break)
    rnd = random.Random(8)
    for seed in range(40):
        inst = random_standard(rnd, seed)
        model, vmap = build_standard(inst)
        base = solve_bb(model).objective
        big = sum(abs(c) for _, c in model.objective) + 1
        lexi = [(v, c * big) for v, c in model.objective]
        lexi += [(vid, 1) for (s, _), vid in vmap.items() if s == "x2u"]
        sol = solve_bb(model.with_objective(lexi))
        assert evaluate(model, sol.values).objective == base
        assert sum(vmap.value(sol.values, "x2u", j) for j in range(inst.m)) == 0


def test_odd_degree_fixture():
    geo = Geometry.default(2, 3)
    layout = _Layout(geo, [[], []])
    cart = Counter({(("B", 0), ("B", 1)): 1, (("B", 0), ("T", 0)): 1})
    with pytest.raises(WalkError, match="odd degree"):
        check_walk(cart, Counter(), ("B", 0), ("B", 0), [], layout)


def test_disconnected_fixture():
    geo = Geometry.default(3, 3)
    layout = _Layout(geo, [[], [], []])
    cart = Counter({(("B", 0), ("T", 0)): 2, (("B", 2), ("T", 2)): 2})
    with pytest.raises(WalkError, match="disconnected"):
        check_walk(cart, Counter(), ("B", 0), ("B", 0), [], layout)


def test_cost_mismatch_detected(worked1_model, worked1):
    model, vmap = worked1_model
    sol = solve_bb(model)
    with pytest.raises(WalkError, match="cost mismatch"):
        reconstruct_walk("standard", worked1, vmap, sol.values, expected=sol.objective + 1)


def test_sidecar_round_trip(worked1_model):
    model, vmap = worked1_model
    back = VarMap.from_sidecar(model, vmap.sidecar())
    assert dict(back.items()) == dict(vmap.items())
    assert vmap.key(vmap("xpt", 3, 3)) == ("xpt", (3, 3))


# -- scattered ---------------------------------------------------------------------

def test_worked2_published_assignment(worked2):
    model, vmap = build_scattered(worked2)
    sols = completions(model, vmap, WORKED2_ONES, free=("kt", "kb", "z", "g"))
    assert sols
    for values in sols:
        assert vmap.value(values, "p", 3, 8) == 1
        walk = reconstruct_walk("scattered", worked2, vmap, values)
        assert walk.cost == evaluate(model, values).objective
    assert solve_bb(model).objective == walk.cost == 70


def test_scattered_unique_supply_equals_standard():
    for seed in range(25):
        inst = generate_instance(GeneratorSpec("scattered", 3, 5, 4, alpha=1), seed)
        std = StandardInstance(inst.geometry, inst.depot, inst.required)
        r, _ = reduce_to_relevant(inst)
        rs, _ = reduce_to_relevant(std)
        assert solve_bb(build_scattered(r)[0]).objective == solve_dp(rs).objective


def test_split_supply_forces_both_positions():
    geo = Geometry.default(2, 4)
    inst = ScatteredInstance(geo, Depot(0, BOTTOM), {"a": 2}, {(0, 1, "a"): 1, (1, 2, "a"): 1})
    model, vmap = build_scattered(inst)
    sol = solve_bb(model)
    assert vmap.value(sol.values, "p", 0, 1) == vmap.value(sol.values, "p", 1, 2) == 1
    reconstruct_walk("scattered", inst, vmap, sol.values)


def test_scattered_symmetric_choice_takes_nearer():
    geo = Geometry.default(1, 4)
    inst = ScatteredInstance(geo, Depot(0, BOTTOM), {"a": 1}, {(0, 3, "a"): 1, (0, 0, "a"): 1})
    model, vmap = build_scattered(inst)
    sol = solve_bb(model)
    assert sol.objective == 2 * (geo.aisle_length - geo.depth[3])
    assert vmap.value(sol.values, "p", 0, 3) == 1


# -- decoupling --------------------------------------------------------------------

def test_worked3_published_assignment(worked3):
    model, vmap = build_decoupling(worked3)
    sols = completions(model, vmap, WORKED3_ONES)
    assert sols
    for values in sols:
        walk = reconstruct_walk("decoupling", worked3, vmap, values)
        assert walk.cost == evaluate(model, values).objective
    loads = sorted(t.items for t in walk.alone_trips if t.anchor[1] == 3)
    assert loads == [1, 2]


def test_worked3_literal_load_values(worked3):
    # the quoted q values put qt_4 = 2 next to a two-item branch in aisle 4,
    # which the aisle capacity row rejects; recorded as a transcription issue
    model, vmap = build_decoupling(worked3)
    given = {("qt", 4): 2, ("qb", 4): 1}
    assert completions(model, vmap, WORKED3_ONES, given) == []
    values = completions(model, vmap, WORKED3_ONES)[0]
    values[vmap("qt", 4)] = 2
    values[vmap("qb", 4)] = 1
    assert "H5_4" in evaluate(model, values).violated


def test_alone_branch_omitted_beyond_capacity():
    geo = Geometry.default(2, 6)
    inst = DecouplingInstance(geo, Depot(0, BOTTOM), {(1, 0): 2, (1, 3): 1, (0, 2): 1}, 2,
                              Fraction(1, 2))
    model, vmap = build_decoupling(inst)
    assert items_prefix(inst, 1, 3, TOP) == 3
    assert not vmap.has("xptp", 1, 3)
    assert vmap.has("xptp", 1, 0) and vmap.has("xpbp", 1, 3)
    assert vmap.has("xpbp", 1, 0) is False


def test_decoupling_beta_one_equals_standard():
    rnd = random.Random(4)
    for seed in range(30):
        m, n = rnd.randint(1, 4), rnd.randint(2, 6)
        inst = generate_instance(GeneratorSpec("decoupling", m, n, rnd.randint(1, min(4, m * n)),
                                               capacity=rnd.choice([1, 2, 4]), beta=1,
                                               max_demand=2), seed)
        r, _ = reduce_to_relevant(inst)
        std = solve_dp(reduce_to_relevant(r.standard())[0]).objective
        model, vmap = build_decoupling(r)
        sol = solve_bb(model)
        assert sol.objective == std
        reconstruct_walk("decoupling", r, vmap, sol.values)


def test_beta_below_half_flagged():
    inst = DecouplingInstance(Geometry.default(2, 4), Depot(0, BOTTOM), {(1, 1): 1}, 2,
                              Fraction(2, 5))
    rep = solve_instance(inst)
    assert rep.notes and "possibly not walk-optimal" in rep.notes[0]
    assert not solve_instance(inst.with_params(beta=Fraction(1, 2))).notes


# -- multi-depot -------------------------------------------------------------------

def test_worked4_published_path(worked4):
    model, vmap = build_multidepot(worked4)
    sols = completions(model, vmap, WORKED4_ONES, WORKED4_GIVEN)
    assert sols
    walk = reconstruct_walk("multidepot", worked4, vmap, sols[0])
    assert not walk.closed and walk.start == ("B", 3) and walk.end == ("B", 1)
    assert walk.circuit[0] == ("B", 3) and walk.circuit[-1] == ("B", 1)
    assert walk.cost == evaluate(model, sols[0]).objective


def test_end_variables_only_at_candidates(worked4):
    _, vmap = build_multidepot(worked4)
    ends = sorted((s, idx) for (s, idx), _ in vmap.items() if s in ("et", "eb"))
    assert ends == [("eb", (1,)), ("eb", (3,)), ("et", (0,)), ("et", (2,))]


def test_start_only_candidates_equal_standard():
    rnd = random.Random(6)
    for seed in range(30):
        inst = random_standard(rnd, seed, max_m=4, max_n=6, max_a=5)
        md = MultiDepotInstance(inst.geometry, inst.depot, inst.required)
        model, vmap = build_multidepot(md)
        sol = solve_bb(model)
        assert sol.objective == solve_dp(inst).objective
        assert reconstruct_walk("multidepot", md, vmap, sol.values).closed


def test_candidate_superset_never_worse():
    rnd = random.Random(10)
    for seed in range(30):
        m, n = rnd.randint(2, 4), rnd.randint(2, 6)
        inst = generate_instance(GeneratorSpec("multidepot", m, n, rnd.randint(1, min(5, m * n)),
                                               sigma=1.0), seed)
        cands = inst.sorted_candidates()
        sub = frozenset(c for c in cands if rnd.random() < 0.4)
        small = MultiDepotInstance(inst.geometry, inst.depot, inst.required, sub)
        full_obj = solve_bb(build_model(inst)[0]).objective
        r, _ = reduce_to_relevant(small)
        assert full_obj <= solve_bb(build_model(r)[0]).objective


def test_random_depot_sides_all_variants_validate():
    rnd = random.Random(11)
    for seed in range(20):
        variant = ("scattered", "decoupling", "multidepot")[seed % 3]
        m, n = rnd.randint(1, 4), rnd.randint(2, 5)
        inst = generate_instance(GeneratorSpec(variant, m, n, rnd.randint(1, min(4, m * n)),
                                               alpha=2, max_demand=2), seed)
        depot = Depot(rnd.randrange(m), rnd.choice(SIDES))
        if variant == "multidepot":
            inst = MultiDepotInstance(inst.geometry, depot, inst.required, inst.end_candidates)
        elif variant == "decoupling":
            inst = DecouplingInstance(inst.geometry, depot, inst.demand_at, 2, Fraction(1, 2))
        else:
            inst = ScatteredInstance(inst.geometry, depot, inst.demand, inst.supply)
        rep = solve_instance(inst)
        assert rep.status == OPTIMAL and rep.walk.cost == rep.objective
