import random
from fractions import Fraction

import pytest

from sprp.formulations import build_decoupling, build_multidepot, build_scattered, build_standard
from sprp.generator import GeneratorSpec, generate_instance
from sprp.mip.enumerate import enumerate_feasible
from sprp.mip.model import fix_variables
from sprp.warehouse import (BOTTOM, SIDES, TOP, DecouplingInstance, Depot, Geometry,
                            MultiDepotInstance, ScatteredInstance, StandardInstance,
                            reduce_to_relevant)


def worked1_instance():
    """8 aisles, picks in original aisles 1-6, depot below aisle 4."""
    geo = Geometry.default(8, 10)
    return StandardInstance(geo, Depot(4, BOTTOM),
                            {1: [1], 2: [9], 3: [2, 3, 7], 4: [3], 5: [5, 6], 6: [7]})


WORKED1_ONES = [("xpt", 0, 1), ("x2t", 0), ("xpb", 1, 9), ("x2tb", 1), ("xu", 2), ("xtb", 2),
             ("xpt", 3, 3), ("xtb", 3), ("xu", 4), ("x2b", 4), ("xpb", 5, 7)]
WORKED1_GIVEN = {("kt", 2): 2, ("kb", 3): 1}


def worked2_instance():
    geo = Geometry.default(6, 10)
    supply = {(1, 7, "b"): 1, (1, 9, "c"): 1, (3, 2, "d"): 1, (3, 5, "h"): 1, (3, 8, "a"): 1,
              (4, 9, "e"): 1, (5, 1, "i"): 1, (5, 4, "f"): 1, (5, 6, "g"): 1,
              (0, 3, "a"): 1, (2, 4, "b"): 1, (0, 8, "e"): 1, (2, 1, "f"): 1}
    return ScatteredInstance(geo, Depot(3, BOTTOM), {h: 1 for h in "abcdefghi"}, supply)


WORKED2_ONES = [("xpb", 1, 7), ("x2b", 1), ("x2b", 2), ("xu", 3), ("xtb", 3), ("xpb", 4, 9),
             ("xtb", 4), ("xu", 5)] + [("p", j, i) for j, i in
                                       [(1, 7), (1, 9), (3, 2), (3, 5), (3, 8), (4, 9),
                                        (5, 1), (5, 4), (5, 6)]]


def worked3_instance():
    geo = Geometry.default(5, 10)
    demand = {(0, 0): 1, (0, 1): 1, (0, 3): 1, (1, 2): 1, (1, 8): 1, (2, 2): 1, (3, 5): 1,
              (4, 1): 1, (4, 4): 1, (4, 9): 1}
    return DecouplingInstance(geo, Depot(3, BOTTOM), demand, 2, Fraction(1, 2))


WORKED3_ONES = [("xpt", 0, 3), ("x2t", 0), ("xu", 1), ("xtb", 1), ("xpt", 2, 2), ("xtb", 2),
             ("xu", 3), ("wtr", 3), ("xptp", 4, 4), ("wbr", 3), ("xpbp", 4, 9)]


def worked4_instance():
    geo = Geometry.default(4, 10)
    return MultiDepotInstance(geo, Depot(3, BOTTOM), {0: [4], 1: [6], 2: [3, 7], 3: [5]},
                              frozenset({Depot(1, BOTTOM), Depot(0, TOP), Depot(2, TOP)}))


WORKED4_ONES = [("x2b", 0), ("x2b", 1), ("x2t", 2), ("x2u", 2), ("x2u", 3), ("xpb", 0, 4),
             ("xpb", 1, 6), ("yu", 3), ("yt", 2), ("yu", 2), ("yb", 1), ("eb", 1)]
WORKED4_GIVEN = {("ktp", 2): 1, ("kbp", 2): 1, ("ktp", 3): 1, ("kbp", 1): 0, ("kbp", 3): 0}

# symbols left open when completing a published partial assignment
AUXILIARY = ("kt", "kb", "z", "ktp", "kbp", "g", "qt", "qb")


def completions(model, vmap, ones, given=None, free=AUXILIARY, limit=10):
    """Feasible points agreeing with a published assignment.

    Every decision variable outside ``free`` is 0 unless listed in ``ones`` or
    ``given``; the auxiliary counters are enumerated.
    """
    fixed = {vid: 0 for (sym, _), vid in vmap.items() if sym not in free}
    for sym, *idx in ones:
        fixed[vmap(sym, *idx)] = 1
    for (sym, *idx), value in (given or {}).items():
        fixed[vmap(sym, *idx)] = value
    return list(enumerate_feasible(fix_variables(model, fixed), limit=limit))


def random_standard(rnd, seed, max_m=6, max_n=8, max_a=8):
    m = rnd.randint(1, max_m)
    n = rnd.randint(1, max_n)
    a = rnd.randint(1, min(max_a, m * n))
    inst = generate_instance(GeneratorSpec("standard", m, n, a), seed)
    inst = StandardInstance(inst.geometry, Depot(rnd.randrange(m), rnd.choice(SIDES)),
                            inst.required)
    return reduce_to_relevant(inst)[0]


@pytest.fixture
def worked1():
    return reduce_to_relevant(worked1_instance())[0]


@pytest.fixture
def worked1_model(worked1):
    return build_standard(worked1)


@pytest.fixture
def worked2():
    return worked2_instance()


@pytest.fixture
def worked3():
    return worked3_instance()


@pytest.fixture
def worked4():
    return worked4_instance()


@pytest.fixture
def rnd():
    return random.Random(12345)


# acceptance results, printed once at the end of the run
ACCEPTANCE = []


def record(criterion, label, ok, detail=""):
    ACCEPTANCE.append((criterion, label, bool(ok), detail))
    return bool(ok)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, label, ok, detail in sorted(ACCEPTANCE, key=lambda r: (r[0], r[1])):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {criterion} {label}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)


__all__ = ["build_scattered", "build_decoupling", "build_multidepot"]
