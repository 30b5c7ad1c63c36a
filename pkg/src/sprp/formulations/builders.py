"""MILP builders for the four routing variants.

Terms whose index would fall left of aisle 0 are dropped rather than padded
with placeholder variables. Constraint names carry the family label followed
by the indices, e.g. ``F3_2_7``.
"""
from __future__ import annotations

from fractions import Fraction

from ..coefficients import CostCoefficients, compute_coefficients
from ..mip.model import EQ, GE, INTEGER, LE, MipModel
from ..warehouse import (Depot, DecouplingInstance, InstanceError, MultiDepotInstance,
                         ScatteredInstance, StandardInstance, items_prefix, TOP, BOTTOM)
from .varmap import VarMap

CONFIGS = ("x2b", "x2t", "xtb", "x2tb")
# largest degree at a cross-aisle node is 6, so half-degrees fit in [0, 3]
K_UPPER = 3


class _Builder:
    def __init__(self, instance, coeffs: CostCoefficients | None, name: str):
        if not instance.is_reduced():
            raise InstanceError("instance must be reduced to its relevant part first")
        self.inst = instance
        self.c = coeffs if coeffs is not None else compute_coefficients(instance)
        self.model = MipModel(name)
        self.v = VarMap(self.model)
        self.m = instance.m
        self.l = instance.depot.aisle
        self.top = instance.depot.top
        self.A = instance.required

    def con(self, label, idx, terms, sense, rhs=0):
        name = "_".join([label] + [str(i) for i in idx])
        self.model.add_constraint(name, terms, sense, rhs)

    # -- variables ---------------------------------------------------------------

    def core_vars(self):
        v, m = self.v, self.m
        for j in range(m):
            last = j == m - 1
            for s in CONFIGS:
                v.add(s, j, upper=0 if last else 1)
            v.add("xu", j)
            v.add("x2u", j)
            v.add("kt", j, kind=INTEGER, upper=K_UPPER)
            v.add("kb", j, kind=INTEGER, upper=K_UPPER)
            v.add("z", j, upper=0 if last else 1)
        for j in range(m):
            for i in self.A[j]:
                v.add("xpt", j, i)
                v.add("xpb", j, i)

    def g_vars(self):
        for j in range(self.m):
            self.v.add("g", j)

    def core_objective(self):
        v, c = self.v, self.c
        terms = []
        for j in range(self.m):
            terms += [(v("x2b", j), c.c2b[j]), (v("x2t", j), c.c2t[j]), (v("xtb", j), c.ctb[j]),
                      (v("x2tb", j), c.c2tb[j]), (v("xu", j), c.cu[j]), (v("x2u", j), c.c2u[j])]
            for i in self.A[j]:
                terms += [(v("xpb", j, i), c.cpb[(j, i)]), (v("xpt", j, i), c.cpt[(j, i)])]
        return terms

    # -- constraint families -------------------------------------------------------

    def f1(self):
        v = self.v
        for j in range(self.m - 1):
            self.con("F1", (j,), [(v(s, j), 1) for s in CONFIGS], EQ, 1)

    def coverage_terms(self, j, i, alone=False):
        v = self.v
        terms = [(v("xu", j), 1), (v("x2u", j), 1)]
        for i2 in self.A[j]:
            if i2 >= i:
                terms.append((v("xpt", j, i2), 1))
                if alone and v.has("xptp", j, i2):
                    terms.append((v("xptp", j, i2), 1))
            if i2 <= i:
                terms.append((v("xpb", j, i2), 1))
                if alone and v.has("xpbp", j, i2):
                    terms.append((v("xpbp", j, i2), 1))
        return terms

    def f2(self, label="F2", alone=False):
        for j in range(self.m):
            for i in self.A[j]:
                self.con(label, (j, i), self.coverage_terms(j, i, alone), GE, 1)

    def f3_f4(self):
        v = self.v
        for j in range(self.m):
            if self.top or j != self.l:
                for i in self.A[j]:
                    terms = [(v(s, j), 1) for s in ("x2b", "xtb", "x2tb")]
                    if j > 0:
                        terms += [(v(s, j - 1), 1) for s in ("x2b", "xtb", "x2tb")]
                    terms.append((v("xpb", j, i), -1))
                    self.con("F3", (j, i), terms, GE, 0)
        for j in range(self.m):
            if not self.top or j != self.l:
                for i in self.A[j]:
                    terms = [(v(s, j), 1) for s in ("x2t", "xtb", "x2tb")]
                    if j > 0:
                        terms += [(v(s, j - 1), 1) for s in ("x2t", "xtb", "x2tb")]
                    terms.append((v("xpt", j, i), -1))
                    self.con("F4", (j, i), terms, GE, 0)

    def f5_f6(self):
        v = self.v
        for j in range(1, self.m):
            self.con("F5", (j,), [(v("x2t", j - 1), 1), (v("x2b", j), 1), (v("x2u", j), -1)], LE, 1)
        for j in range(1, self.m):
            self.con("F6", (j,), [(v("x2b", j - 1), 1), (v("x2t", j), 1), (v("x2u", j), -1)], LE, 1)

    def f7_f8(self):
        v, l = self.v, self.l
        same, other = ("x2t", "x2b") if self.top else ("x2b", "x2t")
        terms = [(v("x2u", l), 2), (v("xu", l), 1), (v(same, l), 1), (v("x2tb", l), 1),
                 (v(other, l), -1)]
        if l > 0:
            terms += [(v(same, l - 1), 1), (v("x2tb", l - 1), 1), (v(other, l - 1), -1)]
        self.con("F7" if self.top else "F8", (l,), terms, GE, 0)

    def e1_e2(self):
        v = self.v
        for label, k, two in (("E1", "kt", "x2t"), ("E2", "kb", "x2b")):
            for j in range(self.m):
                terms = [(v("xtb", j), 1), (v("x2tb", j), 2), (v(two, j), 2),
                         (v("xu", j), 1), (v("x2u", j), 2), (v(k, j), -2)]
                if j > 0:
                    terms += [(v("xtb", j - 1), 1), (v("x2tb", j - 1), 2), (v(two, j - 1), 2)]
                self.con(label, (j,), terms, EQ, 0)

    def t_chain(self):
        v = self.v
        for j in range(1, self.m):
            self.con("T1", (j,), [(v("x2tb", j), 1), (v("x2b", j - 1), 1), (v("x2t", j - 1), 1),
                                  (v("x2u", j), -1), (v("z", j), -1)], LE, 1)
        for j in range(self.m):
            terms = [(v("x2tb", j), 1), (v("x2u", j), -1), (v("xu", j), -1), (v("z", j), -1)]
            if j > 0:
                terms += [(v("x2tb", j - 1), -1), (v("x2t", j - 1), -1), (v("x2b", j - 1), -1)]
            self.con("T3", (j,), terms, LE, 0)
        for j in range(1, self.m):
            self.con("T4", (j,), [(v("z", j - 1), 1), (v("xu", j), -1), (v("x2u", j), -1),
                                  (v("z", j), -1)], LE, 0)
        for j in range(self.m):
            self.con("T5", (j,), [(v("z", j), 1), (v("x2tb", j), -1)], LE, 0)

    def standard_tail(self):
        """Constraints shared by all variants after the coverage layer."""
        self.f3_f4()
        self.f5_f6()
        self.f7_f8()
        self.e1_e2()
        self.t_chain()

    def reach_layer(self, with_pick_link: bool):
        v, l, m = self.v, self.l, self.m
        if with_pick_link:
            for j in range(m):
                for i in self.A[j]:
                    self.con("F1e", (j, i), [(v("g", j), 1), (v("p", j, i), -1)], GE, 0)
        self.con("F1fb", (l,), [(v("g", l), 1)], EQ, 1)
        for j in range(l, m - 1):
            self.con("F1b", (j,), [(v(s, j), 1) for s in CONFIGS] + [(v("g", j + 1), -1)], EQ, 0)
        for j in range(l):
            self.con("F1bb", (j,), [(v(s, j), 1) for s in CONFIGS] + [(v("g", j), -1)], EQ, 0)
        for j in range(l, m - 1):
            self.con("F1d", (j,), [(v("g", j), 1), (v("g", j + 1), -1)], GE, 0)
        for j in range(l):
            self.con("F1db", (j,), [(v("g", j), 1), (v("g", j + 1), -1)], LE, 0)


def build_standard(instance: StandardInstance, coeffs: CostCoefficients | None = None):
    b = _Builder(instance, coeffs, "standard")
    b.core_vars()
    b.model.set_objective(b.core_objective())
    b.f1()
    b.f2()
    b.standard_tail()
    return b.model, b.v


def build_scattered(instance: ScatteredInstance, coeffs: CostCoefficients | None = None):
    b = _Builder(instance, coeffs, "scattered")
    v = b.v
    b.core_vars()
    for j in range(b.m):
        for i in b.A[j]:
            v.add("p", j, i)
    b.g_vars()
    b.model.set_objective(b.core_objective())
    # position selection replaces plain coverage
    for h, need in instance.demand.items():
        terms = [(v("p", j, i), s) for (j, i, sku), s in instance.supply.items() if sku == h]
        b.con("F2c", (h,), terms, GE, need)
    for j in range(b.m):
        for i in b.A[j]:
            b.con("F2b", (j, i), b.coverage_terms(j, i) + [(v("p", j, i), -1)], GE, 0)
    b.reach_layer(with_pick_link=True)
    b.standard_tail()
    return b.model, v


def build_decoupling(instance: DecouplingInstance, coeffs: CostCoefficients | None = None):
    b = _Builder(instance, coeffs, "decoupling")
    v, m, C, c = b.v, b.m, instance.capacity, b.c
    b.core_vars()
    b.g_vars()
    for j in range(m):
        last = j == m - 1
        for s in ("wtr", "wbr", "wtl", "wbl"):
            v.add(s, j, upper=0 if last else 1)
    items_top, items_bottom = {}, {}
    for j in range(m):
        for i in b.A[j]:
            items_top[(j, i)] = items_prefix(instance, j, i, TOP)
            items_bottom[(j, i)] = items_prefix(instance, j, i, BOTTOM)
            # alone branches exist only where the picker can carry everything passed
            if items_top[(j, i)] <= C:
                v.add("xptp", j, i)
            if items_bottom[(j, i)] <= C:
                v.add("xpbp", j, i)
    for j in range(m):
        v.add("qt", j, kind=INTEGER, upper=C)
        v.add("qb", j, kind=INTEGER, upper=C)

    terms = b.core_objective()
    for j in range(m):
        terms += [(v("wbl", j), c.c2b_alone[j]), (v("wbr", j), c.c2b_alone[j]),
                  (v("wtl", j), c.c2t_alone[j]), (v("wtr", j), c.c2t_alone[j])]
        for i in b.A[j]:
            if v.has("xpbp", j, i):
                terms.append((v("xpbp", j, i), c.cpb_alone[(j, i)]))
            if v.has("xptp", j, i):
                terms.append((v("xptp", j, i), c.cpt_alone[(j, i)]))
    b.model.set_objective(terms)

    b.f2("F2Pick", alone=True)
    b.reach_layer(with_pick_link=False)
    for j in range(m):
        b.con("F1z", (j,), [(v("g", j), 1), (v("x2u", j), -1)], GE, 0)

    for j in range(m - 1):
        b.con("G1", (j,), [(v(s, j), 1) for s in ("wbr", "wbl", "x2b", "x2tb", "xtb")], LE, 1)
    for j in range(m - 1):
        b.con("G2", (j,), [(v(s, j), 1) for s in ("wtr", "wtl", "x2t", "x2tb", "xtb")], LE, 1)
    for label, w, two in (("G3", "wtr", "x2t"), ("G4", "wbr", "x2b")):
        for j in range(m - 1):
            t = [(v("xu", j), 1), (v("x2u", j), 1), (v(w, j), -1)]
            if j > 0:
                t += [(v(w, j - 1), 1), (v(two, j - 1), 1), (v("x2tb", j - 1), 1)]
            b.con(label, (j,), t, GE, 0)
    for label, w, two in (("G5", "wtl", "x2t"), ("G6", "wbl", "x2b")):
        for j in range(m - 1):
            t = [(v(w, j + 1), 1), (v(two, j + 1), 1), (v("x2tb", j + 1), 1),
                 (v("xu", j + 1), 1), (v("x2u", j + 1), 1), (v(w, j), -1)]
            b.con(label, (j,), t, GE, 0)
    for label, right, left, branch in (("G7", "wbr", "wbl", "xpbp"), ("G8", "wtr", "wtl", "xptp")):
        for j in range(m):
            for i in b.A[j]:
                if not v.has(branch, j, i):
                    continue
                t = [(v(left, j), 1), (v(branch, j, i), -1)]
                if j > 0:
                    t.append((v(right, j - 1), 1))
                b.con(label, (j, i), t, GE, 0)

    def load(q, branch, items, j):
        return [(v(q, j), 1)] + [(v(branch, j, i), items[(j, i)]) for i in b.A[j]
                                 if v.has(branch, j, i)]

    # big-M load propagation: q_from + picks_from - C (1 - w) <= q_to
    for label, q, branch, items, w, leftward in (
            ("H1", "qt", "xptp", items_top, "wtl", True),
            ("H2", "qb", "xpbp", items_bottom, "wbl", True),
            ("H3", "qt", "xptp", items_top, "wtr", False),
            ("H4", "qb", "xpbp", items_bottom, "wbr", False)):
        for j in range(m - 1):
            src, dst = (j + 1, j) if leftward else (j, j + 1)
            t = load(q, branch, items, src) + [(v(w, j), C), (v(q, dst), -1)]
            b.con(label, (j,), t, LE, C)
    for label, q, branch, items in (("H5", "qt", "xptp", items_top),
                                    ("H6", "qb", "xpbp", items_bottom)):
        for j in range(m):
            b.con(label, (j,), load(q, branch, items, j), LE, C)

    b.standard_tail()
    return b.model, v


def build_multidepot(instance: MultiDepotInstance, coeffs: CostCoefficients | None = None):
    b = _Builder(instance, coeffs, "multidepot")
    v, m, c, l = b.v, b.m, b.c, b.l
    b.core_vars()
    b.g_vars()
    for j in range(m):
        for s in ("yt", "yb", "ytb", "yu"):
            v.add(s, j)
    cands = instance.end_candidates
    for j in range(m):
        if Depot(j, TOP) in cands:
            v.add("et", j)
        if Depot(j, BOTTOM) in cands:
            v.add("eb", j)
    top_rows = [j for j in range(m) if not (b.top and j == l)]
    bottom_rows = [j for j in range(m) if not (not b.top and j == l)]
    for j in range(m):
        v.add("ktp", j)
        v.add("kbp", j)

    # one copy of a doubled edge is dropped, so half of its coefficient is saved
    half = Fraction(1, 2)
    terms = b.core_objective()
    for j in range(m):
        terms += [(v("yb", j), -half * c.c2b[j]), (v("yt", j), -half * c.c2t[j]),
                  (v("ytb", j), -half * c.c2tb[j]), (v("yu", j), -half * c.c2u[j])]
    b.model.set_objective(terms)

    b.reach_layer(with_pick_link=False)
    for j in range(m):
        if b.A[j]:
            b.con("F1y", (j,), [(v("g", j), 1)], GE, 1)
    b.f2()
    b.standard_tail()

    for j in range(m):
        b.con("K1", (j,), [(v("x2t", j), 1), (v("x2tb", j), 1), (v("yt", j), -1)], GE, 0)
        b.con("K2", (j,), [(v("x2b", j), 1), (v("x2tb", j), 1), (v("yb", j), -1)], GE, 0)
        b.con("K3", (j,), [(v("x2tb", j), 1), (v("ytb", j), -1)], GE, 0)
        b.con("K4", (j,), [(v("x2u", j), 1), (v("yu", j), -1)], GE, 0)
    for j in range(m - 1):
        b.con("K6", (j,), [(v("yt", j), 1), (v("yb", j + 1), 1), (v("yu", j + 1), -1)], LE, 1)
        b.con("K7", (j,), [(v("yb", j), 1), (v("yt", j + 1), 1), (v("yu", j + 1), -1)], LE, 1)

    def gap_count(j, sign):
        return [(v(s, j), sign) for s in ("yt", "yb", "ytb")]

    for j in range(l, m - 1):
        b.con("K9", (j,), gap_count(j, 1) + gap_count(j + 1, -1), GE, 0)
    for j in range(1, l):
        b.con("K10", (j,), gap_count(j, 1) + gap_count(j - 1, -1), GE, 0)
    ends = [(vid, 1) for (s, _), vid in v.items() if s in ("et", "eb")]
    b.con("K11", (), ends, LE, 1)
    for label, rows, one, k, e in (("K12", top_rows, "yt", "ktp", "et"),
                                   ("K13", bottom_rows, "yb", "kbp", "eb")):
        for j in rows:
            t = [(v("ytb", j), 1), (v(one, j), 1), (v("yu", j), 1), (v(k, j), -2)]
            if j > 0:
                t += [(v("ytb", j - 1), 1), (v(one, j - 1), 1)]
            if v.has(e, j):
                t.append((v(e, j), -1))
            b.con(label, (j,), t, EQ, 0)
    for j in range(m):
        b.con("K5", (j,), [(v(s, j), 1) for s in ("ytb", "yt", "yb")], LE, 1)
    return b.model, v


BUILDERS = {
    "standard": build_standard,
    "scattered": build_scattered,
    "decoupling": build_decoupling,
    "multidepot": build_multidepot,
}


def build_model(instance, coeffs: CostCoefficients | None = None):
    return BUILDERS[instance.variant](instance, coeffs)


def standard_size(m: int, picks: int, depot_aisle_picks: int) -> tuple[int, int]:
    """Closed-form (variables, constraints) of the standard model.

    Nine per-aisle variables plus two branches per required position;
    constraints count 9m - 4 + 3a - |A_l|.
    """
    return 9 * m + 2 * picks, 9 * m - 4 + 3 * picks - depot_aisle_picks
