"""Mixed-integer linear model of the menu design problem.

Index conventions: commands ``i, j`` are 0-based ids, groups ``c`` run
``1..C``, tabs ``t`` run ``1..T`` and rows ``r`` run ``1..R``.  Variable
names follow ``<kind>_<indices>`` (``X_3_2`` is command 3 in group 2).

Constraint rows carry a ``family`` tag.  Single letters ``a``..``n`` are
the structural rows of the base formulation; the remaining families are
linking rows that make the formulation exact, foraging cost rows and
adaptation rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .evaluator import Objective
from .instance import StructuralLimits, TaskInstance, compute_expectations
from .layout import MenuLayout, validate_layout, fits_limits

FEAS_TOL = 1e-9

KINDS = ("X", "Y", "Q", "Z", "W", "R", "S", "SS", "xi", "beta", "Theta", "P", "t",
         "U", "Phi", "alpha", "sigma", "delta", "Omega", "Pi", "Xi")

BINARY, INTEGER, CONTINUOUS = "binary", "integer", "continuous"


class InfeasibleAssignment(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    index: tuple[int, ...]
    domain: str
    lb: float = 0.0
    ub: float = math.inf


@dataclass
class Constraint:
    name: str
    family: str
    coeffs: dict[int, float]
    sense: str  # "<=", ">=" or "="
    rhs: float


@dataclass(frozen=True)
class Violation:
    name: str
    family: str
    lhs: float
    sense: str
    rhs: float

    def __str__(self) -> str:
        return f"{self.name}: {self.lhs:.12g} {self.sense} {self.rhs:.12g} violated"


def var_name(kind: str, *index: int) -> str:
    return "_".join([kind, *map(str, index)])


def split_name(name: str) -> tuple[str, tuple[int, ...]]:
    kind, *rest = name.split("_")
    return kind, tuple(int(x) for x in rest)


@dataclass
class MilpModel:
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    sense: str = "min"  # "min" or "max"
    objective: dict[int, float] = field(default_factory=dict)
    metadata: dict[str, Any] = field(default_factory=dict)
    # set when built from an instance; needed by encode_layout
    instance: TaskInstance | None = None
    expectations: np.ndarray | None = None
    baseline: MenuLayout | None = None

    def __post_init__(self):
        self.index = {v.name: k for k, v in enumerate(self.variables)}
        self._matrix = None

    # -- construction helpers -------------------------------------------
    def add_var(self, kind: str, *index: int, domain: str = BINARY,
                lb: float = 0.0, ub: float | None = None) -> int:
        if ub is None:
            ub = 1.0 if domain == BINARY else math.inf
        name = var_name(kind, *index)
        if name in self.index:
            raise ValueError(f"duplicate variable {name}")
        self.index[name] = len(self.variables)
        self.variables.append(Variable(name, kind, tuple(index), domain, lb, ub))
        return self.index[name]

    def add_row(self, family: str, name: str, terms: Iterable[tuple[int, float]],
                sense: str, rhs: float):
        coeffs: dict[int, float] = {}
        for k, v in terms:
            coeffs[k] = coeffs.get(k, 0.0) + v
        coeffs = {k: v for k, v in coeffs.items() if v != 0.0}
        if not coeffs:
            if _holds(0.0, sense, rhs):
                return
            raise ValueError(f"constraint {name} has no terms and cannot hold")
        self.constraints.append(Constraint(name, family, coeffs, sense, float(rhs)))
        self._matrix = None

    def v(self, kind: str, *index: int) -> int:
        return self.index[var_name(kind, *index)]

    def has(self, kind: str, *index: int) -> bool:
        return var_name(kind, *index) in self.index

    # -- inspection ------------------------------------------------------
    def count(self, kind: str) -> int:
        return sum(1 for v in self.variables if v.kind == kind)

    def family_count(self, family: str) -> int:
        return sum(1 for c in self.constraints if c.family == family)

    def _coo(self):
        if self._matrix is None:
            rows, cols, vals = [], [], []
            for r, con in enumerate(self.constraints):
                rows.extend([r] * len(con.coeffs))
                cols.extend(con.coeffs.keys())
                vals.extend(con.coeffs.values())
            self._matrix = (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                            np.array(vals, dtype=float),
                            np.array([c.rhs for c in self.constraints]),
                            np.array([c.sense for c in self.constraints]))
        return self._matrix

    def vector(self, assignment: dict[str, float]) -> np.ndarray:
        missing = [v.name for v in self.variables if v.name not in assignment]
        if missing:
            raise KeyError(f"assignment lacks {len(missing)} variables, e.g. {missing[:3]}")
        return np.array([float(assignment[v.name]) for v in self.variables])

    def objective_value(self, assignment: dict[str, float]) -> float:
        return float(sum(coef * assignment[self.variables[k].name]
                         for k, coef in self.objective.items()))


def _holds(lhs: float, sense: str, rhs: float, tol: float = FEAS_TOL) -> bool:
    if sense == "<=":
        return lhs <= rhs + tol
    if sense == ">=":
        return lhs >= rhs - tol
    return abs(lhs - rhs) <= tol


# ---------------------------------------------------------------------------
# building

def fitts_row_costs(inst: TaskInstance, count: int) -> list[float]:
    p = inst.fitts
    return [p.a + p.b * math.log2(r + 1) for r in range(1, count + 1)]


def build_model(inst: TaskInstance, objective: Objective | str = Objective.IFT,
                adapt: tuple[MenuLayout, float] | None = None,
                limits: StructuralLimits | None = None,
                E: np.ndarray | None = None) -> MilpModel:
    """Full MILP for ``inst``; ``adapt=(baseline, w)`` blends in proximity."""
    objective = Objective(objective)
    lim = (limits or inst.limits).resolve(inst.n, inst.n_visible)
    n, C, T, R = inst.n, lim.max_groups, lim.max_tabs, lim.max_rows
    if T * R < n or C < 1:
        raise ValueError(f"limits (tabs={T}, groups={C}, rows={R}) cannot host {n} commands")
    kappa = inst.loner_id
    ift = objective is Objective.IFT
    if E is None:
        E = compute_expectations(inst)
    lam = inst.lambdas
    F = inst.objective_weights()
    N = n
    big = max(N, R)
    I, Cs, Ts, Rs = range(n), range(1, C + 1), range(1, T + 1), range(1, R + 1)
    pairs = [(c, d) for c in Cs for d in Cs if c != d]

    m = MilpModel(instance=inst, expectations=E)
    m.metadata = {
        "instance_digest": inst.digest(),
        "objective": objective.value,
        "n": n, "max_groups": C, "max_tabs": T, "max_rows": R,
        "loner_id": kappa,
    }

    X = {(i, c): m.add_var("X", i, c) for i in I for c in Cs}
    Y = {(i, t): m.add_var("Y", i, t) for i in I for t in Ts}
    Q = {(c, t): m.add_var("Q", c, t) for c in Cs for t in Ts}
    Z = {(i, j): m.add_var("Z", i, j) for i in I for j in I}
    Wv = {(i, j): m.add_var("W", i, j) for i in I for j in I}
    Rv = {(i, r): m.add_var("R", i, r) for i in I for r in Rs}
    S = {(c, d): m.add_var("S", c, d) for c, d in pairs}
    SS = {c: m.add_var("SS", c) for c in Cs}
    xi = {c: m.add_var("xi", c) for c in Cs}
    beta = {t: m.add_var("beta", t) for t in Ts}
    Th = {(c, d): m.add_var("Theta", c, d) for c, d in pairs}
    P = {c: m.add_var("P", c, domain=INTEGER, lb=1.0, ub=float(R)) for c in Cs}
    tv = {i: m.add_var("t", i, domain=CONTINUOUS) for i in I}

    def row_number(i):
        return [(Rv[i, r], float(r)) for r in Rs]

    # (a) exact one-hot Fitts time
    frow, ftab = fitts_row_costs(inst, R), fitts_row_costs(inst, T)
    for i in I:
        m.add_row("a", f"a_{i}", [(tv[i], 1.0)] + [(Rv[i, r], -frow[r - 1]) for r in Rs]
                  + [(Y[i, t], -ftab[t - 1]) for t in Ts], "=", 0.0)
    # (b) use marking
    for c in Cs:
        m.add_row("b", f"b1_{c}", [(xi[c], N)] + [(X[i, c], -1.0) for i in I], ">=", 0.0)
        m.add_row("b", f"b2_{c}", [(X[i, c], 1.0) for i in I] + [(xi[c], -1.0)], ">=", 0.0)
    for t in Ts:
        m.add_row("b", f"b3_{t}", [(beta[t], N)] + [(Y[i, t], -1.0) for i in I], ">=", 0.0)
        m.add_row("b", f"b4_{t}", [(Y[i, t], 1.0) for i in I] + [(beta[t], -1.0)], ">=", 0.0)
    # (c) same group implies same tab
    for i in I:
        for j in I:
            m.add_row("c", f"c_{i}_{j}", [(Wv[i, j], 1.0), (Z[i, j], -1.0)], ">=", 0.0)
    # (d) partition
    for c in Cs:
        m.add_row("d", f"d1_{c}", [(Q[c, t], 1.0) for t in Ts] + [(xi[c], -1.0)], "=", 0.0)
    for i in I:
        m.add_row("d", f"d2_{i}", [(Y[i, t], 1.0) for t in Ts], "=", 1.0)
        m.add_row("d", f"d3_{i}", [(X[i, c], 1.0) for c in Cs], "=", 1.0)
    # (e)
    for c in Cs:
        for t in Ts:
            m.add_row("e", f"e_{c}_{t}", [(beta[t], 1.0), (Q[c, t], -1.0)], ">=", 0.0)
    # (f)
    for i in I:
        m.add_row("f", f"f_{i}", [(Rv[i, r], 1.0) for r in Rs], "=", 1.0)
    # (g) immediate precedence stays on one tab
    for c, d in pairs:
        for t in Ts:
            m.add_row("g", f"g_{c}_{d}_{t}", [(Q[d, t], 1.0), (Q[c, t], -1.0), (S[c, d], -1.0),
                                              (S[d, c], -1.0)], ">=", -1.0)
    # (h) row occupancy
    for r in Rs:
        m.add_row("h", f"h1_{r}", [(Rv[i, r], 1.0) for i in I] + [(beta[t], -1.0) for t in Ts],
                  "<=", 0.0)
        if r > 1:
            m.add_row("h", f"h2_{r}", [(Rv[i, r], 1.0) for i in I]
                      + [(Rv[i, r - 1], -1.0) for i in I], "<=", 0.0)
    # (i) one starting group per used tab
    m.add_row("i", "i_0", [(beta[t], 1.0) for t in Ts] + [(SS[c], -1.0) for c in Cs], "=", 0.0)
    # (j) every used group starts a tab or has a predecessor
    for c in Cs:
        m.add_row("j", f"j_{c}", [(xi[c], 1.0), (SS[c], -1.0)]
                  + [(S[d, c], -1.0) for d in Cs if d != c], "=", 0.0)
    # (k) distinct rows on a tab
    for i in I:
        for j in I:
            if i < j:
                for r in Rs:
                    m.add_row("k", f"k_{i}_{j}_{r}", [(Rv[i, r], 1.0), (Rv[j, r], 1.0),
                                                      (Wv[i, j], 1.0)], "<=", 2.0)
    # (l) rows inside the group block [P, P + size - 1]
    for i in I:
        for c in Cs:
            size = [(X[j, c], -1.0) for j in I]
            m.add_row("l", f"l1_{i}_{c}", row_number(i) + [(P[c], -1.0)] + size
                      + [(X[i, c], big)], "<=", big - 1.0)
            m.add_row("l", f"l2_{i}_{c}", row_number(i) + [(P[c], -1.0), (X[i, c], -big)],
                      ">=", -big)
    # (m) general precedence keeps groups apart
    for c, d in pairs:
        m.add_row("m", f"m_{c}_{d}", [(P[d], 1.0), (P[c], -1.0), (Th[c, d], -big)]
                  + [(X[i, c], -1.0) for i in I], ">=", -big)
    # (n) group / tab constitution
    for i in I:
        for j in I:
            if i == j:
                continue
            for c in Cs:
                m.add_row("n", f"n1_{i}_{j}_{c}", [(X[i, c], 1.0), (X[j, c], -1.0),
                                                   (Z[i, j], -1.0)], ">=", -1.0)
            for t in Ts:
                m.add_row("n", f"n2_{i}_{j}_{t}", [(Y[i, t], 1.0), (Y[j, t], -1.0),
                                                   (Wv[i, j], -1.0)], ">=", -1.0)

    # linking rows
    for i in I:
        for c in Cs:
            for t in Ts:
                m.add_row("link", f"link_xqy_{i}_{c}_{t}", [(Y[i, t], 1.0), (X[i, c], -1.0),
                                                             (Q[c, t], -1.0)], ">=", -1.0)
    for i in I:
        for j in I:
            for c in Cs:
                m.add_row("link", f"link_z_{i}_{j}_{c}", [(Z[i, j], 1.0), (X[i, c], -1.0),
                                                          (X[j, c], -1.0)], ">=", -1.0)
            for t in Ts:
                m.add_row("link", f"link_w_{i}_{j}_{t}", [(Wv[i, j], 1.0), (Y[i, t], -1.0),
                                                          (Y[j, t], -1.0)], ">=", -1.0)
    for c, d in pairs:
        if c < d:
            m.add_row("theta", f"theta_anti_{c}_{d}", [(Th[c, d], 1.0), (Th[d, c], 1.0)], "<=", 1.0)
            for t in Ts:
                m.add_row("theta", f"theta_tab_{c}_{d}_{t}", [(Th[c, d], 1.0), (Th[d, c], 1.0),
                                                              (Q[c, t], -1.0), (Q[d, t], -1.0)],
                          ">=", -1.0)
        m.add_row("theta", f"theta_s_{c}_{d}", [(Th[c, d], 1.0), (S[c, d], -1.0)], ">=", 0.0)
    for c in Cs:
        if c < C:
            m.add_row("sym", f"sym_xi_{c}", [(xi[c], 1.0), (xi[c + 1], -1.0)], ">=", 0.0)
        m.add_row("chain", f"chain_start_{c}", [(P[c], 1.0), (SS[c], R - 1.0)], "<=", float(R))
        m.add_row("chain", f"chain_succ_{c}", [(S[c, d], 1.0) for d in Cs if d != c]
                  + [(xi[c], -1.0)], "<=", 0.0)
    for t in Ts:
        if t < T:
            m.add_row("sym", f"sym_beta_{t}", [(beta[t], 1.0), (beta[t + 1], -1.0)], ">=", 0.0)
    for c, d in pairs:
        m.add_row("chain", f"chain_next_{c}_{d}", [(P[d], 1.0), (P[c], -1.0), (S[c, d], big)]
                  + [(X[i, c], -1.0) for i in I], "<=", big)

    # lead elements (foraging objective, or any instance with a loner)
    U = {}
    if ift or kappa is not None:
        U = {(i, c): m.add_var("U", i, c) for i in I for c in Cs}
        for c in Cs:
            for i in I:
                m.add_row("lead", f"lead_member_{i}_{c}", [(X[i, c], 1.0), (U[i, c], -1.0)],
                          ">=", 0.0)
                m.add_row("lead", f"lead_top1_{i}_{c}", row_number(i) + [(P[c], -1.0),
                                                                         (U[i, c], big)],
                          "<=", big)
                m.add_row("lead", f"lead_top2_{i}_{c}", row_number(i) + [(P[c], -1.0),
                                                                         (U[i, c], -big)],
                          ">=", -big)
            m.add_row("lead", f"lead_count_{c}", [(U[i, c], 1.0) for i in I] + [(xi[c], -1.0)],
                      "=", 0.0)
        if kappa is not None:
            m.add_row("lead", "lead_loner", [(U[kappa, c], 1.0) for c in Cs], "=", 1.0)

    perf: dict[int, float] = {}  # minimization-sense performance objective
    if ift:
        visible = [i for i in I if i != kappa]
        pref = {c.id: c.preferred_tab + 1 for c in inst.commands
                if c.preferred_tab is not None and c.id != kappa}
        for i in visible:
            for c in Cs:
                al = m.add_var("alpha", i, c, domain=CONTINUOUS)
                sg = m.add_var("sigma", i, c, domain=CONTINUOUS)
                de = m.add_var("delta", i, c, domain=CONTINUOUS)
                ph = m.add_var("Phi", i, c, domain=CONTINUOUS)
                m.add_row("phi", f"phi_{i}_{c}", [(ph, 1.0), (al, -lam.lambda_1),
                                                  (sg, -lam.lambda_2), (de, -lam.lambda_3)],
                          ">=", 0.0)
                for j in I:
                    e = float(E[i, j])
                    if e > 0:
                        # inactive unless j leads c and i sits in c
                        M = e * R
                        m.add_row("alpha", f"alpha_{i}_{j}_{c}",
                                  [(al, 1.0), (P[c], e), (U[j, c], -M), (X[i, c], -M)]
                                  + [(k, -e * w) for k, w in row_number(i)], ">=", e - 2 * M)
                    if e > 0 and j != i:
                        # inactive unless j leads c and i is absent from c
                        M = e * N
                        m.add_row("sigma", f"sigma_{i}_{j}_{c}",
                                  [(sg, 1.0), (X[i, c], M), (U[j, c], -M)]
                                  + [(X[k, c], -e) for k in I], ">=", -M)
                    if e < 1 and j != i:
                        M = (1 - e) * C
                        m.add_row("delta", f"delta_{i}_{j}_{c}",
                                  [(de, 1.0), (U[j, c], -M), (X[i, c], -M)], ">=", M - 2 * M)
                if F[i]:
                    perf[ph] = perf.get(ph, 0.0) + F[i]
            if F[i]:
                perf[tv[i]] = perf.get(tv[i], 0.0) + lam.lambda_0 * F[i]
            if i in pref:
                tau = pref[i]
                om = m.add_var("Omega", i, tau, domain=CONTINUOUS)
                terms = [(om, 1.0)] + ([(Y[i, tau], lam.lambda_4)] if tau <= T else [])
                m.add_row("omega", f"omega_{i}_{tau}", terms, ">=", lam.lambda_4)
                if F[i]:
                    perf[om] = perf.get(om, 0.0) + F[i]
    else:
        for i in I:
            for j in I:
                if i != j and inst.associations[i, j]:
                    a = inst.associations[i, j]
                    perf[Z[i, j]] = perf.get(Z[i, j], 0.0) - a * lam.lambda_c
                    perf[Wv[i, j]] = perf.get(Wv[i, j], 0.0) - a * lam.lambda_m
            if F[i]:
                perf[tv[i]] = perf.get(tv[i], 0.0) + lam.lambda_f * F[i]

    if adapt is None:
        if ift:
            m.sense, m.objective = "min", perf
        else:
            m.sense, m.objective = "max", {k: -v for k, v in perf.items()}
    else:
        baseline, w = adapt
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"adaptation weight must lie in [0, 1], got {w}")
        problems = validate_layout(baseline, n, kappa)
        if problems:
            raise ValueError("invalid baseline: " + "; ".join(problems))
        m.baseline = baseline
        m.metadata["adapt_w"] = w
        obj = {k: (1.0 - w) * v for k, v in perf.items()}
        slots = baseline.slots
        for i in I:
            pi = m.add_var("Pi", i, domain=CONTINUOUS)
            xv = m.add_var("Xi", i, domain=CONTINUOUS)
            rbar, tbar = slots[i].row, slots[i].tab
            m.add_row("adapt", f"adapt_xi1_{i}", [(xv, 1.0)] + [(k, -c) for k, c in row_number(i)],
                      ">=", -rbar)
            m.add_row("adapt", f"adapt_xi2_{i}", [(xv, 1.0)] + row_number(i), ">=", rbar)
            tab_number = [(Y[i, t], float(t)) for t in Ts]
            m.add_row("adapt", f"adapt_pi1_{i}", [(pi, 1.0)] + [(k, -c) for k, c in tab_number],
                      ">=", -tbar)
            m.add_row("adapt", f"adapt_pi2_{i}", [(pi, 1.0)] + tab_number, ">=", tbar)
            obj[pi] = obj.get(pi, 0.0) + w
            obj[xv] = obj.get(xv, 0.0) + w
        m.sense = "min"
        m.objective = {k: v for k, v in obj.items() if v != 0.0}
    return m


# ---------------------------------------------------------------------------
# encoding / checking / decoding

Assignment = dict[str, float]


def encode_layout(layout: MenuLayout, model: MilpModel) -> Assignment:
    """Canonical assignment of ``layout``: groups numbered in reading order."""
    inst = model.instance
    if inst is None:
        raise ValueError("model was not built from an instance")
    meta = model.metadata
    n, C, T, R = meta["n"], meta["max_groups"], meta["max_tabs"], meta["max_rows"]
    problems = validate_layout(layout, n, inst.loner_id)
    if problems:
        raise ValueError("invalid layout: " + "; ".join(problems))
    lim = StructuralLimits(T, C, R)
    if not fits_limits(layout, lim):
        raise ValueError(f"layout exceeds the model limits (tabs={T}, groups={C}, rows={R})")
    E = model.expectations
    lam = inst.lambdas
    slots = layout.slots
    groups = layout.groups
    x: Assignment = {v.name: 0.0 for v in model.variables}

    def put(kind, *idx, value=1.0):
        name = var_name(kind, *idx)
        if name in x:
            x[name] = float(value)

    frow, ftab = fitts_row_costs(inst, R), fitts_row_costs(inst, T)
    for i in range(n):
        s = slots[i]
        put("X", i, s.group + 1)
        put("Y", i, s.tab)
        put("R", i, s.row)
        put("t", i, value=frow[s.row - 1] + ftab[s.tab - 1])
        for j in range(n):
            put("Z", i, j, value=float(slots[j].group == s.group))
            put("W", i, j, value=float(slots[j].tab == s.tab))
    for c in range(1, C + 1):
        put("P", c, value=1.0)
    for gi, g in enumerate(groups):
        c = gi + 1
        put("xi", c)
        put("Q", c, g.tab)
        put("P", c, value=g.start)
        put("U", g.lead, c)
        if g.start == 1:
            put("SS", c)
        for gj, h in enumerate(groups):
            if gj != gi and h.tab == g.tab and h.start > g.start:
                put("Theta", c, gj + 1)
                if h.start == g.start + len(g.members):
                    put("S", c, gj + 1)
    for t in range(1, layout.n_tabs + 1):
        put("beta", t)

    if meta["objective"] == Objective.IFT.value:
        kappa = inst.loner_id
        for i in range(n):
            if i == kappa:
                continue
            si = slots[i]
            for gi, g in enumerate(groups):
                c = gi + 1
                e = float(E[i, g.lead])
                if si.group == gi:
                    al, sg, de = e * si.depth, 0.0, (1.0 - e) * C
                else:
                    al, sg, de = 0.0, e * len(g.members), 0.0
                put("alpha", i, c, value=al)
                put("sigma", i, c, value=sg)
                put("delta", i, c, value=de)
                put("Phi", i, c, value=lam.lambda_1 * al + lam.lambda_2 * sg + lam.lambda_3 * de)
            pref = inst.commands[i].preferred_tab
            if pref is not None:
                put("Omega", i, pref + 1, value=0.0 if si.tab == pref + 1 else lam.lambda_4)
    if model.baseline is not None:
        base = model.baseline.slots
        for i in range(n):
            put("Pi", i, value=abs(slots[i].tab - base[i].tab))
            put("Xi", i, value=abs(slots[i].row - base[i].row))
    return x


def check_feasible(model: MilpModel, assignment: Assignment,
                   tol: float = FEAS_TOL) -> list[Violation]:
    """Every violated row, bound or integrality requirement."""
    xv = model.vector(assignment)
    rows, cols, vals, rhs, senses = model._coo()
    lhs = np.bincount(rows, weights=vals * xv[cols], minlength=len(model.constraints))
    bad = (((senses == "<=") & (lhs > rhs + tol))
           | ((senses == ">=") & (lhs < rhs - tol))
           | ((senses == "=") & (np.abs(lhs - rhs) > tol)))
    out = [Violation(model.constraints[r].name, model.constraints[r].family, float(lhs[r]),
                     model.constraints[r].sense, float(rhs[r])) for r in np.flatnonzero(bad)]
    for k, var in enumerate(model.variables):
        val = xv[k]
        if val < var.lb - tol or val > var.ub + tol:
            out.append(Violation(f"bound_{var.name}", "bounds", val,
                                 ">=" if val < var.lb else "<=",
                                 var.lb if val < var.lb else var.ub))
        elif var.domain != CONTINUOUS and abs(val - round(val)) > tol:
            out.append(Violation(f"integral_{var.name}", "integrality", val, "=", round(val)))
    return out


def decode(assignment: Assignment, model: MilpModel) -> MenuLayout:
    """Layout described by a feasible integral assignment."""
    meta = model.metadata
    n, C, T = meta["n"], meta["max_groups"], meta["max_tabs"]
    for v in model.variables:
        if v.kind in ("X", "Y", "R"):
            val = float(assignment[v.name])
            if abs(val - round(val)) > FEAS_TOL:
                raise InfeasibleAssignment(f"{v.name} = {val} is not integral")
    violations = check_feasible(model, assignment)
    if violations:
        shown = "; ".join(map(str, violations[:5]))
        raise InfeasibleAssignment(f"{len(violations)} violated constraints: {shown}")

    def one(kind, i, span):
        hits = [k for k in span if round(assignment[var_name(kind, i, k)]) == 1]
        return hits[0]

    R = meta["max_rows"]
    tab = {i: one("Y", i, range(1, T + 1)) for i in range(n)}
    row = {i: one("R", i, range(1, R + 1)) for i in range(n)}
    grp = {i: one("X", i, range(1, C + 1)) for i in range(n)}
    tabs = []
    for t in range(1, T + 1):
        members = sorted((row[i], i) for i in range(n) if tab[i] == t)
        if not members:
            continue
        groups: list[list[int]] = []
        last = None
        for _, i in members:
            if grp[i] != last:
                groups.append([])
                last = grp[i]
            groups[-1].append(i)
        tabs.append(groups)
    return MenuLayout(tabs)
