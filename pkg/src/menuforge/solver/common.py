"""Pieces shared by the solvers: reports, scoring, tie-breaking, random layouts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Sequence

import numpy as np

from ..evaluator import Objective, eval_adapted, eval_twofold, performance, tie_tolerance
from ..instance import StructuralLimits, TaskInstance, compute_expectations
from ..layout import MenuLayout, fits_limits, layout_distance, layout_to_dict, validate_layout


class Method(str, Enum):
    BRUTE = "brute"
    BNB = "bnb"
    ANNEAL = "anneal"


@dataclass
class SolveReport:
    """Outcome of one solver run.

    ``objective`` and ``best_bound`` are in the objective's natural sense
    (two-fold is maximized, everything else minimized).  Heuristic runs
    leave ``best_bound`` and ``gap`` as ``None``.
    """

    layout: MenuLayout
    objective: float
    best_bound: float | None
    gap: float | None
    nodes_explored: int
    evaluations: int
    wall_time: float
    method: Method
    seed: int | None = None
    objective_kind: str = "ift"
    improvements: int = 0
    status: str = "optimal"
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def proven_optimal(self) -> bool:
        return self.gap == 0.0

    def to_dict(self, digest: str | None = None) -> dict[str, Any]:
        doc = {
            "layout": layout_to_dict(self.layout)["tabs"],
            "objective": self.objective,
            "objective_kind": self.objective_kind,
            "best_bound": self.best_bound,
            "gap": self.gap,
            "nodes_explored": self.nodes_explored,
            "evaluations": self.evaluations,
            "wall_time": self.wall_time,
            "method": self.method.value,
            "seed": self.seed,
            "improvements": self.improvements,
            "status": self.status,
        }
        doc.update(self.extra)
        if digest is not None:
            doc["instance_digest"] = digest
        return doc


def relative_gap(objective: float, bound: float) -> float:
    return abs(objective - bound) / max(1.0, abs(objective))


class Problem:
    """Minimization view of one optimization task.

    Wraps the base objective and, when a baseline is given, the proximity
    blend ``w * distance + (1 - w) * performance``.
    """

    def __init__(self, inst: TaskInstance, objective: Objective | str,
                 baseline: MenuLayout | None = None, w: float | None = None,
                 limits: StructuralLimits | None = None):
        self.inst = inst
        self.objective = Objective(objective)
        self.limits = (limits or inst.limits).resolve(inst.n, inst.n_visible)
        self.E = compute_expectations(inst)
        self.baseline = baseline
        self.w = 0.0 if w is None else float(w)
        if baseline is not None:
            if not 0.0 <= self.w <= 1.0:
                raise ValueError(f"adaptation weight must lie in [0, 1], got {w}")
            problems = validate_layout(baseline, inst.n, inst.loner_id)
            if problems:
                raise ValueError("invalid baseline: " + "; ".join(problems))
        elif w is not None:
            raise ValueError("an adaptation weight needs a baseline")

    @property
    def kind(self) -> str:
        return "adapt" if self.baseline is not None else self.objective.value

    def cost(self, layout: MenuLayout) -> float:
        """Reference minimization-sense cost (the value ties are judged on)."""
        if self.baseline is not None:
            return eval_adapted(layout, self.baseline, self.inst, self.w, self.objective, self.E)
        return performance(layout, self.inst, self.objective, self.E)

    def natural(self, cost: float) -> float:
        """Convert a minimization cost back to the reported sense."""
        if self.baseline is None and self.objective is Objective.TWOFOLD:
            return -cost
        return cost

    def natural_value(self, layout: MenuLayout) -> float:
        if self.baseline is None and self.objective is Objective.TWOFOLD:
            return eval_twofold(layout, self.inst)
        return self.cost(layout)

    def tie_key(self, layout: MenuLayout):
        """Order among layouts whose costs tie within tolerance."""
        if self.baseline is None:
            return (layout.tabs,)
        return (layout_distance(layout, self.baseline).total, layout != self.baseline, layout.tabs)

    def admissible(self, layout: MenuLayout) -> bool:
        return (not validate_layout(layout, self.inst.n, self.inst.loner_id)
                and fits_limits(layout, self.limits))


class TieSet:
    """Collects near-optimal layouts and picks the tie-break winner at the end."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self.best = math.inf
        self.items: list[tuple[float, MenuLayout]] = []

    def threshold(self) -> float:
        return self.best + tie_tolerance(self.best) if math.isfinite(self.best) else math.inf

    def offer(self, cost: float, layout: MenuLayout) -> bool:
        """Record a scored layout; True when it strictly improves the best."""
        improved = cost < self.best - tie_tolerance(self.best) if math.isfinite(self.best) else True
        if cost < self.best:
            self.best = cost
            limit = self.threshold()
            self.items = [(c, L) for c, L in self.items if c <= limit]
        if cost <= self.threshold():
            self.items.append((cost, layout))
        return improved

    def winner(self) -> tuple[float, MenuLayout]:
        if not self.items:
            raise RuntimeError("no feasible layout recorded")
        limit = self.threshold()
        pool = [(c, L) for c, L in self.items if c <= limit]
        cost, layout = min(pool, key=lambda item: self.problem.tie_key(item[1]))
        return cost, layout


# --------------------------------------------------------------------------
# fast scoring of nested lists (annealing inner loop)

SMALL = 20  # below this size plain Python beats numpy call overhead


class FastScorer:
    """Minimization cost of a nested-list layout without building a MenuLayout.

    Agrees with :meth:`Problem.cost` up to floating-point summation order.
    """

    def __init__(self, problem: Problem):
        inst = problem.inst
        self.problem = problem
        self.n = inst.n
        self.F = inst.objective_weights()
        self.A = inst.associations
        self.E = problem.E
        self.lam = inst.lambdas
        self.kappa = inst.loner_id
        p = inst.fitts
        big = max(self.n, problem.limits.max_tabs, problem.limits.max_rows) + 1
        self.f = p.a + p.b * np.log2(np.arange(big + 1) + 1.0)
        self.pref = np.array([-1 if c.preferred_tab is None else c.preferred_tab + 1
                              for c in inst.commands])
        self.has_pref = self.pref > 0
        self.ift = problem.objective is Objective.IFT
        self.w = problem.w if problem.baseline is not None else None
        if problem.baseline is not None:
            slots = problem.baseline.slots
            self.base_tab = np.array([slots[i].tab for i in range(self.n)])
            self.base_row = np.array([slots[i].row for i in range(self.n)])
        self._idx = np.arange(self.n)
        # plain-list copies for the small-instance path
        self.fl, self.Fl = self.f.tolist(), self.F.tolist()
        self.El, self.Al = self.E.tolist(), self.A.tolist()
        self.prefl = self.pref.tolist()

    def _small(self, tabs) -> float:
        f, F, lam, pref = self.fl, self.Fl, self.lam, self.prefl
        leads, sizes, cells = [], [], []
        for t, groups in enumerate(tabs, start=1):
            r = 0
            for members in groups:
                g = len(leads)
                leads.append(members[0])
                sizes.append(len(members))
                for d, c in enumerate(members, start=1):
                    r += 1
                    cells.append((c, t, r, g, d))
        total = 0.0
        if self.ift:
            if self.kappa is not None:
                for c, _, _, g, _ in cells:
                    if c == self.kappa:
                        sizes[g] -= 1
            G = len(leads)
            for c, t, r, g, d in cells:
                if not F[c]:
                    continue
                Ec = self.El[c]
                own = Ec[leads[g]]
                sigma = -own * sizes[g]
                for h in range(G):
                    sigma += Ec[leads[h]] * sizes[h]
                cost = (lam.lambda_0 * (f[r] + f[t]) + lam.lambda_1 * own * d
                        + lam.lambda_2 * sigma + lam.lambda_3 * (1.0 - own) * G)
                if pref[c] > 0 and pref[c] != t:
                    cost += lam.lambda_4
                total += F[c] * cost
        else:
            reward = 0.0
            for x, (c, t, _, g, _) in enumerate(cells):
                Ac = self.Al[c]
                for c2, t2, _, g2, _ in cells[x + 1:]:
                    a = Ac[c2]
                    if a:
                        reward += a * (lam.lambda_c * (g == g2) + lam.lambda_m * (t == t2))
            time_cost = sum(F[c] * (f[r] + f[t]) for c, t, r, _, _ in cells)
            total = lam.lambda_f * time_cost - 2.0 * reward
        if self.w is None:
            return total
        dist = sum(abs(t - self.base_tab[c]) + abs(r - self.base_row[c]) for c, t, r, _, _ in cells)
        return self.w * float(dist) + (1.0 - self.w) * total

    def positions(self, tabs: Sequence[Sequence[Sequence[int]]]):
        n = self.n
        tab = np.empty(n, dtype=np.int64)
        row = np.empty(n, dtype=np.int64)
        grp = np.empty(n, dtype=np.int64)
        depth = np.empty(n, dtype=np.int64)
        leads, sizes = [], []
        g = 0
        for t, groups in enumerate(tabs, start=1):
            r = 1
            for members in groups:
                leads.append(members[0])
                sizes.append(len(members))
                for d, c in enumerate(members, start=1):
                    tab[c], row[c], grp[c], depth[c] = t, r, g, d
                    r += 1
                g += 1
        return tab, row, grp, depth, np.array(leads), np.array(sizes, dtype=float)

    def __call__(self, tabs) -> float:
        if self.n <= SMALL:
            return self._small(tabs)
        tab, row, grp, depth, leads, sizes = self.positions(tabs)
        t = self.f[row] + self.f[tab]
        lam = self.lam
        if self.ift:
            if self.kappa is not None:
                sizes[grp[self.kappa]] -= 1
            scent = self.E[:, leads]
            own = scent[self._idx, grp]
            sigma = scent @ sizes - own * sizes[grp]
            omega = self.has_pref & (self.pref != tab)
            per = (lam.lambda_0 * t + lam.lambda_1 * own * depth
                   + lam.lambda_2 * sigma + lam.lambda_3 * (1.0 - own) * len(leads)
                   + lam.lambda_4 * omega)
            perf = float(self.F @ per)
        else:
            same_g = grp[:, None] == grp[None, :]
            same_t = tab[:, None] == tab[None, :]
            reward = float((self.A * (lam.lambda_c * same_g + lam.lambda_m * same_t)).sum())
            perf = lam.lambda_f * float(self.F @ t) - reward
        if self.w is None:
            return perf
        dist = float(np.abs(tab - self.base_tab).sum() + np.abs(row - self.base_row).sum())
        return self.w * dist + (1.0 - self.w) * perf


# --------------------------------------------------------------------------
# random layouts

def _split(items: list, pieces: int, cap: int, rng: np.random.Generator) -> list[list]:
    """Split ``items`` into ``pieces`` non-empty consecutive runs of length <= cap."""
    n = len(items)
    sizes = [1] * pieces
    for _ in range(n - pieces):
        open_ = [k for k in range(pieces) if sizes[k] < cap]
        sizes[open_[int(rng.integers(len(open_)))]] += 1
    out, k = [], 0
    for s in sizes:
        out.append(items[k:k + s])
        k += s
    return out


def random_layout(inst: TaskInstance, rng: np.random.Generator,
                  limits: StructuralLimits | None = None) -> MenuLayout:
    """Uniformly shuffled commands in a random structure within the limits."""
    lim = (limits or inst.limits).resolve(inst.n, inst.n_visible)
    n = inst.n
    T, C, R = lim.max_tabs, lim.max_groups, lim.max_rows
    lo = math.ceil(n / R)
    hi = min(T, C, n)
    if lo > hi:
        raise ValueError("limits cannot host the instance")
    order = [int(c) for c in rng.permutation(n)]
    n_tabs = int(rng.integers(lo, hi + 1))
    tabs = _split(order, n_tabs, R, rng)
    budget = C - n_tabs  # extra groups beyond one per tab
    nested = []
    for cmds in tabs:
        extra = int(rng.integers(0, min(budget, len(cmds) - 1) + 1)) if budget > 0 else 0
        budget -= extra
        nested.append(_split(cmds, extra + 1, len(cmds), rng))
    return MenuLayout(repair_loner(nested, inst.loner_id))


def repair_loner(nested: list, kappa: int | None) -> list:
    """Move the loner to the front of whatever group holds it."""
    if kappa is None:
        return nested
    for groups in nested:
        for g in groups:
            if kappa in g and g[0] != kappa:
                g.remove(kappa)
                g.insert(0, kappa)
    return nested


def best_of(problem: Problem, layouts: Iterable[MenuLayout]) -> tuple[float, MenuLayout]:
    ties = TieSet(problem)
    for L in layouts:
        ties.offer(problem.cost(L), L)
    return ties.winner()
