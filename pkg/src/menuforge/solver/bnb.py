"""Depth-first branch and bound over layouts built in reading order.

A node is a prefix of the final reading order: tabs left to right, groups
top to bottom, commands top to bottom.  Each branch appends one unplaced
command either to the open group, as the lead of a new group on the open
tab, or as the lead of a new tab.  Every layout has exactly one such
derivation, so the tree enumerates each layout once.

The bound of a node is the exact cost already fixed by the prefix plus an
optimistic completion; see ``_Bounder`` for the individual terms.
"""

from __future__ import annotations

import math
import time

from ..evaluator import Objective
from ..instance import StructuralLimits, TaskInstance
from ..layout import MenuLayout
from .common import Method, Problem, SolveReport, TieSet, relative_gap

CONTINUE, NEW_GROUP, NEW_TAB = 0, 1, 2


class _Node:
    __slots__ = ("seq", "bound")

    def __init__(self, seq: tuple, bound: float):
        self.seq = seq  # ((command, code), ...)
        self.bound = bound


class _Prefix:
    """Positions implied by a placement sequence."""

    __slots__ = ("tab", "row", "grp", "depth", "leads", "sizes", "raw_sizes", "tc", "rc",
                 "placed", "unplaced", "nested")

    def __init__(self, seq, n: int, kappa: int | None):
        tab = [0] * n
        row = [0] * n
        grp = [-1] * n
        depth = [0] * n
        leads: list[int] = []
        raw: list[int] = []
        nested: list[list[list[int]]] = []
        tc = rc = 0
        for c, code in seq:
            if code == NEW_TAB:
                tc += 1
                rc = 0
                nested.append([])
            if code != CONTINUE:
                leads.append(c)
                raw.append(0)
                nested[-1].append([])
            rc += 1
            g = len(leads) - 1
            raw[g] += 1
            tab[c], row[c], grp[c], depth[c] = tc, rc, g, raw[g]
            nested[-1][-1].append(c)
        sizes = list(raw)
        if kappa is not None and grp[kappa] >= 0:
            sizes[grp[kappa]] -= 1
        self.tab, self.row, self.grp, self.depth = tab, row, grp, depth
        self.leads, self.sizes, self.raw_sizes = leads, sizes, raw
        self.tc, self.rc = tc, rc
        self.placed = [c for c, _ in seq]
        done = set(self.placed)
        self.unplaced = [c for c in range(n) if c not in done]
        self.nested = nested


class _Bounder:
    """Admissible lower bound on the minimization cost of any completion.

    Placed commands contribute their exact access time, position, location
    penalty and search costs against the groups that exist so far (group
    count and sizes can only grow).  Each unplaced command contributes:

    * an access time from the cheapest free slots, matched to frequencies by
      the rearrangement inequality;
    * false-positive cost against groups that can no longer grow;
    * the cheapest of leading its own group, joining the open group, or
      sitting below some other unplaced lead;
    * the location penalty when its preferred tab is already closed.

    For the two-fold objective every pair that could still share a group or
    tab is credited its full association reward.
    """

    def __init__(self, problem: Problem):
        inst = problem.inst
        self.problem = problem
        self.n = inst.n
        self.kappa = inst.loner_id
        self.F = [float(x) for x in inst.objective_weights()]
        self.A = inst.associations.tolist()
        self.E = problem.E.tolist()
        self.lam = inst.lambdas
        lim = problem.limits
        self.T, self.C, self.R = lim.max_tabs, lim.max_groups, lim.max_rows
        p = inst.fitts
        top = max(self.n, self.T, self.R) + 2
        self.f = [p.a + p.b * math.log2(k + 1) for k in range(top)]
        self.pref = [0 if c.preferred_tab is None else c.preferred_tab + 1 for c in inst.commands]
        self.ift = problem.objective is Objective.IFT
        self.adapt = problem.baseline is not None
        self.w = problem.w
        if self.adapt:
            slots = problem.baseline.slots
            self.base_tab = [slots[i].tab for i in range(self.n)]
            self.base_row = [slots[i].row for i in range(self.n)]

    # -- helpers -------------------------------------------------------------
    def feasible(self, pre_g: int, tc: int, rc: int, left: int, kappa_left: bool) -> bool:
        if left == 0:
            return True
        room = self.R - rc if tc else 0
        tabs_needed = max(0, -(-(left - room) // self.R))
        if tabs_needed > self.T - tc:
            return False
        return pre_g + max(tabs_needed, 1 if kappa_left else 0) <= self.C

    def _slot_times(self, tc: int, rc: int, k: int) -> list[float]:
        f = self.f
        times = []
        if tc:
            times.extend(f[r] + f[tc] for r in range(rc + 1, min(self.R, rc + k) + 1))
        for t in range(tc + 1, self.T + 1):
            times.extend(f[r] + f[t] for r in range(1, min(self.R, k) + 1))
        times.sort()
        return times[:k]

    def _time_bound(self, pre: _Prefix) -> float:
        U = pre.unplaced
        if not U:
            return 0.0
        times = self._slot_times(pre.tc, pre.rc, len(U))
        freqs = sorted((self.F[j] for j in U), reverse=True)
        return sum(a * b for a, b in zip(freqs, times))

    def _distance(self, pre: _Prefix) -> float:
        total = 0
        for i in pre.placed:
            total += abs(pre.tab[i] - self.base_tab[i]) + abs(pre.row[i] - self.base_row[i])
        tc, rc = max(pre.tc, 1), pre.rc if pre.tc else 0
        for j in pre.unplaced:
            bt, br = self.base_tab[j], self.base_row[j]
            if bt < tc:
                total += tc - bt
            elif bt == tc:
                total += min(max(0, rc + 1 - br), 1)
        return float(total)

    # -- objectives ------------------------------------------------------------
    def _ift(self, pre: _Prefix) -> float:
        lam, E, F, f = self.lam, self.E, self.F, self.f
        leads, sizes, raw = pre.leads, pre.sizes, pre.raw_sizes
        G = len(leads)
        cost = 0.0
        for i in pre.placed:
            if not F[i]:
                continue
            g = pre.grp[i]
            Ei = E[i]
            own = Ei[leads[g]]
            sigma = 0.0
            for h in range(G):
                if h != g:
                    sigma += Ei[leads[h]] * sizes[h]
            c = (lam.lambda_0 * (f[pre.row[i]] + f[pre.tab[i]]) + lam.lambda_1 * own * pre.depth[i]
                 + lam.lambda_2 * sigma + lam.lambda_3 * (1.0 - own) * G)
            if self.pref[i] and self.pref[i] != pre.tab[i]:
                c += lam.lambda_4
            cost += F[i] * c
        U = pre.unplaced
        if not U:
            return cost
        cost += lam.lambda_0 * self._time_bound(pre)
        joinable = G > 0 and pre.rc < self.R
        closed = range(G - 1) if joinable else range(G)
        open_lead = leads[-1] if joinable else -1
        tc = max(pre.tc, 1)
        for j in U:
            if not F[j]:
                continue
            Ej = E[j]
            c = 0.0
            for h in closed:
                c += Ej[leads[h]] * sizes[h]
            c *= lam.lambda_2
            best = lam.lambda_1
            if joinable:
                e = Ej[open_lead]
                best = min(best, lam.lambda_1 * e * (raw[-1] + 1) + lam.lambda_3 * (1.0 - e) * G)
            for k in U:
                if k != j:
                    e = Ej[k]
                    best = min(best, 2.0 * lam.lambda_1 * e + lam.lambda_3 * (1.0 - e) * (G + 1))
            c += best
            if self.pref[j] and self.pref[j] < tc and pre.tc:
                c += lam.lambda_4
            cost += F[j] * c
        return cost

    def _twofold(self, pre: _Prefix) -> float:
        lam, A, F, f = self.lam, self.A, self.F, self.f
        placed, U = pre.placed, pre.unplaced
        time_cost = sum(F[i] * (f[pre.row[i]] + f[pre.tab[i]]) for i in placed)
        time_cost += self._time_bound(pre)
        lc, lm = lam.lambda_c, lam.lambda_m
        reward = 0.0
        for x, i in enumerate(placed):
            Ai = A[i]
            for i2 in placed[x + 1:]:
                a = Ai[i2]
                if a:
                    reward += a * (lc * (pre.grp[i] == pre.grp[i2]) + lm * (pre.tab[i] == pre.tab[i2]))
        room = pre.rc < self.R
        G = len(pre.leads)
        for i in placed:
            w = lc * (room and pre.grp[i] == G - 1) + lm * (room and pre.tab[i] == pre.tc)
            if w:
                Ai = A[i]
                reward += w * sum(Ai[j] for j in U)
        for x, j in enumerate(U):
            Aj = A[j]
            for k in U[x + 1:]:
                reward += Aj[k] * (lc + lm)
        return lam.lambda_f * time_cost - 2.0 * reward

    def __call__(self, pre: _Prefix) -> float:
        perf = self._ift(pre) if self.ift else self._twofold(pre)
        if not self.adapt:
            return perf
        return self.w * self._distance(pre) + (1.0 - self.w) * perf


def solve_bnb(inst: TaskInstance, objective: Objective | str = Objective.IFT,
              time_limit: float | None = None, incumbent: MenuLayout | None = None, *,
              baseline: MenuLayout | None = None, w: float | None = None,
              limits: StructuralLimits | None = None) -> SolveReport:
    """Exact optimum, or the best layout found when ``time_limit`` runs out.

    Ties are resolved exactly as in :func:`solve_brute`.
    """
    start = time.perf_counter()
    problem = Problem(inst, objective, baseline, w, limits)
    bounder = _Bounder(problem)
    n, kappa = inst.n, inst.loner_id
    ties = TieSet(problem)
    evaluations = 0
    improvements = 0
    if incumbent is not None:
        if not problem.admissible(incumbent):
            raise ValueError("incumbent layout is invalid or exceeds the limits")
        ties.offer(problem.cost(incumbent), incumbent)
        evaluations += 1

    order = sorted(range(n), key=lambda c: (-bounder.F[c], c))
    root = _Node((), bounder(_Prefix((), n, kappa)))
    stack = [root]
    nodes = pruned = 0
    timed_out = False
    while stack:
        if time_limit is not None and ties.items and time.perf_counter() - start > time_limit:
            timed_out = True
            break
        node = stack.pop()
        if node.bound > ties.threshold():
            pruned += 1
            continue
        nodes += 1
        pre = _Prefix(node.seq, n, kappa)
        G = len(pre.leads)
        kappa_left = kappa is not None and pre.grp[kappa] < 0
        children = []
        for c in order:
            if pre.grp[c] >= 0:
                continue
            left = len(pre.unplaced) - 1
            still_kappa = kappa_left and c != kappa
            options = []
            if G and pre.rc < bounder.R and c != kappa:
                options.append((CONTINUE, G, pre.tc, pre.rc + 1))
            if pre.tc and pre.rc < bounder.R and G < bounder.C:
                options.append((NEW_GROUP, G + 1, pre.tc, pre.rc + 1))
            if pre.tc < bounder.T and G < bounder.C:
                options.append((NEW_TAB, G + 1, pre.tc + 1, 1))
            for code, g2, tc2, rc2 in options:
                if not bounder.feasible(g2, tc2, rc2, left, still_kappa):
                    continue
                seq = node.seq + ((c, code),)
                child_pre = _Prefix(seq, n, kappa)
                if left == 0:
                    layout = MenuLayout(child_pre.nested)
                    cost = problem.cost(layout)
                    evaluations += 1
                    if ties.offer(cost, layout):
                        improvements += 1
                    continue
                b = bounder(child_pre)
                if b > ties.threshold():
                    pruned += 1
                    continue
                children.append(_Node(seq, b))
        children.sort(key=lambda nd: nd.bound, reverse=True)
        stack.extend(children)

    cost, layout = ties.winner()
    if timed_out:
        low = min([cost] + [nd.bound for nd in stack])
    else:
        low = cost
    value = problem.natural(cost)
    bound = problem.natural(low)
    return SolveReport(layout=layout, objective=value, best_bound=bound,
                       gap=0.0 if not timed_out else relative_gap(value, bound),
                       nodes_explored=nodes, evaluations=evaluations,
                       wall_time=time.perf_counter() - start, method=Method.BNB,
                       objective_kind=problem.kind, improvements=improvements,
                       status="time_limit" if timed_out else "optimal",
                       extra={"pruned": pruned})
