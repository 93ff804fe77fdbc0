"""Direct evaluation of concrete layouts under both objectives.

These closed forms are the reference every other path (MILP encoding,
branch and bound, annealing) is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .instance import FittsParams, TaskInstance, compute_expectations
from .layout import MenuLayout, Structure, layout_distance, validate_layout


class Objective(str, Enum):
    TWOFOLD = "twofold"  # maximized
    IFT = "ift"  # minimized


def tie_tolerance(value: float) -> float:
    return 1e-9 * max(1.0, abs(value))


def fitts_time(row: int, tab: int, p: FittsParams) -> float:
    """Pointing time to reach ``row`` on ``tab`` (both 1-based)."""
    if row < 1 or tab < 1:
        raise ValueError("row and tab are 1-based")
    return (p.a + p.b * math.log2(row + 1)) + (p.a + p.b * math.log2(tab + 1))


def _require_valid(layout: MenuLayout, inst: TaskInstance):
    problems = validate_layout(layout, inst.n, inst.loner_id)
    if problems:
        raise ValueError("invalid layout: " + "; ".join(problems))


def _positions(layout: MenuLayout, n: int):
    tab = np.empty(n, dtype=int)
    row = np.empty(n, dtype=int)
    grp = np.empty(n, dtype=int)
    depth = np.empty(n, dtype=int)
    for c, s in layout.slots.items():
        tab[c], row[c], grp[c], depth[c] = s.tab, s.row, s.group, s.depth
    return tab, row, grp, depth


def access_times(layout: MenuLayout, inst: TaskInstance) -> np.ndarray:
    tab, row, _, _ = _positions(layout, inst.n)
    p = inst.fitts
    return 2 * p.a + p.b * (np.log2(row + 1) + np.log2(tab + 1))


def eval_twofold(layout: MenuLayout, inst: TaskInstance) -> float:
    """Association reward minus weighted access time (larger is better).

    The association sum runs over ordered pairs, so each unordered pair
    counts twice.
    """
    _require_valid(layout, inst)
    lam = inst.lambdas
    tab, row, grp, _ = _positions(layout, inst.n)
    same_group = grp[:, None] == grp[None, :]
    same_tab = tab[:, None] == tab[None, :]
    A = inst.associations
    reward = float((A * (lam.lambda_c * same_group + lam.lambda_m * same_tab)).sum())
    t = access_times(layout, inst)
    return reward - lam.lambda_f * float(inst.objective_weights() @ t)


@dataclass(frozen=True)
class IftBreakdown:
    """Per-command (rows) and per-group (columns) foraging costs."""

    access: np.ndarray  # t_i
    alpha: np.ndarray  # true positive
    sigma: np.ndarray  # false positive
    delta: np.ndarray  # false negative
    omega: np.ndarray  # location penalty, per command
    phi: np.ndarray
    weights: np.ndarray
    total: float

    def per_command(self) -> np.ndarray:
        return self.phi.sum(axis=1) + self.omega

    def totals(self) -> dict[str, float]:
        F = self.weights
        return {
            "access": float(F @ self.access),
            "alpha": float(F @ self.alpha.sum(axis=1)),
            "sigma": float(F @ self.sigma.sum(axis=1)),
            "delta": float(F @ self.delta.sum(axis=1)),
            "omega": float(F @ self.omega),
            "total": self.total,
        }


def eval_ift(layout: MenuLayout, inst: TaskInstance, E: np.ndarray | None = None, *,
             false_negative_groups: int | None = None,
             count_loner: bool = False) -> tuple[float, IftBreakdown]:
    """Expected foraging cost (smaller is better) with its breakdown.

    A false negative costs one exploration per used group unless
    ``false_negative_groups`` fixes that count; the loner is left out of group
    sizes unless ``count_loner`` is set.
    """
    _require_valid(layout, inst)
    if E is None:
        E = compute_expectations(inst)
    n = inst.n
    if E.shape != (n, n):
        raise ValueError(f"expectation matrix is {E.shape}, instance has {n} commands")
    lam = inst.lambdas
    tab, row, grp, depth = _positions(layout, n)
    groups = layout.groups
    leads = np.array([g.lead for g in groups])
    sizes = np.array([len(g.members) for g in groups], dtype=float)
    if inst.loner_id is not None and not count_loner:
        sizes[grp[inst.loner_id]] -= 1
    n_groups = len(groups) if false_negative_groups is None else false_negative_groups

    member = grp[:, None] == np.arange(len(groups))[None, :]
    scent = E[:, leads]
    t = access_times(layout, inst)
    alpha = np.where(member, scent * depth[:, None], 0.0)
    sigma = np.where(member, 0.0, scent * sizes[None, :])
    delta = np.where(member, (1.0 - scent) * n_groups, 0.0)
    omega = np.zeros(n)
    for c in inst.commands:
        if c.preferred_tab is not None and tab[c.id] != c.preferred_tab + 1:
            omega[c.id] = lam.lambda_4
    phi = (lam.lambda_0 * t[:, None] * member + lam.lambda_1 * alpha
           + lam.lambda_2 * sigma + lam.lambda_3 * delta)
    F = inst.objective_weights()
    total = float(F @ (phi.sum(axis=1) + omega))
    return total, IftBreakdown(t, alpha, sigma, delta, omega, phi, F, total)


def performance(layout: MenuLayout, inst: TaskInstance, objective: Objective,
                E: np.ndarray | None = None) -> float:
    """Objective value in minimization sense."""
    if Objective(objective) is Objective.IFT:
        return eval_ift(layout, inst, E)[0]
    return -eval_twofold(layout, inst)


def eval_adapted(layout: MenuLayout, baseline: MenuLayout, inst: TaskInstance, w: float,
                 base: Objective, E: np.ndarray | None = None) -> float:
    """Blend of positional distance to ``baseline`` and performance (minimized)."""
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"adaptation weight must lie in [0, 1], got {w}")
    dist = layout_distance(layout, baseline).total
    return w * dist + (1.0 - w) * performance(layout, inst, base, E)


# --------------------------------------------------------------------------
# batch evaluation over permutations of one structure

class StructureEvaluator:
    """Vectorized minimization-sense objective for many fillings of one structure.

    ``perms[k, s]`` is the command placed in slot ``s`` (reading order).
    """

    def __init__(self, structure: Structure, inst: TaskInstance, objective: Objective,
                 E: np.ndarray | None = None, baseline: MenuLayout | None = None,
                 w: float = 0.0):
        self.inst = inst
        self.objective = Objective(objective)
        self.E = compute_expectations(inst) if (E is None and self.objective is Objective.IFT) else E
        self.baseline = baseline
        self.w = w
        tabs, rows, grps, depths, leads, sizes = [], [], [], [], [], []
        g = 0
        for t, tab in enumerate(structure, start=1):
            r = 1
            for size in tab:
                leads.append(len(tabs))
                sizes.append(size)
                for d in range(1, size + 1):
                    tabs.append(t)
                    rows.append(r)
                    grps.append(g)
                    depths.append(d)
                    r += 1
                g += 1
        self.slot_tab = np.array(tabs)
        self.slot_row = np.array(rows)
        self.slot_group = np.array(grps)
        self.slot_depth = np.array(depths)
        self.lead_slot = np.array(leads)
        self.size = np.array(sizes, dtype=float)
        self.n_groups = g
        p = inst.fitts
        self.slot_time = 2 * p.a + p.b * (np.log2(self.slot_row + 1) + np.log2(self.slot_tab + 1))
        self.member = self.slot_group[:, None] == np.arange(g)[None, :]
        n = len(tabs)
        iu, ju = np.triu_indices(n, 1)
        self.pair_i, self.pair_j = iu, ju
        lam = inst.lambdas
        self.pair_weight = 2.0 * (lam.lambda_c * (self.slot_group[iu] == self.slot_group[ju])
                                  + lam.lambda_m * (self.slot_tab[iu] == self.slot_tab[ju]))
        pref = np.array([-1 if c.preferred_tab is None else c.preferred_tab + 1
                         for c in inst.commands])
        self.pref = pref
        if baseline is not None:
            slots = baseline.slots
            self.base_tab = np.array([slots[c].tab for c in range(inst.n)])
            self.base_row = np.array([slots[c].row for c in range(inst.n)])

    def distance(self, perms: np.ndarray) -> np.ndarray:
        return (np.abs(self.slot_tab[None, :] - self.base_tab[perms]).sum(axis=1)
                + np.abs(self.slot_row[None, :] - self.base_row[perms]).sum(axis=1))

    def performance(self, perms: np.ndarray) -> np.ndarray:
        inst = self.inst
        lam = inst.lambdas
        Fw = inst.objective_weights()[perms]
        if self.objective is Objective.TWOFOLD:
            A = inst.associations
            reward = (A[perms[:, self.pair_i], perms[:, self.pair_j]] * self.pair_weight).sum(axis=1)
            return lam.lambda_f * (Fw @ self.slot_time) - reward
        E = self.E
        lead_cmd = perms[:, self.lead_slot]  # (P, G)
        scent = E[perms[:, :, None], lead_cmd[:, None, :]]  # (P, n, G)
        own = scent[:, np.arange(perms.shape[1]), self.slot_group]  # (P, n)
        sizes = np.broadcast_to(self.size, lead_cmd.shape).copy()
        if inst.loner_id is not None:
            kslot = np.argmax(perms == inst.loner_id, axis=1)
            sizes[np.arange(len(perms)), self.slot_group[kslot]] -= 1
        outside = np.where(self.member[None, :, :], 0.0, scent * sizes[:, None, :]).sum(axis=2)
        per_slot = (lam.lambda_0 * self.slot_time[None, :]
                    + lam.lambda_1 * own * self.slot_depth[None, :]
                    + lam.lambda_3 * (1.0 - own) * self.n_groups
                    + lam.lambda_2 * outside)
        pref = self.pref[perms]
        per_slot = per_slot + lam.lambda_4 * ((pref > 0) & (pref != self.slot_tab[None, :]))
        return (Fw * per_slot).sum(axis=1)

    def __call__(self, perms: np.ndarray) -> np.ndarray:
        perf = self.performance(perms)
        if self.baseline is None:
            return perf
        return self.w * self.distance(perms) + (1.0 - self.w) * perf
