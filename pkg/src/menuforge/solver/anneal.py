"""Simulated annealing over layouts for instances too large to solve exactly."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

import numpy as np

from ..evaluator import Objective
from ..instance import StructuralLimits, TaskInstance
from ..layout import MenuLayout
from .common import FastScorer, Method, Problem, SolveReport, TieSet, random_layout, repair_loner


@dataclass(frozen=True)
class AnnealConfig:
    """Cooling schedule.

    ``initial_temperature=None`` derives it from the spread of random
    layouts.  The chain stops once the temperature drops below
    ``min_temperature`` times the initial one, after ``stall_levels``
    cool levels without a new best, or at ``time_limit`` seconds.  A level is
    cool when fewer than 30% of its proposals moved the chain to a layout of
    different cost; hot levels neither count nor reset the tally.
    The best layout is then polished by steepest descent over single swaps
    and relocations when ``polish`` is set.
    """

    initial_temperature: float | None = None
    cooling_rate: float = 0.97
    iterations_per_temperature: int = 200
    min_temperature: float = 1e-4
    seed: int = 0
    stall_levels: int = 50
    polish: bool = True
    time_limit: float | None = None
    calibration_samples: int = 100

    def __post_init__(self):
        if not 0.0 < self.cooling_rate < 1.0:
            raise ValueError("cooling_rate must lie in (0, 1)")
        if self.initial_temperature is not None and self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be positive")
        if self.iterations_per_temperature < 1 or self.min_temperature <= 0:
            raise ValueError("iterations and minimum temperature must be positive")
        if self.stall_levels < 1 or self.calibration_samples < 2:
            raise ValueError("stall_levels and calibration_samples must be positive")


Nested = list[list[list[int]]]


def _copy(tabs: Nested) -> Nested:
    return [[list(g) for g in t] for t in tabs]


def _tidy(tabs: Nested) -> Nested:
    out = [[g for g in t if g] for t in tabs]
    return [t for t in out if t]


def _locate(tabs: Nested):
    return [(t, g, k) for t, groups in enumerate(tabs) for g, members in enumerate(groups)
            for k in range(len(members))]


class _Moves:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def pick(self, seq):
        return seq[self.rng.randrange(len(seq))]

    def swap_commands(self, tabs: Nested) -> Nested | None:
        cells = _locate(tabs)
        if len(cells) < 2:
            return None
        a, b = self.rng.sample(range(len(cells)), 2)
        (t1, g1, k1), (t2, g2, k2) = cells[a], cells[b]
        out = _copy(tabs)
        out[t1][g1][k1], out[t2][g2][k2] = out[t2][g2][k2], out[t1][g1][k1]
        return out

    def relocate_command(self, tabs: Nested) -> Nested | None:
        t, g, k = self.pick(_locate(tabs))
        out = _copy(tabs)
        c = out[t][g].pop(k)
        tt = self.rng.randrange(len(out) + 1)
        if tt == len(out):
            out.append([[c]])
        else:
            gg = self.rng.randrange(len(out[tt]) + 1)
            if gg == len(out[tt]):
                out[tt].append([c])
            else:
                members = out[tt][gg]
                members.insert(self.rng.randrange(len(members) + 1), c)
        return _tidy(out)

    def split_or_merge(self, tabs: Nested) -> Nested | None:
        out = _copy(tabs)
        if self.rng.random() < 0.5:
            big = [(t, g) for t, groups in enumerate(out) for g, m in enumerate(groups) if len(m) > 1]
            if not big:
                return None
            t, g = self.pick(big)
            members = out[t][g]
            cut = self.rng.randrange(1, len(members))
            out[t][g:g + 1] = [members[:cut], members[cut:]]
            return out
        pairs = [(t, g) for t, groups in enumerate(out) for g in range(len(groups) - 1)]
        if not pairs:
            return None
        t, g = self.pick(pairs)
        out[t][g:g + 2] = [out[t][g] + out[t][g + 1]]
        return out

    def move_group(self, tabs: Nested) -> Nested | None:
        groups = [(t, g) for t, gs in enumerate(tabs) for g in range(len(gs))]
        t, g = self.pick(groups)
        out = _copy(tabs)
        members = out[t].pop(g)
        tt = self.rng.randrange(len(out) + 1)
        if tt == len(out):
            out.append([members])
        else:
            out[tt].insert(self.rng.randrange(len(out[tt]) + 1), members)
        return _tidy(out)

    def swap_tabs(self, tabs: Nested) -> Nested | None:
        if len(tabs) < 2:
            return None
        a, b = self.rng.sample(range(len(tabs)), 2)
        out = _copy(tabs)
        out[a], out[b] = out[b], out[a]
        return out

    def propose(self, tabs: Nested) -> Nested | None:
        move = (self.swap_commands, self.relocate_command, self.split_or_merge,
                self.move_group, self.swap_tabs)[self.rng.randrange(5)]
        return move(tabs)


def _within(tabs: Nested, T: int, C: int, R: int) -> bool:
    if len(tabs) > T or sum(len(t) for t in tabs) > C:
        return False
    return all(sum(len(g) for g in t) <= R for t in tabs)


def _key(tabs: Nested):
    return tuple(tuple(tuple(g) for g in t) for t in tabs)


def _neighbours(tabs: Nested):
    """Every single swap, then every relocation of one command (fixed order)."""
    cells = _locate(tabs)
    for a in range(len(cells)):
        for b in range(a + 1, len(cells)):
            (t1, g1, k1), (t2, g2, k2) = cells[a], cells[b]
            out = _copy(tabs)
            out[t1][g1][k1], out[t2][g2][k2] = out[t2][g2][k2], out[t1][g1][k1]
            yield out
    for t, g, k in cells:
        rest = _copy(tabs)
        c = rest[t][g].pop(k)
        rest = _tidy(rest)
        for tt in range(len(rest) + 1):
            out = _copy(rest)
            out.insert(tt, [[c]])
            yield out
        for tt in range(len(rest)):
            for gg in range(len(rest[tt]) + 1):
                out = _copy(rest)
                out[tt].insert(gg, [c])
                yield out
            for gg in range(len(rest[tt])):
                for pos in range(len(rest[tt][gg]) + 1):
                    out = _copy(rest)
                    out[tt][gg].insert(pos, c)
                    yield out


def _descend(tabs: Nested, cost: float, score, feasible, deadline: float | None):
    """First-improvement local search until no single move helps."""
    improved = True
    while improved:
        improved = False
        for cand in _neighbours(tabs):
            if deadline is not None and time.perf_counter() > deadline:
                return tabs, cost
            if not feasible(cand):
                continue
            value = score(cand)
            if value < cost - 1e-9 * max(1.0, abs(cost)):
                tabs, cost, improved = cand, value, True
                break
    return tabs, cost


def initial_temperature(problem: Problem, scorer: FastScorer, rng: np.random.Generator,
                        samples: int) -> float:
    """Ten times the spread of random layout costs."""
    values = [scorer(random_layout(problem.inst, rng, problem.limits).tabs) for _ in range(samples)]
    spread = float(np.std(values))
    return 10.0 * spread if spread > 0 else 1.0


def solve_anneal(inst: TaskInstance, objective: Objective | str = Objective.IFT,
                 cfg: AnnealConfig | None = None, start: MenuLayout | None = None, *,
                 baseline: MenuLayout | None = None, w: float | None = None,
                 limits: StructuralLimits | None = None) -> SolveReport:
    """Metropolis chain with geometric cooling; returns the best layout seen.

    Deterministic for a fixed seed.
    """
    cfg = cfg or AnnealConfig()
    t0 = time.perf_counter()
    problem = Problem(inst, objective, baseline, w, limits)
    lim = problem.limits
    T, C, R = lim.max_tabs, lim.max_groups, lim.max_rows
    rng = np.random.default_rng(cfg.seed)  # random starts and calibration
    chain = random.Random(cfg.seed)  # moves and acceptance
    scorer = FastScorer(problem)
    moves = _Moves(chain)
    cache: dict = {}

    def score(tabs: Nested) -> float:
        key = _key(tabs)
        value = cache.get(key)
        if value is None:
            value = scorer(tabs)
            cache[key] = value
        return value

    if start is not None:
        if not problem.admissible(start):
            raise ValueError("start layout is invalid or exceeds the limits")
        current = start.to_nested()
    else:
        current = random_layout(inst, rng, lim).to_nested()
    temp = cfg.initial_temperature
    if temp is None:
        temp = initial_temperature(problem, scorer, rng, cfg.calibration_samples)
    floor = cfg.min_temperature * temp
    cur_cost = score(current)
    best, best_cost = current, cur_cost
    levels = stall = accepted = proposals = last_gain = 0
    cool_below = 0.3 * cfg.iterations_per_temperature
    kappa = inst.loner_id
    while temp >= floor and stall < cfg.stall_levels:
        improved = False
        moved = 0
        for _ in range(cfg.iterations_per_temperature):
            cand = moves.propose(current)
            proposals += 1
            if cand is None:
                continue
            cand = repair_loner(cand, kappa)
            if not _within(cand, T, C, R):
                continue
            cost = score(cand)
            delta = cost - cur_cost
            if delta <= 0 or chain.random() < math.exp(-delta / temp):
                current, cur_cost = cand, cost
                accepted += 1
                moved += delta != 0
                if cost < best_cost - 1e-9 * max(1.0, abs(best_cost)):
                    best, best_cost = cand, cost
                    improved = True
                    last_gain = levels
        levels += 1
        if improved:
            stall = 0
        elif moved < cool_below:
            stall += 1
        temp *= cfg.cooling_rate
        if cfg.time_limit is not None and time.perf_counter() - t0 > cfg.time_limit:
            break

    if cfg.polish:
        def feasible(cand: Nested) -> bool:
            if kappa is not None and not any(g[0] == kappa for t in cand for g in t):
                return False
            return _within(cand, T, C, R)

        deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
        best, best_cost = _descend(best, best_cost, score, feasible, deadline)
    layout = MenuLayout(best)
    ties = TieSet(problem)
    ties.offer(problem.cost(layout), layout)
    cost, layout = ties.winner()
    return SolveReport(layout=layout, objective=problem.natural(cost), best_bound=None, gap=None,
                       nodes_explored=0, evaluations=len(cache),
                       wall_time=time.perf_counter() - t0, method=Method.ANNEAL, seed=cfg.seed,
                       objective_kind=problem.kind, status="heuristic",
                       extra={"levels": levels, "accepted": accepted, "proposals": proposals, "last_improvement_level": last_gain,
                              "initial_temperature": floor / cfg.min_temperature})
