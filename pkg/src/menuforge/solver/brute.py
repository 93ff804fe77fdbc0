"""Exhaustive enumeration: the oracle every other solver is checked against."""

from __future__ import annotations

import itertools
import time

import numpy as np

from ..evaluator import Objective, StructureEvaluator
from ..instance import StructuralLimits, TaskInstance
from ..layout import MAX_ENUMERATION, MenuLayout, enumerate_structures, fill_structure, lead_slots
from .common import Method, Problem, SolveReport, TieSet

# vectorized scores can differ from the reference evaluator in the last bits,
# so anything this close to the running minimum is rescored exactly
_SCREEN = 1e-7
_CHUNK = 20000


def solve_brute(inst: TaskInstance, objective: Objective | str = Objective.IFT, *,
                baseline: MenuLayout | None = None, w: float | None = None,
                limits: StructuralLimits | None = None) -> SolveReport:
    """Global optimum by scoring every layout within the limits.

    Ties (within ``1e-9`` relative) go to the lexicographically smallest
    nested id list; with a baseline, smaller distance wins first.
    """
    if inst.n > MAX_ENUMERATION:
        raise ValueError(f"brute force is limited to n <= {MAX_ENUMERATION}, got {inst.n}")
    start = time.perf_counter()
    problem = Problem(inst, objective, baseline, w, limits)
    n, kappa = inst.n, inst.loner_id
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    screened: list[tuple[float, tuple, np.ndarray]] = []
    running = np.inf
    evaluations = 0
    for structure in enumerate_structures(n, problem.limits):
        pool = perms
        if kappa is not None:
            pool = perms[np.isin(np.argmax(perms == kappa, axis=1), lead_slots(structure))]
        scorer = StructureEvaluator(structure, inst, problem.objective, problem.E,
                                    baseline, problem.w)
        for k in range(0, len(pool), _CHUNK):
            chunk = pool[k:k + _CHUNK]
            values = scorer(chunk)
            evaluations += len(chunk)
            low = float(values.min())
            if low < running:
                running = low
                limit = running + _SCREEN * max(1.0, abs(running))
                screened = [s for s in screened if s[0] <= limit]
            limit = running + _SCREEN * max(1.0, abs(running))
            for idx in np.flatnonzero(values <= limit):
                screened.append((float(values[idx]), structure, chunk[idx]))

    ties = TieSet(problem)
    for _, structure, perm in screened:
        layout = fill_structure(structure, perm.tolist())
        ties.offer(problem.cost(layout), layout)
    cost, layout = ties.winner()
    value = problem.natural(cost)
    return SolveReport(layout=layout, objective=value, best_bound=value, gap=0.0,
                       nodes_explored=0, evaluations=evaluations,
                       wall_time=time.perf_counter() - start, method=Method.BRUTE,
                       objective_kind=problem.kind, extra={"ties": len(ties.items)})
