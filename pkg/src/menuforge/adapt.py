"""Gradual adaptation toward a baseline layout, and frequency personalization."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

from .evaluator import Objective, performance
from .instance import InstanceError, TaskInstance, normalize_frequencies
from .layout import MenuLayout, fits_limits, layout_distance, layout_to_dict
from .solver import AnnealConfig, SolveReport, solve_anneal, solve_bnb, solve_brute

SOLVERS = ("bnb", "anneal", "brute")


@dataclass(frozen=True)
class TradeoffPoint:
    w: float
    distance: int  # summed tab and row shifts against the baseline
    performance: float  # base objective, minimization sense
    layout: MenuLayout


def adapt_layout(inst: TaskInstance, baseline: MenuLayout, w: float,
                 objective: Objective | str = Objective.IFT, solver: str = "bnb", *,
                 time_limit: float | None = None,
                 cfg: AnnealConfig | None = None) -> SolveReport:
    """Minimize ``w * distance + (1 - w) * performance`` around ``baseline``.

    Among equally good layouts the one closest to the baseline wins, so
    ``w=1`` returns the baseline itself.
    """
    seed = baseline if fits_limits(baseline, inst.resolved_limits) else None
    if solver == "bnb":
        return solve_bnb(inst, objective, time_limit, incumbent=seed, baseline=baseline, w=w)
    if solver == "anneal":
        return solve_anneal(inst, objective, cfg, start=seed, baseline=baseline, w=w)
    if solver == "brute":
        return solve_brute(inst, objective, baseline=baseline, w=w)
    raise ValueError(f"unknown solver {solver!r}; expected one of {SOLVERS}")


def _point(args) -> TradeoffPoint:
    inst, baseline, w, objective, solver, time_limit = args
    layout = adapt_layout(inst, baseline, w, objective, solver, time_limit=time_limit).layout
    return TradeoffPoint(w, layout_distance(layout, baseline).total,
                         performance(layout, inst, Objective(objective)), layout)


def sweep(inst: TaskInstance, baseline: MenuLayout, ws: Sequence[float],
          objective: Objective | str = Objective.IFT, solver: str = "bnb", *,
          time_limit: float | None = None, workers: int = 1) -> list[TradeoffPoint]:
    """One adapted layout per weight; ``ws`` must be strictly increasing in [0, 1]."""
    ws = [float(w) for w in ws]
    if not ws:
        raise ValueError("no adaptation weights given")
    if any(not 0.0 <= w <= 1.0 for w in ws):
        raise ValueError("adaptation weights must lie in [0, 1]")
    if any(b <= a for a, b in zip(ws, ws[1:])):
        raise ValueError("adaptation weights must be sorted in strictly increasing order")
    jobs = [(inst, baseline, w, Objective(objective).value, solver, time_limit) for w in ws]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_point, jobs))
    return [_point(job) for job in jobs]


def tradeoff_csv(points: Sequence[TradeoffPoint]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["w", "distance", "performance"])
    for p in points:
        out.writerow([repr(p.w), p.distance, repr(p.performance)])
    return buf.getvalue()


def tradeoff_json(points: Sequence[TradeoffPoint], digest: str | None = None) -> str:
    doc: dict = {"points": [{"w": p.w, "distance": p.distance, "performance": p.performance,
                             "layout": layout_to_dict(p.layout)["tabs"]} for p in points]}
    if digest is not None:
        doc["instance_digest"] = digest
    return json.dumps(doc, indent=1)


def personalize(inst: TaskInstance, profile: Mapping[int | str, float]) -> TaskInstance:
    """Override some command frequencies (by id or name) and renormalize.

    An empty profile returns ``inst`` unchanged.
    """
    if not profile:
        return inst
    by_name = {c.name: c.id for c in inst.commands}
    freqs = inst.frequencies
    for key, value in profile.items():
        cid = by_name.get(key) if isinstance(key, str) else key
        if cid is None or not isinstance(cid, int) or not 0 <= cid < inst.n:
            raise InstanceError(f"profile references unknown command {key!r}", "$.profile")
        if cid == inst.loner_id:
            raise InstanceError("the loner's frequency cannot be overridden", "$.profile")
        if value < 0:
            raise InstanceError(f"negative frequency {value} for command {key!r}", "$.profile")
        freqs[cid] = float(value)
    visible = [c for c in range(inst.n) if c != inst.loner_id]
    if not freqs[visible].sum() > 0:
        raise InstanceError("profile leaves every command with zero frequency", "$.profile")
    return normalize_frequencies(inst.with_frequencies(freqs))
