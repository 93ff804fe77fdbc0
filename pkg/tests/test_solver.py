from dataclasses import replace

import numpy as np
import pytest

from menuforge.evaluator import Objective, eval_twofold
from menuforge.instance import FittsParams, Lambdas, StructuralLimits
from menuforge.layout import MenuLayout, enumerate_layouts, validate_layout
from menuforge.solver import (AnnealConfig, Method, random_layout, solve_anneal, solve_bnb,
                              solve_brute)
from menuforge.solver.bnb import CONTINUE, NEW_GROUP, NEW_TAB, _Bounder, _Prefix
from menuforge.solver.common import FastScorer, Problem
from menuforge.generate import random_instance

from helpers import SMALL_TWOFOLD, make_instance, tiny


def test_brute_single_command():
    inst = tiny(["a"], np.zeros((1, 1)))
    for objective in Objective:
        report = solve_brute(inst, objective)
        assert report.layout == MenuLayout([[[0]]])
        assert report.gap == 0 and report.method is Method.BRUTE


def test_brute_groups_the_associated_pair():
    A = np.zeros((3, 3))
    A[0, 1] = A[1, 0] = 100
    report = solve_brute(tiny(["a", "b", "c"], A), "ift")
    assert report.layout.group_of(0) == report.layout.group_of(1)


def test_brute_time_only_two_commands():
    inst = tiny(["lo", "hi"], np.zeros((2, 2)), [1.0, 3.0], fitts=FittsParams(0.0, 1.0),
                lambdas=Lambdas(lambda_f=1.0, lambda_c=0.0, lambda_m=0.0))
    report = solve_brute(inst, "twofold")
    column = MenuLayout([[[1, 0]]])
    # row and tab share one Fitts curve, so the column ties with the other
    # structures that put "hi" first; the nested-list tie-break decides
    assert report.objective == pytest.approx(eval_twofold(column, inst))
    assert report.layout.slots[1].row == 1 and report.layout.tab_of(1) == 1
    assert report.layout == min(L for L in enumerate_layouts(2)
                                if eval_twofold(L, inst) == pytest.approx(report.objective))


def test_brute_time_only_uniform_frequencies_all_tie():
    inst = tiny(["a", "b"], np.zeros((2, 2)),
                lambdas=Lambdas(lambda_f=1.0, lambda_c=0.0, lambda_m=0.0))
    report = solve_brute(inst, "twofold")
    assert report.extra["ties"] == 6
    assert report.layout == min(enumerate_layouts(2)) == MenuLayout([[[0]], [[1]]])


def test_brute_guard():
    with pytest.raises(ValueError):
        solve_brute(make_instance(9, 0), "ift")


def test_brute_respects_limits():
    inst = make_instance(5, 1, limits=StructuralLimits(2, 3, 3))
    report = solve_brute(inst, "ift")
    assert validate_layout(report.layout, 5, limits=StructuralLimits(2, 3, 3)) == []


CASES = [(4, False, False, False), (5, True, False, True), (5, False, True, False),
         (6, True, True, True), (4, True, True, False), (6, False, False, True)]


@pytest.mark.parametrize("objective", list(Objective))
@pytest.mark.parametrize("n, loner, prefs, dense", CASES)
def test_bnb_matches_brute(objective, n, loner, prefs, dense):
    lam = SMALL_TWOFOLD if objective is Objective.TWOFOLD and n % 2 else None
    inst = make_instance(n - loner, 50 + n, loner=loner, prefs=prefs, dense=dense, lambdas=lam)
    brute = solve_brute(inst, objective)
    bnb = solve_bnb(inst, objective)
    assert bnb.objective == pytest.approx(brute.objective, rel=1e-9, abs=1e-12)
    assert bnb.layout == brute.layout
    assert bnb.gap == 0 and bnb.proven_optimal and bnb.status == "optimal"
    assert bnb.best_bound == bnb.objective


def test_bnb_warm_start_with_optimum_needs_no_improvement():
    inst = make_instance(5, 3, prefs=True)
    best = solve_brute(inst, "ift")
    report = solve_bnb(inst, "ift", incumbent=best.layout)
    assert report.improvements == 0
    assert report.layout == best.layout
    cold = solve_bnb(inst, "ift")
    assert cold.improvements >= 1
    assert report.nodes_explored <= cold.nodes_explored


def test_bnb_time_limit_returns_feasible_layout_with_gap():
    inst = random_instance(20, 4)
    report = solve_bnb(inst, "ift", time_limit=0.001)
    assert validate_layout(report.layout, 20) == []
    assert report.status == "time_limit"
    assert report.gap > 0
    assert report.best_bound <= report.objective


def test_bnb_rejects_bad_incumbent():
    inst = make_instance(3, 0)
    with pytest.raises(ValueError):
        solve_bnb(inst, "ift", incumbent=MenuLayout([[[0, 1]]]))


def _sequence(layout):
    seq = []
    for tab in layout.tabs:
        for g, group in enumerate(tab):
            for k, c in enumerate(group):
                code = NEW_TAB if g == 0 and k == 0 else NEW_GROUP if k == 0 else CONTINUE
                seq.append((c, code))
    return tuple(seq)


@pytest.mark.parametrize("objective, loner, adapt", [
    ("ift", False, False), ("ift", True, False), ("twofold", False, False),
    ("twofold", True, False), ("ift", False, True), ("twofold", False, True)])
def test_bound_is_admissible_on_every_prefix(objective, loner, adapt):
    lam = SMALL_TWOFOLD if objective == "twofold" else None
    inst = make_instance(5 - loner, 77, loner=loner, prefs=True, dense=True, lambdas=lam)
    base = MenuLayout([[[0, 1], [2]], [[3, 4]]]) if adapt else None
    problem = Problem(inst, objective, base, 0.3 if adapt else None)
    bounder = _Bounder(problem)
    best: dict = {}
    for L in enumerate_layouts(inst.n, problem.limits, lead=inst.loner_id):
        cost = problem.cost(L)
        seq = _sequence(L)
        for k in range(len(seq) + 1):
            key = seq[:k]
            if cost < best.get(key, np.inf):
                best[key] = cost
    for key, cost in best.items():
        bound = bounder(_Prefix(key, inst.n, inst.loner_id))
        assert bound <= cost + 1e-9 * max(1.0, abs(cost)), key


@pytest.mark.parametrize("objective", list(Objective))
def test_anneal_near_optimum_and_valid(objective):
    lam = SMALL_TWOFOLD if objective is Objective.TWOFOLD else None
    inst = make_instance(6, 12, prefs=True, lambdas=lam)
    opt = solve_bnb(inst, objective)
    hits = 0
    for seed in range(10):
        report = solve_anneal(inst, objective, AnnealConfig(seed=seed))
        assert validate_layout(report.layout, inst.n) == []
        assert report.gap is None and report.best_bound is None
        assert report.method is Method.ANNEAL and report.seed == seed
        if objective is Objective.IFT:
            assert report.objective >= opt.objective - 1e-9
            hits += report.objective <= opt.objective * 1.05
        else:
            assert report.objective <= opt.objective + 1e-9
            hits += abs(report.objective - opt.objective) <= 0.05 * abs(opt.objective)
    assert hits >= 9


def test_anneal_deterministic():
    inst = make_instance(6, 2, loner=True)
    a = solve_anneal(inst, "ift", AnnealConfig(seed=5))
    b = solve_anneal(inst, "ift", AnnealConfig(seed=5))
    assert a.layout == b.layout and a.objective == b.objective
    assert a.evaluations == b.evaluations and a.extra == b.extra


def test_anneal_frozen_start_at_optimum_returns_it():
    inst = make_instance(5, 6, prefs=True)
    best = solve_brute(inst, "ift").layout
    cfg = AnnealConfig(initial_temperature=1e-12, seed=3)
    assert solve_anneal(inst, "ift", cfg, start=best).layout == best


def test_anneal_keeps_loner_leading_and_limits():
    lim = StructuralLimits(2, 4, 5)
    inst = make_instance(7, 8, loner=True, limits=lim)
    report = solve_anneal(inst, "ift", AnnealConfig(seed=0, iterations_per_temperature=50))
    assert validate_layout(report.layout, inst.n, inst.loner_id, lim) == []


def test_anneal_config_validation():
    with pytest.raises(ValueError):
        AnnealConfig(cooling_rate=1.0)
    with pytest.raises(ValueError):
        AnnealConfig(initial_temperature=0.0)
    with pytest.raises(ValueError):
        AnnealConfig(iterations_per_temperature=0)
    with pytest.raises(ValueError):
        AnnealConfig(min_temperature=-1)


def test_anneal_time_limit():
    inst = random_instance(40, 1)
    report = solve_anneal(inst, "ift", AnnealConfig(seed=0, time_limit=0.5))
    assert validate_layout(report.layout, 40) == []
    assert report.wall_time < 5


def test_fast_scorer_matches_problem_cost():
    rng = np.random.default_rng(0)
    for n, loner in [(5, True), (30, False), (25, True)]:
        inst = make_instance(n, n, loner=loner, prefs=True, dense=True)
        base = random_layout(inst, rng)
        for objective in Objective:
            for problem in (Problem(inst, objective), Problem(inst, objective, base, 0.4)):
                score = FastScorer(problem)
                for _ in range(10):
                    L = random_layout(inst, rng)
                    assert score(L.to_nested()) == pytest.approx(problem.cost(L), rel=1e-9)


def test_random_layout_is_valid():
    rng = np.random.default_rng(1)
    lim = StructuralLimits(3, 5, 6)
    inst = make_instance(12, 0, loner=True, limits=lim)
    for _ in range(50):
        L = random_layout(inst, rng)
        assert validate_layout(L, inst.n, inst.loner_id, lim.resolve(inst.n, inst.n_visible)) == []


def _relabelled(inst, perm):
    inv = np.argsort(perm)
    A = inst.associations[np.ix_(inv, inv)]
    cmds = tuple(replace(inst.commands[inv[j]], id=j) for j in range(inst.n))
    return replace(inst, commands=cmds, associations=A)


@pytest.mark.parametrize("objective", list(Objective))
def test_relabel_symmetry(objective):
    lam = SMALL_TWOFOLD if objective is Objective.TWOFOLD else None
    inst = make_instance(5, 21, prefs=True, dense=True, lambdas=lam)
    inst = inst.with_frequencies(np.random.default_rng(2).random(5) + 0.1)  # no frequency ties
    perm = np.array([3, 0, 4, 1, 2])
    a = solve_brute(inst, objective)
    b = solve_brute(_relabelled(inst, perm), objective)
    assert b.objective == pytest.approx(a.objective, rel=1e-9)
    if a.extra["ties"] == 1:
        assert b.layout == a.layout.relabel(perm)


@pytest.mark.parametrize("k", [0.5, 3.0])
def test_ift_argmin_unchanged_by_frequency_scale(k):
    inst = make_instance(5, 13, prefs=True)
    scaled = inst.with_frequencies(inst.frequencies * k)
    assert solve_bnb(scaled, "ift").layout == solve_bnb(inst, "ift").layout


def test_report_dict():
    inst = make_instance(3, 0)
    d = solve_bnb(inst, "ift").to_dict(inst.digest())
    assert d["instance_digest"] == inst.digest()
    assert d["method"] == "bnb" and d["gap"] == 0
    assert d["layout"] and isinstance(d["objective"], float)
    d = solve_anneal(inst, "ift", AnnealConfig(seed=1)).to_dict()
    assert d["gap"] is None
