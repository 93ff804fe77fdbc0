import itertools
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from menuforge.evaluator import (Objective, StructureEvaluator, eval_adapted, eval_ift,
                                 eval_twofold, fitts_time, performance)
from menuforge.instance import FittsParams, Lambdas, compute_expectations
from menuforge.layout import (MenuLayout, enumerate_layouts, enumerate_structures, fill_structure,
                              layout_distance)

from helpers import make_instance, tiny

UNIT = FittsParams(a=0.0, b=1.0)


@pytest.mark.parametrize("row, tab, p, expected", [
    (1, 1, UNIT, 2.0),
    (3, 1, UNIT, 3.0),
    (3, 2, FittsParams(0.1, 0.15), 0.1 + 0.15 * 2 + 0.1 + 0.15 * math.log2(3)),
])
def test_fitts_examples(row, tab, p, expected):
    assert fitts_time(row, tab, p) == pytest.approx(expected, abs=1e-12)


def test_fitts_value_close_to_hand_rounding():
    assert fitts_time(3, 2, FittsParams(0.1, 0.15)) == pytest.approx(0.7377, abs=5e-5)


def test_fitts_rejects_zero_index():
    with pytest.raises(ValueError):
        fitts_time(0, 1, UNIT)


@settings(max_examples=50)
@given(st.integers(1, 50), st.integers(1, 20), st.floats(0, 2), st.floats(0.01, 2))
def test_fitts_strictly_increasing(row, tab, a, b):
    p = FittsParams(a, b)
    assert fitts_time(row + 1, tab, p) > fitts_time(row, tab, p)
    assert fitts_time(row, tab + 1, p) > fitts_time(row, tab, p)


def pair(score=50.0, **lam):
    return tiny(["a", "b"], [[0, score], [score, 0]], fitts=UNIT, lambdas=Lambdas(**lam))


def test_twofold_same_group_counts_both_directions():
    inst = pair(lambda_c=1, lambda_m=1, lambda_f=0)
    assert eval_twofold(MenuLayout([[[0, 1]]]), inst) == pytest.approx(200.0)


def test_twofold_split_tabs_earns_nothing():
    inst = pair(lambda_c=1, lambda_m=1, lambda_f=0)
    assert eval_twofold(MenuLayout([[[0]], [[1]]]), inst) == 0.0


def test_twofold_time_only_prefers_one_column():
    inst = pair(score=0.0, lambda_c=0, lambda_m=0, lambda_f=1)
    scored = {L.tabs: eval_twofold(L, inst) for L in enumerate_layouts(2)}
    best = max(scored.values())
    winners = [t for t, v in scored.items() if v == best]
    # row and tab share one Fitts curve: with uniform F every layout ties
    assert (((0, 1),),) in winners
    skewed = inst.with_frequencies([3.0, 1.0])
    skewed_scores = {L.tabs: eval_twofold(L, skewed) for L in enumerate_layouts(2)}
    top = max(skewed_scores.values())
    assert skewed_scores[(((0, 1),),)] == top > skewed_scores[(((1, 0),),)]
    assert top == pytest.approx(-(3 * 2 + 1 * (math.log2(3) + 1)))


def test_ift_single_command_is_access_time():
    inst = tiny(["a"], [[0]], [0.7], fitts=FittsParams(0.2, 0.15),
                lambdas=Lambdas(lambda_0=1, lambda_1=0, lambda_2=0, lambda_3=0, lambda_4=0))
    value, _ = eval_ift(MenuLayout([[[0]]]), inst)
    assert value == pytest.approx(0.7 * fitts_time(1, 1, inst.fitts))


def test_ift_zero_scent_no_false_positive_and_full_scent_no_false_negative():
    A = np.zeros((3, 3))
    A[0, 1] = A[1, 0] = 90
    inst = tiny(["a", "b", "c"], A)
    E = compute_expectations(inst)
    _, parts = eval_ift(MenuLayout([[[0, 1], [2]]]), inst, E)
    assert E[2, 0] == 0 and parts.sigma[2, 0] == 0
    assert E[1, 0] == 1 and parts.delta[1, 0] == 0
    assert parts.sigma[0, 0] == 0  # own group never counts as a false positive


def test_ift_breakdown_hand_example():
    A = np.zeros((3, 3))
    A[0, 1] = A[1, 0] = 40
    A[0, 2] = A[2, 0] = 40
    inst = tiny(["a", "b", "c"], A, [1, 1, 2], fitts=UNIT,
                lambdas=Lambdas(lambda_0=1, lambda_1=1, lambda_2=1, lambda_3=1, lambda_4=0))
    layout = MenuLayout([[[0, 1], [2]]])
    value, parts = eval_ift(layout, inst)
    # scent 0.5 between 0 and its partners, 0 between 1 and 2
    assert parts.alpha[1, 0] == pytest.approx(0.5 * 2)
    assert parts.delta[1, 0] == pytest.approx(0.5 * 2)
    assert parts.sigma[2, 0] == pytest.approx(0.5 * 2)
    assert parts.sigma[0, 1] == pytest.approx(0.5 * 1)
    F = inst.frequencies
    t = [fitts_time(1, 1, UNIT), fitts_time(2, 1, UNIT), fitts_time(3, 1, UNIT)]
    per = [t[0] + 1 + 0 + 0.5,          # access, alpha depth 1, no delta, sigma vs group 2
           t[1] + 1.0 + 1.0 + 0.0,      # alpha, delta, lead 2 has no scent for 1
           t[2] + 1 + 0 + 1.0]          # own lead, sigma vs group led by 0
    assert value == pytest.approx(float(F @ per))
    assert parts.totals()["total"] == value


def test_ift_location_penalty():
    inst = tiny(["a", "b"], np.zeros((2, 2)), lambdas=Lambdas(lambda_4=3.0))
    inst = replace(inst, commands=(replace(inst.commands[0], preferred_tab=1), inst.commands[1]))
    on_pref = eval_ift(MenuLayout([[[1]], [[0]]]), inst)[1]
    off_pref = eval_ift(MenuLayout([[[0]], [[1]]]), inst)[1]
    assert on_pref.omega[0] == 0 and off_pref.omega[0] == 3.0


def test_ift_excludes_loner_from_group_size_and_weights():
    inst = make_instance(3, 4, loner=True)
    k = inst.loner_id
    layout = MenuLayout([[[0, 1], [k, 2]]])
    _, default = eval_ift(layout, inst)
    _, counted = eval_ift(layout, inst, count_loner=True)
    assert default.weights[k] == 0
    E = compute_expectations(inst)
    assert default.sigma[0, 1] == pytest.approx(E[0, k] * 1)
    assert counted.sigma[0, 1] == pytest.approx(E[0, k] * 2)


def test_ift_dimension_mismatch():
    inst = make_instance(3, 0)
    with pytest.raises(ValueError):
        eval_ift(MenuLayout([[[0, 1, 2]]]), inst, np.eye(4))


def test_invalid_layout_rejected():
    inst = make_instance(3, 0)
    with pytest.raises(ValueError):
        eval_twofold(MenuLayout([[[0, 1]]]), inst)
    with pytest.raises(ValueError):
        eval_ift(MenuLayout([[[0, 1, 1]]]), inst)


def test_adapted_examples():
    inst = make_instance(4, 1)
    base = MenuLayout([[[0, 1], [2]], [[3]]])
    assert eval_adapted(base, base, inst, 1.0, Objective.IFT) == 0.0
    other = MenuLayout([[[3]], [[2, 1, 0]]])
    assert eval_adapted(other, base, inst, 0.0, Objective.IFT) == eval_ift(other, inst)[0]
    dist = layout_distance(other, base)
    assert (dist.total_tab, dist.total_row) == (4, 4)
    d = dist.total
    perf = eval_ift(other, inst)[0]
    assert eval_adapted(other, base, inst, 0.5, Objective.IFT) == pytest.approx(0.5 * d + 0.5 * perf)
    assert eval_adapted(other, base, inst, 0.5, Objective.TWOFOLD) == pytest.approx(
        0.5 * d - 0.5 * eval_twofold(other, inst))
    with pytest.raises(ValueError):
        eval_adapted(other, base, inst, 1.5, Objective.IFT)


def test_adapted_blend_arithmetic():
    # distance 4 and performance 2.0 give 3.0 at w = 0.5
    inst = tiny(["a", "b", "c"], np.zeros((3, 3)), [1, 1, 1], fitts=FittsParams(0.0, 1.0),
                lambdas=Lambdas(lambda_0=0, lambda_1=2 / 3, lambda_2=0, lambda_3=0, lambda_4=0))
    base = MenuLayout([[[0], [1], [2]]])
    layout = MenuLayout([[[2], [1], [0]]])
    assert layout_distance(layout, base).total == 4
    # singletons: each command leads its own group, scan depth 1
    assert performance(layout, inst, Objective.IFT) == pytest.approx(2.0)
    assert eval_adapted(layout, base, inst, 0.5, Objective.IFT) == pytest.approx(3.0)


@pytest.mark.parametrize("k", [0.5, 3.0, 17.0])
def test_ift_scales_with_frequencies(k):
    inst = make_instance(5, 2, prefs=True)
    scaled = inst.with_frequencies(inst.frequencies * k)
    for L in list(enumerate_layouts(5))[::397]:
        assert eval_ift(L, scaled)[0] == pytest.approx(k * eval_ift(L, inst)[0], rel=1e-12)


def test_twofold_relabel_invariance():
    inst = make_instance(5, 7, dense=True, prefs=True)
    rng = np.random.default_rng(0)
    perm = rng.permutation(5)  # new id of old command i is perm[i]
    inv = np.argsort(perm)
    A = inst.associations[np.ix_(inv, inv)]
    cmds = [replace(inst.commands[inv[j]], id=j, name=f"r{j}") for j in range(5)]
    relabelled = replace(inst, commands=tuple(cmds), associations=A)
    for L in list(enumerate_layouts(5))[::4111]:
        assert eval_twofold(L.relabel(perm), relabelled) == pytest.approx(eval_twofold(L, inst))
        assert eval_ift(L.relabel(perm), relabelled)[0] == pytest.approx(eval_ift(L, inst)[0])


def test_ift_at_least_access_term():
    inst = make_instance(4, 9, prefs=True, loner=True)
    lam = inst.lambdas
    for L in list(enumerate_layouts(5, lead=inst.loner_id))[::53]:
        value, parts = eval_ift(L, inst)
        assert value >= lam.lambda_0 * float(parts.weights @ parts.access) - 1e-12
        assert (parts.phi >= 0).all()


@pytest.mark.parametrize("objective", list(Objective))
def test_structure_evaluator_matches_direct(objective):
    inst = make_instance(4, 11, loner=True, prefs=True, dense=True)
    base = MenuLayout([[[4, 0, 1]], [[2], [3]]])
    for structure in enumerate_structures(5)[::7]:
        perms = np.array(list(itertools.permutations(range(5)))[::13])
        ev = StructureEvaluator(structure, inst, objective, baseline=base, w=0.3)
        got = ev(perms)
        for p, value in zip(perms, got):
            L = fill_structure(structure, p)
            if any(g.lead == inst.loner_id for g in L.groups):
                assert value == pytest.approx(eval_adapted(L, base, inst, 0.3, objective),
                                              rel=1e-9, abs=1e-9)
