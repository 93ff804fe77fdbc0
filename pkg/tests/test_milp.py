import numpy as np
import pytest

from menuforge.evaluator import Objective, eval_adapted, eval_ift, eval_twofold
from menuforge.instance import StructuralLimits
from menuforge.layout import MenuLayout, enumerate_layouts
from menuforge.milp import (InfeasibleAssignment, build_model, check_feasible, decode,
                            encode_layout, split_name, var_name)

from helpers import make_instance, tiny


def pinned(inst, objective, groups, **kw):
    """Model whose false-negative constant equals the used-group count."""
    return build_model(inst, objective, limits=StructuralLimits(None, groups, None), **kw)


def direct(layout, inst, objective, groups):
    if Objective(objective) is Objective.TWOFOLD:
        return eval_twofold(layout, inst)
    return eval_ift(layout, inst, false_negative_groups=groups, count_loner=True)[0]


def test_variable_counts_n2():
    inst = tiny(["a", "b"], np.zeros((2, 2)), limits=StructuralLimits(2, 2, 2))
    m = build_model(inst, "twofold")
    counts = {k: m.count(k) for k in ("X", "Y", "Q", "Z", "W", "R", "S", "SS", "xi", "beta",
                                      "Theta", "P", "t")}
    assert counts == {"X": 4, "Y": 4, "Q": 4, "Z": 4, "W": 4, "R": 4, "S": 2, "SS": 2,
                      "xi": 2, "beta": 2, "Theta": 2, "P": 2, "t": 2}
    assert m.sense == "max"
    assert m.count("U") == 0 and m.count("Phi") == 0


def test_every_row_references_registered_variables():
    m = build_model(make_instance(3, 1, loner=True, prefs=True), "ift")
    nv = len(m.variables)
    assert all(c.coeffs and all(0 <= k < nv for k in c.coeffs) for c in m.constraints)
    assert len({v.name for v in m.variables}) == nv
    assert len({c.name for c in m.constraints}) == len(m.constraints)


def test_single_command_forced():
    inst = tiny(["a"], np.zeros((1, 1)), limits=StructuralLimits(1, 1, 1))
    for objective in Objective:
        m = build_model(inst, objective)
        a = encode_layout(MenuLayout([[[0]]]), m)
        assert check_feasible(m, a) == []
        assert decode(a, m) == MenuLayout([[[0]]])
        # every other binary pattern over X/Y/R breaks a row
        for name in ("X_0_1", "Y_0_1", "R_0_1"):
            broken = dict(a, **{name: 0.0})
            assert check_feasible(m, broken)


def test_loner_lead_row_present():
    inst = make_instance(3, 2, loner=True)
    m = build_model(inst, "ift")
    row = next(c for c in m.constraints if c.name == "lead_loner")
    k = inst.loner_id
    names = {m.variables[i].name for i in row.coeffs}
    assert names == {var_name("U", k, c) for c in range(1, m.metadata["max_groups"] + 1)}
    assert row.sense == "=" and row.rhs == 1.0
    assert not any(c.name == "lead_loner" for c in build_model(make_instance(3, 2), "ift").constraints)


def test_encode_single_group():
    inst = tiny(["a", "b"], np.zeros((2, 2)))
    m = build_model(inst, "ift")
    a = encode_layout(MenuLayout([[[0, 1]]]), m)
    for name in ("X_0_1", "X_1_1", "Z_0_1", "W_0_1", "R_0_1", "R_1_2", "SS_1", "U_0_1"):
        assert a[name] == 1.0, name
    assert a["P_1"] == 1.0
    assert a["U_1_1"] == 0.0


def test_encode_two_tabs():
    m = build_model(tiny(["a", "b"], np.zeros((2, 2))), "twofold")
    a = encode_layout(MenuLayout([[[0]], [[1]]]), m)
    assert a["W_0_1"] == 0.0
    assert a["beta_1"] == a["beta_2"] == 1.0


def test_encode_lead_marks_only_its_group():
    inst = make_instance(6, 3)
    m = build_model(inst, "ift")
    a = encode_layout(MenuLayout([[[0, 1]], [[5, 2, 3], [4]]]), m)
    assert [c for c in range(1, 7) if a[var_name("U", 5, c)] == 1.0] == [2]
    assert sum(a[var_name("U", i, c)] for i in range(6) for c in range(1, 7)) == 3


def test_encode_rejects_oversized_layout():
    m = build_model(make_instance(3, 0), "twofold", limits=StructuralLimits(1, 3, 3))
    with pytest.raises(ValueError):
        encode_layout(MenuLayout([[[0]], [[1, 2]]]), m)


def test_limits_too_small():
    with pytest.raises(ValueError):
        build_model(make_instance(5, 0), "ift", limits=StructuralLimits(1, 2, 2))


def test_same_tab_and_row_reports_k():
    inst = make_instance(3, 5)
    m = build_model(inst, "twofold")
    a = encode_layout(MenuLayout([[[0, 1], [2]]]), m)
    a["R_1_2"], a["R_1_1"] = 0.0, 1.0  # command 1 moves onto command 0's row
    families = {v.family for v in check_feasible(m, a)}
    assert "k" in families


def test_row_hole_reports_h():
    inst = make_instance(3, 5)
    m = build_model(inst, "twofold", limits=StructuralLimits(None, None, 4))
    a = encode_layout(MenuLayout([[[0, 1, 2]]]), m)
    assert "R_2_4" in a
    a["R_2_3"], a["R_2_4"] = 0.0, 1.0  # row 3 left empty, row 4 used
    violations = check_feasible(m, a)
    assert "h" in {v.family for v in violations}
    assert any(v.name.startswith("h") for v in violations)


def test_decode_rejects_fractional():
    inst = make_instance(2, 0)
    m = build_model(inst, "twofold")
    a = encode_layout(MenuLayout([[[0, 1]]]), m)
    a["X_0_1"] = 0.5
    a["X_0_2"] = 0.5
    with pytest.raises(InfeasibleAssignment):
        decode(a, m)


def test_decode_rejects_infeasible():
    inst = make_instance(2, 0)
    m = build_model(inst, "twofold")
    a = encode_layout(MenuLayout([[[0, 1]]]), m)
    a["Y_1_1"], a["Y_1_2"] = 0.0, 1.0
    with pytest.raises(InfeasibleAssignment):
        decode(a, m)


@pytest.mark.parametrize("objective", list(Objective))
@pytest.mark.parametrize("n, loner, prefs", [(3, False, False), (3, False, True), (2, True, True),
                                              (4, False, True), (3, True, False)])
def test_encode_agrees_with_evaluator(objective, n, loner, prefs):
    inst = make_instance(n, 10 * n + loner, loner=loner, prefs=prefs)
    models = {}
    total = inst.n
    layouts = list(enumerate_layouts(total, lead=inst.loner_id))
    if total == 4:
        layouts = layouts[::5]
    for L in layouts:
        G = L.n_groups
        if G not in models:
            models[G] = pinned(inst, objective, G)
        m = models[G]
        if L.n_tabs > m.metadata["max_tabs"]:
            continue
        a = encode_layout(L, m)
        assert check_feasible(m, a) == []
        ref = direct(L, inst, objective, G)
        assert m.objective_value(a) == pytest.approx(ref, rel=1e-9, abs=1e-9)
        assert decode(a, m) == L


def test_adaptation_objective_agrees():
    inst = make_instance(3, 8, prefs=True)
    base = MenuLayout([[[2, 0]], [[1]]])
    for objective in Objective:
        m = build_model(inst, objective, adapt=(base, 0.4))
        assert m.sense == "min"
        assert m.count("Pi") == m.count("Xi") == 3
        G = m.metadata["max_groups"]
        for L in enumerate_layouts(3):
            if L.n_tabs > m.metadata["max_tabs"]:
                continue
            a = encode_layout(L, m)
            assert check_feasible(m, a) == []
            if objective is Objective.TWOFOLD:
                ref = eval_adapted(L, base, inst, 0.4, objective)
            else:
                dist = eval_adapted(L, base, inst, 1.0, objective)
                ref = 0.4 * dist + 0.6 * direct(L, inst, objective, G)
            assert m.objective_value(a) == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_adapt_weight_validated():
    inst = make_instance(3, 8)
    with pytest.raises(ValueError):
        build_model(inst, "ift", adapt=(MenuLayout([[[0, 1, 2]]]), 1.2))


def test_names_round_trip():
    assert split_name(var_name("Theta", 3, 4)) == ("Theta", (3, 4))
    assert split_name(var_name("SS", 2)) == ("SS", (2,))


def _highs_solve(m):
    scipy_opt = pytest.importorskip("scipy.optimize")
    sparse = pytest.importorskip("scipy.sparse")
    nv = len(m.variables)
    rows, cols, vals, rhs, senses = m._coo()
    A = sparse.coo_matrix((vals, (rows, cols)), shape=(len(m.constraints), nv)).tocsr()
    lo = np.where(senses == "<=", -np.inf, rhs)
    hi = np.where(senses == ">=", np.inf, rhs)
    c = np.zeros(nv)
    for k, v in m.objective.items():
        c[k] = v
    if m.sense == "max":
        c = -c
    res = scipy_opt.milp(c, constraints=scipy_opt.LinearConstraint(A, lo, hi),
                         integrality=np.array([v.domain != "continuous" for v in m.variables]),
                         bounds=scipy_opt.Bounds([v.lb for v in m.variables],
                                                 [v.ub for v in m.variables]))
    assert res.success
    a = {v.name: float(res.x[k]) for k, v in enumerate(m.variables)}
    for v in m.variables:
        if v.domain != "continuous":
            a[v.name] = float(round(a[v.name]))
    return a


@pytest.mark.parametrize("objective", list(Objective))
@pytest.mark.parametrize("n, loner", [(3, False), (2, True), (4, False)])
def test_external_milp_solver_reaches_enumeration_optimum(objective, n, loner):
    """An off-the-shelf MILP solver on the exported model finds the true optimum."""
    inst = make_instance(n, 31 + n, loner=loner, prefs=True, dense=True)
    m = build_model(inst, objective)
    a = _highs_solve(m)
    layout = decode(a, m)
    C = m.metadata["max_groups"]
    sign = 1 if Objective(objective) is Objective.IFT else -1
    best = min(sign * direct(L, inst, objective, C)
               for L in enumerate_layouts(inst.n, lead=inst.loner_id)
               if L.n_tabs <= m.metadata["max_tabs"])
    assert sign * m.objective_value(a) == pytest.approx(best, rel=1e-7, abs=1e-7)
    assert sign * direct(layout, inst, objective, C) == pytest.approx(best, rel=1e-7, abs=1e-7)
