"""Structural comparison of two MILP models by variable and row names."""

import math


def structural_diff(a, b, tol=1e-9):
    """Human-readable differences; empty when the models match."""
    out = []
    if a.sense != b.sense:
        out.append(f"sense {a.sense} != {b.sense}")
    va = {v.name: v for v in a.variables}
    vb = {v.name: v for v in b.variables}
    if set(va) != set(vb):
        out.append(f"variable sets differ: {sorted(set(va) ^ set(vb))[:5]}")
        return out
    for name, v in va.items():
        w = vb[name]
        if v.domain != w.domain or v.lb != w.lb or not (v.ub == w.ub or
                                                       (math.isinf(v.ub) and math.isinf(w.ub))):
            out.append(f"variable {name}: {v} != {w}")
    if len(a.constraints) != len(b.constraints):
        out.append(f"constraint count {len(a.constraints)} != {len(b.constraints)}")
        return out

    def named(model, coeffs):
        return {model.variables[k].name: c for k, c in coeffs.items()}

    def close(x, y):
        return abs(x - y) <= tol * max(1.0, abs(x), abs(y))

    rows_b = {c.name: c for c in b.constraints}
    for ca in a.constraints:
        cb = rows_b.get(ca.name)
        if cb is None:
            out.append(f"row {ca.name} missing")
            continue
        ka, kb = named(a, ca.coeffs), named(b, cb.coeffs)
        if ca.sense != cb.sense or not close(ca.rhs, cb.rhs) or set(ka) != set(kb) \
                or not all(close(ka[k], kb[k]) for k in ka):
            out.append(f"row {ca.name} differs")
    oa, ob = named(a, a.objective), named(b, b.objective)
    if set(oa) != set(ob) or not all(close(oa[k], ob[k]) for k in oa):
        out.append("objective differs")
    return out
