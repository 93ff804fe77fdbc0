"""CPLEX LP text format: writer and a reader for the subset the writer emits.

The reader also accepts the common variations found in hand-written files
(``st``/``such that``, ``=<``/``=>``, ``free`` bounds, comments).
"""

from __future__ import annotations

import json
import math
import re
from typing import Any

from .milp import BINARY, CONTINUOUS, INTEGER, MilpModel, Variable, split_name

LINE_WIDTH = 240


def _num(v: float) -> str:
    return f"{v:.12g}"


def _expr(coeffs: dict[int, float], model: MilpModel) -> list[str]:
    tokens = []
    for k, v in coeffs.items():
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        name = model.variables[k].name
        tokens.append(f"{sign} {name}" if mag == 1 else f"{sign} {_num(mag)} {name}")
    if tokens and tokens[0].startswith("+ "):
        tokens[0] = tokens[0][2:]
    return tokens


def _wrap(head: str, tokens: list[str]) -> list[str]:
    lines, cur = [], head
    for tok in tokens:
        if len(cur) + 1 + len(tok) > LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {tok}"
    lines.append(cur)
    return lines


def export_lp(model: MilpModel) -> str:
    """Deterministic LP text; identical models give byte-identical files."""
    out = ["Maximize" if model.sense == "max" else "Minimize",
           f"\\ menuforge model, instance {model.metadata.get('instance_digest', '?')}",
           f"\\ objective {model.metadata.get('objective', '?')}"]
    obj_tokens = _expr(model.objective, model) or ["0 " + model.variables[0].name]
    out.extend(_wrap(" obj:", obj_tokens))
    out.append("Subject To")
    for con in model.constraints:
        tokens = _expr(con.coeffs, model) + [con.sense, _num(con.rhs)]
        out.extend(_wrap(f" {con.name}:", tokens))
    out.append("Bounds")
    for v in model.variables:
        if v.domain == BINARY:
            continue
        if math.isinf(v.ub):
            if v.lb != 0.0:
                out.append(f" {v.name} >= {_num(v.lb)}")
        else:
            out.append(f" {_num(v.lb)} <= {v.name} <= {_num(v.ub)}")
    for title, domain in (("Binaries", BINARY), ("Generals", INTEGER)):
        names = [v.name for v in model.variables if v.domain == domain]
        if names:
            out.append(title)
            out.extend(_wrap("", names))
    out.append("End")
    return "\n".join(out) + "\n"


def metadata_json(model: MilpModel) -> str:
    """Sidecar mapping variable names to column indices, plus model metadata."""
    doc: dict[str, Any] = {
        "metadata": model.metadata,
        "sense": model.sense,
        "variables": [{"index": k, "name": v.name, "kind": v.kind, "indices": list(v.index),
                       "domain": v.domain} for k, v in enumerate(model.variables)],
        "constraints": [{"index": k, "name": c.name, "family": c.family}
                        for k, c in enumerate(model.constraints)],
    }
    return json.dumps(doc, indent=1, sort_keys=True)


# --------------------------------------------------------------------------
# reading

class LpParseError(ValueError):
    pass


_SECTIONS = {
    "minimize": "min", "minimise": "min", "minimum": "min", "min": "min",
    "maximize": "max", "maximise": "max", "maximum": "max", "max": "max",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "bounds": "bounds", "bound": "bounds",
    "binaries": "bin", "binary": "bin", "bin": "bin",
    "generals": "gen", "general": "gen", "gen": "gen",
    "end": "end",
}

_TOKEN = re.compile(r"\s*(<=|>=|=<|=>|<|>|=|[+-]|[0-9.]+(?:[eE][+-]?[0-9]+)?|[A-Za-z_][\w.\[\]]*|:)")


def _tokens(text: str, where: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise LpParseError(f"{where}: cannot parse near {text[pos:pos + 20]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


_META = re.compile(r"^\\ (?:menuforge model, )?(instance|objective) (\S+)\s*$")

_REL = {"<=": "<=", "=<": "<=", "<": "<=", ">=": ">=", "=>": ">=", ">": ">=", "=": "="}


def _is_num(tok: str) -> bool:
    return bool(re.fullmatch(r"[0-9.]+(?:[eE][+-]?[0-9]+)?", tok))


def _linear(tokens: list[str], where: str) -> list[tuple[str, float]]:
    terms, sign, coef = [], 1.0, None
    for tok in tokens:
        if tok in "+-":
            sign = sign * (-1.0 if tok == "-" else 1.0) if coef is None else sign
            continue
        if _is_num(tok):
            coef = float(tok)
            continue
        terms.append((tok, sign * (1.0 if coef is None else coef)))
        sign, coef = 1.0, None
    if coef is not None:
        raise LpParseError(f"{where}: constant term in expression")
    return terms


def _statements(lines: list[str]) -> list[str]:
    """Join continuation lines; a new statement starts at a ``name:`` label."""
    stmts, cur = [], ""
    for line in lines:
        if re.match(r"^\s*[A-Za-z_][\w.\[\]]*\s*:", line) and cur:
            stmts.append(cur)
            cur = ""
        cur = f"{cur} {line.strip()}"
    if cur.strip():
        stmts.append(cur)
    return stmts


def read_lp(text: str) -> MilpModel:
    """Parse LP text into a model (variables get their kind from their name)."""
    sections: dict[str, list[str]] = {"obj": [], "st": [], "bounds": [], "bin": [], "gen": []}
    sense, current = None, None
    meta: dict[str, Any] = {}
    for raw in text.splitlines():
        note_m = _META.match(raw)
        if note_m:
            meta[note_m.group(1)] = note_m.group(2)
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        key = line.strip().lower()
        if key in _SECTIONS:
            sec = _SECTIONS[key]
            if sec in ("min", "max"):
                sense, current = sec, "obj"
            elif sec == "end":
                current = None
            else:
                current = sec
            continue
        if current is None:
            raise LpParseError(f"content outside any section: {line.strip()!r}")
        sections[current].append(line)
    if sense is None:
        raise LpParseError("missing Minimize/Maximize header")

    order: list[str] = []
    seen: set[str] = set()

    def note(name: str):
        if name not in seen:
            seen.add(name)
            order.append(name)

    obj_terms: list[tuple[str, float]] = []
    for stmt in _statements(sections["obj"]):
        toks = _tokens(stmt, "objective")
        if len(toks) > 1 and toks[1] == ":":
            toks = toks[2:]
        obj_terms.extend(_linear(toks, "objective"))

    rows = []
    for stmt in _statements(sections["st"]):
        toks = _tokens(stmt, "constraint")
        name = f"R{len(rows)}"
        if len(toks) > 1 and toks[1] == ":":
            name, toks = toks[0], toks[2:]
        rel = [k for k, t in enumerate(toks) if t in _REL]
        if len(rel) != 1:
            raise LpParseError(f"{name}: expected exactly one relation")
        k = rel[0]
        rhs_toks = toks[k + 1:]
        rhs_sign = -1.0 if rhs_toks and rhs_toks[0] == "-" else 1.0
        rhs_toks = [t for t in rhs_toks if t not in "+-"]
        if len(rhs_toks) != 1 or not _is_num(rhs_toks[0]):
            raise LpParseError(f"{name}: right-hand side must be a number")
        terms = _linear(toks[:k], name)
        for var, _ in terms:
            note(var)
        rows.append((name, terms, _REL[toks[k]], rhs_sign * float(rhs_toks[0])))
    for var, _ in obj_terms:
        note(var)

    bounds: dict[str, list[float]] = {}
    for line in sections["bounds"]:
        toks = _tokens(line, "bounds")
        if len(toks) == 2 and toks[1].lower() == "free":
            note(toks[0])
            bounds[toks[0]] = [-math.inf, math.inf]
            continue
        vals = [(-1.0 if i and toks[i - 1] == "-" else 1.0) * float(t) if _is_num(t) else t
                for i, t in enumerate(toks) if t not in "+-"]
        rels = [t for t in toks if t in _REL]
        names = [t for t in vals if isinstance(t, str) and t not in _REL]
        nums = [t for t in vals if isinstance(t, float)]
        if len(names) != 1:
            raise LpParseError(f"bad bound line {line.strip()!r}")
        name = names[0]
        note(name)
        lb, ub = bounds.get(name, [0.0, math.inf])
        if len(rels) == 2 and len(nums) == 2:
            lb, ub = nums
        elif len(rels) == 1 and len(nums) == 1:
            first_is_var = toks[0] == name
            rel = _REL[rels[0]]
            if rel == "=":
                lb = ub = nums[0]
            elif (rel == "<=") == first_is_var:
                ub = nums[0]
            else:
                lb = nums[0]
        else:
            raise LpParseError(f"bad bound line {line.strip()!r}")
        bounds[name] = [lb, ub]

    domains: dict[str, str] = {}
    for sec, dom in (("bin", BINARY), ("gen", INTEGER)):
        for line in sections[sec]:
            for name in line.split():
                note(name)
                domains[name] = dom

    variables = []
    for name in order:
        dom = domains.get(name, CONTINUOUS)
        if dom == BINARY:
            lb, ub = 0.0, 1.0
        else:
            lb, ub = bounds.get(name, [0.0, math.inf])
        try:
            kind, index = split_name(name)
        except ValueError:
            kind, index = name, ()
        variables.append(Variable(name, kind, index, dom, lb, ub))
    model = MilpModel(variables=variables, sense=sense)
    if "instance" in meta:
        model.metadata["instance_digest"] = meta["instance"]
    if "objective" in meta:
        model.metadata["objective"] = meta["objective"]
    for name, terms, rel, rhs in rows:
        family = re.sub(r"\d+$", "", name.split("_", 1)[0])
        model.add_row(family, name, [(model.index[v], c) for v, c in terms], rel, rhs)
    for var, coef in obj_terms:
        k = model.index[var]
        model.objective[k] = model.objective.get(k, 0.0) + coef
    model.objective = {k: v for k, v in model.objective.items() if v != 0.0}
    return model
