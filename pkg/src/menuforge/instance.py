"""Task instances: commands, associations, Fitts constants, limits and weights.

An instance is immutable once built.  Helpers that "modify" an instance
return a new one.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Sequence

import jsonschema
import numpy as np

LONER_NAME = "<loner>"


class InstanceError(ValueError):
    """Invalid instance document or contents.  ``path`` is a JSON path."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass(frozen=True)
class Command:
    id: int
    name: str
    frequency: float
    preferred_tab: int | None = None  # 0-based


@dataclass(frozen=True)
class FittsParams:
    a: float = 0.2
    b: float = 0.15

    def __post_init__(self):
        if self.a < 0 or self.b <= 0:
            raise InstanceError(f"need a >= 0 and b > 0, got a={self.a}, b={self.b}", "$.fitts")

    def row_time(self, index: int) -> float:
        return self.a + self.b * math.log2(index + 1)


@dataclass(frozen=True)
class StructuralLimits:
    """Capacity limits.  ``None`` means "derive from the command count"."""

    max_tabs: int | None = None
    max_groups: int | None = None
    max_rows: int | None = None
    canvas_width: float = 1280.0
    canvas_height: float = 800.0

    def resolve(self, n: int, n_visible: int | None = None) -> "StructuralLimits":
        """Concrete limits for ``n`` commands (``n_visible`` drives the tab default)."""
        nv = n if n_visible is None else n_visible
        groups = self.max_groups if self.max_groups is not None else n
        tabs = self.max_tabs if self.max_tabs is not None else default_max_tabs(nv)
        rows = self.max_rows if self.max_rows is not None else n
        # a tab always holds at least one group
        tabs = max(1, min(tabs, groups))
        return replace(self, max_tabs=tabs, max_groups=groups, max_rows=rows)


@dataclass(frozen=True)
class Lambdas:
    lambda_f: float = 1.0
    lambda_c: float = 0.0
    lambda_m: float = 0.0
    lambda_0: float = 1.0
    lambda_1: float = 1.0
    lambda_2: float = 1.0
    lambda_3: float = 1.0
    lambda_4: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise InstanceError(f"{f.name} must be non-negative", f"$.lambdas.{f.name}")


@dataclass(frozen=True, eq=False)
class TaskInstance:
    commands: tuple[Command, ...]
    associations: np.ndarray
    fitts: FittsParams = field(default_factory=FittsParams)
    limits: StructuralLimits = field(default_factory=StructuralLimits)
    lambdas: Lambdas = field(default_factory=Lambdas)
    loner_id: int | None = None

    def __post_init__(self):
        n = len(self.commands)
        A = np.array(self.associations, dtype=float)
        if A.shape != (n, n):
            raise InstanceError(f"association matrix must be {n}x{n}, got {A.shape}", "$.associations")
        if not np.allclose(A, A.T):
            raise InstanceError("association matrix must be symmetric", "$.associations")
        if A.size and (A.min() < 0 or A.max() > 100):
            raise InstanceError("association scores must lie in [0, 100]", "$.associations")
        np.fill_diagonal(A, 0.0)
        A.setflags(write=False)
        object.__setattr__(self, "associations", A)
        object.__setattr__(self, "commands", tuple(self.commands))
        for k, c in enumerate(self.commands):
            if c.id != k:
                raise InstanceError(f"command ids must be dense 0..n-1, found {c.id} at position {k}",
                                    f"$.commands[{k}].id")
            if c.frequency < 0 or not math.isfinite(c.frequency):
                raise InstanceError(f"command {c.name!r} has invalid frequency {c.frequency}",
                                    f"$.commands[{k}].frequency")

    @property
    def n(self) -> int:
        return len(self.commands)

    @property
    def n_visible(self) -> int:
        return self.n - (self.loner_id is not None)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.commands]

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([c.frequency for c in self.commands], dtype=float)

    @property
    def preferred_tabs(self) -> list[int | None]:
        return [c.preferred_tab for c in self.commands]

    @property
    def resolved_limits(self) -> StructuralLimits:
        return self.limits.resolve(self.n, self.n_visible)

    def objective_weights(self) -> np.ndarray:
        """Frequencies used in objectives; the synthetic loner carries none."""
        F = self.frequencies
        if self.loner_id is not None:
            F[self.loner_id] = 0.0
        return F

    def with_frequencies(self, freqs: Sequence[float]) -> "TaskInstance":
        cmds = tuple(replace(c, frequency=float(f)) for c, f in zip(self.commands, freqs))
        return replace(self, commands=cmds)

    def __eq__(self, other):
        if not isinstance(other, TaskInstance):
            return NotImplemented
        return (self.commands == other.commands
                and np.array_equal(self.associations, other.associations)
                and self.fitts == other.fitts and self.limits == other.limits
                and self.lambdas == other.lambdas and self.loner_id == other.loner_id)

    __hash__ = None  # type: ignore[assignment]

    def digest(self) -> str:
        return hashlib.sha256(serialize_instance(self).encode("utf-8")).hexdigest()


def default_max_tabs(n: int) -> int:
    """Tab budget growing logarithmically with the command count."""
    return math.ceil(math.log2(max(n, 1))) + 2


# --------------------------------------------------------------------------
# JSON (de)serialization

_LAMBDA_KEYS = [f.name for f in fields(Lambdas)]

INSTANCE_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["canvas", "fitts", "commands", "associations"],
    "properties": {
        "canvas": {
            "type": "object",
            "required": ["width", "height"],
            "properties": {"width": {"type": "number", "exclusiveMinimum": 0},
                           "height": {"type": "number", "exclusiveMinimum": 0}},
        },
        "fitts": {
            "type": "object",
            "required": ["a", "b"],
            "properties": {"a": {"type": "number", "minimum": 0},
                           "b": {"type": "number", "exclusiveMinimum": 0}},
        },
        "limits": {
            "type": "object",
            "properties": {k: {"type": "integer", "minimum": 1}
                           for k in ("max_tabs", "max_groups", "max_rows")},
            "additionalProperties": False,
        },
        "lambdas": {
            "type": "object",
            "properties": {k: {"type": "number", "minimum": 0} for k in _LAMBDA_KEYS},
            "additionalProperties": False,
        },
        "commands": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "name", "frequency"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "name": {"type": "string"},
                    "frequency": {"type": "number", "minimum": 0},
                    "preferred_tab": {"type": ["integer", "null"], "minimum": 0},
                },
            },
        },
        "associations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "j", "score"],
                "properties": {
                    "i": {"type": "integer", "minimum": 0},
                    "j": {"type": "integer", "minimum": 0},
                    "score": {"type": "number", "minimum": 0, "maximum": 100},
                },
            },
        },
        "loner_id": {"type": ["integer", "null"], "minimum": 0},
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(INSTANCE_SCHEMA)


def _schema_error(doc: Any) -> InstanceError | None:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if not errors:
        return None
    err = errors[0]
    msg = err.message
    path = list(err.absolute_path)
    if len(path) >= 2 and path[0] == "commands" and isinstance(path[1], int):
        cmd = doc["commands"][path[1]]
        if isinstance(cmd, dict) and "name" in cmd:
            msg = f"command {cmd['name']!r}: {msg}"
    return InstanceError(msg, err.json_path)


def parse_instance(text: str | bytes) -> TaskInstance:
    """Parse and validate an instance JSON document.

    Association pairs are mirrored; absent pairs score 0.  When the document
    omits ``lambdas`` (or some of them) the missing weights are calibrated.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"not valid JSON: {exc}") from exc
    err = _schema_error(doc)
    if err is not None:
        raise err

    raw_cmds = doc["commands"]
    n = len(raw_cmds)
    slots: list[Command | None] = [None] * n
    seen_names: dict[str, int] = {}
    for k, rc in enumerate(raw_cmds):
        cid = rc["id"]
        if cid >= n:
            raise InstanceError(f"id {cid} out of range for {n} commands", f"$.commands[{k}].id")
        if slots[cid] is not None:
            raise InstanceError(f"duplicate command id {cid}", f"$.commands[{k}].id")
        if rc["name"] in seen_names:
            raise InstanceError(f"duplicate command name {rc['name']!r}", f"$.commands[{k}].name")
        seen_names[rc["name"]] = k
        slots[cid] = Command(cid, rc["name"], float(rc["frequency"]), rc.get("preferred_tab"))
    commands = tuple(slots)  # type: ignore[arg-type]
    if not any(c.frequency > 0 for c in commands):
        raise InstanceError("every command frequency is zero", "$.commands")

    A = np.zeros((n, n))
    given = np.zeros((n, n), dtype=bool)
    for k, pair in enumerate(doc["associations"]):
        i, j, s = pair["i"], pair["j"], float(pair["score"])
        where = f"$.associations[{k}]"
        if i >= n or j >= n:
            raise InstanceError(f"pair ({i}, {j}) references an unknown command", where)
        if i == j:
            raise InstanceError(f"self-association for command {i}", where)
        if given[i, j] and A[i, j] != s:
            raise InstanceError(f"conflicting scores for pair ({i}, {j})", where)
        A[i, j] = A[j, i] = s
        given[i, j] = given[j, i] = True

    canvas = doc["canvas"]
    lim = doc.get("limits", {})
    limits = StructuralLimits(lim.get("max_tabs"), lim.get("max_groups"), lim.get("max_rows"),
                              float(canvas["width"]), float(canvas["height"]))
    fitts = FittsParams(float(doc["fitts"]["a"]), float(doc["fitts"]["b"]))
    loner_id = doc.get("loner_id")
    if loner_id is not None and loner_id >= n:
        raise InstanceError(f"loner id {loner_id} out of range", "$.loner_id")

    inst = TaskInstance(commands, A, fitts, limits, Lambdas(), loner_id)
    for cmd in commands:
        if cmd.preferred_tab is not None and cmd.preferred_tab >= inst.resolved_limits.max_tabs:
            raise InstanceError(f"command {cmd.name!r}: preferred tab {cmd.preferred_tab} exceeds "
                                f"the tab limit", f"$.commands[{seen_names[cmd.name]}].preferred_tab")

    given_lambdas = doc.get("lambdas", {})
    if len(given_lambdas) < len(_LAMBDA_KEYS):
        base = calibrate_lambdas(inst) if inst.n_visible >= 2 else Lambdas()
    else:
        base = Lambdas()
    lambdas = replace(base, **{k: float(v) for k, v in given_lambdas.items()})
    return replace(inst, lambdas=lambdas)


def instance_to_dict(inst: TaskInstance) -> dict[str, Any]:
    lim = inst.limits
    doc: dict[str, Any] = {
        "canvas": {"width": lim.canvas_width, "height": lim.canvas_height},
        "fitts": {"a": inst.fitts.a, "b": inst.fitts.b},
        "limits": {k: v for k, v in (("max_tabs", lim.max_tabs), ("max_groups", lim.max_groups),
                                     ("max_rows", lim.max_rows)) if v is not None},
        "lambdas": {k: getattr(inst.lambdas, k) for k in _LAMBDA_KEYS},
        "commands": [],
        "associations": [],
    }
    for c in inst.commands:
        rec: dict[str, Any] = {"id": c.id, "name": c.name, "frequency": c.frequency}
        if c.preferred_tab is not None:
            rec["preferred_tab"] = c.preferred_tab
        doc["commands"].append(rec)
    A = inst.associations
    for i, j in zip(*np.nonzero(np.triu(A, 1))):
        doc["associations"].append({"i": int(i), "j": int(j), "score": float(A[i, j])})
    if inst.loner_id is not None:
        doc["loner_id"] = inst.loner_id
    return doc


def serialize_instance(inst: TaskInstance, indent: int | None = None) -> str:
    return json.dumps(instance_to_dict(inst), indent=indent, sort_keys=True)


def load_instance(path) -> TaskInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# --------------------------------------------------------------------------
# enrichment

def normalize_frequencies(inst: TaskInstance) -> TaskInstance:
    F = inst.frequencies
    total = F.sum()
    if total <= 0:
        raise InstanceError("all command frequencies are zero", "$.commands")
    return inst.with_frequencies(F / total)


def positive_scores(A: np.ndarray) -> np.ndarray:
    """Strictly positive scores, one per unordered pair."""
    upper = A[np.triu_indices(A.shape[0], 1)]
    return upper[upper > 0]


def loner_associations(A: np.ndarray) -> np.ndarray:
    """Association of every command with the synthetic loner command."""
    n = A.shape[0]
    sums = A.sum(axis=1)
    factor = sums.max() - sums
    scores = factor / math.sqrt(n)
    pos = positive_scores(A)
    if pos.size:
        strong = (A > pos.mean()).any(axis=1)
        scores[strong] = 0.0
    return np.clip(scores, 0.0, 100.0)


def augment_with_loner(inst: TaskInstance) -> TaskInstance:
    """Append the invisible loner command as the last command."""
    if inst.loner_id is not None:
        raise InstanceError("instance already carries a loner command", "$.loner_id")
    n = inst.n
    F = inst.frequencies
    nonzero = F[F > 0]
    kappa_freq = float(nonzero.min()) if nonzero.size else 0.0

    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = inst.associations
    col = loner_associations(inst.associations)
    A[:n, n] = col
    A[n, :n] = col

    name = LONER_NAME
    while name in inst.names:
        name = "_" + name
    commands = inst.commands + (Command(n, name, kappa_freq, None),)
    out = replace(inst, commands=commands, associations=A, loner_id=n)
    return normalize_frequencies(out)


def compute_expectations(inst: TaskInstance) -> np.ndarray:
    """Scent E[i, j]: expectation that a group led by ``j`` contains ``i``."""
    A = inst.associations
    pos = positive_scores(A)
    median = float(np.median(pos)) if pos.size else 1.0
    E = np.minimum(0.95, 0.5 * A / median)
    E[A >= 80] = 1.0
    E[A <= 20] = 0.0
    np.fill_diagonal(E, 1.0)
    E.setflags(write=False)
    return E


def _mean_fitts(fitts: FittsParams, rows: int, tabs: int) -> float:
    row_mean = np.mean([fitts.row_time(r) for r in range(1, rows + 1)])
    tab_mean = np.mean([fitts.row_time(t) for t in range(1, tabs + 1)])
    return float(row_mean + tab_mean)


def calibrate_lambdas(inst: TaskInstance, lambda_f: float = 1.0) -> Lambdas:
    """Weights that keep every objective term at a comparable magnitude.

    Two-fold: the Fitts sum over a canvas of ``w x h`` is of order
    ``w*n*h / (2 log2 n)`` against an association sum of order ``n^2 / 2``,
    hence ``lambda_c = 2wh / (n log2 n) * lambda_f`` and ``lambda_m = lambda_c / 2``.

    Foraging: assume ``log2 n`` tabs of ``n / log2 n`` rows and groups of
    ``ceil(sqrt n)`` commands; each search term's per-command estimate is
    scaled to the mean access time, and the location penalty equals one
    mean false-negative cost.
    """
    n = inst.n_visible
    w, h = inst.limits.canvas_width, inst.limits.canvas_height
    if n < 2:
        raise InstanceError("calibration needs at least two commands", "$.commands")
    if w * h <= 0:
        raise InstanceError("canvas area must be positive", "$.canvas")
    lam_c = 2.0 * w * h / (n * math.log2(n)) * lambda_f

    tabs = max(1, math.ceil(math.log2(n)))
    rows = math.ceil(n / tabs)
    t_mean = _mean_fitts(inst.fitts, rows, tabs)
    size = math.ceil(math.sqrt(n))
    ngroups = math.ceil(n / size)
    E = compute_expectations(inst)
    vis = [i for i in range(inst.n) if i != inst.loner_id]
    sub = E[np.ix_(vis, vis)]
    scent = float((sub.sum() - len(vis)) / (len(vis) * (len(vis) - 1)))

    def weight(magnitude: float) -> float:
        return t_mean / magnitude if magnitude > 0 else 1.0

    return Lambdas(
        lambda_f=lambda_f,
        lambda_c=lam_c,
        lambda_m=lam_c / 2.0,
        lambda_0=1.0,
        lambda_1=weight((size + 1) / 2.0),
        lambda_2=weight(scent * size * (ngroups - 1)),
        lambda_3=weight((1 - scent) * ngroups),
        lambda_4=t_mean,
    )


# Conventional tab locations for well-known commands, keyed by lowercase
# name fragments.  ``-1`` stands for the last tab.
LOCATION_PRESETS: dict[str, int] = {
    "new": 0, "open": 0, "save": 0, "close": 0, "exit": 0, "quit": 0, "print": 0,
    "cut": 1, "copy": 1, "paste": 1,
    "help": -1, "about": -1, "update": -1,
}


def apply_location_presets(inst: TaskInstance, last_tab: int,
                           presets: dict[str, int] | None = None) -> TaskInstance:
    """Attach preferred tabs to commands whose first name word matches a preset."""
    presets = LOCATION_PRESETS if presets is None else presets
    cmds = []
    for c in inst.commands:
        pref = c.preferred_tab
        if c.id != inst.loner_id and pref is None:
            words = c.name.lower().split()
            if words and words[0] in presets:
                p = presets[words[0]]
                pref = last_tab if p < 0 else p
        cmds.append(replace(c, preferred_tab=pref))
    return replace(inst, commands=tuple(cmds))
