"""Menu layouts: ordered tabs of ordered groups of ordered command ids.

Tabs and rows are 1-based in every derived view.
"""

from __future__ import annotations

import html
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterator, Sequence

from .instance import StructuralLimits

Nested = tuple[tuple[tuple[int, ...], ...], ...]

MAX_ENUMERATION = 8
SEPARATOR = "---"


@dataclass(frozen=True)
class Slot:
    tab: int  # 1-based
    row: int  # 1-based within the tab
    group: int  # 0-based, reading order over the whole menu
    depth: int  # 1-based position inside the group


@dataclass(frozen=True)
class GroupInfo:
    members: tuple[int, ...]
    tab: int
    start: int  # row of the first member

    @property
    def lead(self) -> int:
        return self.members[0]


@dataclass(frozen=True)
class MenuLayout:
    tabs: Nested

    def __init__(self, tabs: Sequence[Sequence[Sequence[int]]]):
        object.__setattr__(self, "tabs", tuple(tuple(tuple(int(c) for c in g) for g in t) for t in tabs))

    def __lt__(self, other: "MenuLayout") -> bool:
        return self.tabs < other.tabs

    def __repr__(self) -> str:
        return f"MenuLayout({self.to_nested()!r})"

    def to_nested(self) -> list[list[list[int]]]:
        return [[list(g) for g in t] for t in self.tabs]

    @cached_property
    def groups(self) -> tuple[GroupInfo, ...]:
        out = []
        for t, tab in enumerate(self.tabs, start=1):
            row = 1
            for g in tab:
                out.append(GroupInfo(g, t, row))
                row += len(g)
        return tuple(out)

    @cached_property
    def slots(self) -> dict[int, Slot]:
        out: dict[int, Slot] = {}
        for gi, g in enumerate(self.groups):
            for d, c in enumerate(g.members, start=1):
                out[c] = Slot(g.tab, g.start + d - 1, gi, d)
        return out

    @property
    def commands(self) -> list[int]:
        return [c for t in self.tabs for g in t for c in g]

    @property
    def n_tabs(self) -> int:
        return len(self.tabs)

    @property
    def n_groups(self) -> int:
        return sum(len(t) for t in self.tabs)

    @property
    def max_rows(self) -> int:
        return max((sum(len(g) for g in t) for t in self.tabs), default=0)

    def tab_of(self, i: int) -> int:
        return self.slots[i].tab

    def row_of(self, i: int) -> int:
        return self.slots[i].row

    def group_of(self, i: int) -> int:
        return self.slots[i].group

    def lead(self, group: int) -> int:
        return self.groups[group].lead

    def relabel(self, mapping: Sequence[int]) -> "MenuLayout":
        """Layout with every id ``i`` replaced by ``mapping[i]``."""
        return MenuLayout([[[mapping[c] for c in g] for g in t] for t in self.tabs])


def validate_layout(layout: MenuLayout, n: int, loner_id: int | None = None,
                    limits: StructuralLimits | None = None) -> list[str]:
    """Return human-readable violations; empty when the layout is valid."""
    problems: list[str] = []
    if not layout.tabs:
        problems.append("layout has no tabs")
    for t, tab in enumerate(layout.tabs, start=1):
        if not tab:
            problems.append(f"empty tab {t}")
        for g, group in enumerate(tab, start=1):
            if not group:
                problems.append(f"empty group {g} on tab {t}")
    seen: set[int] = set()
    for c in layout.commands:
        if not 0 <= c < n:
            problems.append(f"unknown command {c}")
        elif c in seen:
            problems.append(f"duplicate command {c}")
        seen.add(c)
    for c in range(n):
        if c not in seen:
            problems.append(f"missing command {c}")
    if loner_id is not None and loner_id in seen:
        for tab in layout.tabs:
            for group in tab:
                if loner_id in group and group[0] != loner_id:
                    problems.append(f"loner {loner_id} is not the lead of its group")
    if limits is not None:
        if limits.max_tabs is not None and layout.n_tabs > limits.max_tabs:
            problems.append(f"{layout.n_tabs} tabs exceed the limit of {limits.max_tabs}")
        if limits.max_groups is not None and layout.n_groups > limits.max_groups:
            problems.append(f"{layout.n_groups} groups exceed the limit of {limits.max_groups}")
        if limits.max_rows is not None and layout.max_rows > limits.max_rows:
            problems.append(f"{layout.max_rows} rows exceed the limit of {limits.max_rows}")
    return problems


def fits_limits(layout: MenuLayout, limits: StructuralLimits | None) -> bool:
    if limits is None:
        return True
    return ((limits.max_tabs is None or layout.n_tabs <= limits.max_tabs)
            and (limits.max_groups is None or layout.n_groups <= limits.max_groups)
            and (limits.max_rows is None or layout.max_rows <= limits.max_rows))


# --------------------------------------------------------------------------
# enumeration

Structure = tuple[tuple[int, ...], ...]  # group sizes per tab


def enumerate_structures(n: int, limits: StructuralLimits | None = None) -> list[Structure]:
    """All tab/group size patterns for ``n`` slots, in a fixed order.

    Each of the ``n - 1`` gaps between consecutive slots is either nothing,
    a group break or a tab break, giving ``3**(n-1)`` patterns before limits.
    """
    if n < 1:
        raise ValueError("need at least one command")
    max_tabs = limits.max_tabs if limits else None
    max_groups = limits.max_groups if limits else None
    max_rows = limits.max_rows if limits else None
    out = []
    for cuts in itertools.product((0, 1, 2), repeat=n - 1):
        tabs: list[list[int]] = [[1]]
        for cut in cuts:
            if cut == 0:
                tabs[-1][-1] += 1
            elif cut == 1:
                tabs[-1].append(1)
            else:
                tabs.append([1])
        if max_tabs is not None and len(tabs) > max_tabs:
            continue
        if max_groups is not None and sum(map(len, tabs)) > max_groups:
            continue
        if max_rows is not None and max(map(sum, tabs)) > max_rows:
            continue
        out.append(tuple(tuple(t) for t in tabs))
    return out


def lead_slots(structure: Structure) -> list[int]:
    """Flat slot indices of group leads."""
    out, k = [], 0
    for tab in structure:
        for size in tab:
            out.append(k)
            k += size
    return out


def fill_structure(structure: Structure, order: Sequence[int]) -> MenuLayout:
    it = iter(order)
    return MenuLayout([[[next(it) for _ in range(size)] for size in tab] for tab in structure])


def count_layouts(n: int) -> int:
    return math.factorial(n) * 3 ** (n - 1)


def enumerate_layouts(n: int, limits: StructuralLimits | None = None,
                      lead: int | None = None) -> Iterator[MenuLayout]:
    """Yield every distinct layout of ``n`` commands exactly once.

    ``lead`` restricts the stream to layouts where that command heads its group.
    """
    if n > MAX_ENUMERATION:
        raise ValueError(f"enumeration is limited to n <= {MAX_ENUMERATION} "
                         f"({count_layouts(n)} layouts requested)")
    structures = enumerate_structures(n, limits)
    for structure in structures:
        leads = set(lead_slots(structure))
        for perm in itertools.permutations(range(n)):
            if lead is not None and perm.index(lead) not in leads:
                continue
            yield fill_structure(structure, perm)


# --------------------------------------------------------------------------
# distance

@dataclass(frozen=True)
class LayoutDistance:
    tab_shift: dict[int, int]
    row_shift: dict[int, int]

    @property
    def total_tab(self) -> int:
        return sum(self.tab_shift.values())

    @property
    def total_row(self) -> int:
        return sum(self.row_shift.values())

    @property
    def total(self) -> int:
        return self.total_tab + self.total_row


def layout_distance(current: MenuLayout, baseline: MenuLayout) -> LayoutDistance:
    a, b = current.slots, baseline.slots
    if set(a) != set(b) or len(current.commands) != len(baseline.commands):
        raise ValueError("layouts cover different command sets")
    tab = {i: abs(a[i].tab - b[i].tab) for i in sorted(a)}
    row = {i: abs(a[i].row - b[i].row) for i in sorted(a)}
    return LayoutDistance(tab, row)


# --------------------------------------------------------------------------
# JSON

def layout_to_dict(layout: MenuLayout, digest: str | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {"tabs": [{"groups": [list(g) for g in tab]} for tab in layout.tabs]}
    if digest is not None:
        doc["instance_digest"] = digest
    return doc


def layout_to_json(layout: MenuLayout, digest: str | None = None, indent: int | None = None) -> str:
    return json.dumps(layout_to_dict(layout, digest), indent=indent)


def layout_from_dict(doc: dict[str, Any]) -> MenuLayout:
    try:
        return MenuLayout([tab["groups"] for tab in doc["tabs"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed layout document: {exc}") from exc


def layout_from_json(text: str) -> MenuLayout:
    return layout_from_dict(json.loads(text))


# --------------------------------------------------------------------------
# rendering

def _visible_tabs(layout: MenuLayout, names: Sequence[str], loner_id: int | None):
    for tab in layout.tabs:
        groups = [[names[c] for c in g if c != loner_id] for g in tab]
        label = next((name for g in groups for name in g), "")
        yield label, groups


def _check_renderable(layout: MenuLayout, names: Sequence[str], loner_id: int | None):
    problems = validate_layout(layout, len(names), loner_id)
    if problems:
        raise ValueError("cannot render invalid layout: " + "; ".join(problems))


def render_text(layout: MenuLayout, names: Sequence[str], loner_id: int | None = None) -> str:
    """Plain-text menu: one column per tab, ``---`` between groups.

    Each tab is labelled with its first visible command.
    """
    _check_renderable(layout, names, loner_id)
    columns = []
    for label, groups in _visible_tabs(layout, names, loner_id):
        lines: list[str] = []
        for k, g in enumerate(groups):
            if k:
                lines.append(SEPARATOR)
            lines.extend(g)
        columns.append((label, lines))
    widths = [max([len(label), len(SEPARATOR)] + [len(x) for x in lines]) for label, lines in columns]
    height = max(len(lines) for _, lines in columns)
    out = [" | ".join(label.ljust(w) for (label, _), w in zip(columns, widths)).rstrip(),
           "=+=".join("=" * w for w in widths)]
    for r in range(height):
        cells = [(lines[r] if r < len(lines) else "").ljust(w) for (_, lines), w in zip(columns, widths)]
        out.append(" | ".join(cells).rstrip())
    return "\n".join(out) + "\n"


def render_html(layout: MenuLayout, names: Sequence[str], loner_id: int | None = None) -> str:
    """Self-contained static HTML rendering (inline styles, no scripts)."""
    _check_renderable(layout, names, loner_id)
    parts = ['<!DOCTYPE html>',
             '<html><head><meta charset="utf-8"><title>Menu layout</title></head>',
             '<body style="font-family:sans-serif;font-size:14px">',
             '<div style="display:flex;gap:12px;align-items:flex-start">']
    for label, groups in _visible_tabs(layout, names, loner_id):
        parts.append('<div style="border:1px solid #888;min-width:140px">')
        parts.append('<div style="font-weight:bold;background:#eee;padding:4px 8px;'
                     f'border-bottom:1px solid #888">{html.escape(label)}</div>')
        parts.append('<ul style="list-style:none;margin:0;padding:0">')
        for k, g in enumerate(groups):
            style = "padding:2px 0" + (";border-top:2px solid #888" if k else "")
            parts.append(f'<li style="{style}"><ul style="list-style:none;margin:0;padding:0 8px">')
            parts.extend(f'<li style="padding:2px 0">{html.escape(name)}</li>' for name in g)
            parts.append('</ul></li>')
        parts.append('</ul></div>')
    parts.append('</div></body></html>')
    return "\n".join(parts) + "\n"
