"""Regenerate the bundled desktop-scale instances in src/menuforge/data/.

Each instance is derived from a conventional menu bar: commands in the same
group of the conventional layout get strong associations, commands sharing
a tab get weaker ones, and a few cross-tab links are added by hand.  The
conventional layout itself is written next to the instance as a baseline.

    python tools/make_bundled.py
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parent.parent / "src" / "menuforge" / "data"

NOTEPAD = {
    "File": [["New", "Open", "Save", "Save As"], ["Page Setup", "Print"], ["Exit"]],
    "Edit": [["Undo"], ["Cut", "Copy", "Paste", "Delete"],
             ["Find", "Find Next", "Replace", "Go To"], ["Select All", "Time/Date"]],
    "Format": [["Word Wrap", "Font"]],
    "View": [["Status Bar"]],
    "Help": [["View Help"], ["About Notepad"]],
}
NOTEPAD_HOT = {"Save": 30, "Open": 18, "Copy": 25, "Paste": 24, "Cut": 12, "Undo": 14,
               "New": 10, "Find": 9, "Print": 6, "Select All": 8, "Save As": 5, "Exit": 7,
               "Replace": 4, "Font": 3, "Word Wrap": 3}
NOTEPAD_LINKS = [("Select All", "Copy", 60), ("Select All", "Cut", 50), ("Find", "Go To", 40),
                 ("Save", "Exit", 30), ("Font", "Status Bar", 30)]

ACROBAT = {
    "File": [["Open", "Create PDF", "Save", "Save As", "Export To"],
             ["Close", "Properties"], ["Print", "Print Production"], ["Exit"]],
    "Edit": [["Undo", "Redo"], ["Cut", "Copy", "Paste", "Delete", "Select All"],
             ["Find", "Advanced Search"], ["Preferences"]],
    "View": [["Rotate View", "Page Navigation", "Page Display", "Zoom"],
             ["Tools", "Show/Hide", "Read Mode", "Full Screen Mode"]],
    "Window": [["New Window", "Cascade", "Tile", "Split", "Spreadsheet Split"]],
    "Tools": [["Comment", "Fill & Sign", "Edit PDF", "Organize Pages"],
              ["Protect", "Redact", "Compare Files"], ["Action Wizard"]],
    "Help": [["Acrobat Help", "Online Support"], ["Check for Updates", "About Acrobat"],
             ["Repair Installation"]],
}
ACROBAT_HOT = {"Open": 30, "Save": 22, "Print": 20, "Copy": 18, "Find": 15, "Zoom": 14,
               "Comment": 12, "Fill & Sign": 10, "Close": 9, "Save As": 7, "Undo": 8,
               "Paste": 8, "Edit PDF": 8, "Select All": 5, "Rotate View": 5,
               "Page Navigation": 6, "Full Screen Mode": 4, "Organize Pages": 4,
               "Export To": 4, "Create PDF": 5}
ACROBAT_LINKS = [("Print", "Print Production", 50), ("Find", "Zoom", 30),
                 ("Edit PDF", "Organize Pages", 60), ("Protect", "Properties", 40),
                 ("Save As", "Export To", 70), ("Preferences", "Properties", 30)]

FIREFOX = {
    "File": [["New Tab", "New Window", "New Private Window"], ["Open File", "Save Page As"],
             ["Email Link", "Print"], ["Work Offline", "Exit"]],
    "Edit": [["Undo", "Redo"], ["Cut", "Copy", "Paste", "Delete"], ["Select All"],
             ["Find in Page"], ["Settings"]],
    "View": [["Toolbars", "Sidebar"], ["Zoom In", "Zoom Out", "Reset Zoom"],
             ["Page Style", "Text Encoding"], ["Full Screen"]],
    "History": [["Show All History", "Clear Recent History"],
                ["Restore Previous Session", "Recently Closed Tabs", "Recently Closed Windows"]],
    "Bookmarks": [["Bookmark Current Tab", "Bookmark All Tabs"],
                  ["Manage Bookmarks", "Show All Bookmarks", "Import Bookmarks"], ["Bookmarks Toolbar"]],
    "Tools": [["Downloads", "Add-ons and Themes"], ["Sync Now", "Page Info"],
              ["Browser Tools", "Web Developer Tools", "Browser Console", "Task Manager"]],
    "Help": [["Get Help", "Share Ideas and Feedback"], ["Troubleshoot Mode", "More Troubleshooting"],
             ["Report Deceptive Site", "About Firefox"]],
}
FIREFOX_HOT = {"New Tab": 40, "Copy": 25, "Paste": 24, "New Window": 12, "Find in Page": 14,
               "Print": 8, "Zoom In": 9, "Zoom Out": 8, "Downloads": 10, "Show All History": 7,
               "Bookmark Current Tab": 9, "Settings": 6, "New Private Window": 6,
               "Restore Previous Session": 5, "Recently Closed Tabs": 7, "Full Screen": 4,
               "Manage Bookmarks": 4, "Undo": 6, "Cut": 6, "Select All": 5, "Save Page As": 3}
FIREFOX_LINKS = [("Recently Closed Tabs", "New Tab", 50), ("Bookmark All Tabs", "New Tab", 30),
                 ("Select All", "Copy", 60), ("Downloads", "Save Page As", 40),
                 ("Web Developer Tools", "Page Info", 50), ("Settings", "Add-ons and Themes", 40),
                 ("Clear Recent History", "New Private Window", 40)]


def build(menu, hot, links, seed, limits=None):
    rng = np.random.default_rng(seed)
    names, tab_of, group_of = [], [], []
    tabs_ids = []
    g = 0
    for t, (_, groups) in enumerate(menu.items()):
        tab = []
        for members in groups:
            ids = []
            for name in members:
                ids.append(len(names))
                names.append(name)
                tab_of.append(t)
                group_of.append(g)
            tab.append(ids)
            g += 1
        tabs_ids.append({"groups": tab})
    n = len(names)
    idx = {name: k for k, name in enumerate(names)}
    raw = np.array([hot.get(name, 1 + int(rng.integers(0, 3))) for name in names], dtype=float)
    freqs = np.round(raw / raw.sum(), 6)
    commands = [{"id": k, "name": names[k], "frequency": float(freqs[k])} for k in range(n)]
    scores = {}
    for i in range(n):
        for j in range(i + 1, n):
            if group_of[i] == group_of[j]:
                scores[(i, j)] = int(rng.integers(7, 11)) * 10
            elif tab_of[i] == tab_of[j] and rng.random() < 0.5:
                scores[(i, j)] = int(rng.integers(2, 5)) * 10
    for a, b, s in links:
        i, j = sorted((idx[a], idx[b]))
        scores[(i, j)] = s
    doc = {
        "canvas": {"width": 1280, "height": 800},
        "fitts": {"a": 0.2, "b": 0.15},
        "commands": commands,
        "associations": [{"i": i, "j": j, "score": s} for (i, j), s in sorted(scores.items())],
    }
    if limits:
        doc["limits"] = limits
    return doc, {"tabs": tabs_ids}


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    for name, menu, hot, links, seed, limits in [
        ("notepad", NOTEPAD, NOTEPAD_HOT, NOTEPAD_LINKS, 23, None),
        ("acrobat", ACROBAT, ACROBAT_HOT, ACROBAT_LINKS, 46, None),
        ("firefox", FIREFOX, FIREFOX_HOT, FIREFOX_LINKS, 51, {"max_tabs": 7}),
    ]:
        doc, baseline = build(menu, hot, links, seed, limits)
        (DATA / f"{name}.json").write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
        (DATA / f"{name}_baseline.json").write_text(json.dumps(baseline, indent=1) + "\n",
                                                    encoding="utf-8")
        print(name, len(doc["commands"]), "commands,", len(doc["associations"]), "pairs")


if __name__ == "__main__":
    main()
