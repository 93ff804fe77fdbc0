"""Re-lay out the bundled 23-command editor menu and compare with its stock layout.

    python3 demos/notepad_redesign.py

Expect a surprise: with the calibrated weights the foraging cost prefers
one long group headed by a command nothing else relates to.  Scan cost is
scent times depth, so a lead with no scent makes every row below it cheap,
and with a single group the false-negative charge is at most one.  Capping
rows per tab (``StructuralLimits(max_rows=8)``) spreads the menu over tabs
but each tab keeps that shape.
"""

from importlib import resources

from menuforge import parse_instance
from menuforge.evaluator import eval_ift
from menuforge.layout import layout_from_json, render_text
from menuforge.solver import AnnealConfig, solve_anneal

data = resources.files("menuforge") / "data"
inst = parse_instance((data / "notepad.json").read_text())
stock = layout_from_json((data / "notepad_baseline.json").read_text())

before, parts = eval_ift(stock, inst)
print(f"stock layout, foraging cost {before:.4f}")
print(render_text(stock, inst.names))

report = solve_anneal(inst, "ift", AnnealConfig(seed=0))
print(f"\nannealed layout, cost {report.objective:.4f} "
      f"({1 - report.objective / before:.1%} lower, {report.wall_time:.1f}s)")
print(render_text(report.layout, inst.names))

after = eval_ift(report.layout, inst)[1].totals()
print("\nwhere the savings come from:")
for key, value in parts.totals().items():
    if key != "total":
        print(f"  {key:<7} {value:9.4f} -> {after[key]:9.4f}")
