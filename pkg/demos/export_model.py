"""Write the full integer program for the bundled editor menu as an LP file.

Any LP-format solver (HiGHS, CBC, Gurobi, CPLEX) can take it from there:

    python3 demos/export_model.py notepad.lp
    highs notepad.lp
"""

import sys
from importlib import resources

from menuforge import parse_instance
from menuforge.lpfile import export_lp
from menuforge.milp import build_model

inst = parse_instance((resources.files("menuforge") / "data" / "notepad.json").read_text())
model = build_model(inst, "ift")
text = export_lp(model)
out = sys.argv[1] if len(sys.argv) > 1 else "notepad.lp"
with open(out, "w", encoding="utf-8") as fh:
    fh.write(text)
print(f"{out}: {len(model.variables)} variables, {len(model.constraints)} constraints")
