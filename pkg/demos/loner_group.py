"""Three commands nobody associates with anything, and a tight 4-command cluster.

Without help the loose ones end up scattered through the cluster's tabs.  The
invisible loner command gives them a group of their own.
"""

from dataclasses import replace

import numpy as np

from menuforge.instance import (Command, StructuralLimits, TaskInstance, augment_with_loner,
                                calibrate_lambdas)
from menuforge.layout import render_text
from menuforge.solver import solve_brute

names = ["Cut", "Copy", "Paste", "Delete", "Font", "Zoom", "About"]
A = np.zeros((7, 7))
A[:4, :4] = 60
np.fill_diagonal(A, 0)
cmds = [Command(i, s, f) for i, (s, f) in enumerate(zip(names, [10, 8, 6, 5, 7, 6, 5]))]
plain = TaskInstance(cmds, A, limits=StructuralLimits(3, 4, 4))

for label, inst in (("without loner", plain), ("with loner", augment_with_loner(plain))):
    inst = replace(inst, lambdas=calibrate_lambdas(inst))
    report = solve_brute(inst, "ift")
    print(f"{label} ({report.wall_time:.1f}s):")
    print(render_text(report.layout, inst.names, inst.loner_id), "\n")
