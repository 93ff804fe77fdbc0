"""How far must a menu move to get faster? Sweep the adaptation weight.

w=0 ignores the old layout, w=1 refuses to move anything.  Distance counts
tab and row shifts, so it is an integer while the foraging cost here is
around 1; the interesting part of the curve sits at small w.  Regrouping
without moving anything is free, which is why performance can still
improve at distance 0.  Writes the curve as CSV to stdout.
"""

import numpy as np

from menuforge.adapt import sweep, tradeoff_csv
from menuforge.generate import random_instance
from menuforge.solver import random_layout

inst = random_instance(7, seed=11, density=0.6, preferences=True)
old = random_layout(inst, np.random.default_rng(11))
points = sweep(inst, old, [0, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 1])
print(tradeoff_csv(points), end="")
