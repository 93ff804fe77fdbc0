"""Instance builders shared by the test modules."""

from dataclasses import replace

import numpy as np

from menuforge.instance import (Command, Lambdas, TaskInstance, augment_with_loner,
                                calibrate_lambdas)


def make_instance(n, seed, *, loner=False, prefs=False, dense=False, lambdas=None, limits=None):
    """Random instance; ``n`` counts visible commands."""
    rng = np.random.default_rng(seed)
    A = np.zeros((n, n))
    p = 0.7 if dense else 0.3
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                A[i, j] = A[j, i] = rng.choice([10, 30, 40, 50, 70, 90, 100])
    cmds = []
    for i in range(n):
        pref = int(rng.integers(0, 2)) if prefs and rng.random() < 0.4 else None
        cmds.append(Command(i, f"c{i}", float(rng.integers(1, 20)), pref))
    inst = TaskInstance(cmds, A)
    if limits is not None:
        inst = replace(inst, limits=limits)
    if loner:
        inst = augment_with_loner(inst)
    return replace(inst, lambdas=lambdas if lambdas is not None else calibrate_lambdas(inst))


# Two-fold weights small enough that access time still matters.
SMALL_TWOFOLD = Lambdas(lambda_f=1.0, lambda_c=0.004, lambda_m=0.002)


def tiny(names, A, freqs=None, **kw):
    n = len(names)
    freqs = freqs or [1.0] * n
    return TaskInstance([Command(i, s, float(f)) for i, (s, f) in enumerate(zip(names, freqs))],
                        np.asarray(A, dtype=float), **kw)

