"""Seeded random instances with clique-structured (sparse) associations."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .instance import TaskInstance, parse_instance


def random_instance_doc(n: int, seed: int, density: float = 0.3, *,
                        preferences: bool = False, max_tabs: int | None = None,
                        max_rows: int | None = None,
                        lambdas: dict[str, float] | None = None) -> dict[str, Any]:
    """Instance document: commands fall into random cliques of 2 to 5.

    Pairs inside a clique score high with probability ``0.5 + density / 2``;
    pairs across cliques score low with probability ``density / 3``.
    Frequencies follow a heavy-tailed draw normalized to sum to one.
    """
    if n < 1:
        raise ValueError("need at least one command")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    clique = np.empty(n, dtype=int)
    k = label = 0
    while k < n:
        size = int(rng.integers(2, 6))
        clique[order[k:k + size]] = label
        k += size
        label += 1

    raw = rng.pareto(1.5, size=n) + 0.05
    freqs = np.round(raw / raw.sum(), 6)
    freqs[freqs <= 0] = 1e-6
    commands = []
    for i in range(n):
        rec: dict[str, Any] = {"id": i, "name": f"cmd{i}", "frequency": float(freqs[i])}
        if preferences and rng.random() < 0.25:
            rec["preferred_tab"] = int(rng.integers(0, 2))
        commands.append(rec)

    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if clique[i] == clique[j]:
                if rng.random() < 0.5 + density / 2:
                    pairs.append({"i": i, "j": j, "score": int(rng.integers(6, 11)) * 10})
            elif rng.random() < density / 3:
                pairs.append({"i": i, "j": j, "score": int(rng.integers(1, 5)) * 10})

    doc: dict[str, Any] = {
        "canvas": {"width": 1280, "height": 800},
        "fitts": {"a": 0.2, "b": 0.15},
        "commands": commands,
        "associations": pairs,
    }
    limits = {k: v for k, v in (("max_tabs", max_tabs), ("max_rows", max_rows)) if v is not None}
    if limits:
        doc["limits"] = limits
    if lambdas:
        doc["lambdas"] = dict(lambdas)
    return doc


def random_instance_json(n: int, seed: int, density: float = 0.3, **kwargs) -> str:
    return json.dumps(random_instance_doc(n, seed, density, **kwargs), indent=1, sort_keys=True) + "\n"


def random_instance(n: int, seed: int, density: float = 0.3, **kwargs) -> TaskInstance:
    return parse_instance(random_instance_json(n, seed, density, **kwargs))
