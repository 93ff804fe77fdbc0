"""``menuforge`` command line.

Exit codes: 0 success, 1 usage error, 2 invalid or infeasible input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .adapt import adapt_layout, sweep, tradeoff_csv, tradeoff_json
from .evaluator import Objective, eval_ift, eval_twofold
from .generate import random_instance_json
from .instance import InstanceError, TaskInstance, augment_with_loner, parse_instance
from .layout import (MenuLayout, layout_from_dict, layout_to_json, render_html, render_text,
                     validate_layout)
from .lpfile import export_lp, metadata_json
from .milp import build_model
from .solver import AnnealConfig, solve_anneal, solve_bnb, solve_brute

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2
BUNDLED = ("notepad", "acrobat", "firefox")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# file helpers

def _read(path: str) -> str:
    if path.startswith("bundled:"):
        name = path.split(":", 1)[1]
        if name.endswith("-baseline"):
            name = name[: -len("-baseline")] + "_baseline"
        ref = resources.files("menuforge") / "data" / f"{name}.json"
        if not ref.is_file():
            raise InputError(f"no bundled file {name!r}; choose from {', '.join(BUNDLED)}")
        return ref.read_text(encoding="utf-8")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _instance(args) -> TaskInstance:
    inst = parse_instance(_read(args.instance))
    if getattr(args, "loner", False):
        inst = augment_with_loner(inst)
    return inst


def _layout(path: str, inst: TaskInstance) -> MenuLayout:
    try:
        doc = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    digest = doc.get("instance_digest")
    if digest is not None and digest != inst.digest():
        raise InputError(f"{path} was produced for a different instance (digest mismatch)")
    if isinstance(doc.get("layout"), list):
        doc = {"tabs": doc["layout"]}
    try:
        layout = layout_from_dict(doc)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    problems = validate_layout(layout, inst.n, inst.loner_id)
    if problems:
        raise InputError(f"{path}: invalid layout: " + "; ".join(problems))
    return layout


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("MENUFORGE_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"MENUFORGE_THREADS must be a positive integer, got {env!r}")
        if value < 1:
            raise UsageError(f"MENUFORGE_THREADS must be a positive integer, got {env!r}")
        return value
    return os.cpu_count() or 1


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _weights(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _report(report, inst: TaskInstance, args):
    if args.report:
        _write(args.report, json.dumps(report.to_dict(inst.digest()), indent=1) + "\n")


def _solve(inst, args, **kwargs):
    if args.solver == "bnb":
        return solve_bnb(inst, args.objective, args.time_limit, **kwargs)
    if args.solver == "anneal":
        cfg = AnnealConfig(seed=args.seed, time_limit=args.time_limit)
        return solve_anneal(inst, args.objective, cfg, **kwargs)
    return solve_brute(inst, args.objective, **kwargs)


# --------------------------------------------------------------------------
# subcommands

def cmd_optimize(args) -> int:
    inst = _instance(args)
    report = _solve(inst, args)
    _write(args.output, layout_to_json(report.layout, inst.digest(), indent=1) + "\n")
    _report(report, inst, args)
    gap = "unknown" if report.gap is None else f"{report.gap:.3g}"
    print(f"{args.objective} objective {report.objective!r} ({report.method.value}, "
          f"gap {gap}, {report.wall_time:.2f}s)", file=sys.stderr)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    inst = _instance(args)
    layout = _layout(args.layout, inst)
    if args.objective == Objective.TWOFOLD.value:
        value = eval_twofold(layout, inst)
        doc: dict[str, Any] = {"objective": args.objective, "value": value}
    else:
        value, parts = eval_ift(layout, inst)
        doc = {"objective": args.objective, "value": value, "breakdown": parts.totals()}
    if args.json:
        print(json.dumps(doc, indent=1))
        return EXIT_OK
    print(f"{args.objective}: {value!r}")
    for key, part in doc.get("breakdown", {}).items():
        if key != "total":
            print(f"  {key:<7} {part!r}")
    return EXIT_OK


def cmd_adapt(args) -> int:
    inst = _instance(args)
    baseline = _layout(args.baseline, inst)
    report = adapt_layout(inst, baseline, args.w, args.objective, args.solver,
                          time_limit=args.time_limit,
                          cfg=AnnealConfig(seed=args.seed, time_limit=args.time_limit))
    _write(args.output, layout_to_json(report.layout, inst.digest(), indent=1) + "\n")
    _report(report, inst, args)
    return EXIT_OK


def cmd_sweep(args) -> int:
    inst = _instance(args)
    baseline = _layout(args.baseline, inst)
    points = sweep(inst, baseline, args.ws, args.objective, args.solver,
                   time_limit=args.time_limit, workers=_threads(args))
    text = tradeoff_csv(points) if args.format == "csv" else tradeoff_json(points, inst.digest()) + "\n"
    _write(args.output, text)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    inst = _instance(args)
    adapt = None
    if args.baseline is not None:
        if args.w is None:
            raise UsageError("export-lp: --baseline needs --w")
        adapt = (_layout(args.baseline, inst), args.w)
    model = build_model(inst, args.objective, adapt)
    _write(args.output, export_lp(model))
    if args.metadata:
        _write(args.metadata, metadata_json(model) + "\n")
    return EXIT_OK


def cmd_render(args) -> int:
    inst = _instance(args)
    layout = _layout(args.layout, inst)
    render = render_html if args.format == "html" else render_text
    _write(args.output, render(layout, inst.names, inst.loner_id))
    return EXIT_OK


def cmd_gen(args) -> int:
    text = random_instance_json(args.n, args.seed, args.density, preferences=args.preferences)
    _write(args.output, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="menuforge", description="Optimize menu layouts (tabs, groups, rows).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    objectives = [o.value for o in Objective]

    def common(p, *, solver=True):
        p.add_argument("--objective", choices=objectives, default=Objective.IFT.value)
        p.add_argument("--loner", action="store_true",
                       help="add the invisible loner command before optimizing")
        p.add_argument("--threads", type=_positive_int, default=None,
                       help="worker count (default: $MENUFORGE_THREADS or CPU count)")
        if solver:
            p.add_argument("--solver", choices=["bnb", "anneal", "brute"], default="bnb")
            p.add_argument("--time-limit", type=float, default=None, metavar="S")
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("optimize", help="find a good layout for an instance")
    p.add_argument("instance")
    common(p)
    p.add_argument("-o", "--output")
    p.add_argument("--report")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("evaluate", help="score a layout")
    p.add_argument("instance")
    p.add_argument("layout")
    common(p, solver=False)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("adapt", help="improve a layout without straying far from it")
    p.add_argument("instance")
    p.add_argument("baseline")
    common(p)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--report")
    p.set_defaults(func=cmd_adapt)

    p = sub.add_parser("sweep", help="trade-off curve over adaptation weights")
    p.add_argument("instance")
    p.add_argument("baseline")
    common(p)
    p.add_argument("--ws", type=_weights, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export-lp", help="write the MILP in LP format")
    p.add_argument("instance")
    common(p, solver=False)
    p.add_argument("--baseline")
    p.add_argument("--w", type=float)
    p.add_argument("-o", "--output")
    p.add_argument("--metadata", help="also write the variable index sidecar (JSON)")
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("render", help="draw a layout as text or HTML")
    p.add_argument("layout")
    p.add_argument("instance")
    p.add_argument("--format", choices=["text", "html"], default="text")
    p.add_argument("--loner", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("gen", help="emit a random instance")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--preferences", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (InputError, InstanceError, ValueError) as exc:
        print(f"menuforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv: Sequence[str] | None = None):
    try:
        code = run(argv)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
