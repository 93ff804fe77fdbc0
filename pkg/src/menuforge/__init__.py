"""Exact and heuristic optimization of tabbed menu layouts."""

from .adapt import TradeoffPoint, adapt_layout, personalize, sweep
from .evaluator import Objective, eval_adapted, eval_ift, eval_twofold, fitts_time, performance
from .instance import (Command, FittsParams, InstanceError, Lambdas, StructuralLimits,
                       TaskInstance, augment_with_loner, calibrate_lambdas, compute_expectations,
                       load_instance, parse_instance)
from .layout import MenuLayout, layout_distance, render_html, render_text, validate_layout
from .lpfile import export_lp, read_lp
from .milp import build_model, check_feasible, decode, encode_layout
from .solver import AnnealConfig, SolveReport, solve_anneal, solve_bnb, solve_brute

__version__ = "0.1.0"

__all__ = [
    "AnnealConfig", "Command", "FittsParams", "InstanceError", "Lambdas", "MenuLayout",
    "Objective", "SolveReport", "StructuralLimits", "TaskInstance", "TradeoffPoint",
    "adapt_layout", "augment_with_loner", "build_model", "calibrate_lambdas", "check_feasible",
    "compute_expectations", "decode", "encode_layout", "eval_adapted", "eval_ift",
    "eval_twofold", "export_lp", "fitts_time", "layout_distance", "load_instance",
    "parse_instance", "performance", "personalize", "read_lp", "render_html", "render_text",
    "solve_anneal", "solve_bnb", "solve_brute", "sweep", "validate_layout",
]
