"""Exact and heuristic layout solvers."""

from .anneal import AnnealConfig, solve_anneal
from .brute import solve_brute
from .bnb import solve_bnb
from .common import Method, Problem, SolveReport, random_layout

__all__ = ["AnnealConfig", "Method", "Problem", "SolveReport", "random_layout", "solve_anneal",
           "solve_bnb", "solve_brute"]
