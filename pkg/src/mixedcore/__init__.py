"""Optimal 2-core thresholds of mixed random hypergraphs.

Two edge sizes ``a < b`` mixed in the right proportion give random
hypergraphs that stay peelable at higher edge densities than any uniform
hypergraph. This package computes the optimal proportion, checks it by
Monte-Carlo peeling, and uses it in an XOR retrieval structure.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .experiment import SweepConfig, SweepResult, emit_csv, estimate_threshold, run_sweep
from .hypergraph import Hypergraph, PeelResult, generate_mixed, has_empty_core, peel
from .numerics import Bracket, SigmoidFit, bisect_root, fit_sigmoid, minimize_1d
from .optimizer import (
    CaseLabel,
    Optimum,
    b_prime,
    general_threshold,
    optimize_pair,
    table_scan,
    uniform_threshold,
)
from .retrieval import RetrievalStructure, assign_edge, build, query, space_report
from .threshold import (
    EdgeMix,
    SpecialPoints,
    aux_f,
    aux_g,
    aux_g_deriv,
    aux_h,
    special_points,
    threshold_T,
    threshold_t_general,
)

__all__ = [
    "BACKEND",
    "Bracket",
    "CaseLabel",
    "EdgeMix",
    "Hypergraph",
    "Optimum",
    "PeelResult",
    "RetrievalStructure",
    "SigmoidFit",
    "SpecialPoints",
    "SweepConfig",
    "SweepResult",
    "assign_edge",
    "aux_f",
    "aux_g",
    "aux_g_deriv",
    "aux_h",
    "b_prime",
    "bisect_root",
    "build",
    "emit_csv",
    "estimate_threshold",
    "fit_sigmoid",
    "general_threshold",
    "generate_mixed",
    "has_empty_core",
    "minimize_1d",
    "optimize_pair",
    "peel",
    "query",
    "run_sweep",
    "space_report",
    "special_points",
    "table_scan",
    "threshold_T",
    "threshold_t_general",
    "uniform_threshold",
]
