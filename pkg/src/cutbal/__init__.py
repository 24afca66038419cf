"""Cut sparsifiers and sketches for directed graphs, parameterized by the
balance of their cuts, with brute-force oracles for desk-scale validation."""

from .errors import BudgetError, ParseError
from .graph import (CutSet, DiGraph, WeightClassView, cut_balance, cut_weight,
                    is_eulerian, is_strongly_connected, read_edge_list,
                    weight_classes, write_edge_list)
from .strength import StrengthMap, compute_strengths, global_min_cut, strength_sum_check
from .forall import (SparsifierResult, expected_edges, guaranteed_tolerance,
                     sample_with_strengths, sparsify)
from .foreach import (CutEstimate, ForEachSketch, build_sketch, find_sparse_cut,
                      query_sketch, sketch_size_bits)
from .fast import FastSketch, build_fast_sketch, expander_decompose, query_fast
from .maxflow import FlowState, karger_levine, residual_balance_bound, sample_residual

__version__ = "0.1.0"

__all__ = [
    "BudgetError", "ParseError",
    "CutSet", "DiGraph", "WeightClassView", "cut_balance", "cut_weight",
    "is_eulerian", "is_strongly_connected", "read_edge_list", "weight_classes",
    "write_edge_list",
    "StrengthMap", "compute_strengths", "global_min_cut", "strength_sum_check",
    "SparsifierResult", "expected_edges", "guaranteed_tolerance",
    "sample_with_strengths", "sparsify",
    "CutEstimate", "ForEachSketch", "build_sketch", "find_sparse_cut",
    "query_sketch", "sketch_size_bits",
    "FastSketch", "build_fast_sketch", "expander_decompose", "query_fast",
    "FlowState", "karger_levine", "residual_balance_bound", "sample_residual",
    "__version__",
]
