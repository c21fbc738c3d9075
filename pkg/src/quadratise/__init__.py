"""Quadratisation of pseudo-Boolean functions.

Reduces higher-degree pseudo-Boolean functions (PUBO) to quadratic ones
(QUBO) by pair substitution with penalty gadgets: a fast two-stage local
structure reduction driven by a labelled multigraph, plus the classical
monomial-scan baseline, with exhaustive verification oracles and a
benchmark harness.
"""

from .baseline import SelectionVariant, get_next_var_pair, quadratise_baseline, scripted_selection
from .bench import ALGORITHMS, BenchRecord, SweepConfig, run_sweep, terms_scaling_report
from .generator import GeneratorSpec, generate
from .graph import (
    MultiGraph,
    MultiplicityIndex,
    build_graph,
    build_index,
    rebuild_equals,
    select_pair,
    update_graph_data,
)
from .lsr import (
    IterationLogEntry,
    ReductionResult,
    ReductionTimeout,
    lsr,
    multi_reduce,
    reduce_to_degree_k,
    replace_var_pair,
)
from .pbf import PBF, Monomial, ParseError, parse_pbf, penalty_term, scale_heuristic, serialize_pbf
from .verify import (
    VerificationReport,
    check_incremental_graph,
    check_penalty_property,
    check_quadratisation,
    check_variable_bounds,
    variable_bounds,
)

__all__ = [
    "ALGORITHMS",
    "BenchRecord",
    "GeneratorSpec",
    "IterationLogEntry",
    "Monomial",
    "MultiGraph",
    "MultiplicityIndex",
    "PBF",
    "ParseError",
    "ReductionResult",
    "ReductionTimeout",
    "SelectionVariant",
    "SweepConfig",
    "VerificationReport",
    "build_graph",
    "build_index",
    "check_incremental_graph",
    "check_penalty_property",
    "check_quadratisation",
    "check_variable_bounds",
    "generate",
    "get_next_var_pair",
    "lsr",
    "multi_reduce",
    "parse_pbf",
    "penalty_term",
    "quadratise_baseline",
    "rebuild_equals",
    "reduce_to_degree_k",
    "replace_var_pair",
    "run_sweep",
    "scale_heuristic",
    "scripted_selection",
    "select_pair",
    "serialize_pbf",
    "terms_scaling_report",
    "update_graph_data",
    "variable_bounds",
]

__version__ = "0.1.0"
