"""Exact laboratory for stochastic Boolean function evaluation.

Represent Boolean formulas with per-variable test costs and truth
probabilities, simulate adaptive and non-adaptive testing strategies,
compute exact optimal strategies at small n, generate the lower-bound
instance families, and verify the supporting inequalities.
"""

from .errors import (
    HypothesisViolated,
    InvalidStrategy,
    ModeMismatch,
    NotReadOnceDnf,
    ParameterError,
    PreconditionViolated,
    SbfeError,
    SchemaError,
    SizeExceeded,
)
from .formula import (
    Constant,
    DnfFormula,
    Literal,
    PartialAssignment,
    ReadOnceDnf,
    RoAnd,
    RoLeaf,
    RoOr,
    RoTree,
    TruthTable,
    TtspEdge,
    TtspGraph,
    TtspParallel,
    TtspSeries,
    evaluate,
    is_determined,
    restrict,
    to_truth_table,
    ttsp_to_formula,
)
from .generators import (
    TreeInstanceMeta,
    gen_address,
    gen_binary_tree,
    gen_geometric_cost,
    gen_tribes,
    gen_ucap,
)
from .harness import (
    GapReport,
    LemmaResult,
    check_branching,
    check_branching_exhaustive,
    check_earthmover,
    check_earthmover_batch,
    check_leaf_monotone,
    gap_report,
    sweep,
)
from .heuristics import (
    TermStats,
    algorithm1,
    boros_unyulurt,
    increasing_cost,
    round_robin,
    term_order,
    term_stats,
)
from .instance import Instance, exact_instance, load_instance, dump_instance, unit_uniform_instance
from .solvers import SolveResult, brute_force_opt, opt_adaptive, opt_nonadaptive, undetermined_prob
from .strategy import (
    AdaptivePolicy,
    AdaptiveTree,
    NonAdaptiveStrategy,
    StopNode,
    TestNode,
    expected_cost_enum,
    expected_cost_exact,
    expected_cost_mc,
    expected_leaf_cost,
    materialize_policy,
    simulate_cost,
)

__all__ = [name for name in dir() if not name.startswith("_")]
