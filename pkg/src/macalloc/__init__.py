"""Utility-maximizing rate allocation on the Gaussian multiple-access channel.

The capacity region is a polymatroid cut out by 2**M - 1 sum-rate
constraints; the solver runs gradient projection with approximate
projections, finding violated constraints either by enumeration (small M)
or by the rate-splitting recursion (polynomial in M). All rates are in nats
per channel use.
"""

from .channel import (
    BRUTE_FORCE_MAX_USERS,
    FEASIBILITY_TOL,
    ChannelConfig,
    awgn_capacity,
    constraint_slack,
    constraint_table,
    is_feasible_bruteforce,
    subset_capacity,
    subset_mask,
    subset_members,
)
from .optimizer import (
    ConstantStep,
    DiminishingStep,
    IterationTrace,
    SolveSettings,
    StepsizeRule,
    TheoremCappedStep,
    alpha_max,
    count_violations,
    expansion_delta,
    greedy_vertex,
    solve,
)
from .projection import (
    ProjectionResult,
    approximate_projection,
    most_violated_finder,
    project_onto_hyperplane,
    pseudo_nonexpansive_check,
    rate_split_finder,
)
from .utility import LinearUtility, Utility, WeightedLogUtility
from .violations import (
    OVERLAP_TOL,
    Configuration,
    Feasible,
    SpinOffUser,
    Violated,
    ViolationReport,
    certify_agreement,
    elevation,
    find_most_violated,
    rate_split_analyze,
)

__all__ = [
    "BRUTE_FORCE_MAX_USERS",
    "FEASIBILITY_TOL",
    "OVERLAP_TOL",
    "ChannelConfig",
    "Configuration",
    "ConstantStep",
    "DiminishingStep",
    "Feasible",
    "IterationTrace",
    "LinearUtility",
    "ProjectionResult",
    "SolveSettings",
    "SpinOffUser",
    "StepsizeRule",
    "TheoremCappedStep",
    "Utility",
    "Violated",
    "ViolationReport",
    "WeightedLogUtility",
    "alpha_max",
    "approximate_projection",
    "awgn_capacity",
    "certify_agreement",
    "constraint_slack",
    "constraint_table",
    "count_violations",
    "elevation",
    "expansion_delta",
    "find_most_violated",
    "greedy_vertex",
    "is_feasible_bruteforce",
    "most_violated_finder",
    "project_onto_hyperplane",
    "pseudo_nonexpansive_check",
    "rate_split_analyze",
    "rate_split_finder",
    "solve",
    "subset_capacity",
    "subset_mask",
    "subset_members",
]
