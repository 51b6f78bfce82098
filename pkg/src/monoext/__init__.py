"""Extremal values of monotone-bijection sums on finite posets, with the
continuous line-integral and random-process bounds they discretize."""

from . import errors
from .continuous import (
    GridExperiment,
    MembershipReport,
    column_chain_bound,
    eval_extremal_surface,
    grid_experiment,
    line_integral_bound,
    line_integral_on_surface,
    verify_membership,
)
from .func1d import (
    EmpiricalRV,
    MonotoneMap1D,
    StepFunction1D,
    distribution_function,
    integrate,
    inverse_by_bisection,
    rearrangement,
)
from .oracle import CheckResult, brute_min_max, check_monotone_bijection, swap_adjacent
from .poset import (
    DEFAULT_CAP,
    ElementSet,
    Poset,
    QuerySet,
    admissible_permutations,
    build_poset,
    count_linear_extensions,
    down_set,
    grid_poset,
    linear_extensions,
    up_set,
)
from .process import (
    ExtremalProcess,
    ProcessMembershipReport,
    eval_extremal_process,
    expectation_at_tau,
    expectation_bound,
    fubini_check,
    jitter_tau,
    make_extremal_process,
    rows_grid_cross_check,
    simplified_bound,
    verify_process_membership,
)
from .solver import (
    build_witness,
    chain_bounds,
    conditional_max,
    conditional_min,
    disjoint_bound,
    reverse_reduce,
    scale_from_m,
    solve_max,
    solve_min,
)
from .values import BoundResult, MonotoneBijection, ValueScale

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "CheckResult",
    "DEFAULT_CAP",
    "ElementSet",
    "EmpiricalRV",
    "ExtremalProcess",
    "GridExperiment",
    "MembershipReport",
    "MonotoneBijection",
    "MonotoneMap1D",
    "Poset",
    "ProcessMembershipReport",
    "QuerySet",
    "StepFunction1D",
    "ValueScale",
    "admissible_permutations",
    "brute_min_max",
    "build_poset",
    "build_witness",
    "chain_bounds",
    "check_monotone_bijection",
    "column_chain_bound",
    "conditional_max",
    "conditional_min",
    "count_linear_extensions",
    "disjoint_bound",
    "distribution_function",
    "down_set",
    "errors",
    "eval_extremal_process",
    "eval_extremal_surface",
    "expectation_at_tau",
    "expectation_bound",
    "fubini_check",
    "grid_experiment",
    "grid_poset",
    "integrate",
    "inverse_by_bisection",
    "jitter_tau",
    "line_integral_bound",
    "line_integral_on_surface",
    "linear_extensions",
    "make_extremal_process",
    "rearrangement",
    "reverse_reduce",
    "rows_grid_cross_check",
    "scale_from_m",
    "simplified_bound",
    "solve_max",
    "solve_min",
    "swap_adjacent",
    "up_set",
    "verify_membership",
    "verify_process_membership",
]
