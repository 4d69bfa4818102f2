"""Robust multi-product pricing from transaction data.

Each historical customer is described by the set of valuations consistent
with the purchase they made at the prices they saw.  The library evaluates
the worst-case revenue of a price vector over those sets, finds the prices
maximising it with a mixed-integer model, offers three fast approximations
with proven ratios, and benchmarks them against parametric choice models.
"""

from .choice_models import (
    LinearDemandParams,
    MixedLogitParams,
    MnlParams,
    Observations,
    UniformPriceLaw,
    linear_demand_fit,
    linear_demand_probs,
    mixed_logit_probs,
    mnl_fit,
    mnl_optimal_prices,
    mnl_probs,
)
from .evaluator import (
    customer_worst_case,
    dual_certificate,
    normalize_above_pmax,
    total_revenue,
    total_worst_case,
)
from .exact import (
    PricingSolution,
    SolverLimitError,
    SolverLimits,
    build_opmip,
    solve_constant_price_case,
    solve_exact,
    solve_g0_branch_and_bound,
    solve_g0_enumeration,
    solve_g0_highs_milp,
    solve_same_price_case,
    stagger_prices,
)
from .heuristics import (
    baseline_average_prices,
    baseline_random_historical,
    conservative_prices,
    cutoff_prices,
    guarantee_report,
    lp_relaxation_prices,
)
from .instance import (
    DatasetParseError,
    TransactionDataset,
    ValidationError,
    load_dataset,
    save_dataset,
    stats,
)
from .lp import LpModel, LpSolution, solve_lp

__version__ = "0.1.0"

__all__ = [
    "LinearDemandParams",
    "MixedLogitParams",
    "MnlParams",
    "Observations",
    "UniformPriceLaw",
    "linear_demand_fit",
    "linear_demand_probs",
    "mixed_logit_probs",
    "mnl_fit",
    "mnl_optimal_prices",
    "mnl_probs",
    "customer_worst_case",
    "dual_certificate",
    "normalize_above_pmax",
    "total_revenue",
    "total_worst_case",
    "PricingSolution",
    "SolverLimitError",
    "SolverLimits",
    "build_opmip",
    "solve_constant_price_case",
    "solve_exact",
    "solve_g0_branch_and_bound",
    "solve_g0_enumeration",
    "solve_g0_highs_milp",
    "solve_same_price_case",
    "stagger_prices",
    "baseline_average_prices",
    "baseline_random_historical",
    "conservative_prices",
    "cutoff_prices",
    "guarantee_report",
    "lp_relaxation_prices",
    "DatasetParseError",
    "TransactionDataset",
    "ValidationError",
    "load_dataset",
    "save_dataset",
    "stats",
    "LpModel",
    "LpSolution",
    "solve_lp",
]
