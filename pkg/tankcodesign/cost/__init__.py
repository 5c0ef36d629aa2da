from tankcodesign.cost.analytic import analytic_operating_cost_example1
from tankcodesign.cost.codesign import (
    cost_report,
    npv_codesign_cost,
    npv_factor,
    seasonal_operating_cost,
    total_codesign_cost,
)
from tankcodesign.cost.operating import (
    CostBreakdown,
    StateCosts,
    evaluate_policy,
    expected_operating_cost,
    expected_state_cost,
    state_cost_table,
)
from tankcodesign.cost.truncated import partial_expectation, truncated_mean

__all__ = [
    "CostBreakdown",
    "StateCosts",
    "analytic_operating_cost_example1",
    "cost_report",
    "evaluate_policy",
    "expected_operating_cost",
    "expected_state_cost",
    "npv_codesign_cost",
    "npv_factor",
    "partial_expectation",
    "seasonal_operating_cost",
    "state_cost_table",
    "total_codesign_cost",
    "truncated_mean",
]
