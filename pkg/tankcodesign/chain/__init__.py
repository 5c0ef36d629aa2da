from tankcodesign.chain.analytic import (
    analytic_pi0_example1,
    analytic_stationary_example1,
    example1_demand,
    example1_geometry,
)
from tankcodesign.chain.irreducible import check_irreducible, closed_classes, count_communicating_classes
from tankcodesign.chain.stationary import (
    StationaryDistribution,
    balance_residual,
    stationary,
    visit_frequencies_match,
)
from tankcodesign.chain.tables import stationary_table, transition_table
from tankcodesign.chain.transition import TransitionMatrix, build_chain, pump_probabilities

__all__ = [
    "StationaryDistribution",
    "TransitionMatrix",
    "analytic_pi0_example1",
    "analytic_stationary_example1",
    "balance_residual",
    "build_chain",
    "check_irreducible",
    "closed_classes",
    "count_communicating_classes",
    "example1_demand",
    "example1_geometry",
    "pump_probabilities",
    "stationary",
    "stationary_table",
    "transition_table",
    "visit_frequencies_match",
]
