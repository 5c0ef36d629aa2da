from tankcodesign.simulate.convergence import convergence_report, relative_error
from tankcodesign.simulate.simulator import SimResult, empirical_transition_matrix, simulate

__all__ = [
    "SimResult",
    "convergence_report",
    "empirical_transition_matrix",
    "relative_error",
    "simulate",
]
