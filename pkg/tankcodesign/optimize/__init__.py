from tankcodesign.optimize.box import Box
from tankcodesign.optimize.codesign import (
    CandidateResult,
    CoDesignResult,
    PolicyOptimum,
    SpecBuilder,
    codesign_sweep,
    initial_vector,
    operating_objective,
    optimize_policy_for_tank,
    select_best,
)
from tankcodesign.optimize.spsa import (
    SpsaResult,
    calibrate_gain,
    finite_difference_gradient,
    perturbation_gradient,
    spsa_minimize,
)
from tankcodesign.optimize.surface import cost_surface

__all__ = [
    "Box",
    "CandidateResult",
    "CoDesignResult",
    "PolicyOptimum",
    "SpecBuilder",
    "SpsaResult",
    "calibrate_gain",
    "codesign_sweep",
    "cost_surface",
    "finite_difference_gradient",
    "initial_vector",
    "operating_objective",
    "optimize_policy_for_tank",
    "perturbation_gradient",
    "select_best",
    "spsa_minimize",
]
