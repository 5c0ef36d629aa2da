import numpy as np

from tankcodesign.chain.analytic import analytic_stationary_example1
from tankcodesign.cost.truncated import partial_expectation
from tankcodesign.model import CostParams, PriceModel


def analytic_operating_cost_example1(alpha: float, volume: int, price: PriceModel, params: CostParams) -> float:
    """
    Closed-form ℓ̄(α, V) of the constant-demand, constant-threshold example.

    π⁰(ε_p μ + w) + Σ_{i=1}^{V-1} πⁱ ε_p ∫_{-∞}^{α} r f(r) dr, with the
    penalty band reduced to the empty state.

    Args:
        alpha: Constant threshold.
        volume: Integer tank size V ≥ 2.
        price: Single-phase price model.
        params: Cost parameters.

    Returns:
        Expected operating cost per interval.
    """
    pi = analytic_stationary_example1(alpha, volume, price)
    mu, sigma = float(price.mean[0]), float(price.std[0])
    band_cost = params.eps_p * float(partial_expectation(alpha, mu, sigma))
    return float(pi[0] * (params.eps_p * mu + params.penalty_w) + np.sum(pi[1:volume]) * band_cost)
