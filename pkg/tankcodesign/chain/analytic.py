"""
Closed-form stationary distribution of the constant-demand, constant-threshold chain.

Geometry: one phase, unit demand, pump inflow of two quanta, enforced pumping
only when empty (n_p = 0) and threshold pumping up to n_s = V - 1. From the
empty state the volume always rises by one; in the band it rises by one with
probability p = F(α) and falls by one otherwise; the full state always falls.
"""

import numpy as np
from scipy.special import logsumexp

from tankcodesign.errors import InvalidInstanceError, ReducibleChainError
from tankcodesign.model import ChainSpec, PriceModel, QuantizedDemandModel

SYMMETRIC_BAND = 1e-6


def example1_geometry(volume: int) -> ChainSpec:
    """
    Chain geometry of the constant-demand example for an integer tank size.

    Examples:
        >>> example1_geometry(8)
        ChainSpec(n=8, n_p=0, n_s=7, n_r=0, zeta=2, delta_x=1.0, period_T=1)
    """
    return ChainSpec(n=int(volume), n_p=0, n_s=int(volume) - 1, n_r=0, zeta=2, delta_x=1.0, period_T=1)


def example1_demand() -> QuantizedDemandModel:
    """Constant unit demand."""
    return QuantizedDemandModel.constant(1.0, 1)


def _pumping_probability(alpha: float, volume: int, price: PriceModel) -> float:
    if price.period_T != 1:
        raise InvalidInstanceError("closed form needs a single-phase price model", ["period agreement"])

    if int(volume) != volume or volume < 2:
        raise InvalidInstanceError(
            f"closed form needs an integer tank size of at least 2, got {volume}", ["band ordering"]
        )

    return float(price.cdf(0, alpha))


def analytic_stationary_example1(alpha: float, volume: int, price: PriceModel) -> np.ndarray:
    """
    Full stationary vector π⁰, ..., π^V of the constant-demand chain.

    Uses the cut equations π⁰ = (1 - p)π¹, pπⁱ = (1 - p)πⁱ⁺¹ inside the band
    and π^V = pπ^{V-1}, evaluated in log space.

    Args:
        alpha: Constant price threshold.
        volume: Integer tank size V ≥ 2.
        price: Single-phase price model.

    Returns:
        Array of V + 1 probabilities.

    Raises:
        InvalidInstanceError: If the geometry does not match.
        ReducibleChainError: If p is 0 or 1.
    """
    p = _pumping_probability(alpha, volume, price)
    if not 0.0 < p < 1.0:
        raise ReducibleChainError(f"stationary distribution not unique: pumping probability is {p}")

    volume = int(volume)
    log_weights = np.empty(volume + 1)
    log_weights[0] = 0.0
    log_weights[1] = -np.log1p(-p)
    log_weights[1:volume] = log_weights[1] + np.arange(volume - 1) * (np.log(p) - np.log1p(-p))
    log_weights[volume] = np.log(p) + log_weights[volume - 1]
    pi: np.ndarray = np.exp(log_weights - logsumexp(log_weights))
    return pi


def analytic_pi0_example1(alpha: float, volume: int, price: PriceModel) -> float:
    """
    Stationary probability of the empty state in the constant-demand chain.

    1/(2V) when F(α) = 1/2, otherwise

        F(1-2F)(1-F)^{V-1} / [F(1-2F)(1-F)^{V-1} + F^V(1-2F) + F(1-F)^{V-1} - F^V].

    Both numerator and denominator vanish as F → 1/2, so a narrow band
    around the symmetric point is evaluated from the cut equations instead.

    Args:
        alpha: Constant price threshold.
        volume: Integer tank size V ≥ 2.
        price: Single-phase price model.

    Returns:
        π⁰.

    Raises:
        InvalidInstanceError: If the geometry does not match.
        ReducibleChainError: If p is 0 or 1.
    """
    p = _pumping_probability(alpha, volume, price)
    if p == 0.5:
        return 1.0 / (2.0 * volume)

    if abs(1.0 - 2.0 * p) < SYMMETRIC_BAND:
        return float(analytic_stationary_example1(alpha, volume, price)[0])

    if not 0.0 < p < 1.0:
        raise ReducibleChainError(f"stationary distribution not unique: pumping probability is {p}")

    q = 1.0 - p
    skew = 1.0 - 2.0 * p
    numerator = p * skew * q ** (volume - 1)
    denominator = numerator + p**volume * skew + p * q ** (volume - 1) - p**volume
    return float(numerator / denominator)
