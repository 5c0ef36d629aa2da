from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from tankcodesign.cost.operating import CostBreakdown, evaluate_policy
from tankcodesign.errors import InvalidInstanceError
from tankcodesign.model import ChainSpec, CostParams, PriceModel, QuantizedDemandModel, ThresholdPolicy


def _check_volume(volume: float, spec: ChainSpec) -> None:
    if not np.isclose(volume, spec.volume):
        raise InvalidInstanceError(f"tank volume {volume} does not match the chain geometry volume {spec.volume}")


def npv_factor(N: int, K: int, beta: float, xi: float) -> float:
    """
    Discount factor Σ_{j=1}^{N/K} ((1 + β)/(1 + ξ))^j applied to annual operating cost.

    Args:
        N: Horizon in intervals.
        K: Intervals per year; must divide N.
        beta: Annual inflation rate.
        xi: Annual discount rate.

    Returns:
        The factor; N/K when β = ξ.

    Raises:
        ValueError: If K is not positive, does not divide N, or xi = -1.

    Examples:
        >>> npv_factor(20, 10, 0.03, 0.03)
        2.0
    """
    if K <= 0:
        raise ValueError(f"K must be positive, got {K}")

    if N % K:
        raise ValueError(f"K = {K} must divide N = {N}")

    if xi == -1.0:
        raise ValueError("xi must not be -1")

    years = np.arange(1, N // K + 1)
    return float(np.sum(((1.0 + beta) / (1.0 + xi)) ** years))


def total_codesign_cost(
    volume: float,
    policy: ThresholdPolicy,
    price: PriceModel,
    demand: QuantizedDemandModel,
    spec: ChainSpec,
    params: CostParams,
    N: int,
) -> float:
    """
    Co-design cost J = c_t(V) + N·ℓ̄(𝛂, V).

    Args:
        volume: Tank volume V; must match spec.volume.
        policy: Thresholds.
        price: Price model.
        demand: Demand model.
        spec: Chain geometry.
        params: Cost parameters.
        N: Horizon in intervals.

    Returns:
        Total cost over the horizon.
    """
    _check_volume(volume, spec)
    breakdown, _ = evaluate_policy(policy, price, demand, spec, params)
    capital = params.capital_cost(volume)
    if N == 0:
        return capital

    return capital + N * breakdown.total_per_interval


def npv_codesign_cost(
    volume: float,
    policy: ThresholdPolicy,
    price: PriceModel,
    demand: QuantizedDemandModel,
    spec: ChainSpec,
    params: CostParams,
    N: int,
    K: int,
    beta: float,
    xi: float,
) -> float:
    """
    Net present co-design cost c_t(V) + K·ℓ̄·Σ_{j=1}^{N/K} ((1 + β)/(1 + ξ))^j.

    Equals `total_codesign_cost` when β = ξ.

    Raises:
        ValueError: If K is not positive or does not divide N.
    """
    factor = npv_factor(N, K, beta, xi)
    _check_volume(volume, spec)
    breakdown, _ = evaluate_policy(policy, price, demand, spec, params)
    return params.capital_cost(volume) + K * breakdown.total_per_interval * factor


def seasonal_operating_cost(seasons: Sequence[Tuple[float, int]]) -> float:
    """
    Operating cost of a horizon split into seasons, Σ_s N_s·ℓ̄_s.

    Args:
        seasons: (ℓ̄ per interval, number of intervals) per season.

    Returns:
        Total operating cost.

    Examples:
        >>> seasonal_operating_cost([(2.0, 10), (1.0, 5)])
        25.0
    """
    return float(sum(per_interval * length for per_interval, length in seasons))


def cost_report(
    capital: float,
    breakdown: CostBreakdown,
    N: int,
    npv: Optional[float] = None,
) -> Dict[str, float]:
    """
    Cost report with capital, per-source operating cost and totals.

    Args:
        capital: Capital cost c_t(V).
        breakdown: Expected operating cost per interval.
        N: Horizon in intervals.
        npv: Net present cost, if computed.

    Returns:
        Mapping with keys capital, enforced, threshold, penalty,
        per_interval, operating_N, total_N and optionally npv.
    """
    operating = N * breakdown.total_per_interval
    report = {"capital": capital, **breakdown.to_dict(), "operating_N": operating, "total_N": capital + operating}
    if npv is not None:
        report["npv"] = npv

    return report
