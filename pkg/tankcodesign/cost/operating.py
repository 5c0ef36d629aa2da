from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, Tuple

import numpy as np

from tankcodesign.chain import StationaryDistribution, build_chain, stationary
from tankcodesign.cost.truncated import partial_expectation
from tankcodesign.errors import DimensionMismatchError
from tankcodesign.model import ChainSpec, CostParams, PriceModel, QuantizedDemandModel, ThresholdPolicy


@dataclass(frozen=True)
class CostBreakdown:
    """
    Long-run expected operating cost per interval, split by source.

    Attributes:
        enforced: Energy cost of enforced pumping at or below n_p.
        threshold: Energy cost of price-triggered pumping in the band.
        penalty: Penalty for intervals at or below n_r.
    """

    enforced: float
    threshold: float
    penalty: float

    @property
    def total_per_interval(self) -> float:
        """ℓ̄, the sum of the three components."""
        return self.enforced + self.threshold + self.penalty

    def to_dict(self) -> Dict[str, float]:
        """Components and their total."""
        return {**asdict(self), "per_interval": self.total_per_interval}


@dataclass(frozen=True, eq=False)
class StateCosts:
    """
    Expected one-interval cost of every state, split by source.

    Attributes:
        enforced: Table [T × (n + 1)] of ε_p·μ_κ at or below n_p.
        threshold: Table of ε_p·∫_{-∞}^{α} r f_κ(r) dr in the band.
        penalty: Table of w at or below n_r.
    """

    enforced: np.ndarray
    threshold: np.ndarray
    penalty: np.ndarray

    @property
    def total(self) -> np.ndarray:
        """ℓ̄_κ(i) for every state."""
        total: np.ndarray = self.enforced + self.threshold + self.penalty
        return total


def expected_state_cost(
    i: int,
    kappa: int,
    policy: ThresholdPolicy,
    price: PriceModel,
    spec: ChainSpec,
    params: CostParams,
) -> float:
    """
    Expected cost ℓ̄_κ(i) of one interval spent in state (i, κ).

    ε_p·μ_κ at or below n_p, ε_p·∫_{-∞}^{α} r f_κ(r) dr in the band, zero
    above n_s, plus the penalty w at or below n_r.

    Args:
        i: Volume index.
        kappa: Phase.
        policy: Thresholds matching the geometry.
        price: Price model.
        spec: Chain geometry.
        params: Cost parameters.

    Returns:
        Expected cost of the interval.

    Raises:
        IndexError: If (i, κ) is not a state of the geometry.
        InvalidInstanceError: If the cost parameters are invalid.
    """
    spec.flat_index(i, kappa)
    policy.check_dimensions(spec)
    params.raise_for_violations()
    cost = 0.0
    if i <= spec.n_p:
        cost += params.eps_p * float(price.mean[kappa])
    elif i <= spec.n_s:
        alpha = policy.thresholds[kappa, i - spec.n_p - 1]
        cost += params.eps_p * float(partial_expectation(alpha, price.mean[kappa], price.std[kappa]))

    if i <= spec.n_r:
        cost += params.penalty_w

    return cost


def state_cost_table(policy: ThresholdPolicy, price: PriceModel, spec: ChainSpec, params: CostParams) -> StateCosts:
    """
    Expected one-interval cost of every state, vectorized.

    Args:
        policy: Thresholds matching the geometry.
        price: Price model.
        spec: Chain geometry.
        params: Cost parameters.

    Returns:
        Per-source cost tables indexed [κ, i].

    Raises:
        InvalidInstanceError: If the cost parameters are invalid.
    """
    policy.check_dimensions(spec)
    params.raise_for_violations()
    shape = (spec.period_T, spec.n + 1)
    enforced = np.zeros(shape)
    enforced[:, : spec.n_p + 1] = params.eps_p * price.mean[:, None]

    threshold = np.zeros(shape)
    threshold[:, spec.n_p + 1 : spec.n_s + 1] = params.eps_p * partial_expectation(
        policy.thresholds, price.mean[:, None], price.std[:, None]
    )

    penalty = np.zeros(shape)
    penalty[:, : spec.n_r + 1] = params.penalty_w
    return StateCosts(enforced, threshold, penalty)


def expected_operating_cost(
    distribution: StationaryDistribution,
    policy: ThresholdPolicy,
    price: PriceModel,
    spec: ChainSpec,
    params: CostParams,
) -> CostBreakdown:
    """
    Long-run expected operating cost ℓ̄ = Σ_κ Σ_i π_κ^i ℓ̄_κ(i).

    Args:
        distribution: Stationary distribution of the chain built from the same policy, price and geometry.
        policy: Thresholds.
        price: Price model.
        spec: Chain geometry.
        params: Cost parameters.

    Returns:
        Per-source breakdown of ℓ̄.

    Raises:
        DimensionMismatchError: If the distribution belongs to another geometry.
    """
    if distribution.spec != spec:
        raise DimensionMismatchError("stationary distribution was solved for a different chain geometry")

    weights = distribution.table()
    costs = state_cost_table(policy, price, spec, params)
    return CostBreakdown(
        enforced=float(np.sum(weights * costs.enforced)),
        threshold=float(np.sum(weights * costs.threshold)),
        penalty=float(np.sum(weights * costs.penalty)),
    )


def evaluate_policy(
    policy: ThresholdPolicy,
    price: PriceModel,
    demand: QuantizedDemandModel,
    spec: ChainSpec,
    params: CostParams,
) -> Tuple[CostBreakdown, StationaryDistribution]:
    """
    Build the chain, solve it and compute the expected operating cost.

    Returns:
        Cost breakdown and the stationary distribution it was weighted with.
    """
    distribution = stationary(build_chain(demand, price, spec, policy))
    return expected_operating_cost(distribution, policy, price, spec, params), distribution
