from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import sparse

from tankcodesign.model import (
    ChainSpec,
    CostParams,
    PriceModel,
    QuantizedDemandModel,
    ThresholdPolicy,
    draw_demand_levels,
    draw_prices,
    validate_instance,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SimResult:
    """
    Outcome of one closed-loop Monte Carlo run.

    Attributes:
        W_N: Time-average realized cost (1/N)·Σ_k ℓ_k.
        visit_counts: Visits per state in flat order over steps 0..N-1.
        enforced_events: Intervals started at or below n_p.
        empty_events: Intervals whose demand exceeded the stored volume.
        trajectory_summary: Mean volume per phase.
        seed: Seed of the run.
        N: Number of steps.
        x0: Initial volume index.
        costs: Realized cost of every step.
        transition_counts: Observed one-step transitions between flat states.
        trajectory: Per-step record `k,kappa,i,price,demand_tau,pumped,cost`, when requested.
    """

    W_N: float
    visit_counts: np.ndarray
    enforced_events: int
    empty_events: int
    trajectory_summary: np.ndarray
    seed: int
    N: int
    x0: int
    costs: np.ndarray
    transition_counts: sparse.csr_matrix
    trajectory: Optional[pd.DataFrame] = None

    def average_cost(self, horizon: int) -> float:
        """
        Time-average cost over the first `horizon` steps.

        Raises:
            ValueError: If horizon is not in [1, N].
        """
        if not 0 < horizon <= self.N:
            raise ValueError(f"horizon must lie in [1, {self.N}], got {horizon}")

        return float(np.mean(self.costs[:horizon]))


def _volume_path(
    thresholds: List[List[float]],
    prices: List[float],
    levels: List[int],
    phases: List[int],
    x0: int,
    zeta: int,
) -> Tuple[List[int], List[bool], int]:
    states = [x0]
    pumped: List[bool] = []
    empty_events = 0
    i = x0
    for price, level, kappa in zip(prices, levels, phases):
        pump = price <= thresholds[kappa][i]
        i = i + zeta * pump - level
        if i < 0:
            i = 0
            empty_events += 1

        pumped.append(pump)
        states.append(i)

    return states, pumped, empty_events


def simulate(
    policy: ThresholdPolicy,
    demand: QuantizedDemandModel,
    price: PriceModel,
    spec: ChainSpec,
    params: CostParams,
    N: int,
    x0: int,
    seed: int,
    record_trajectory: bool = False,
) -> SimResult:
    """
    Simulate the tank under the threshold policy.

    At step k of phase κ a price r_k and a demand level τ_k are drawn. The
    pump runs when i ≤ n_p, or when n_p < i ≤ n_s and r_k ≤ α_κ(iΔx).
    The step costs ε_p·r_k when pumping plus w when i ≤ n_r, and the volume
    index moves to max(0, i + ζ·u_k - τ_k). Prices and demands come from
    two independent streams spawned from the seed, so changing one model
    leaves the draws of the other unchanged.

    Args:
        policy: Threshold policy.
        demand: Demand model.
        price: Price model.
        spec: Chain geometry.
        params: Cost parameters.
        N: Number of steps.
        x0: Initial volume index.
        seed: Seed of the run.
        record_trajectory: Keep the per-step record.

    Returns:
        The run outcome.

    Raises:
        InvalidInstanceError: If the instance is invalid.
        DimensionMismatchError: If the policy does not match the geometry.
        ValueError: If N < 1 or x0 is out of range.
    """
    validate_instance(demand, price, spec).raise_for_failures()
    thresholds = policy.pump_thresholds(spec)
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")

    if not 0 <= x0 <= spec.n:
        raise ValueError(f"x0 must lie in [0, {spec.n}], got {x0}")

    price_stream, demand_stream = np.random.SeedSequence(seed).spawn(2)
    phases = np.arange(N + 1) % spec.period_T
    prices = draw_prices(price, phases[:-1], np.random.default_rng(price_stream))
    levels = draw_demand_levels(demand, phases[:-1], np.random.default_rng(demand_stream))
    path, pump_path, empty_events = _volume_path(
        thresholds.tolist(), prices.tolist(), levels.tolist(), phases[:-1].tolist(), x0, spec.zeta
    )
    states = np.asarray(path, dtype=np.int64)
    pumped = np.asarray(pump_path, dtype=bool)
    visited = states[:-1]
    costs = params.eps_p * prices * pumped + params.penalty_w * (visited <= spec.n_r)

    flat = phases * (spec.n + 1) + states
    visit_counts = np.bincount(flat[:-1], minlength=spec.size)
    transition_counts = sparse.coo_matrix(
        (np.ones(N, dtype=np.int64), (flat[:-1], flat[1:])), shape=(spec.size, spec.size)
    ).tocsr()

    phase_visits = np.bincount(phases[:-1], minlength=spec.period_T)
    phase_volume = np.bincount(phases[:-1], weights=visited * spec.delta_x, minlength=spec.period_T)
    summary = np.divide(phase_volume, phase_visits, out=np.full(spec.period_T, np.nan), where=phase_visits > 0)

    trajectory = None
    if record_trajectory:
        trajectory = pd.DataFrame(
            {
                "k": np.arange(N),
                "kappa": phases[:-1],
                "i": visited,
                "price": prices,
                "demand_tau": levels,
                "pumped": pumped.astype(np.int64),
                "cost": costs,
            }
        )

    result = SimResult(
        W_N=float(np.mean(costs)),
        visit_counts=visit_counts,
        enforced_events=int(np.count_nonzero(visited <= spec.n_p)),
        empty_events=empty_events,
        trajectory_summary=summary,
        seed=seed,
        N=N,
        x0=x0,
        costs=costs,
        transition_counts=transition_counts,
        trajectory=trajectory,
    )
    logger.debug("Simulated %d steps from x0=%d with seed %d: W_N=%.6g", N, x0, seed, result.W_N)
    return result


def empirical_transition_matrix(counts: sparse.spmatrix) -> sparse.csr_matrix:
    """
    Row-normalized transition counts.

    Rows of states never left stay zero.

    Examples:
        >>> counts = sparse.csr_matrix(np.array([[1, 3], [0, 0]]))
        >>> empirical_transition_matrix(counts).toarray().tolist()
        [[0.25, 0.75], [0.0, 0.0]]
    """
    counts = sparse.csr_matrix(counts, dtype=float)
    totals = np.asarray(counts.sum(axis=1)).ravel()
    scale = np.divide(1.0, totals, out=np.zeros_like(totals), where=totals > 0)
    matrix: sparse.csr_matrix = sparse.diags(scale) @ counts
    return sparse.csr_matrix(matrix)
