import logging
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from tankcodesign.cost import evaluate_policy
from tankcodesign.model import ChainSpec, CostParams, PriceModel, QuantizedDemandModel, ThresholdPolicy
from tankcodesign.simulate.simulator import simulate

logger = logging.getLogger(__name__)


def relative_error(value: float, reference: float) -> float:
    """|value - reference| / |reference|, or the absolute error for a zero reference."""
    if reference == 0.0:
        return abs(value)

    return abs(value - reference) / abs(reference)


def convergence_report(
    policy: ThresholdPolicy,
    demand: QuantizedDemandModel,
    price: PriceModel,
    spec: ChainSpec,
    params: CostParams,
    seeds: Sequence[int],
    N_grid: Sequence[int],
    x0s: Optional[Sequence[int]] = None,
) -> pd.DataFrame:
    """
    Relative gap between simulated time averages and the expected operating cost.

    One run of max(N_grid) steps per (seed, x0); W_N at every horizon of the
    grid is the running average of that run.

    Args:
        policy: Threshold policy.
        demand: Demand model.
        price: Price model.
        spec: Chain geometry.
        params: Cost parameters.
        seeds: Run seeds.
        N_grid: Horizons.
        x0s: Initial volume indices; the empty and the full tank by default.

    Returns:
        Frame with columns seed, N, x0, W_N and rel_error.

    Raises:
        ValueError: If seeds or N_grid is empty.
    """
    if not seeds or not N_grid:
        raise ValueError("seeds and N_grid must be non-empty")

    expected, _ = evaluate_policy(policy, price, demand, spec, params)
    reference = expected.total_per_interval
    horizons = sorted(set(N_grid))
    rows: List[Tuple[int, int, int, float, float]] = []
    for seed in seeds:
        for x0 in x0s if x0s is not None else (0, spec.n):
            result = simulate(policy, demand, price, spec, params, horizons[-1], x0, seed)
            for horizon in horizons:
                average = result.average_cost(horizon)
                rows.append((seed, horizon, x0, average, relative_error(average, reference)))

    logger.info("Convergence report over %d seeds against expected cost %.6g", len(seeds), reference)
    return pd.DataFrame(rows, columns=["seed", "N", "x0", "W_N", "rel_error"])
