from typing import List, Sequence, Tuple

import pandas as pd

from tankcodesign.cost import analytic_operating_cost_example1, evaluate_policy
from tankcodesign.model import CostParams, PriceModel, QuantizedDemandModel, ThresholdPolicy
from tankcodesign.optimize.codesign import SpecBuilder


def cost_surface(
    volumes: Sequence[float],
    thresholds: Sequence[float],
    demand: QuantizedDemandModel,
    price: PriceModel,
    spec_builder: SpecBuilder,
    params: CostParams,
    N: int,
    closed_form: bool = False,
) -> pd.DataFrame:
    """
    Co-design cost over a grid of tank volumes and constant thresholds.

    Args:
        volumes: Tank volumes.
        thresholds: Constant thresholds applied to every band state and phase.
        demand: Demand model.
        price: Price model.
        spec_builder: Maps a tank volume to its chain geometry.
        params: Cost parameters.
        N: Horizon in intervals.
        closed_form: Evaluate ℓ̄ by the closed form of the constant unit-demand
            example (integer volumes, single phase) instead of solving the chain.

    Returns:
        Frame with columns V, alpha, capital, operating_N and total, volume-major.
    """
    rows: List[Tuple[float, float, float, float, float]] = []
    for volume in volumes:
        spec = spec_builder(volume)
        capital = params.capital_cost(volume)
        for alpha in thresholds:
            if closed_form:
                per_interval = analytic_operating_cost_example1(alpha, spec.n, price, params)
            else:
                breakdown, _ = evaluate_policy(ThresholdPolicy.constant(alpha, spec), price, demand, spec, params)
                per_interval = breakdown.total_per_interval

            rows.append((volume, alpha, capital, N * per_interval, capital + N * per_interval))

    return pd.DataFrame(rows, columns=["V", "alpha", "capital", "operating_N", "total"])
