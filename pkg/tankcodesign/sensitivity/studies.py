from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from tankcodesign.chain import build_chain, stationary, stationary_table
from tankcodesign.config import SpsaConfig
from tankcodesign.cost import evaluate_policy
from tankcodesign.model import ChainSpec, CostParams, PriceModel, QuantizedDemandModel, ThresholdPolicy
from tankcodesign.optimize import SpecBuilder, codesign_sweep
from tankcodesign.types import PolicyShape

logger = logging.getLogger(__name__)

PriceParameters = Tuple[float, float]

COLUMNS = ["mu", "sigma", "V", "capital", "operating_N", "total", "diff_pct"]


@dataclass(frozen=True)
class SensitivityRow:
    """
    One grid point of a sensitivity study.

    Attributes:
        mu: Mean price of the grid point (true or assumed, depending on the study).
        sigma: Price standard deviation of the grid point.
        volume: Tank volume of the design.
        capital: Capital cost.
        operating_N: Operating cost over the horizon under the true prices.
        total: capital + operating_N.
        diff_pct: Percentage difference against the baseline row.
    """

    mu: float
    sigma: float
    volume: float
    capital: float
    operating_N: float
    total: float
    diff_pct: float

    def to_dict(self) -> Dict[str, float]:
        """Row keyed by the CSV column names."""
        row = asdict(self)
        row["V"] = row.pop("volume")
        return {column: row[column] for column in COLUMNS}


def difference_pct(value: float, baseline: float) -> float:
    """
    Percentage difference 100·(value - baseline)/baseline; nan for a zero baseline.

    Examples:
        >>> round(difference_pct(1503717.0, 1105112.0), 2)
        36.07
    """
    if baseline == 0.0:
        return float("nan")

    return 100.0 * (value - baseline) / baseline


def rows_frame(rows: Sequence[SensitivityRow]) -> pd.DataFrame:
    """Rows as a frame with columns mu, sigma, V, capital, operating_N, total, diff_pct."""
    return pd.DataFrame([row.to_dict() for row in rows], columns=COLUMNS)


def sensitivity_fixed_design(
    policy: ThresholdPolicy,
    volume: float,
    true_params_grid: Sequence[PriceParameters],
    demand: QuantizedDemandModel,
    spec: ChainSpec,
    params: CostParams,
    N: int,
    baseline: Optional[PriceParameters] = None,
) -> List[SensitivityRow]:
    """
    Operating cost of a fixed design under different true price parameters.

    Every (μ, σ) is applied to all phases; the chain is rebuilt with the
    fixed thresholds and ℓ̄·N recomputed.

    Args:
        policy: Thresholds of the design.
        volume: Tank volume of the design.
        true_params_grid: True (μ, σ) values.
        demand: Demand model.
        spec: Chain geometry of the design.
        params: Cost parameters.
        N: Horizon in intervals.
        baseline: Parameters the differences refer to; the first grid point by default.

    Returns:
        One row per grid point, in grid order, with diff_pct on the operating cost.

    Raises:
        ValueError: If the grid is empty.
        ReducibleChainError: If a price model makes the chain reducible.
    """
    if not true_params_grid:
        raise ValueError("true_params_grid must be non-empty")

    def operating(point: PriceParameters) -> float:
        price = PriceModel.constant(point[0], point[1], spec.period_T)
        breakdown, _ = evaluate_policy(policy, price, demand, spec, params)
        return N * breakdown.total_per_interval

    grid = [(float(mu), float(sigma)) for mu, sigma in true_params_grid]
    values = {point: operating(point) for point in grid}
    baseline = (float(baseline[0]), float(baseline[1])) if baseline is not None else grid[0]
    reference = values[baseline] if baseline in values else operating(baseline)
    capital = params.capital_cost(volume)
    return [
        SensitivityRow(mu, sigma, volume, capital, value, capital + value, difference_pct(value, reference))
        for (mu, sigma), value in values.items()
    ]


def sensitivity_misassumed_design(
    assumed_grid: Sequence[PriceParameters],
    true_params: PriceParameters,
    candidates: Sequence[float],
    demand: QuantizedDemandModel,
    spec_builder: SpecBuilder,
    params: CostParams,
    N: int,
    spsa: SpsaConfig,
    shape: PolicyShape = "per_state",
    threads: int = 1,
) -> List[SensitivityRow]:
    """
    Total cost of designs made with assumed price parameters, under the true ones.

    For every assumed (μ̃, σ̃) the co-design sweep runs under the assumed
    prices, then the chosen volume and thresholds are evaluated under the
    true prices. Differences refer to the design made with the true
    parameters.

    Args:
        assumed_grid: Assumed (μ̃, σ̃) values.
        true_params: True (μ, σ).
        candidates: Candidate tank volumes.
        demand: Demand model.
        spec_builder: Maps a tank volume to its chain geometry.
        params: Cost parameters.
        N: Horizon in intervals.
        spsa: Optimizer configuration.
        shape: Threshold policy shape.
        threads: Worker threads of each sweep.

    Returns:
        One row per assumed grid point, in grid order, with diff_pct on the total cost.
    """
    if not assumed_grid:
        raise ValueError("assumed_grid must be non-empty")

    true_price = PriceModel.constant(true_params[0], true_params[1], demand.period_T)

    def design(point: PriceParameters) -> Tuple[float, float, float]:
        assumed = PriceModel.constant(point[0], point[1], demand.period_T)
        best = codesign_sweep(candidates, demand, assumed, spec_builder, params, N, spsa, shape, threads).best
        breakdown, _ = evaluate_policy(best.policy, true_price, demand, spec_builder(best.volume), params)
        logger.info("Design for assumed prices %s: tank volume %g", point, best.volume)
        return best.volume, best.capital, N * breakdown.total_per_interval

    true_point = (float(true_params[0]), float(true_params[1]))
    designs = {(float(mu), float(sigma)): design((mu, sigma)) for mu, sigma in assumed_grid}
    _, base_capital, base_operating = designs[true_point] if true_point in designs else design(true_point)
    reference = base_capital + base_operating
    rows: List[SensitivityRow] = []
    for (mu, sigma), (volume, capital, operating) in designs.items():
        total = capital + operating
        rows.append(SensitivityRow(mu, sigma, volume, capital, operating, total, difference_pct(total, reference)))

    return rows


def stationary_profiles(
    policy: ThresholdPolicy,
    demand: QuantizedDemandModel,
    spec: ChainSpec,
    params_grid: Sequence[PriceParameters],
) -> pd.DataFrame:
    """
    Stationary distribution of a fixed design under several price parameters.

    Returns:
        Frame with columns mu, sigma, i, kappa and pi.
    """
    frames = []
    for mu, sigma in params_grid:
        price = PriceModel.constant(mu, sigma, spec.period_T)
        table = stationary_table(stationary(build_chain(demand, price, spec, policy)))
        frames.append(table.assign(mu=mu, sigma=sigma)[["mu", "sigma", "i", "kappa", "pi"]])

    return pd.concat(frames, ignore_index=True)
