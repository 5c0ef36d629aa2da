import numpy as np

from tankcodesign.model.demand import QuantizedDemandModel
from tankcodesign.model.price import PriceModel
from tankcodesign.model.series import TimeSeries


def get_domain(length: int, start: int = 0) -> np.ndarray:
    """
    Interval indices of a synthetic series.

    Args:
        length: Number of intervals.
        start: First interval index.

    Returns:
        Array start, ..., start + length - 1.
    """
    return np.arange(start, start + length, dtype=np.int64)


def draw_demand_levels(demand: QuantizedDemandModel, phases: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Draw one demand level per interval by inverse-CDF sampling of its phase row.

    Args:
        demand: Demand model.
        phases: Phase of every interval.
        rng: Random generator.

    Returns:
        Integer levels τ with the same length as phases.
    """
    cumulative = np.cumsum(demand.probs, axis=1)
    cumulative[:, -1] = 1.0
    u = rng.random(len(phases))
    levels: np.ndarray = np.empty(len(phases), dtype=np.int64)
    for kappa in range(demand.period_T):
        mask = phases == kappa
        levels[mask] = np.searchsorted(cumulative[kappa], u[mask], side="right")

    return np.minimum(levels, demand.levels_m - 1)


def draw_prices(price: PriceModel, phases: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Draw one Gaussian price per interval from the parameters of its phase.

    Args:
        price: Price model.
        phases: Phase of every interval.
        rng: Random generator.

    Returns:
        Prices with the same length as phases.
    """
    prices: np.ndarray = rng.normal(price.mean[phases], price.std[phases])
    return prices


def sample_demand_series(demand: QuantizedDemandModel, length: int, seed: int) -> TimeSeries:
    """
    Synthesize a demand series from a quantized demand model.

    Args:
        demand: Demand model.
        length: Number of intervals.
        seed: Seed of the random generator.

    Returns:
        Series of demand volumes τ·d.
    """
    index = get_domain(length)
    levels = draw_demand_levels(demand, np.mod(index, demand.period_T), np.random.default_rng(seed))
    return TimeSeries(index, levels * demand.quantum_d)


def sample_price_series(price: PriceModel, length: int, seed: int) -> TimeSeries:
    """
    Synthesize a price series from a Gaussian price model.

    Args:
        price: Price model.
        length: Number of intervals.
        seed: Seed of the random generator.

    Returns:
        Series of prices.
    """
    index = get_domain(length)
    prices = draw_prices(price, np.mod(index, price.period_T), np.random.default_rng(seed))
    return TimeSeries(index, prices)
