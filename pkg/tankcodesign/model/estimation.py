import logging

import numpy as np

from tankcodesign.constants import EXTREME_PRICE_CUTOFF, QUANTIZATION_DECIMALS
from tankcodesign.errors import InsufficientDataError
from tankcodesign.model.demand import QuantizedDemandModel
from tankcodesign.model.price import PriceModel
from tankcodesign.model.series import SeriesLike, as_time_series

logger = logging.getLogger(__name__)


def quantize_levels(values: np.ndarray, quantum_d: float) -> np.ndarray:
    """
    Round demands to the nearest multiple of the quantum, ties away from zero.

    Args:
        values: Nonnegative demand samples.
        quantum_d: Demand quantum.

    Returns:
        Integer levels τ.

    Raises:
        ValueError: If a demand is negative.

    Examples:
        >>> quantize_levels(np.array([0.8, 1.2]), 0.1).tolist()
        [8, 12]
        >>> quantize_levels(np.array([0.75]), 0.5).tolist()
        [2]
        >>> quantize_levels(np.array([0.25, 0.35]), 0.1).tolist()
        [3, 4]
    """
    if np.any(values < 0.0):
        raise ValueError("demand samples must be nonnegative")

    # 0.25 / 0.1 == 2.4999999999999996
    ratio = np.round(values / quantum_d, QUANTIZATION_DECIMALS)
    levels: np.ndarray = np.floor(ratio + 0.5).astype(np.int64)
    return levels


def quantize_demand_series(series: SeriesLike, quantum_d: float, period_T: int) -> QuantizedDemandModel:
    """
    Estimate a quantized demand model from a demand series.

    Each sample is rounded to the nearest multiple of quantum_d and a_κ^τ is
    the frequency of level τ among the samples of phase κ = mod(k, T). The
    number of levels is one more than the largest observed level; levels
    never observed keep probability zero.

    Args:
        series: Demand samples on the interval grid.
        quantum_d: Demand quantum d.
        period_T: Phases per cycle.

    Returns:
        Demand model with rows summing to one.

    Raises:
        ValueError: If quantum_d or period_T is not positive.
        InsufficientDataError: If some phase has no samples.
    """
    if not quantum_d > 0.0:
        raise ValueError(f"quantum_d must be positive, got {quantum_d}")

    if period_T < 1:
        raise ValueError(f"period_T must be positive, got {period_T}")

    series = as_time_series(series)
    levels = quantize_levels(series.values, quantum_d)
    phases = series.phases(period_T)
    m = int(levels.max()) + 1

    counts = np.bincount(phases * m + levels, minlength=period_T * m).reshape(period_T, m).astype(float)
    totals = counts.sum(axis=1)
    empty = np.flatnonzero(totals == 0)
    if len(empty):
        raise InsufficientDataError(f"insufficient data for phase {empty[0]}")

    logger.debug("Quantized %d demand samples into %d levels over %d phases", len(levels), m, period_T)
    return QuantizedDemandModel(quantum_d, counts / totals[:, None])


def estimate_price_model(
    series: SeriesLike,
    period_T: int,
    extreme_cutoff: float = EXTREME_PRICE_CUTOFF,
) -> PriceModel:
    """
    Estimate per-phase Gaussian price parameters.

    Samples above the extreme cutoff are discarded, then the mean and the
    sample standard deviation (n - 1 denominator) are computed per phase.

    Args:
        series: Price samples on the interval grid.
        period_T: Phases per cycle; 1 pools all samples.
        extreme_cutoff: Prices strictly above this are removed.

    Returns:
        Price model with positive standard deviations.

    Raises:
        ValueError: If extreme_cutoff or period_T is not positive.
        InsufficientDataError: If a phase keeps fewer than two samples or has zero variance.
    """
    if not extreme_cutoff > 0.0:
        raise ValueError(f"extreme_cutoff must be positive, got {extreme_cutoff}")

    if period_T < 1:
        raise ValueError(f"period_T must be positive, got {period_T}")

    series = as_time_series(series)
    keep = series.values <= extreme_cutoff
    if not np.all(keep):
        logger.info("Removed %d extreme price samples above %g", int(np.sum(~keep)), extreme_cutoff)

    values = series.values[keep]
    phases = series.phases(period_T)[keep]
    mean = np.empty(period_T)
    std = np.empty(period_T)
    for kappa in range(period_T):
        samples = values[phases == kappa]
        if len(samples) < 2:
            raise InsufficientDataError(f"insufficient data for phase {kappa}: {len(samples)} price sample(s)")

        mean[kappa] = np.mean(samples)
        std[kappa] = np.std(samples, ddof=1)
        if not std[kappa] > 0.0:
            raise InsufficientDataError(f"insufficient data for phase {kappa}: price variance is zero")

    return PriceModel(mean, std)
