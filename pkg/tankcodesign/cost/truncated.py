import numpy as np
from scipy.stats import norm

from tankcodesign.constants import DEGENERATE_CDF
from tankcodesign.errors import DegenerateTruncationError
from tankcodesign.types import Float


def partial_expectation(alpha: Float | np.ndarray, mu: Float | np.ndarray, sigma: Float | np.ndarray) -> np.ndarray:
    """
    Partial expectation ∫_{-∞}^{α} r f(r) dr of a Gaussian price.

    Equals μΦ(z) - σφ(z) with z = (α - μ)/σ, which is F(α)·E[r | r ≤ α]
    without the 0/0 at F(α) → 0. Vectorized; α = ±inf allowed.

    Args:
        alpha: Threshold(s).
        mu: Mean(s).
        sigma: Positive standard deviation(s).

    Returns:
        Partial expectation(s), broadcast over the arguments.

    Examples:
        >>> float(partial_expectation(np.inf, 20.0, 10.0))
        20.0
        >>> float(partial_expectation(-np.inf, 20.0, 10.0))
        0.0
    """
    z = (np.asarray(alpha, dtype=float) - mu) / sigma
    result: np.ndarray = mu * norm.cdf(z) - sigma * norm.pdf(z)
    return result


def truncated_mean(alpha: float, mu: float, sigma: float) -> float:
    """
    Expected Gaussian price given that it does not exceed alpha.

    E[r | r ≤ α] = μ - σ²f(α)/F(α) for r ~ N(μ, σ²), with f, F the density
    and distribution function.

    Args:
        alpha: Threshold; +inf gives μ.
        mu: Mean price.
        sigma: Standard deviation.

    Returns:
        The truncated mean.

    Raises:
        ValueError: If sigma is not positive.
        DegenerateTruncationError: If F(α) is below 1e-300.

    Examples:
        >>> truncated_mean(float("inf"), 20.0, 10.0)
        20.0
    """
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")

    z = (alpha - mu) / sigma
    if norm.cdf(z) < DEGENERATE_CDF:
        raise DegenerateTruncationError(f"degenerate truncation: threshold {alpha} is far below the price support")

    if np.isposinf(z):
        return float(mu)

    return float(mu - sigma * np.exp(norm.logpdf(z) - norm.logcdf(z)))
