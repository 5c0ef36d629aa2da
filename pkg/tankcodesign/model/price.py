from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.stats import norm

from tankcodesign.model.utils import frozen_array
from tankcodesign.types import Float


@dataclass(frozen=True, eq=False)
class PriceModel:
    """
    Periodic Gaussian electricity price model.

    The price in an interval of phase κ is drawn independently from
    N(μ_κ, σ_κ²). The second parameter is the standard deviation.

    Attributes:
        mean: Array [T] of mean prices μ_κ.
        std: Array [T] of standard deviations σ_κ.

    Examples:
        >>> price = PriceModel.constant(20.0, 10.0)
        >>> float(price.cdf(0, 20.0))
        0.5
    """

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self) -> None:
        """
        Validate shapes and freeze the parameter vectors.

        Raises:
            TypeError: If mean or std is not a numpy array.
            ValueError: If vectors are empty, not 1-D, differ in length or are not finite.
        """
        if not isinstance(self.mean, np.ndarray):
            raise TypeError(f"mean must be a numpy array, got {type(self.mean)}")

        if not isinstance(self.std, np.ndarray):
            raise TypeError(f"std must be a numpy array, got {type(self.std)}")

        if self.mean.ndim != 1 or len(self.mean) < 1:
            raise ValueError("mean must be a non-empty vector")

        if self.mean.shape != self.std.shape:
            raise ValueError(f"mean and std must have the same length, got {len(self.mean)} and {len(self.std)}")

        if not (np.all(np.isfinite(self.mean)) and np.all(np.isfinite(self.std))):
            raise ValueError("price parameters must be finite")

        object.__setattr__(self, "mean", frozen_array(self.mean))
        object.__setattr__(self, "std", frozen_array(self.std))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PriceModel):
            return False

        return np.array_equal(self.mean, other.mean) and np.array_equal(self.std, other.std)

    def __hash__(self) -> int:
        return hash((self.mean.tobytes(), self.std.tobytes()))

    @property
    def period_T(self) -> int:
        """Number of phases per cycle."""
        return len(self.mean)

    def violations(self) -> List[str]:
        """Names of the violated value invariants."""
        if np.any(self.std <= 0.0):
            return ["price standard deviation positivity"]

        return []

    def cdf(self, kappa: int, alpha: Float | np.ndarray) -> np.ndarray:
        """
        Probability that the phase-κ price is at or below alpha.

        Args:
            kappa: Phase index.
            alpha: Threshold(s); ±inf allowed.

        Returns:
            F_κ(alpha).
        """
        result: np.ndarray = norm.cdf(alpha, loc=self.mean[kappa], scale=self.std[kappa])
        return result

    def cdf_table(self, thresholds: np.ndarray) -> np.ndarray:
        """
        Pumping probabilities for a [T × k] table of thresholds.

        Args:
            thresholds: Thresholds with one row per phase.

        Returns:
            Array of F_κ(thresholds[κ, j]) with the same shape.
        """
        result: np.ndarray = norm.cdf(thresholds, loc=self.mean[:, None], scale=self.std[:, None])
        return result

    def with_parameters(self, mu: float, sigma: float) -> PriceModel:
        """
        Same period, with (μ, σ) applied to every phase.

        Args:
            mu: Mean price.
            sigma: Standard deviation.

        Returns:
            A new price model.
        """
        return PriceModel.constant(mu, sigma, self.period_T)

    @classmethod
    def constant(cls, mu: float, sigma: float, period_T: int = 1) -> PriceModel:
        """
        Price model with identical parameters in every phase.

        Args:
            mu: Mean price.
            sigma: Standard deviation.
            period_T: Number of phases.

        Returns:
            A price model with period_T phases.
        """
        return cls(np.full(period_T, float(mu)), np.full(period_T, float(sigma)))
