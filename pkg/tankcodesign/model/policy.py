from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from tankcodesign.errors import DimensionMismatchError
from tankcodesign.model.geometry import ChainSpec
from tankcodesign.model.utils import frozen_array
from tankcodesign.types import PolicyShape


@dataclass(frozen=True, eq=False)
class ThresholdPolicy:
    """
    State-dependent price thresholds for the threshold-pumping band.

    thresholds[κ, i - n_p - 1] = α_κ(iΔx) for n_p < i ≤ n_s. In the band
    the pump runs when the price is at or below the threshold; below the
    band it always runs and above it never does.

    Attributes:
        thresholds: Array [T × (n_s - n_p)]; ±inf allowed (always/never pump).

    Examples:
        >>> spec = ChainSpec(n=8, n_p=0, n_s=7, n_r=0, zeta=2, delta_x=1.0)
        >>> policy = ThresholdPolicy.constant(20.0, spec)
        >>> policy.thresholds.shape
        (1, 7)
        >>> policy.to_vector("constant").tolist()
        [20.0]
    """

    thresholds: np.ndarray

    def __post_init__(self) -> None:
        """
        Validate structure and freeze the table.

        Raises:
            TypeError: If thresholds is not a numpy array.
            ValueError: If thresholds is not a 2-D table or contains nan.
        """
        if not isinstance(self.thresholds, np.ndarray):
            raise TypeError(f"thresholds must be a numpy array, got {type(self.thresholds)}")

        if self.thresholds.ndim != 2:
            raise ValueError(f"thresholds must be a [T x band] table, got {self.thresholds.ndim} dimensions")

        if np.any(np.isnan(self.thresholds)):
            raise ValueError("thresholds must not contain nan")

        object.__setattr__(self, "thresholds", frozen_array(self.thresholds))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThresholdPolicy):
            return False

        return np.array_equal(self.thresholds, other.thresholds)

    def __hash__(self) -> int:
        return hash(self.thresholds.tobytes())

    @property
    def shape(self) -> Tuple[int, int]:
        """(T, band size)."""
        return int(self.thresholds.shape[0]), int(self.thresholds.shape[1])

    def check_dimensions(self, spec: ChainSpec) -> None:
        """
        Check that the table matches a chain geometry.

        Raises:
            DimensionMismatchError: If the shape is not (T, n_s - n_p).
        """
        expected = (spec.period_T, spec.band_size)
        if self.shape != expected:
            raise DimensionMismatchError(f"policy has shape {self.shape}, chain geometry needs {expected}")

    def violations(self, lower: float, upper: float) -> List[str]:
        """
        Names of the violated threshold invariants for a box [lower, upper].
        """
        if not np.all(np.isfinite(self.thresholds)):
            return ["finite thresholds"]

        if np.any(self.thresholds < lower) or np.any(self.thresholds > upper):
            return ["threshold box"]

        return []

    def pump_thresholds(self, spec: ChainSpec) -> np.ndarray:
        """
        Effective threshold for every state, [T × (n + 1)].

        +inf below and at n_p (enforced pumping), the policy threshold in the
        band and -inf above n_s (no pumping), so that the pump runs exactly
        when price ≤ threshold.

        Args:
            spec: Chain geometry matching this policy.

        Returns:
            Table indexed [κ, i].
        """
        self.check_dimensions(spec)
        table = np.full((spec.period_T, spec.n + 1), -np.inf)
        table[:, : spec.n_p + 1] = np.inf
        table[:, spec.n_p + 1 : spec.n_s + 1] = self.thresholds
        return table

    def to_vector(self, shape: PolicyShape = "per_state") -> np.ndarray:
        """
        Decision vector for an optimizer.

        Args:
            shape: "constant" keeps one value, "per_phase" one per phase,
                "per_state" the full table flattened row by row.

        Returns:
            1-D decision vector.

        Raises:
            ValueError: If the table is not constant along the collapsed axes.
        """
        if shape == "per_state":
            return self.thresholds.ravel().copy()

        if shape == "per_phase":
            if not np.all(self.thresholds == self.thresholds[:, :1]):
                raise ValueError("policy is not constant within each phase")
            return self.thresholds[:, 0].copy()

        if not np.all(self.thresholds == self.thresholds.flat[0]):
            raise ValueError("policy is not constant")

        return self.thresholds.ravel()[:1].copy()

    @staticmethod
    def dimension(spec: ChainSpec, shape: PolicyShape = "per_state") -> int:
        """
        Length of the decision vector for a geometry and shape.

        Examples:
            >>> spec = ChainSpec(n=8, n_p=0, n_s=7, n_r=0, zeta=2, delta_x=1.0)
            >>> ThresholdPolicy.dimension(spec), ThresholdPolicy.dimension(spec, "constant")
            (7, 1)
        """
        if shape == "constant":
            return 1

        if shape == "per_phase":
            return spec.period_T

        return spec.period_T * spec.band_size

    @classmethod
    def from_vector(cls, vector: np.ndarray, spec: ChainSpec, shape: PolicyShape = "per_state") -> ThresholdPolicy:
        """
        Expand a decision vector into a full threshold table.

        Args:
            vector: Decision vector of length `dimension(spec, shape)`.
            spec: Chain geometry.
            shape: How the vector maps onto the table.

        Returns:
            Threshold policy for the geometry.

        Raises:
            DimensionMismatchError: If the vector length does not match.
        """
        vector = np.asarray(vector, dtype=float).ravel()
        expected = cls.dimension(spec, shape)
        if len(vector) != expected:
            raise DimensionMismatchError(f"decision vector has length {len(vector)}, expected {expected}")

        table_shape = (spec.period_T, spec.band_size)
        if shape == "constant":
            return cls(np.full(table_shape, vector[0]))

        if shape == "per_phase":
            return cls(np.repeat(vector[:, None], spec.band_size, axis=1))

        return cls(vector.reshape(table_shape))

    @classmethod
    def constant(cls, alpha: float, spec: ChainSpec) -> ThresholdPolicy:
        """Same threshold for every band state and phase."""
        return cls(np.full((spec.period_T, spec.band_size), float(alpha)))

    @classmethod
    def at_mean(cls, mean: np.ndarray, spec: ChainSpec) -> ThresholdPolicy:
        """Threshold α_κ = μ_κ in every band state of phase κ."""
        return cls(np.repeat(np.asarray(mean, dtype=float)[:, None], spec.band_size, axis=1))
