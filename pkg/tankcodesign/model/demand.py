from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List

import numpy as np

from tankcodesign.constants import PROBABILITY_TOLERANCE
from tankcodesign.model.utils import frozen_array


@dataclass(frozen=True, eq=False)
class QuantizedDemandModel:
    """
    Periodic distribution of quantized water demand.

    The demand in an interval of phase κ equals τ·d with probability a_κ^τ,
    for levels τ = 0, ..., m - 1, where d is the demand quantum.

    The constructor checks structure (types, shape, finiteness). Value
    invariants (nonnegative probabilities, rows summing to one) are reported
    by `violations` so an invalid model can still reach `validate_instance`.

    Attributes:
        quantum_d: Demand quantum d (volume per interval).
        probs: Array [T × m] with probs[κ, τ] = a_κ^τ.

    Examples:
        >>> demand = QuantizedDemandModel(1.0, np.array([[0.0, 1.0]]))
        >>> demand.period_T, demand.levels_m, demand.max_level
        (1, 2, 1)
    """

    quantum_d: float
    probs: np.ndarray

    def __post_init__(self) -> None:
        """
        Validate structure and freeze the probability table.

        Raises:
            TypeError: If probs is not a numpy array.
            ValueError: If probs is not a non-empty finite 2-D table or quantum_d is not positive.
        """
        if not isinstance(self.probs, np.ndarray):
            raise TypeError(f"probs must be a numpy array, got {type(self.probs)}")

        if self.probs.ndim != 2:
            raise ValueError(f"probs must be a [T x m] table, got {self.probs.ndim} dimensions")

        if self.probs.shape[0] < 1 or self.probs.shape[1] < 1:
            raise ValueError("probs needs at least one phase and one demand level")

        if not np.all(np.isfinite(self.probs)):
            raise ValueError("probs must be finite")

        if not self.quantum_d > 0.0:
            raise ValueError(f"quantum_d must be positive, got {self.quantum_d}")

        object.__setattr__(self, "quantum_d", float(self.quantum_d))
        object.__setattr__(self, "probs", frozen_array(self.probs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantizedDemandModel):
            return False

        return self.quantum_d == other.quantum_d and np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        return hash((self.quantum_d, self.probs.tobytes()))

    @property
    def period_T(self) -> int:
        """Number of phases per cycle."""
        return int(self.probs.shape[0])

    @property
    def levels_m(self) -> int:
        """Number of demand levels τ = 0, ..., m - 1."""
        return int(self.probs.shape[1])

    @cached_property
    def support(self) -> np.ndarray:
        """Levels with positive probability in at least one phase."""
        return np.flatnonzero(np.any(self.probs > 0.0, axis=0))

    @property
    def min_level(self) -> int:
        """Smallest demand level that can occur."""
        return int(self.support[0]) if len(self.support) else 0

    @property
    def max_level(self) -> int:
        """Largest demand level that can occur."""
        return int(self.support[-1]) if len(self.support) else 0

    @cached_property
    def mean_levels(self) -> np.ndarray:
        """Expected demand level per phase, Σ_τ τ·a_κ^τ."""
        mean: np.ndarray = self.probs @ np.arange(self.levels_m, dtype=float)
        return mean

    def violations(self) -> List[str]:
        """
        Names of the violated value invariants.

        Returns:
            Empty list for a valid model.
        """
        failures: List[str] = []
        if np.any(self.probs < 0.0):
            failures.append("demand probability nonnegativity")

        if np.any(np.abs(self.probs.sum(axis=1) - 1.0) > PROBABILITY_TOLERANCE):
            failures.append("probability normalization")

        return failures

    @classmethod
    def constant(cls, quantum_d: float, level: int, period_T: int = 1) -> QuantizedDemandModel:
        """
        Create a deterministic demand model always drawing the same level.

        Args:
            quantum_d: Demand quantum.
            level: Demand level τ drawn with probability one.
            period_T: Number of phases.

        Returns:
            One-hot model with m = level + 1.

        Examples:
            >>> QuantizedDemandModel.constant(1.0, 1).probs.tolist()
            [[0.0, 1.0]]
        """
        probs = np.zeros((period_T, level + 1))
        probs[:, level] = 1.0
        return cls(quantum_d, probs)
