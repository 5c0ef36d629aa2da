from __future__ import annotations

from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from tankcodesign.config import SpsaConfig

if TYPE_CHECKING:
    from typing_extensions import Self


class Box(NamedTuple):
    """
    The box [lower, upper]^dim holding every price threshold.

    Examples:
        >>> box = Box(-30.0, 70.0)
        >>> box.length, box.midpoint
        (100.0, 20.0)
        >>> box.project(np.array([-50.0, 20.0, 90.0])).tolist()
        [-30.0, 20.0, 70.0]
    """

    lower: float
    upper: float

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, point: np.ndarray) -> bool:
        """True if every coordinate lies in the box."""
        return bool(np.all((self.lower <= point) & (point <= self.upper)))

    def project(self, point: np.ndarray) -> np.ndarray:
        """Euclidean projection of a point onto the box."""
        projected: np.ndarray = np.clip(point, self.lower, self.upper)
        return projected

    @classmethod
    def from_config(cls, config: SpsaConfig) -> Self:
        """
        Box of a resolved optimizer configuration.

        Raises:
            ValueError: If the bounds are unset or not ordered.
        """
        if config.box_lo is None or config.box_hi is None:
            raise ValueError("optimizer configuration has no threshold box; call resolve first")

        if not config.box_lo < config.box_hi:
            raise ValueError(f"empty threshold box [{config.box_lo}, {config.box_hi}]")

        return cls(config.box_lo, config.box_hi)
