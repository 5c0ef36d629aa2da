from __future__ import annotations

from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from tankcodesign.model import PriceModel


class SpsaConfig(BaseModel):
    """
    Configuration of the simultaneous-perturbation optimizer.

    Gains follow a_k = a0/(A + k + 1)^alpha_exp and c_k = c0/(k + 1)^gamma_exp.
    Unset gains are filled in by `resolve`: A as 10% of the iterations,
    c0 as a tenth of the mean price deviation, and a0 calibrated at the
    starting point so that the first step moves about `calibration_step`
    per coordinate. The default box is [μ_min - 5σ_max, μ_max + 5σ_max].

    Attributes:
        iterations: Iterations per restart.
        a0: Step gain numerator.
        c0: Perturbation gain numerator.
        A: Step gain stability constant.
        alpha_exp: Step gain decay exponent.
        gamma_exp: Perturbation gain decay exponent.
        box_lo: Lower threshold bound.
        box_hi: Upper threshold bound.
        seed: Seed of the perturbation streams.
        restarts: Independent restarts; the best result is kept.
        calibration_step: Target size of the first step when a0 is calibrated.
        refine: Polish the best point with a bounded quasi-Newton search.

    Examples:
        >>> config = SpsaConfig(iterations=200).resolve(PriceModel.constant(20.0, 10.0))
        >>> config.A, config.c0, (config.box_lo, config.box_hi)
        (20.0, 1.0, (-30.0, 70.0))
    """

    iterations: int = Field(default=1000, ge=1, description="Iterations per restart")
    a0: Optional[float] = Field(default=None, gt=0.0, description="Step gain numerator, calibrated when unset")
    c0: Optional[float] = Field(default=None, gt=0.0, description="Perturbation gain numerator")
    A: Optional[float] = Field(default=None, ge=0.0, description="Step gain stability constant")
    alpha_exp: float = Field(default=0.602, gt=0.5, le=1.0, description="Step gain decay exponent")
    gamma_exp: float = Field(default=0.101, gt=0.0, le=0.5, description="Perturbation gain decay exponent")
    box_lo: Optional[float] = Field(default=None, description="Lower threshold bound")
    box_hi: Optional[float] = Field(default=None, description="Upper threshold bound")
    seed: int = Field(default=0, ge=0, description="Seed of the perturbation streams")
    restarts: int = Field(default=5, ge=1, le=100, description="Number of independent restarts")
    calibration_step: float = Field(default=0.5, gt=0.0, description="Target first step size per coordinate")
    refine: bool = Field(default=True, description="Polish the best point with L-BFGS-B")

    @model_validator(mode="after")
    def validate_box(self) -> SpsaConfig:
        """
        Validate the threshold box.

        Raises:
            ValueError: If both bounds are set and box_lo >= box_hi.
        """
        if self.box_lo is not None and self.box_hi is not None and not self.box_lo < self.box_hi:
            raise ValueError(f"box_lo must be below box_hi, got [{self.box_lo}, {self.box_hi}]")

        return self

    def resolve(self, price: PriceModel) -> SpsaConfig:
        """
        Fill in A, c0 and the box from the price model.

        a0 stays unset and is calibrated by the optimizer.

        Args:
            price: Price model the thresholds are optimized against.

        Returns:
            A copy with A, c0, box_lo and box_hi set.
        """
        spread = 5.0 * float(np.max(price.std))
        update = {
            "A": self.A if self.A is not None else 0.1 * self.iterations,
            "c0": self.c0 if self.c0 is not None else 0.1 * float(np.mean(price.std)),
            "box_lo": self.box_lo if self.box_lo is not None else float(np.min(price.mean)) - spread,
            "box_hi": self.box_hi if self.box_hi is not None else float(np.max(price.mean)) + spread,
        }
        resolved = self.model_copy(update=update)
        if not resolved.box_lo < resolved.box_hi:  # type: ignore[operator]
            raise ValueError(f"box_lo must be below box_hi, got [{resolved.box_lo}, {resolved.box_hi}]")

        return resolved
