from __future__ import annotations

import numpy as np
from pydantic import BaseModel, Field

from tankcodesign.errors import InvalidInstanceError
from tankcodesign.model import ChainSpec, QuantizedDemandModel
from tankcodesign.types import GeometryRuleKind


def as_index(volume: float, delta_x: float, name: str) -> int:
    """
    Convert a volume to an integer number of quanta.

    Args:
        volume: Volume, expected to be a multiple of delta_x.
        delta_x: Volume quantum.
        name: Name used in the error message.

    Returns:
        volume / delta_x as an integer.

    Raises:
        InvalidInstanceError: If volume is not a multiple of delta_x.

    Examples:
        >>> as_index(9.6, 0.1, "tank volume")
        96
    """
    ratio = volume / delta_x
    index = int(round(ratio))
    if not np.isclose(ratio, index, rtol=0.0, atol=1e-6):
        raise InvalidInstanceError(f"{name} {volume} is not a multiple of the volume quantum {delta_x}")

    return index


class GeometryRule(BaseModel):
    """
    Rule turning a tank volume into a chain geometry.

    The volume quantum is Δx = d·Δt with d the demand quantum. With the
    "margins" rule, n_p·Δx = enforced_volume and n_s·Δx = V - threshold_margin.
    With the "demand_levels" rule, n_p = max(τ) - 1 and n_s = n - max(τ).
    In both cases n_r·Δx = penalty_volume.

    Attributes:
        rule: Which rule to apply.
        zeta: Pump inflow as a multiple of the demand quantum.
        delta_t: Interval length converting the demand quantum to a volume.
        enforced_volume: Reserve volume x̲ below which pumping is enforced.
        threshold_margin: Distance V - x̄ between the tank top and the threshold band top.
        penalty_volume: Volume at or below which the penalty applies.

    Examples:
        >>> rule = GeometryRule(zeta=2, threshold_margin=1.0)
        >>> rule.build(8.0, QuantizedDemandModel.constant(1.0, 1))
        ChainSpec(n=8, n_p=0, n_s=7, n_r=0, zeta=2, delta_x=1.0, period_T=1)
    """

    rule: GeometryRuleKind = Field(default="margins", description="Geometry rule")
    zeta: int = Field(..., ge=1, description="Pump inflow as a multiple of the demand quantum")
    delta_t: float = Field(default=1.0, gt=0.0, description="Interval length")
    enforced_volume: float = Field(default=0.0, ge=0.0, description="Enforced-pumping reserve volume")
    threshold_margin: float = Field(default=0.0, ge=0.0, description="Tank top minus the threshold band top")
    penalty_volume: float = Field(default=0.0, ge=0.0, description="Penalty ceiling volume")

    def delta_x(self, demand: QuantizedDemandModel) -> float:
        """Volume quantum Δx = d·Δt."""
        return demand.quantum_d * self.delta_t

    def build(self, volume: float, demand: QuantizedDemandModel) -> ChainSpec:
        """
        Chain geometry for a tank volume.

        Args:
            volume: Tank volume V.
            demand: Demand model supplying d, T and max(τ).

        Returns:
            The chain geometry; ordering and guards are checked by validation.

        Raises:
            InvalidInstanceError: If a volume is not a multiple of Δx.
        """
        delta_x = self.delta_x(demand)
        n = as_index(volume, delta_x, "tank volume")
        if self.rule == "demand_levels":
            n_p = demand.max_level - 1
            n_s = n - demand.max_level
        else:
            n_p = as_index(self.enforced_volume, delta_x, "enforced volume")
            n_s = n - as_index(self.threshold_margin, delta_x, "threshold margin")

        n_r = as_index(self.penalty_volume, delta_x, "penalty volume")
        return ChainSpec(n, n_p, n_s, n_r, self.zeta, delta_x, demand.period_T)
