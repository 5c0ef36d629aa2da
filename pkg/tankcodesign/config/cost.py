from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator

from tankcodesign.model import CostParams
from tankcodesign.model.utils import is_increasing, is_nondecreasing


class CapitalCostConfig(BaseModel):
    """
    Capital cost of a tank as a function of its volume.

    Either linear, c_t(V) = per_unit·V, or piecewise linear through a table
    of (volume, cost) points, held constant outside the table.

    Attributes:
        per_unit: Cost per volume unit c_v.
        table: (volume, cost) points with increasing volumes and nondecreasing costs.

    Examples:
        >>> CapitalCostConfig(per_unit=10000.0)(9.6)
        96000.0
        >>> CapitalCostConfig(table=[(0.0, 0.0), (10.0, 50.0)])(4.0)
        20.0
    """

    per_unit: Optional[float] = Field(default=None, ge=0.0, description="Linear cost per volume unit")
    table: Optional[List[Tuple[float, float]]] = Field(
        default=None, description="Piecewise-linear (volume, cost) table"
    )

    @model_validator(mode="after")
    def validate_cost(self) -> CapitalCostConfig:
        """
        Validate that exactly one form is given and that it is monotonic.

        Raises:
            ValueError: If both or neither form is given, or the table is not monotonic.
        """
        if (self.per_unit is None) == (self.table is None):
            raise ValueError("exactly one of per_unit and table must be given")

        if self.table is not None:
            if len(self.table) < 2:
                raise ValueError("capital cost table needs at least two points")

            volumes, costs = np.asarray(self.table, dtype=float).T
            if not is_increasing(volumes):
                raise ValueError("capital cost table volumes must be strictly increasing")

            if not is_nondecreasing(costs):
                raise ValueError("capital cost must be nondecreasing in volume")

        return self

    def __call__(self, volume: float) -> float:
        if self.per_unit is not None:
            return self.per_unit * volume

        volumes, costs = np.asarray(self.table, dtype=float).T
        return float(np.interp(volume, volumes, costs))


class CostConfig(BaseModel):
    """
    Cost parameters of a run.

    Attributes:
        eps_p: Pump energy per interval.
        penalty_w: Penalty per interval at or below the penalty volume.
        capital: Capital cost of the tank.
    """

    eps_p: float = Field(default=1.0, gt=0.0, description="Pump energy per interval")
    penalty_w: float = Field(default=0.0, ge=0.0, description="Penalty per interval near empty")
    capital: CapitalCostConfig = Field(default_factory=lambda: CapitalCostConfig(per_unit=0.0))

    def to_params(self) -> CostParams:
        """Cost parameters for the evaluation routines."""
        return CostParams(self.eps_p, self.penalty_w, self.capital)
