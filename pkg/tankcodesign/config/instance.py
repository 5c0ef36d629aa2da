from __future__ import annotations

from functools import cached_property
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from tankcodesign.config.cost import CostConfig
from tankcodesign.config.geometry import GeometryRule
from tankcodesign.constants import EXTREME_PRICE_CUTOFF, SECONDS_PER_INTERVAL
from tankcodesign.model import (
    ChainSpec,
    CostParams,
    PriceModel,
    QuantizedDemandModel,
    ValidationReport,
    estimate_price_model,
    quantize_demand_series,
    read_series_csv,
    validate_instance,
)


def _rebase(path: Optional[Path], base_dir: Path) -> Optional[Path]:
    if path is None or path.is_absolute():
        return path

    return base_dir / path


class DemandConfig(BaseModel):
    """
    Demand model given inline or fitted from a `timestamp,value` CSV.

    Attributes:
        quantum_d: Demand quantum d.
        probs: Rows of a_κ^τ, one per phase.
        csv: Demand series to quantize instead.
        period_T: Phases per cycle when fitting.
        interval_seconds: Interval length used to index ISO timestamps.
    """

    quantum_d: float = Field(..., gt=0.0, description="Demand quantum")
    probs: Optional[List[List[float]]] = Field(default=None, description="Demand-level probabilities per phase")
    csv: Optional[Path] = Field(default=None, description="Demand series CSV")
    period_T: int = Field(default=1, ge=1, description="Phases per cycle")
    interval_seconds: int = Field(default=SECONDS_PER_INTERVAL, gt=0, description="Interval length in seconds")

    @model_validator(mode="after")
    def validate_source(self) -> DemandConfig:
        """
        Validate that exactly one source is given and the period agrees.

        Raises:
            ValueError: If both or neither of probs and csv is given, or len(probs) != period_T.
        """
        if (self.probs is None) == (self.csv is None):
            raise ValueError("exactly one of probs and csv must be given")

        if self.probs is not None and "period_T" in self.model_fields_set and len(self.probs) != self.period_T:
            raise ValueError(f"probs has {len(self.probs)} rows, period_T is {self.period_T}")

        return self

    def to_model(self) -> QuantizedDemandModel:
        """Build or fit the demand model."""
        if self.probs is not None:
            return QuantizedDemandModel(self.quantum_d, np.asarray(self.probs, dtype=float))

        series = read_series_csv(self.csv, self.interval_seconds)  # type: ignore[arg-type]
        return quantize_demand_series(series, self.quantum_d, self.period_T)

    @classmethod
    def from_model(cls, demand: QuantizedDemandModel) -> DemandConfig:
        """Inline configuration of a demand model."""
        return cls(quantum_d=demand.quantum_d, probs=demand.probs.tolist(), period_T=demand.period_T)


class PriceConfig(BaseModel):
    """
    Gaussian price model given inline or estimated from a `timestamp,value` CSV.

    Attributes:
        mean: Mean price per phase.
        std: Price standard deviation per phase.
        csv: Price series to estimate from instead.
        period_T: Phases per cycle when estimating.
        extreme_cutoff: Prices above this are discarded when estimating.
        interval_seconds: Interval length used to index ISO timestamps.
    """

    mean: Optional[List[float]] = Field(default=None, description="Mean price per phase")
    std: Optional[List[float]] = Field(default=None, description="Price standard deviation per phase")
    csv: Optional[Path] = Field(default=None, description="Price series CSV")
    period_T: int = Field(default=1, ge=1, description="Phases per cycle")
    extreme_cutoff: float = Field(default=EXTREME_PRICE_CUTOFF, gt=0.0, description="Extreme price cutoff")
    interval_seconds: int = Field(default=SECONDS_PER_INTERVAL, gt=0, description="Interval length in seconds")

    @model_validator(mode="after")
    def validate_source(self) -> PriceConfig:
        """
        Validate that either both parameter vectors or a CSV is given.

        Raises:
            ValueError: If the sources are missing, mixed or of different lengths.
        """
        inline = self.mean is not None and self.std is not None
        if inline == (self.csv is not None) or (self.mean is None) != (self.std is None):
            raise ValueError("give either mean and std, or csv")

        if inline and len(self.mean) != len(self.std):  # type: ignore[arg-type]
            raise ValueError("mean and std must have the same length")

        return self

    def to_model(self) -> PriceModel:
        """Build or estimate the price model."""
        if self.mean is not None and self.std is not None:
            return PriceModel(np.asarray(self.mean, dtype=float), np.asarray(self.std, dtype=float))

        series = read_series_csv(self.csv, self.interval_seconds)  # type: ignore[arg-type]
        return estimate_price_model(series, self.period_T, self.extreme_cutoff)

    @classmethod
    def from_model(cls, price: PriceModel) -> PriceConfig:
        """Inline configuration of a price model."""
        return cls(mean=price.mean.tolist(), std=price.std.tolist(), period_T=price.period_T)


class Instance(BaseModel):
    """
    A co-design instance: demand, price, geometry rule and costs.

    Models backed by CSV files are fitted once, on first access.

    Attributes:
        demand: Demand model source.
        price: Price model source.
        geometry: Rule building the chain geometry of a tank volume.
        cost: Cost parameters.
    """

    demand: DemandConfig
    price: PriceConfig
    geometry: GeometryRule
    cost: CostConfig = Field(default_factory=CostConfig)

    @cached_property
    def demand_model(self) -> QuantizedDemandModel:
        """The quantized demand model."""
        return self.demand.to_model()

    @cached_property
    def price_model(self) -> PriceModel:
        """The Gaussian price model."""
        return self.price.to_model()

    @property
    def params(self) -> CostParams:
        """Cost parameters for the evaluation routines."""
        return self.cost.to_params()

    def spec_for(self, volume: float) -> ChainSpec:
        """Chain geometry of a tank volume."""
        return self.geometry.build(volume, self.demand_model)

    def check(self, volume: float) -> ValidationReport:
        """Validate the instance at a tank volume."""
        return validate_instance(self.demand_model, self.price_model, self.spec_for(volume))

    def with_base_dir(self, base_dir: Path) -> Instance:
        """Copy with relative CSV paths resolved against base_dir."""
        return self.model_copy(
            update={
                "demand": self.demand.model_copy(update={"csv": _rebase(self.demand.csv, base_dir)}),
                "price": self.price.model_copy(update={"csv": _rebase(self.price.csv, base_dir)}),
            }
        )
