from __future__ import annotations

from pathlib import Path
from typing import Optional, Tuple, Union

from pydantic import BaseModel

from tankcodesign.config.cost import CostConfig
from tankcodesign.config.instance import DemandConfig, PriceConfig
from tankcodesign.model import ChainSpec, PriceModel, QuantizedDemandModel


class ModelDocument(BaseModel):
    """
    JSON document holding fitted or configured models.

    Attributes:
        demand: Demand model, inline.
        price: Price model, inline.
        chain_spec: Chain geometry, if one was built.
        cost_params: Cost parameters, if known.
    """

    demand: DemandConfig
    price: PriceConfig
    chain_spec: Optional[ChainSpec] = None
    cost_params: Optional[CostConfig] = None

    @classmethod
    def from_models(
        cls,
        demand: QuantizedDemandModel,
        price: PriceModel,
        spec: Optional[ChainSpec] = None,
        cost: Optional[CostConfig] = None,
    ) -> ModelDocument:
        """Document of the given models."""
        return cls(
            demand=DemandConfig.from_model(demand),
            price=PriceConfig.from_model(price),
            chain_spec=spec,
            cost_params=cost,
        )

    def to_models(self) -> Tuple[QuantizedDemandModel, PriceModel, Optional[ChainSpec]]:
        """Demand model, price model and chain geometry of the document."""
        return self.demand.to_model(), self.price.to_model(), self.chain_spec

    def write(self, path: Union[str, Path]) -> None:
        """Write the document as indented JSON."""
        Path(path).write_text(self.model_dump_json(indent=2, exclude_none=True))

    @classmethod
    def read(cls, path: Union[str, Path]) -> ModelDocument:
        """Read a document written by `write`."""
        return cls.model_validate_json(Path(path).read_text())
