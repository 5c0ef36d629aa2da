from tankcodesign.config.cost import CapitalCostConfig, CostConfig
from tankcodesign.config.document import ModelDocument
from tankcodesign.config.geometry import GeometryRule, as_index
from tankcodesign.config.instance import DemandConfig, Instance, PriceConfig
from tankcodesign.config.run import (
    HorizonConfig,
    RunConfig,
    SensitivityConfig,
    SimulationConfig,
    SurfaceConfig,
    load_run_config,
)
from tankcodesign.config.spsa import SpsaConfig

__all__ = [
    "CapitalCostConfig",
    "CostConfig",
    "DemandConfig",
    "GeometryRule",
    "HorizonConfig",
    "Instance",
    "ModelDocument",
    "PriceConfig",
    "RunConfig",
    "SensitivityConfig",
    "SimulationConfig",
    "SpsaConfig",
    "SurfaceConfig",
    "as_index",
    "load_run_config",
]
