from tankcodesign.model.cost_params import CostParams
from tankcodesign.model.demand import QuantizedDemandModel
from tankcodesign.model.estimation import estimate_price_model, quantize_demand_series, quantize_levels
from tankcodesign.model.geometry import ChainSpec, ChainState
from tankcodesign.model.policy import ThresholdPolicy
from tankcodesign.model.price import PriceModel
from tankcodesign.model.series import TimeSeries, as_time_series, read_series_csv, write_series_csv
from tankcodesign.model.synthesis import draw_demand_levels, draw_prices, sample_demand_series, sample_price_series
from tankcodesign.model.utils import is_increasing, is_nondecreasing, is_nonincreasing
from tankcodesign.model.validation import Check, ValidationReport, validate_instance

__all__ = [
    "ChainSpec",
    "ChainState",
    "Check",
    "CostParams",
    "PriceModel",
    "QuantizedDemandModel",
    "ThresholdPolicy",
    "TimeSeries",
    "ValidationReport",
    "as_time_series",
    "draw_demand_levels",
    "draw_prices",
    "estimate_price_model",
    "is_increasing",
    "is_nondecreasing",
    "is_nonincreasing",
    "quantize_demand_series",
    "quantize_levels",
    "read_series_csv",
    "sample_demand_series",
    "sample_price_series",
    "validate_instance",
    "write_series_csv",
]
