from typing import Final

PROBABILITY_TOLERANCE: Final[float] = 1e-12
STATIONARY_RESIDUAL_TOLERANCE: Final[float] = 1e-10
DENSE_SOLVER_LIMIT: Final[int] = 5000
DEGENERATE_CDF: Final[float] = 1e-300
EXTREME_PRICE_CUTOFF: Final[float] = 500.0
TIE_RELATIVE_TOLERANCE: Final[float] = 1e-9
QUANTIZATION_DECIMALS: Final[int] = 9
CSV_SIGNIFICANT_DIGITS: Final[int] = 6
SECONDS_PER_INTERVAL: Final[int] = 3600
