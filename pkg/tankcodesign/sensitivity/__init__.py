from tankcodesign.sensitivity.studies import (
    SensitivityRow,
    difference_pct,
    rows_frame,
    sensitivity_fixed_design,
    sensitivity_misassumed_design,
    stationary_profiles,
)

__all__ = [
    "SensitivityRow",
    "difference_pct",
    "rows_frame",
    "sensitivity_fixed_design",
    "sensitivity_misassumed_design",
    "stationary_profiles",
]
