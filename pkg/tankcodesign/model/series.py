from __future__ import annotations

from pathlib import Path
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from tankcodesign.constants import SECONDS_PER_INTERVAL


class TimeSeries(NamedTuple):
    """
    A sampled series on the interval grid.

    Attributes:
        index: Integer interval indices k.
        values: Sample values (demand volume or price).
    """

    index: np.ndarray
    values: np.ndarray

    def phases(self, period_T: int) -> np.ndarray:
        """Phase κ = mod(k, T) of every sample."""
        phases: np.ndarray = np.mod(self.index, period_T)
        return phases


SeriesLike = Union[TimeSeries, Sequence[Tuple[int, float]]]


def as_time_series(series: SeriesLike) -> TimeSeries:
    """
    Normalize a series argument into a TimeSeries.

    Args:
        series: TimeSeries or a sequence of (interval index, value) pairs.

    Returns:
        TimeSeries with integer index and float values.

    Raises:
        TypeError: If series is neither a TimeSeries nor a sequence of pairs.
        ValueError: If the series is empty or the arrays differ in length.

    Examples:
        >>> as_time_series([(0, 1.5), (1, 2.0)]).index.tolist()
        [0, 1]
    """
    if isinstance(series, TimeSeries):
        index, values = series

    elif isinstance(series, Sequence):
        pairs = np.asarray(series, dtype=float).reshape(-1, 2) if len(series) else np.empty((0, 2))
        index, values = pairs[:, 0], pairs[:, 1]

    else:
        raise TypeError("series must be either a TimeSeries or a sequence of (index, value) pairs")

    index = np.asarray(index)
    values = np.asarray(values, dtype=float)
    if index.ndim != 1 or values.ndim != 1 or len(index) != len(values):
        raise ValueError("series index and values must be one-dimensional and of equal length")

    if len(values) == 0:
        raise ValueError("series must be non-empty")

    return TimeSeries(index.astype(np.int64), values)


def read_series_csv(path: Union[str, Path], interval_seconds: int = SECONDS_PER_INTERVAL) -> TimeSeries:
    """
    Read a `timestamp,value` CSV into a TimeSeries.

    Integer timestamps are taken as interval indices. Any other timestamps
    are parsed as ISO-8601 and converted to interval indices counted from
    the first sample.

    Args:
        path: CSV file with a header row.
        interval_seconds: Interval length for timestamp conversion.

    Returns:
        The series on the interval grid.

    Raises:
        ValueError: If the required columns are missing.
    """
    frame = pd.read_csv(path)
    missing = {"timestamp", "value"}.difference(frame.columns)
    if missing:
        raise ValueError(f"{path}: missing column(s) {sorted(missing)}")

    timestamps = frame["timestamp"]
    if pd.api.types.is_integer_dtype(timestamps):
        index = timestamps.to_numpy(dtype=np.int64)
    else:
        parsed = pd.to_datetime(timestamps, utc=True)
        seconds = (parsed - parsed.iloc[0]).dt.total_seconds().to_numpy()
        index = np.floor(seconds / interval_seconds).astype(np.int64)

    return as_time_series(TimeSeries(index, frame["value"].to_numpy(dtype=float)))


def write_series_csv(series: TimeSeries, path: Union[str, Path]) -> None:
    """Write a TimeSeries as a `timestamp,value` CSV with integer timestamps."""
    pd.DataFrame({"timestamp": series.index, "value": series.values}).to_csv(path, index=False)
