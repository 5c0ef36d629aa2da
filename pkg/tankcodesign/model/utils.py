import numpy as np


def is_increasing(array: np.ndarray) -> bool:
    """
    Check if array values are strictly increasing.

    Args:
        array: Array to check.

    Returns:
        True if each element is strictly greater than the previous one,
        False otherwise.

    Examples:
        >>> is_increasing(np.array([1, 2, 5, 10]))
        True
        >>> is_increasing(np.array([1, 2, 2, 5]))
        False
    """
    return bool(np.all(np.diff(array) > 0))


def is_nondecreasing(array: np.ndarray, tolerance: float = 0.0) -> bool:
    """
    Check if array values never decrease by more than a tolerance.

    Args:
        array: Array to check.
        tolerance: Allowed decrease between consecutive elements.

    Returns:
        True if every consecutive difference is at least -tolerance.

    Examples:
        >>> is_nondecreasing(np.array([1.0, 1.0, 2.0]))
        True
        >>> is_nondecreasing(np.array([2.0, 1.0]))
        False
    """
    return bool(np.all(np.diff(array) >= -tolerance))


def is_nonincreasing(array: np.ndarray, tolerance: float = 0.0) -> bool:
    """
    Check if array values never increase by more than a tolerance.

    Examples:
        >>> is_nonincreasing(np.array([3.0, 2.0, 2.0]))
        True
        >>> is_nonincreasing(np.array([1.0, 2.0]), tolerance=0.5)
        False
    """
    return is_nondecreasing(-np.asarray(array), tolerance)


def frozen_array(array: np.ndarray, dtype: type = float) -> np.ndarray:
    """
    Copy an array into a read-only array of the given dtype.

    Args:
        array: Source values.
        dtype: Target dtype.

    Returns:
        A read-only copy.
    """
    copy: np.ndarray = np.array(array, dtype=dtype, copy=True)
    copy.setflags(write=False)
    return copy
