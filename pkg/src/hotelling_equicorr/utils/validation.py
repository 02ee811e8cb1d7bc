"""Input validation helpers in the style of ``sklearn.utils.validation``."""

import numbers

import numpy as np
from sklearn.utils.validation import check_array

from ..exceptions import DimensionMismatch, InvalidInput


def check_sample(data, name="sample", min_obs=2):
    """Return ``data`` as a finite float64 (n_obs, n_vars) array.

    One-dimensional input is read as a single variable.
    """
    try:
        arr = np.asarray(data, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        arr = check_array(arr, dtype=np.float64, ensure_all_finite=True,
                          ensure_min_samples=min_obs, input_name=name)
    except ValueError as exc:
        raise InvalidInput(f"{name}: {exc}") from exc
    return arr


def check_two_samples(x, y):
    x = check_sample(x, "x")
    y = check_sample(y, "y")
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatch(
            f"x has {x.shape[1]} variables but y has {y.shape[1]}"
        )
    return x, y


def check_positive_int(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise InvalidInput(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def check_seed(seed):
    """Seeds are unsigned 64-bit integers."""
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or not 0 <= seed < 2**64:
        raise InvalidInput(f"seed must be an integer in [0, 2**64), got {seed!r}")
    return int(seed)
