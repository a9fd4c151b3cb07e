"""Small numeric helpers shared across modules.

Every public operation runs on either float64 arrays (the production path)
or object arrays of ``fractions.Fraction`` (the exact path used by test
oracles at small truncation orders).  The helpers here keep those two paths
behind one code surface.
"""

from __future__ import annotations

import math
import numbers

import numpy as np

from .errors import BadExponentError


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def as_vector(values) -> np.ndarray:
    """1-D array; float64 for plain numbers, object dtype for exact scalars."""
    arr = np.asarray(values)
    if arr.dtype == object:
        return arr
    if not np.issubdtype(arr.dtype, np.number):
        # e.g. a list of Fractions arrives as dtype object already; anything
        # else non-numeric is a caller bug worth surfacing as-is
        return np.asarray(values, dtype=object)
    return arr.astype(float)


def accurate_sum(values):
    """Compensated sum for floats, plain sum for exact scalars."""
    arr = np.asarray(values)
    if arr.dtype == object:
        return sum(arr.tolist(), start=0)
    return math.fsum(arr)


def check_exponent(k) -> None:
    if not isinstance(k, numbers.Real) or not k >= 1:
        raise BadExponentError(f"k must be a real exponent >= 1, got {k!r}")


def abs_pow(values, k):
    """Elementwise |x|**k, staying exact for object arrays with integer k."""
    arr = np.asarray(values)
    if arr.dtype == object and float(k).is_integer():
        return np.abs(arr) ** int(k)
    if arr.dtype == object:
        return np.abs(arr.astype(float)) ** float(k)
    return np.abs(arr) ** float(k)


def index_pow(indices, expo, exact: bool):
    """n**expo for an integer index array; exact integers when possible.

    Zero indices are the caller's responsibility (0**0 is taken as 1 by
    both numpy and Python, which is the convention used throughout).
    """
    idx = np.asarray(indices)
    if exact and float(expo).is_integer() and expo >= 0:
        return idx.astype(object) ** int(expo)
    return idx.astype(float) ** float(expo)


def norm_weights(count: int, k, exact: bool) -> np.ndarray:
    """Index weights (1, 1**(k-1), 2**(k-1), ...) used by the k-norms.

    Position 0 carries weight 1 regardless of k, the continuous-in-k
    convention for the single place the 0-th term ever enters a norm.
    """
    w = index_pow(np.arange(count), k - 1, exact)
    if count > 0:
        w[0] = 1 if is_exact(w) else 1.0
    return w
