"""Truncated normal-matrix algebra.

A *normal* matrix here is a lower triangular matrix with nonzero diagonal
entries, truncated to its leading (N+1) x (N+1) section.  Triangularity
makes the truncation lossless: every output with row index <= N is exact.

The module also builds the two semimatrices associated with a normal
matrix A: the series-to-sequence matrix ``bar_of(A)`` whose (n, v) entry is
the row tail-sum  sum_{i=v..n} a_ni,  and the series-to-series matrix
``hat_of(A)`` obtained by differencing consecutive bar rows.  The hat
matrix inherits A's diagonal, hence stays normal and invertible by forward
substitution.
"""

from __future__ import annotations

import numpy as np

from ._util import as_vector, is_exact
from .errors import LengthMismatchError, ShapeMismatchError, ZeroDiagonalError


class NormalMatrix:
    """Dense lower-triangular matrix with a nonzero diagonal.

    ``entries`` is a read-only square ndarray (float64 or object dtype for
    exact rational work); everything above the diagonal is identically zero.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeMismatchError(f"expected a square array, got shape {entries.shape}")
        for n in range(entries.shape[0]):
            if entries[n, n] == 0:
                raise ZeroDiagonalError(n)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("NormalMatrix is immutable")

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def order(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.entries)

    @property
    def exact(self) -> bool:
        return is_exact(self.entries)

    def __repr__(self):
        return f"NormalMatrix(order={self.order}, exact={self.exact})"


class WeightSequence:
    """Positive weights p_0..p_N with cached cumulative sums P_n.

    The convention P_{-1} = 0 is honored by :meth:`cum_before`.
    """

    __slots__ = ("weights", "cumulative")

    def __init__(self, weights):
        w = as_vector(weights)
        if w.ndim != 1 or w.size == 0:
            raise ShapeMismatchError("weights must be a nonempty 1-D sequence")
        for n, p in enumerate(w):
            if not p > 0:
                raise ValueError(f"weight p_{n} = {p} is not positive")
        c = np.cumsum(w)
        w.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "cumulative", c)

    def __setattr__(self, name, value):
        raise AttributeError("WeightSequence is immutable")

    def __len__(self) -> int:
        return self.weights.size

    @property
    def order(self) -> int:
        return self.weights.size - 1

    def cum_before(self, n: int):
        """P_{n-1}, with P_{-1} = 0."""
        if n <= 0:
            return 0 if is_exact(self.weights) else 0.0
        return self.cumulative[n - 1]


def make_normal(entries, order: int | None = None) -> NormalMatrix:
    """Validate raw entries into a NormalMatrix.

    Accepts either a ragged list of rows (row n holding the n+1 entries
    a_n0..a_nn) or a full square array whose upper triangle is discarded.
    """
    if isinstance(entries, np.ndarray) and entries.ndim == 2:
        square = entries.copy() if entries.dtype == object else entries.astype(float)
    else:
        rows = list(entries)
        if any(np.ndim(r) == 0 for r in rows):
            raise ShapeMismatchError("entries must be a sequence of rows")
        widths = [len(r) for r in rows]
        if all(w == len(rows) for w in widths):
            square = np.asarray([as_vector(r) for r in rows])
        elif all(w == n + 1 for n, w in enumerate(widths)):
            vals = [x for r in rows for x in r]
            exact = as_vector(vals).dtype == object
            square = np.zeros((len(rows), len(rows)), dtype=object if exact else float)
            for n, r in enumerate(rows):
                square[n, : n + 1] = as_vector(r)
        else:
            raise ShapeMismatchError(f"row lengths {widths} fit neither a triangle nor a square")
    if order is not None and square.shape[0] != order + 1:
        raise ShapeMismatchError(f"got {square.shape[0]} rows for order {order}")
    return NormalMatrix(np.tril(square))


def identity_matrix(order: int, exact: bool = False) -> NormalMatrix:
    if exact:
        ent = np.zeros((order + 1, order + 1), dtype=object)
        for n in range(order + 1):
            ent[n, n] = 1
        return NormalMatrix(ent)
    return NormalMatrix(np.eye(order + 1))


def riesz_matrix(w: WeightSequence, order: int | None = None) -> NormalMatrix:
    """Weighted-mean matrix a_nv = p_v / P_n for v <= n.

    Every row sums to one, so the associated bar matrix has a leading
    column of ones.
    """
    if order is None:
        order = w.order
    if w.order < order:
        raise LengthMismatchError(f"need {order + 1} weights, have {len(w)}")
    p = w.weights[: order + 1]
    P = w.cumulative[: order + 1]
    if is_exact(p):
        ent = np.zeros((order + 1, order + 1), dtype=object)
        for n in range(order + 1):
            ent[n, : n + 1] = [pv / P[n] for pv in p[: n + 1]]
        return NormalMatrix(ent)
    return NormalMatrix(np.tril(p[None, :] / P[:, None]))


def cesaro_matrix(order: int, exact: bool = False) -> NormalMatrix:
    """Arithmetic-mean matrix: the unit-weight Riesz matrix."""
    if exact:
        from fractions import Fraction

        return riesz_matrix(WeightSequence([Fraction(1)] * (order + 1)))
    return riesz_matrix(WeightSequence(np.ones(order + 1)))


def bar_columns(A: NormalMatrix, v_hi: int) -> np.ndarray:
    """Leading columns 0..v_hi of the bar matrix, over all rows of A.

    bar[n, v] = sum_{i=v..n} a_ni, zero for v > n.  Computed from row
    prefix sums so only O(size * v_hi) memory is touched, which matters
    when A is built out to a long tail cutoff.
    """
    E = A.entries
    size = E.shape[0]
    v_hi = min(v_hi, size - 1)
    rowsum = E.sum(axis=1)
    bar = np.empty((size, v_hi + 1), dtype=E.dtype)
    bar[:, 0] = rowsum
    if v_hi >= 1:
        prefix = np.cumsum(E[:, :v_hi], axis=1)
        bar[:, 1:] = rowsum[:, None] - prefix
    bar = np.tril(bar)
    # the (n, n) entry is a single-term tail sum; pin it so no rounding from
    # the prefix subtraction leaks into the diagonal
    idx = np.arange(v_hi + 1)
    bar[idx, idx] = np.diagonal(E)[: v_hi + 1]
    return bar


def bar_of(A: NormalMatrix) -> np.ndarray:
    """Full series-to-sequence semimatrix as a plain lower-triangular array.

    Not promoted to NormalMatrix: its diagonal equals A's, but nothing else
    about it is needed as an operator in its own right.
    """
    return bar_columns(A, A.order)


def hat_columns(A: NormalMatrix, v_hi: int) -> np.ndarray:
    """Leading columns 0..v_hi of the hat matrix, over all rows of A."""
    bar = bar_columns(A, v_hi)
    hat = bar.copy()
    hat[1:] -= bar[:-1]
    return np.tril(hat)


def hat_of(A: NormalMatrix) -> NormalMatrix:
    """Series-to-series semimatrix; row 0 copies bar, later rows difference it.

    Its diagonal equals A's diagonal, so the result is again normal.
    """
    return NormalMatrix(hat_columns(A, A.order))


def invert_hat(H: NormalMatrix) -> NormalMatrix:
    """Two-sided inverse of a normal matrix by columnwise forward substitution.

    No pivoting is needed: the diagonal is nonzero by the type invariant.
    O(size^3) worst case, BLAS-backed inner products on the float path.
    """
    L = H.entries
    size = L.shape[0]
    X = np.zeros((size, size), dtype=L.dtype)
    for v in range(size):
        X[v, v] = 1 / L[v, v]
        for n in range(v + 1, size):
            X[n, v] = -np.dot(L[n, v:n], X[v:n, v]) / L[n, n]
    return NormalMatrix(X)


def apply_lower(M, x) -> np.ndarray:
    """result_n = sum_{v=0..n} M_nv x_v for a lower-triangular M."""
    E = M.entries if isinstance(M, NormalMatrix) else np.asarray(M)
    xs = as_vector(x)
    if xs.size < E.shape[0]:
        raise LengthMismatchError(f"need {E.shape[0]} values, have {xs.size}")
    return np.dot(E, xs[: E.shape[0]])
