"""Logical (column-selection) matrices and the semi-tensor product.

A logical matrix ``delta_r[i_1, ..., i_c]`` is stored only through its
column indices; column ``j`` is the unit vector with a one in row ``i_j``.
Indices are 1-based to match the usual ``delta`` notation.  Boolean values
are encoded as ``1 ~ delta_2^1`` and ``0 ~ delta_2^2``, and a product of
arguments ``a_1 ... a_k`` is ordered all-true first, all-false last.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "LogicalMatrix",
    "delta",
    "stp",
    "kron",
    "identity",
    "swap_matrix",
    "power_reducing_matrix",
    "structure_matrix",
    "truth_table",
    "ones_row_collapse",
    "column_of_bits",
    "bits_of_column",
]


def _is_pow2(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


class LogicalMatrix:
    """An immutable ``rows x cols`` logical matrix.

    Parameters
    ----------
    rows : int
        Number of rows, a power of two.
    col_index : sequence of int
        1-based row position of the single 1 in each column.  Its length is
        the number of columns and must also be a power of two.
    """

    __slots__ = ("rows", "_idx")

    def __init__(self, rows: int, col_index: Iterable[int]):
        idx = np.array(list(col_index) if not isinstance(col_index, np.ndarray) else col_index,
                       dtype=np.int64).ravel()
        rows = int(rows)
        if not _is_pow2(rows):
            raise ValueError(f"row count {rows} is not a power of 2")
        if not _is_pow2(idx.size):
            raise ValueError(f"column count {idx.size} is not a power of 2")
        if idx.size and (idx.min() < 1 or idx.max() > rows):
            raise ValueError(f"column indices must lie in [1, {rows}]")
        idx.setflags(write=False)
        self.rows = rows
        self._idx = idx

    @property
    def cols(self) -> int:
        return int(self._idx.size)

    @property
    def col_index(self) -> np.ndarray:
        """Read-only 1-based column index array."""
        return self._idx

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        out[self._idx - 1, np.arange(self.cols)] = 1
        return out

    @classmethod
    def from_dense(cls, arr: np.ndarray) -> "LogicalMatrix":
        arr = np.asarray(arr)
        if not np.all((arr == 0) | (arr == 1)) or not np.all(arr.sum(axis=0) == 1):
            raise ValueError("not a logical matrix")
        return cls(arr.shape[0], np.argmax(arr, axis=0) + 1)

    def __matmul__(self, other: "LogicalMatrix") -> "LogicalMatrix":
        return stp(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogicalMatrix):
            return NotImplemented
        return self.rows == other.rows and np.array_equal(self._idx, other._idx)

    def __hash__(self) -> int:
        return hash((self.rows, self._idx.tobytes()))

    def __repr__(self) -> str:
        body = ",".join(str(int(i)) for i in self._idx[:32])
        if self.cols > 32:
            body += ",..."
        return f"delta_{self.rows}[{body}]"


def delta(rows: int, *cols: int) -> LogicalMatrix:
    """``delta(4, 2)`` is the unit vector delta_4^2; ``delta(2, 1, 2)`` is delta_2[1,2]."""
    return LogicalMatrix(rows, cols)


def identity(n: int) -> LogicalMatrix:
    return LogicalMatrix(n, np.arange(1, n + 1))


def kron(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    ai = a.col_index[:, None]
    bi = b.col_index[None, :]
    return LogicalMatrix(a.rows * b.rows, ((ai - 1) * b.rows + bi).ravel())


def stp(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    """Semi-tensor product ``(A kron I_{l/n})(B kron I_{l/p})`` with ``l = lcm(n, p)``."""
    n, p = a.cols, b.rows
    l = math.lcm(n, p)
    t, r = l // p, l // n
    # column (j, s) of B kron I_t selects row (b_j - 1) t + s of an l-vector
    s = np.arange(1, t + 1)
    mid = ((b.col_index[:, None] - 1) * t + s[None, :]).ravel()
    # that row is column (c, s') of A kron I_r, with mid = (c - 1) r + s'
    c, s2 = np.divmod(mid - 1, r)
    out = (a.col_index[c] - 1) * r + s2 + 1
    result = LogicalMatrix(a.rows * r, out)
    assert result.cols == b.cols * t
    return result


def swap_matrix(m: int, n: int) -> LogicalMatrix:
    """``W_[m,n]`` with ``W (s1 x s2) = s2 x s1`` for s1 in Delta_m, s2 in Delta_n."""
    if m < 1 or n < 1:
        raise ValueError("swap dimensions must be positive")
    i, j = np.meshgrid(np.arange(m), np.arange(n), indexing="ij")
    return LogicalMatrix(m * n, (j * m + i + 1).ravel())


def power_reducing_matrix(n: int) -> LogicalMatrix:
    """``Phi_{2^n}``, satisfying ``Phi x = x x`` for every x in Delta_{2^n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    size = 1 << n
    i = np.arange(size)
    return LogicalMatrix(size * size, i * size + i + 1)


def structure_matrix(table: Sequence[int]) -> LogicalMatrix:
    """Structure matrix of a Boolean function from its truth table.

    ``table[j]`` is the output (0 or 1) for the j-th input in canonical order,
    i.e. ``j = sum((1 - a_m) * 2**(k - m))``.
    """
    t = np.asarray(table, dtype=np.int64).ravel()
    if not _is_pow2(t.size):
        raise ValueError(f"truth table length {t.size} is not a power of 2")
    if not np.all((t == 0) | (t == 1)):
        raise ValueError("truth table entries must be 0 or 1")
    return LogicalMatrix(2, 2 - t)


def truth_table(a: LogicalMatrix) -> np.ndarray:
    """Inverse of :func:`structure_matrix` for ``2 x 2^k`` matrices."""
    if a.rows != 2:
        raise ValueError("truth tables exist only for 2-row logical matrices")
    return (2 - a.col_index).astype(np.uint8)


def ones_row_collapse(a: LogicalMatrix, trailing_vars: int) -> LogicalMatrix:
    """``A (I kron 1^T_{2^t})``: the same function padded with t ignored trailing inputs."""
    if trailing_vars < 0:
        raise ValueError("trailing_vars must be >= 0")
    return LogicalMatrix(a.rows, np.repeat(a.col_index, 1 << trailing_vars))


def column_of_bits(bits: Sequence[int]) -> int:
    """0-based column of ``x_1 ... x_k`` for the given Boolean values."""
    j = 0
    for b in bits:
        j = (j << 1) | (1 - int(b))
    return j


def bits_of_column(j: int, k: int) -> tuple[int, ...]:
    return tuple(1 - ((j >> (k - 1 - m)) & 1) for m in range(k))
