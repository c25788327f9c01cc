"""Block-matrix reductions from k-matching sums to a single permanent or hafnian.

``build_Bk`` pads an ``m x n`` matrix to a square matrix of order
``m + n - k`` whose permanent is ``(m-k)! (n-k)!`` times the total weight of
the k-matchings of ``B``.  ``build_Ak`` does the same for a symmetric
zero-diagonal matrix, padding to order ``2m - 2k`` with factor ``(m-2k)!``.
"""
from __future__ import annotations

import math
from fractions import Fraction

from .core import (
    ArgumentError,
    ConsistencyError,
    DimensionError,
    NonnegMatrix,
    SymZeroDiagMatrix,
)
from .exact import HAFNIAN_CAP, PERMANENT_CAP, hafnian, permanent


def build_Bk(b: NonnegMatrix, k: int) -> NonnegMatrix:
    """``[[B, 1_{m,m-k}], [1_{n-k,n}, 0_{n-k,m-k}]]``.

    For ``k = m = n`` the padding blocks are empty and ``B`` comes back.
    """
    m, n = b.shape
    if not 1 <= k <= min(m, n):
        raise ArgumentError(f"k={k} outside [1, {min(m, n)}]")
    size = m + n - k
    rows = [list(b.row(i)) + [1] * (m - k) for i in range(m)]
    rows += [[1] * n + [0] * (m - k) for _ in range(n - k)]
    return NonnegMatrix.from_rows(rows, cols=size)


def _divide_exactly(value: Fraction, divisor: int, integral_input: bool, what: str) -> Fraction:
    if integral_input and value.numerator % divisor:
        raise ConsistencyError(f"{what} = {value} is not divisible by {divisor}")
    return value / divisor


def perm_k_via_reduction(b: NonnegMatrix, k: int, max_n: int = PERMANENT_CAP) -> Fraction:
    """Total weight of k-matchings as ``perm(B_k) / ((m-k)! (n-k)!)``."""
    m, n = b.shape
    bk = build_Bk(b, k)
    divisor = math.factorial(m - k) * math.factorial(n - k)
    value = permanent(bk, max_n=max_n)
    return _divide_exactly(value, divisor, b.is_integral(), f"perm(B_{k}) for B={b.to_rows()}")


def build_Ak(a: SymZeroDiagMatrix, k: int) -> SymZeroDiagMatrix:
    """``[[A, 1_{m,m-2k}], [1_{m-2k,m}, 0]]``, symmetric with zero diagonal."""
    m = a.order
    if not 1 <= k <= m // 2:
        raise ArgumentError(f"k={k} outside [1, {m // 2}]")

    def weight(i, j):
        if j < m:
            return a[i, j]
        return 1 if i < m else 0

    return SymZeroDiagMatrix.from_function(2 * m - 2 * k, weight)


def haf_k_via_reduction(a: SymZeroDiagMatrix, k: int, max_n: int = HAFNIAN_CAP) -> Fraction:
    """Total weight of k-matchings as ``haf(A_k) / (m-2k)!``."""
    ak = build_Ak(a, k)
    value = hafnian(ak, max_n=max_n)
    return _divide_exactly(
        value, math.factorial(a.order - 2 * k), a.is_integral(), f"haf(A_{k}) for A={a.to_rows()}"
    )


def pad_isolated(b: NonnegMatrix, m: int, n: int) -> NonnegMatrix:
    """Embed ``b`` top-left in an ``m x n`` zero matrix (adds isolated vertices).

    A perfect matching of ``b`` is then exactly a k-matching of the result,
    with ``k`` the order of ``b``.
    """
    if not b.is_square:
        raise DimensionError(f"padding expects a square matrix, got {b.rows}x{b.cols}")
    if m < b.rows or n < b.cols:
        raise ArgumentError(f"cannot pad {b.rows}x{b.cols} down to {m}x{n}")
    rows = [list(b.row(i)) + [0] * (n - b.cols) for i in range(b.rows)]
    rows += [[0] * n for _ in range(m - b.rows)]
    return NonnegMatrix.from_rows(rows, cols=n)
