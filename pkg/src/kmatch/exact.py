"""Exact exponential-time kernels.

Every kernel first rescales its rational input to integers (all of these
functions are homogeneous in the entries), runs on Python ints, and divides
the scale back out at the end.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import (
    ArgumentError,
    DimensionError,
    NonnegMatrix,
    ParityError,
    ResourceLimitError,
    SymZeroDiagMatrix,
    enumerate_subsets,
    exact,
    integer_scaling,
    principal_submatrix,
    submatrix,
)

PERMANENT_CAP = 30
HAFNIAN_CAP = 20
PFAFFIAN_CAP = 16
# C(m,k) * C(n,k) * k * 2^k work units allowed for perm_k_direct
DIRECT_SUM_BUDGET = 10 ** 8

# Below this order the plain Gray-code loop is faster than the vectorised one.
_BLOCKED_MIN_N = 14
_INT64_HEADROOM = 1 << 62


@dataclass(frozen=True)
class SkewMatrix:
    """Skew-symmetric matrix stored as its strict upper triangle (row-major)."""

    order: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise DimensionError(f"negative order {self.order}")
        entries = tuple(exact(v) for v in self.entries)
        if len(entries) != self.order * (self.order - 1) // 2:
            raise DimensionError(f"{len(entries)} entries for order {self.order}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "SkewMatrix":
        rows = [[exact(v) for v in r] for r in rows]
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise DimensionError("skew matrix must be square")
        for i in range(m):
            if rows[i][i] != 0:
                raise ValueError(f"nonzero diagonal entry at {i}")
            for j in range(i + 1, m):
                if rows[i][j] != -rows[j][i]:
                    raise ValueError(f"not antisymmetric at ({i}, {j})")
        return cls(m, tuple(rows[i][j] for i in range(m) for j in range(i + 1, m)))

    @classmethod
    def from_symmetric(cls, a: SymZeroDiagMatrix) -> "SkewMatrix":
        """Keep ``a_ij`` above the diagonal, negate below it."""
        return cls(a.order, a.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i == j:
            return Fraction(0)
        if i > j:
            return -self[j, i]
        return self.entries[i * (2 * self.order - i - 1) // 2 + (j - i - 1)]

    def to_rows(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.order)] for i in range(self.order)]


# ---------------------------------------------------------------- permanent


def _ryser_gray(a: list[list[int]]) -> int:
    """Ryser's formula, visiting column subsets in Gray-code order.

    Consecutive subsets differ in one column, so the row sums are updated
    with one add or subtract per row instead of being recomputed.
    """
    n = len(a)
    cols = [[a[i][j] for i in range(n)] for j in range(n)]
    rowsum = [0] * n
    total = 0
    odd = False
    for g in range(1, 1 << n):
        j = (g & -g).bit_length() - 1
        col = cols[j]
        if (g ^ (g >> 1)) >> j & 1:
            rowsum = [r + c for r, c in zip(rowsum, col)]
        else:
            rowsum = [r - c for r, c in zip(rowsum, col)]
        odd = not odd
        p = math.prod(rowsum)
        total += -p if odd else p
    return -total if n % 2 else total


def _gray_sum_table(cols: np.ndarray) -> np.ndarray:
    """Row-sum vectors for every subset of ``cols`` (shape ``(n, L)``), indexed by subset mask."""
    n, width = cols.shape
    table = np.zeros((1 << width, n), dtype=np.int64)
    cur = np.zeros(n, dtype=np.int64)
    for g in range(1, 1 << width):
        gray = g ^ (g >> 1)
        j = (g & -g).bit_length() - 1
        if gray >> j & 1:
            cur = cur + cols[:, j]
        else:
            cur = cur - cols[:, j]
        table[gray] = cur
    return table


def _parity_table(width: int) -> np.ndarray:
    par = np.zeros(1 << width, dtype=np.int8)
    for b in range(width):
        par[1 << b:1 << (b + 1)] = par[:1 << b] ^ 1
    return par


def _row_groups(bounds: list[int]) -> list[list[int]] | None:
    """Pack rows so that the product of row-sum bounds in a group fits int64."""
    groups, cur, prod = [], [], 1
    for i, b in enumerate(bounds):
        if b >= _INT64_HEADROOM:
            return None
        if cur and prod * b >= _INT64_HEADROOM:
            groups.append(cur)
            cur, prod = [], 1
        cur.append(i)
        prod *= b
    groups.append(cur)
    return groups


def _ryser_blocked(a: list[list[int]]) -> int | None:
    """Vectorised Ryser for nonnegative integer matrices.

    Columns are split into a low and a high half; Gray-code tables give the
    row sums of every half-subset, and each high subset is combined with all
    low subsets at once.  Row sums stay in int64 (they are bounded by the
    full row sum), products are formed in int64 within row groups whose
    bound product fits, and only the cross-group products and the final
    accumulation use Python ints.  Returns ``None`` when entries are too
    large for that scheme.
    """
    n = len(a)
    bounds = [sum(r) for r in a]
    if 0 in bounds:
        return 0
    groups = _row_groups(bounds)
    if groups is None:
        return None
    arr = np.array(a, dtype=np.int64)
    low_w = n // 2
    low = _gray_sum_table(arr[:, :low_w])
    high = _gray_sum_table(arr[:, low_w:])
    low_par = _parity_table(low_w)
    high_par = _parity_table(n - low_w)
    total = 0
    for h in range(len(high)):
        sums = low + high[h]
        acc = np.prod(sums[:, groups[0]], axis=1).astype(object)
        for g in groups[1:]:
            acc = acc * np.prod(sums[:, g], axis=1).astype(object)
        odd = (low_par ^ high_par[h]).astype(bool)
        total += acc[~odd].sum() - acc[odd].sum()
    return -total if n % 2 else total


def _permanent_int(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    if n >= _BLOCKED_MIN_N and all(v >= 0 for r in a for v in r):
        value = _ryser_blocked(a)
        if value is not None:
            return int(value)
    return _ryser_gray(a)


def permanent(m: NonnegMatrix, max_n: int = PERMANENT_CAP) -> Fraction:
    """Exact permanent by Gray-code Ryser, ``O(2^n n)``."""
    if not m.is_square:
        raise DimensionError(f"permanent of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n > max_n:
        raise ResourceLimitError(f"permanent of order {n} exceeds cap {max_n}")
    ints, d = integer_scaling(m.entries)
    rows = [ints[i * n:(i + 1) * n] for i in range(n)]
    return Fraction(_permanent_int(rows), d ** n)


def permanent_naive(rows: Sequence[Sequence]) -> Fraction:
    """Sum over all ``n!`` permutations.  Test oracle only."""
    rows = [[exact(v) for v in r] for r in rows]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("permanent of non-square matrix")
    total = Fraction(0)
    for sigma in itertools.permutations(range(n)):
        total += math.prod((rows[i][sigma[i]] for i in range(n)), start=Fraction(1))
    return total


# ------------------------------------------------------- hafnian / pfaffian


def _pairing_sum(w: list[list[int]], signed: bool) -> int:
    """Sum over perfect matchings by pairing the lowest unmatched vertex.

    Sub-results are memoised on the bitmask of unmatched vertices, and
    zero weights prune their branch.
    """
    n = len(w)
    nbrs = [[j for j in range(i + 1, n) if w[i][j]] for i in range(n)]

    @lru_cache(maxsize=None)
    def rec(mask: int) -> int:
        if mask == 0:
            return 1
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        total = 0
        for j in nbrs[i]:
            bit = 1 << j
            if not rest & bit:
                continue
            term = w[i][j] * rec(rest ^ bit)
            if signed and (rest & (bit - 1)).bit_count() & 1:
                term = -term
            total += term
        return total

    try:
        return rec((1 << n) - 1)
    finally:
        rec.cache_clear()


def hafnian(a: SymZeroDiagMatrix, max_n: int = HAFNIAN_CAP) -> Fraction:
    """Total weight of the perfect matchings of the weighted graph ``a``."""
    m = a.order
    if m % 2:
        raise ParityError(f"hafnian of odd order {m}")
    if m > max_n:
        raise ResourceLimitError(f"hafnian of order {m} exceeds cap {max_n}")
    ints, d = integer_scaling(a.entries)
    w = [[0] * m for _ in range(m)]
    it = iter(ints)
    for i in range(m):
        for j in range(i + 1, m):
            w[i][j] = w[j][i] = next(it)
    return Fraction(_pairing_sum(w, signed=False), d ** (m // 2))


def pfaffian(s: SkewMatrix, max_n: int = PFAFFIAN_CAP) -> Fraction:
    """Signed sum over perfect matchings.

    Pairing the lowest remaining vertex with the ``p``-th remaining one
    (``p = 1, 2, ...``) contributes the sign ``(-1)^(p-1)``, which is the
    signature of the permutation ``(i1 j1 i2 j2 ...)``.
    """
    m = s.order
    if m % 2:
        raise ParityError(f"pfaffian of odd order {m}")
    if m > max_n:
        raise ResourceLimitError(f"pfaffian of order {m} exceeds cap {max_n}")
    ints, d = integer_scaling(s.entries)
    w = [[0] * m for _ in range(m)]
    it = iter(ints)
    for i in range(m):
        for j in range(i + 1, m):
            w[i][j] = next(it)
            w[j][i] = -w[i][j]
    return Fraction(_pairing_sum(w, signed=True), d ** (m // 2))


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Bareiss fraction-free elimination."""
    rows = [[exact(v) for v in r] for r in rows]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("determinant of non-square matrix")
    if n == 0:
        return Fraction(1)
    ints, d = integer_scaling(v for r in rows for v in r)
    a = [ints[i * n:(i + 1) * n] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1], d ** n)


# ------------------------------------------------------------- k-sums


def perm_k_direct(b: NonnegMatrix, k: int, budget: int = DIRECT_SUM_BUDGET) -> Fraction:
    """Sum of the permanents of all ``k x k`` submatrices; ``perm_0 = 1``."""
    m, n = b.shape
    if not 0 <= k <= min(m, n):
        raise ArgumentError(f"k={k} outside [0, {min(m, n)}]")
    if k == 0:
        return Fraction(1)
    cost = math.comb(m, k) * math.comb(n, k) * k * (1 << k)
    if cost > budget:
        raise ResourceLimitError(f"perm_k direct sum needs ~{cost} steps, budget {budget}")
    ints, d = integer_scaling(b.entries)
    scaled = NonnegMatrix(m, n, tuple(ints))
    total = 0
    for alpha in enumerate_subsets(k, m):
        for beta in enumerate_subsets(k, n):
            sub = submatrix(scaled, alpha, beta)
            total += _permanent_int([[int(v) for v in sub.row(i)] for i in range(k)])
    return Fraction(total, d ** k)


def haf_k_direct(a: SymZeroDiagMatrix, k: int, budget: int = DIRECT_SUM_BUDGET) -> Fraction:
    """Sum of the hafnians of all ``2k x 2k`` principal submatrices; ``haf_0 = 1``."""
    m = a.order
    if not 0 <= k <= m // 2:
        raise ArgumentError(f"k={k} outside [0, {m // 2}]")
    if k == 0:
        return Fraction(1)
    cost = math.comb(m, 2 * k) * (1 << (2 * k))
    if cost > budget:
        raise ResourceLimitError(f"haf_k direct sum needs ~{cost} steps, budget {budget}")
    return sum(
        (hafnian(principal_submatrix(a, alpha), max_n=2 * k) for alpha in enumerate_subsets(2 * k, m)),
        Fraction(0),
    )
