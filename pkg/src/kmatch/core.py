"""Exact scalars, matrix containers and subset machinery shared by every module.

Matrix containers use 0-based ``m[i, j]`` access like any Python sequence.
:class:`IndexSubset` is the exception: it stores 1-based positions so that a
subset of ``{1, ..., m}`` reads the same way it is usually written down.
"""
from __future__ import annotations

import itertools
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

ExactNumber = Fraction


class MatchingError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(MatchingError, ValueError):
    pass


class ParityError(MatchingError, ValueError):
    pass


class ArgumentError(MatchingError, ValueError):
    pass


class ResourceLimitError(MatchingError):
    """Raised instead of starting a computation that exceeds a configured cap."""


class ConsistencyError(MatchingError, AssertionError):
    """An identity that must hold for exact inputs did not; always a bug."""


def exact(value) -> Fraction:
    """Coerce ``value`` to a :class:`Fraction` without ever going through a float.

    Accepts Python/NumPy integers, rationals and strings such as ``"3"`` or
    ``"-2/7"``.  Floats are rejected: silently turning ``0.1`` into
    ``3602879701896397/36028797018963968`` is never what a caller wants.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {value!r}") from exc
    raise TypeError(f"cannot represent {type(value).__name__} exactly: {value!r}")


def format_exact(value: Fraction) -> str:
    """``"p"`` for integers, ``"p/q"`` otherwise."""
    value = exact(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def integer_scaling(values: Iterable[Fraction]) -> tuple[list[int], int]:
    """Return ``(ints, d)`` with ``ints[i] == values[i] * d`` and ``d`` the lcm of denominators."""
    values = list(values)
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return [v.numerator * (d // v.denominator) for v in values], d


def factorial(n: int) -> Fraction:
    if n < 0:
        raise ArgumentError(f"factorial of negative number {n}")
    return Fraction(math.factorial(n))


@dataclass(frozen=True)
class NonnegMatrix:
    """Dense ``rows x cols`` matrix of nonnegative exact rationals, row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DimensionError(f"negative shape {self.rows}x{self.cols}")
        entries = tuple(exact(v) for v in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionError(
                f"{len(entries)} entries for a {self.rows}x{self.cols} matrix"
            )
        for v in entries:
            if v < 0:
                raise ValueError(f"negative entry {v}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "NonnegMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "NonnegMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def ones(cls, rows: int, cols: int) -> "NonnegMatrix":
        return cls(rows, cols, (Fraction(1),) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "NonnegMatrix":
        return NonnegMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries)


@dataclass(frozen=True)
class SymZeroDiagMatrix:
    """Symmetric, zero-diagonal, nonnegative ``order x order`` matrix.

    Only the strict upper triangle is stored, row by row:
    ``a_12, a_13, ..., a_1m, a_23, ...``.
    """

    order: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise DimensionError(f"negative order {self.order}")
        entries = tuple(exact(v) for v in self.entries)
        if len(entries) != self.order * (self.order - 1) // 2:
            raise DimensionError(
                f"{len(entries)} upper-triangle entries for order {self.order}"
            )
        for v in entries:
            if v < 0:
                raise ValueError(f"negative entry {v}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ignore_diagonal: bool = False) -> "SymZeroDiagMatrix":
        """Build from a full square array.

        The array must be symmetric.  The diagonal must be zero unless
        ``ignore_diagonal`` is set, in which case it is discarded.
        """
        rows = [[exact(v) for v in r] for r in rows]
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise DimensionError("symmetric matrix must be square")
        for i in range(m):
            if rows[i][i] != 0 and not ignore_diagonal:
                raise ValueError(f"nonzero diagonal entry at {i}")
            for j in range(i + 1, m):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"not symmetric at ({i}, {j})")
        return cls(m, tuple(rows[i][j] for i in range(m) for j in range(i + 1, m)))

    @classmethod
    def from_function(cls, order: int, weight) -> "SymZeroDiagMatrix":
        """``weight(i, j)`` is called for every 0-based pair ``i < j``."""
        return cls(order, tuple(weight(i, j) for i in range(order) for j in range(i + 1, order)))

    @classmethod
    def complete(cls, order: int) -> "SymZeroDiagMatrix":
        """Adjacency matrix of the complete graph on ``order`` vertices."""
        return cls.from_function(order, lambda i, j: 1)

    def _offset(self, i: int, j: int) -> int:
        # i < j; start of row i in the packed strict upper triangle
        return i * (2 * self.order - i - 1) // 2 + (j - i - 1)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.order and 0 <= j < self.order):
            raise IndexError(ij)
        if i == j:
            return Fraction(0)
        if i > j:
            i, j = j, i
        return self.entries[self._offset(i, j)]

    def to_rows(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.order)] for i in range(self.order)]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries)


@dataclass(frozen=True)
class IndexSubset:
    """Strictly increasing 1-based positions drawn from ``{1, ..., universe}``."""

    indices: tuple[int, ...]
    universe: int

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", indices)
        prev = 0
        for i in indices:
            if i <= prev:
                raise ValueError(f"indices not strictly increasing from 1: {indices}")
            prev = i
        if indices and indices[-1] > self.universe:
            raise DimensionError(f"index {indices[-1]} outside universe {self.universe}")

    @classmethod
    def full(cls, m: int) -> "IndexSubset":
        return cls(tuple(range(1, m + 1)), m)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def zero_based(self) -> tuple[int, ...]:
        return tuple(i - 1 for i in self.indices)

    def complement(self) -> "IndexSubset":
        taken = set(self.indices)
        return IndexSubset(tuple(i for i in range(1, self.universe + 1) if i not in taken), self.universe)


def enumerate_subsets(k: int, m: int) -> Iterator[IndexSubset]:
    """All ``k``-subsets of ``{1..m}`` in lexicographic order; empty when ``k > m``."""
    if k < 0 or m < 0:
        raise ArgumentError(f"negative subset parameters k={k}, m={m}")
    for combo in itertools.combinations(range(1, m + 1), k):
        yield IndexSubset(combo, m)


def submatrix(b: NonnegMatrix, alpha: IndexSubset, beta: IndexSubset) -> NonnegMatrix:
    if alpha.universe != b.rows or beta.universe != b.cols:
        raise DimensionError(
            f"subsets over ({alpha.universe}, {beta.universe}) do not fit a {b.rows}x{b.cols} matrix"
        )
    rows = alpha.zero_based()
    cols = beta.zero_based()
    return NonnegMatrix(len(rows), len(cols), tuple(b[i, j] for i in rows for j in cols))


def principal_submatrix(a: SymZeroDiagMatrix, alpha: IndexSubset) -> SymZeroDiagMatrix:
    if alpha.universe != a.order:
        raise DimensionError(f"subset over {alpha.universe} does not fit order {a.order}")
    idx = alpha.zero_based()
    return SymZeroDiagMatrix(
        len(idx),
        tuple(a[idx[p], idx[q]] for p in range(len(idx)) for q in range(p + 1, len(idx))),
    )


def bipartite_double_cover(b: NonnegMatrix) -> SymZeroDiagMatrix:
    """``[[0, B], [B^T, 0]]``: the bipartite graph of ``B`` viewed as a general graph."""
    m, n = b.shape

    def weight(i, j):
        if i < m <= j:
            return b[i, j - m]
        return 0

    return SymZeroDiagMatrix.from_function(m + n, weight)
