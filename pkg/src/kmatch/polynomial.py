"""Matching polynomials, exact real-rootedness checks and derivative identities.

Polynomials are coefficient lists in increasing degree, ``[c0, c1, ...]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import (
    ArgumentError,
    ConsistencyError,
    DimensionError,
    NonnegMatrix,
    ParityError,
    ResourceLimitError,
    SymZeroDiagMatrix,
    exact,
)
from .exact import HAFNIAN_CAP, PERMANENT_CAP, haf_k_direct, perm_k_direct
from .reduction import haf_k_via_reduction, perm_k_via_reduction

EXTRACTION_CAP = 12


@dataclass(frozen=True)
class MatchingPolynomial:
    """``sum_k c_k x^k`` where ``c_k`` is the total weight of k-matchings."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [exact(c) for c in self.coefficients]
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs or coeffs[0] != 1:
            raise ValueError("matching polynomial must have constant term 1")
        if any(c < 0 for c in coeffs):
            raise ValueError("matching polynomial coefficients must be nonnegative")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x) -> Fraction:
        x = exact(x)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def _coefficients(kmax: int, via_reduction, direct, method: str) -> list[Fraction]:
    coeffs = [Fraction(1)]
    for k in range(1, kmax + 1):
        if method == "auto":
            try:
                c = via_reduction(k)
            except ResourceLimitError:
                c = direct(k)
        elif method == "direct":
            c = direct(k)
        elif method == "reduction":
            c = via_reduction(k)
        elif method == "both":
            c = via_reduction(k)
            d = direct(k)
            if c != d:
                raise ConsistencyError(f"coefficient {k}: reduction gives {c}, direct sum gives {d}")
        else:
            raise ArgumentError(f"unknown method {method!r}")
        coeffs.append(c)
    return coeffs


def matching_poly_bipartite(
    b: NonnegMatrix, method: str = "auto", max_n: int = PERMANENT_CAP
) -> MatchingPolynomial:
    """Coefficient ``k`` is ``perm_k B``.

    ``method`` picks how each coefficient is computed: ``"reduction"``,
    ``"direct"``, ``"both"`` (compute both, require agreement) or ``"auto"``
    (reduction, falling back to the direct sum when the padded matrix is
    over the permanent cap).
    """
    return MatchingPolynomial(tuple(_coefficients(
        min(b.shape),
        lambda k: perm_k_via_reduction(b, k, max_n=max_n),
        lambda k: perm_k_direct(b, k),
        method,
    )))


def matching_poly_general(
    a: SymZeroDiagMatrix, method: str = "auto", max_n: int = HAFNIAN_CAP
) -> MatchingPolynomial:
    return MatchingPolynomial(tuple(_coefficients(
        a.order // 2,
        lambda k: haf_k_via_reduction(a, k, max_n=max_n),
        lambda k: haf_k_direct(a, k),
        method,
    )))


# ------------------------------------------------------------ Sturm chains


def _trim(p: list[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _derivative(p: list[Fraction]) -> list[Fraction]:
    return _trim([i * c for i, c in enumerate(p)][1:])


def _remainder(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    lead = b[-1]
    while len(a) >= len(b):
        q = a[-1] / lead
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        a = _trim(a)
    return a


def sturm_sequence(p: Sequence) -> list[list[Fraction]]:
    p = _trim([exact(c) for c in p])
    if not p:
        raise ArgumentError("Sturm sequence of the zero polynomial")
    seq = [p]
    d = _derivative(p)
    while d:
        seq.append(d)
        d = [-c for c in _remainder(seq[-2], seq[-1])]
    return seq


def _sign_changes(values: list[int]) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _signs_at(seq: list[list[Fraction]], x: Fraction) -> list[int]:
    out = []
    for p in seq:
        acc = Fraction(0)
        for c in reversed(p):
            acc = acc * x + c
        out.append(_sign(acc))
    return out


def _signs_at_neg_inf(seq: list[list[Fraction]]) -> list[int]:
    return [_sign(p[-1]) * (-1) ** (len(p) - 1) for p in seq]


def _signs_at_pos_inf(seq: list[list[Fraction]]) -> list[int]:
    return [_sign(p[-1]) for p in seq]


@dataclass(frozen=True)
class RootReport:
    all_real_negative: bool
    degree: int
    squarefree_degree: int
    distinct_real_roots: int
    distinct_negative_roots: int

    def __bool__(self) -> bool:
        return self.all_real_negative


def verify_real_negative_roots(p: Union[MatchingPolynomial, Sequence]) -> RootReport:
    """Decide exactly whether every complex root of ``p`` is real and negative.

    The Sturm chain counts distinct real roots in ``(-inf, 0]`` and over
    the whole line.  Its last element is ``gcd(p, p')`` up to a constant,
    so ``deg p - deg(last)`` is the number of distinct complex roots.  All
    roots are real and negative exactly when those two counts agree and
    ``p(0) != 0``.
    """
    coeffs = p.coefficients if isinstance(p, MatchingPolynomial) else [exact(c) for c in p]
    coeffs = _trim(coeffs)
    degree = len(coeffs) - 1
    if degree <= 0:
        return RootReport(True, max(degree, 0), 0, 0, 0)
    seq = sturm_sequence(coeffs)
    squarefree = degree - (len(seq[-1]) - 1)
    v_neg = _sign_changes(_signs_at_neg_inf(seq))
    v_zero = _sign_changes(_signs_at(seq, Fraction(0)))
    v_pos = _sign_changes(_signs_at_pos_inf(seq))
    # Sturm counts roots in (a, b]; exclude a root at 0 itself
    negative = v_neg - v_zero - (1 if coeffs[0] == 0 else 0)
    real = v_neg - v_pos
    return RootReport(
        all_real_negative=(negative == squarefree and coeffs[0] != 0),
        degree=degree,
        squarefree_degree=squarefree,
        distinct_real_roots=real,
        distinct_negative_roots=negative,
    )


# ------------------------------------------------- coefficient extraction


def _mul_linear(poly: dict[int, Fraction], form: list[tuple[int, Fraction]]) -> dict[int, Fraction]:
    """Multiply a multilinear polynomial by ``sum_j c_j x_j``, dropping squared variables."""
    out: dict[int, Fraction] = {}
    for mask, c in poly.items():
        for j, w in form:
            bit = 1 << j
            if mask & bit:
                continue
            out[mask | bit] = out.get(mask | bit, 0) + c * w
    return out


def _mul_multilinear(p: dict[int, Fraction], q: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            if m1 & m2:
                continue
            out[m1 | m2] = out.get(m1 | m2, 0) + c1 * c2
    return out


def perm_by_coefficient_extraction(b: NonnegMatrix, max_n: int = EXTRACTION_CAP) -> Fraction:
    """Coefficient of ``x_1 ... x_n`` in ``prod_i (sum_j b_ij x_j)``.

    The full mixed derivative of a degree-``n`` form is that coefficient,
    and monomials with a repeated variable can never reach it, so the
    product is carried out in the multilinear quotient.
    """
    if not b.is_square:
        raise DimensionError(f"non-square {b.rows}x{b.cols} matrix")
    n = b.rows
    if n > max_n:
        raise ResourceLimitError(f"order {n} exceeds extraction cap {max_n}")
    poly: dict[int, Fraction] = {0: Fraction(1)}
    for i in range(n):
        poly = _mul_linear(poly, [(j, b[i, j]) for j in range(n) if b[i, j]])
    return Fraction(poly.get((1 << n) - 1, 0))


def haf_by_coefficient_extraction(a: SymZeroDiagMatrix, max_n: int = EXTRACTION_CAP) -> Fraction:
    """``((n/2)!)^-1`` times the coefficient of ``x_1 ... x_n`` in ``q^(n/2)``, ``q = x^T A x / 2``."""
    n = a.order
    if n % 2:
        raise ParityError(f"odd order {n}")
    if n > max_n:
        raise ResourceLimitError(f"order {n} exceeds extraction cap {max_n}")
    # the diagonal of A only feeds x_i^2 terms, which the quotient drops
    q = {(1 << i) | (1 << j): a[i, j] for i in range(n) for j in range(i + 1, n) if a[i, j]}
    power: dict[int, Fraction] = {0: Fraction(1)}
    for _ in range(n // 2):
        power = _mul_multilinear(power, q)
    return Fraction(power.get((1 << n) - 1, 0)) / math.factorial(n // 2)
