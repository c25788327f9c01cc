"""Unbiased Monte Carlo estimators for permanents, hafnians and k-matching sums.

The permanent sampler walks the rows in order and picks, for each row, one
still-unused column with positive weight.  With the uniform proposal the
pick is uniform over the ``c`` admissible columns and the draw is
multiplied by ``b_ij * c``; with the weighted proposal column ``j`` is
picked with probability ``b_ij / s`` and the draw is multiplied by ``s``,
the admissible row mass.  A row with no admissible column makes the draw
0.  Either way each complete path ``sigma`` is reached with probability
``prod 1/f_i`` and scores ``prod b_{i,sigma(i)} f_i``, so the expectation is
the permanent.

The hafnian sampler is the same walk over vertices: the lowest unmatched
vertex is paired with an admissible partner.

k-matching sums go through the padded matrices of :mod:`kmatch.reduction`
and are divided by the same factorials afterwards.

Random streams come from Philox keyed by ``(seed, ..., batch index)``.
Batches are independent and concatenated by index, so reports do not
depend on how batches are scheduled.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .core import (
    ArgumentError,
    DimensionError,
    NonnegMatrix,
    ParityError,
    SymZeroDiagMatrix,
    exact,
)
from .reduction import build_Ak, build_Bk

BATCH_SIZE = 1 << 14
PROPOSALS = ("uniform", "weighted")

Draws = Callable[[int, np.random.Generator], np.ndarray]


@dataclass(frozen=True)
class Target:
    eps: float
    delta: float

    @property
    def batch_size(self) -> int:
        return math.ceil(72 / self.eps ** 2)

    @property
    def batches(self) -> int:
        return 2 * math.ceil(math.log(1 / self.delta)) + 1


@dataclass(frozen=True)
class EstimateReport:
    point_estimate: float
    standard_error: float
    samples: int
    seed: int
    target: Optional[Target] = None

    def format(self) -> str:
        line = (
            f"estimate={self.point_estimate:.15g} stderr={self.standard_error:.15g} "
            f"samples={self.samples} seed={self.seed}"
        )
        if self.target is not None:
            line += f" eps={self.target.eps:g} delta={self.target.delta:g}"
        return line

    def scaled(self, divisor: int) -> "EstimateReport":
        return replace(
            self,
            point_estimate=self.point_estimate / divisor,
            standard_error=self.standard_error / divisor,
        )


def _generator(key: tuple[int, ...]) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(list(key))))


def _pick(mass: np.ndarray, admissible: np.ndarray, rng: np.random.Generator, proposal: str):
    """Choose one admissible column per sample row.

    Returns ``(column, factor, alive)``; ``factor`` is the inverse of the
    pick probability times the picked weight.
    """
    size = mass.shape[0]
    u = rng.random(size)
    if proposal == "uniform":
        count = admissible.sum(axis=1)
        cum = np.cumsum(admissible, axis=1)
        col = np.argmax(cum > np.floor(u * count)[:, None], axis=1)
        picked = mass[np.arange(size), col]
        return col, picked * count, count > 0
    masked = np.where(admissible, mass, 0.0)
    cum = np.cumsum(masked, axis=1)
    total = cum[:, -1]
    # u * total can round up to total itself
    threshold = np.minimum(u * total, np.nextafter(total, 0))
    col = np.argmax(cum > threshold[:, None], axis=1)
    return col, total, total > 0


def _permanent_draws(w: np.ndarray, proposal: str) -> Draws:
    n = w.shape[0]

    def draw(size: int, rng: np.random.Generator) -> np.ndarray:
        rows = np.arange(size)
        used = np.zeros((size, n), dtype=bool)
        value = np.ones(size)
        for i in range(n):
            mass = np.broadcast_to(w[i], (size, n))
            col, factor, alive = _pick(mass, (w[i] > 0) & ~used, rng, proposal)
            value *= np.where(alive, factor, 0.0)
            used[rows, col] |= alive
        return value

    return draw


def _hafnian_draws(w: np.ndarray, proposal: str) -> Draws:
    m = w.shape[0]

    def draw(size: int, rng: np.random.Generator) -> np.ndarray:
        rows = np.arange(size)
        free = np.ones((size, m), dtype=bool)
        value = np.ones(size)
        for _ in range(m // 2):
            low = np.argmax(free, axis=1)
            free[rows, low] = False
            mass = w[low]
            col, factor, alive = _pick(mass, (mass > 0) & free, rng, proposal)
            value *= np.where(alive, factor, 0.0)
            free[rows, col] &= ~alive
        return value

    return draw


def _draw_all(draw: Draws, samples: int, key: tuple[int, ...], workers: int) -> np.ndarray:
    sizes = [min(BATCH_SIZE, samples - start) for start in range(0, samples, BATCH_SIZE)]

    def run(b: int) -> np.ndarray:
        return draw(sizes[b], _generator((*key, b)))

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(workers) as pool:
            chunks = list(pool.map(run, range(len(sizes))))
    else:
        chunks = [run(b) for b in range(len(sizes))]
    return np.concatenate(chunks)


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 1 << 64:
        raise ArgumentError(f"seed must be a 64-bit unsigned value, got {seed}")
    return seed


def _target(eps, delta) -> Optional[Target]:
    if eps is None and delta is None:
        return None
    if eps is None or delta is None:
        raise ArgumentError("eps and delta must be given together")
    if not eps > 0 or not 0 < delta < 1:
        raise ArgumentError(f"need eps > 0 and 0 < delta < 1, got eps={eps}, delta={delta}")
    return Target(float(eps), float(delta))


def _estimate(draw: Draws, samples, seed, key, eps, delta, workers) -> EstimateReport:
    seed = _check_seed(seed)
    target = _target(eps, delta)
    if target is not None:
        samples = target.batch_size * target.batches
    elif samples is None or samples < 1:
        raise ArgumentError(f"samples must be >= 1, got {samples}")
    values = _draw_all(draw, int(samples), (seed, *key), workers)
    se = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    if target is None:
        point = float(values.mean())
    else:
        # median of means over consecutive groups
        point = float(np.median(values.reshape(target.batches, target.batch_size).mean(axis=1)))
    return EstimateReport(point, se, int(samples), seed, target)


def _check_proposal(proposal: str) -> None:
    if proposal not in PROPOSALS:
        raise ArgumentError(f"proposal must be one of {PROPOSALS}, got {proposal!r}")


def _as_float(b: NonnegMatrix) -> np.ndarray:
    return np.array([float(v) for v in b.entries], dtype=float).reshape(b.rows, b.cols)


def _sym_as_float(a: SymZeroDiagMatrix) -> np.ndarray:
    return np.array([[float(v) for v in r] for r in a.to_rows()], dtype=float).reshape(a.order, a.order)


def estimate_permanent(
    b: NonnegMatrix,
    samples: Optional[int] = None,
    seed: int = 0,
    *,
    eps: Optional[float] = None,
    delta: Optional[float] = None,
    proposal: str = "uniform",
    workers: int = 1,
    _key: tuple[int, ...] = (),
) -> EstimateReport:
    """Sequential importance sampling estimate of ``perm b``.

    Either ``samples`` or the pair ``(eps, delta)`` must be given; the
    latter switches to a median-of-means schedule of ``2 ceil(ln 1/delta) + 1``
    batches of ``ceil(72 / eps^2)`` draws.  That schedule is a heuristic
    sizing rule, not an approximation guarantee.
    """
    if not b.is_square:
        raise DimensionError(f"permanent of non-square {b.rows}x{b.cols} matrix")
    _check_proposal(proposal)
    return _estimate(_permanent_draws(_as_float(b), proposal), samples, seed, _key, eps, delta, workers)


def estimate_perm_k(b: NonnegMatrix, k: int, samples=None, seed: int = 0, **kwargs) -> EstimateReport:
    """Estimate ``perm_k b`` as ``perm(B_k) / ((m-k)! (n-k)!)``."""
    m, n = b.shape
    report = estimate_permanent(build_Bk(b, k), samples, seed, **kwargs)
    return report.scaled(math.factorial(m - k) * math.factorial(n - k))


def estimate_hafnian(
    a: SymZeroDiagMatrix,
    samples: Optional[int] = None,
    seed: int = 0,
    *,
    eps: Optional[float] = None,
    delta: Optional[float] = None,
    proposal: str = "uniform",
    workers: int = 1,
    _key: tuple[int, ...] = (),
) -> EstimateReport:
    """Unbiased, but without any variance bound: the variance can grow fast with order."""
    if a.order % 2:
        raise ParityError(f"hafnian of odd order {a.order}")
    _check_proposal(proposal)
    return _estimate(_hafnian_draws(_sym_as_float(a), proposal), samples, seed, _key, eps, delta, workers)


def estimate_haf_k(a: SymZeroDiagMatrix, k: int, samples=None, seed: int = 0, **kwargs) -> EstimateReport:
    """Estimate ``haf_k a`` as ``haf(A_k) / (m-2k)!``."""
    report = estimate_hafnian(build_Ak(a, k), samples, seed, **kwargs)
    return report.scaled(math.factorial(a.order - 2 * k))


def estimate_matching_poly_eval(b: NonnegMatrix, x, samples=None, seed: int = 0, **kwargs) -> EstimateReport:
    """Estimate ``sum_k perm_k(b) x^k`` for ``x >= 0``.

    Each coefficient ``k >= 1`` gets its own ``samples`` draws from the
    stream keyed ``(seed, k)``; the constant term is exactly 1.  The
    reported ``samples`` is the total over all coefficients and the
    standard error combines the independent per-coefficient errors.
    """
    xf = float(exact(x)) if not isinstance(x, float) else x
    if not xf >= 0:
        raise ArgumentError(f"x must be nonnegative, got {x}")
    point, var, total = 1.0, 0.0, 0
    report = None
    for k in range(1, min(b.shape) + 1):
        report = estimate_perm_k(b, k, samples, seed, _key=(k,), **kwargs)
        scale = xf ** k
        point += scale * report.point_estimate
        var += (scale * report.standard_error) ** 2
        total += report.samples
    if report is None:
        # no edges possible: Phi = 1 identically
        _check_seed(seed)
        target = _target(kwargs.get("eps"), kwargs.get("delta"))
        if target is None and (samples is None or samples < 1):
            raise ArgumentError(f"samples must be >= 1, got {samples}")
        return EstimateReport(1.0, 0.0, max(total, 1), int(seed), target)
    return EstimateReport(point, math.sqrt(var), total, report.seed, report.target)


# ------------------------------------------------ exact path expectations


def _options(weights: list[Fraction], admissible: list[int], proposal: str):
    """``(choice, probability, factor)`` for one sampler step, in exact arithmetic."""
    if proposal == "uniform":
        c = len(admissible)
        return [(j, Fraction(1, c), weights[j] * c) for j in admissible]
    total = sum((weights[j] for j in admissible), Fraction(0))
    return [(j, weights[j] / total, total) for j in admissible]


def permanent_sampler_expectation(b: NonnegMatrix, proposal: str = "uniform") -> Fraction:
    """Exact expectation of one permanent draw, by enumerating every sampler path.

    Feasible for small orders only; used to verify unbiasedness as an exact
    rational identity.
    """
    if not b.is_square:
        raise DimensionError(f"non-square {b.rows}x{b.cols} matrix")
    _check_proposal(proposal)
    n = b.rows
    rows = b.to_rows()

    def walk(i: int, used: frozenset) -> Fraction:
        if i == n:
            return Fraction(1)
        admissible = [j for j in range(n) if rows[i][j] > 0 and j not in used]
        if not admissible:
            return Fraction(0)
        return sum(
            (p * f * walk(i + 1, used | {j}) for j, p, f in _options(rows[i], admissible, proposal)),
            Fraction(0),
        )

    return walk(0, frozenset())


def hafnian_sampler_expectation(a: SymZeroDiagMatrix, proposal: str = "uniform") -> Fraction:
    """Exact expectation of one hafnian draw over all sampler paths."""
    if a.order % 2:
        raise ParityError(f"odd order {a.order}")
    _check_proposal(proposal)
    rows = a.to_rows()

    def walk(free: tuple[int, ...]) -> Fraction:
        if not free:
            return Fraction(1)
        i, rest = free[0], free[1:]
        admissible = [j for j in rest if rows[i][j] > 0]
        if not admissible:
            return Fraction(0)
        return sum(
            (
                p * f * walk(tuple(v for v in rest if v != j))
                for j, p, f in _options(rows[i], admissible, proposal)
            ),
            Fraction(0),
        )

    return walk(tuple(range(a.order)))
