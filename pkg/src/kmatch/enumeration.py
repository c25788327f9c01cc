"""Explicit graphs and brute-force k-matching enumeration.

Vertices are 1-based.  Enumeration branches on the lowest-indexed vertex
still in play: either it is matched to a higher neighbour or it is left
unmatched for good.  Every matching is produced exactly once, in a fixed
order, without a visited set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .core import (
    ArgumentError,
    NonnegMatrix,
    SymZeroDiagMatrix,
    exact,
)

Edge = tuple[int, int, Fraction]


def _check_weight(w) -> Fraction:
    w = exact(w)
    if w <= 0:
        raise ValueError(f"edge weight must be positive, got {w}")
    return w


@dataclass(frozen=True)
class WeightedGraph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen = set()
        edges = []
        for u, v, w in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not u < v:
                raise ValueError(f"edge ({u}, {v}) must be listed with u < v")
            if u < 1 or v > self.vertex_count:
                raise ValueError(f"edge ({u}, {v}) outside [1, {self.vertex_count}]")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            edges.append((u, v, _check_weight(w)))
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def from_edges(cls, vertex_count: int, edges) -> "WeightedGraph":
        """Like the constructor but accepts either endpoint order and a missing weight (= 1)."""
        norm = []
        for e in edges:
            u, v, w = (*e, 1) if len(e) == 2 else e
            norm.append((min(u, v), max(u, v), w) if u != v else (u, v, w))
        return cls(vertex_count, tuple(norm))


@dataclass(frozen=True)
class BipartiteGraph:
    """Left vertices ``1..left_count``, right vertices ``1..right_count``."""

    left_count: int
    right_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        seen = set()
        edges = []
        for i, j, w in self.edges:
            i, j = int(i), int(j)
            if not (1 <= i <= self.left_count and 1 <= j <= self.right_count):
                raise ValueError(f"edge ({i}, {j}) outside {self.left_count}x{self.right_count}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            edges.append((i, j, _check_weight(w)))
        object.__setattr__(self, "edges", tuple(edges))

    def as_general(self) -> WeightedGraph:
        """Right vertex ``j`` becomes vertex ``left_count + j``."""
        m = self.left_count
        return WeightedGraph(m + self.right_count, tuple((i, m + j, w) for i, j, w in self.edges))


AnyGraph = Union[WeightedGraph, BipartiteGraph]


def _general(g: AnyGraph) -> WeightedGraph:
    return g.as_general() if isinstance(g, BipartiteGraph) else g


def iter_k_matchings(g: AnyGraph, k: int) -> Iterator[tuple[Edge, ...]]:
    """Yield every k-matching as a tuple of edges (in the general-graph numbering)."""
    if k < 0:
        raise ArgumentError(f"negative k={k}")
    g = _general(g)
    n = g.vertex_count
    higher: list[list[Edge]] = [[] for _ in range(n + 1)]
    for e in g.edges:
        higher[e[0]].append(e)
    used = [False] * (n + 2)
    chosen: list[Edge] = []

    def rec(v: int, need: int) -> Iterator[tuple[Edge, ...]]:
        if need == 0:
            yield tuple(chosen)
            return
        while v <= n and used[v]:
            v += 1
        if n - v + 1 < 2 * need:
            return
        used[v] = True
        for e in higher[v]:
            if not used[e[1]]:
                used[e[1]] = True
                chosen.append(e)
                yield from rec(v + 1, need - 1)
                chosen.pop()
                used[e[1]] = False
        used[v] = False
        # leave v unmatched
        yield from rec(v + 1, need)

    yield from rec(1, k)


def count_k_matchings(g: AnyGraph, k: int) -> Fraction:
    """Number of k-matchings, ignoring weights."""
    return Fraction(sum(1 for _ in iter_k_matchings(g, k)))


def weighted_matching_sum(g: AnyGraph, k: int) -> Fraction:
    """Sum over k-matchings of the product of their edge weights."""
    return sum(
        (math.prod((e[2] for e in mt), start=Fraction(1)) for mt in iter_k_matchings(g, k)),
        Fraction(0),
    )


def graph_from_matrix(b: NonnegMatrix) -> BipartiteGraph:
    edges = tuple(
        (i + 1, j + 1, b[i, j]) for i in range(b.rows) for j in range(b.cols) if b[i, j] > 0
    )
    return BipartiteGraph(b.rows, b.cols, edges)


def matrix_from_graph(g: BipartiteGraph) -> NonnegMatrix:
    rows = [[Fraction(0)] * g.right_count for _ in range(g.left_count)]
    for i, j, w in g.edges:
        rows[i - 1][j - 1] = w
    return NonnegMatrix.from_rows(rows, cols=g.right_count)


def graph_from_symmetric(a: SymZeroDiagMatrix) -> WeightedGraph:
    edges = tuple(
        (i + 1, j + 1, a[i, j])
        for i in range(a.order)
        for j in range(i + 1, a.order)
        if a[i, j] > 0
    )
    return WeightedGraph(a.order, edges)


def symmetric_from_graph(g: AnyGraph) -> SymZeroDiagMatrix:
    g = _general(g)
    weights = {(u, v): w for u, v, w in g.edges}
    return SymZeroDiagMatrix.from_function(
        g.vertex_count, lambda i, j: weights.get((i + 1, j + 1), 0)
    )
