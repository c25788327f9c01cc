import itertools
import math

import pytest
from hypothesis import given, settings

from kmatch import (
    ArgumentError,
    NonnegMatrix,
    SymZeroDiagMatrix,
    bipartite_double_cover,
    build_Ak,
    build_Bk,
    graph_from_matrix,
    graph_from_symmetric,
    haf_k_direct,
    haf_k_via_reduction,
    hafnian,
    pad_isolated,
    perm_k_direct,
    perm_k_via_reduction,
    permanent,
    weighted_matching_sum,
)
from kmatch.core import ConsistencyError
from kmatch.exact import permanent_naive
from kmatch import reduction

from conftest import nonneg_matrices, random_matrix, random_symmetric, symmetric_matrices


def test_build_Bk_blocks():
    b = NonnegMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert build_Bk(b, 1).to_rows() == [
        [1, 2, 3, 1],
        [4, 5, 6, 1],
        [1, 1, 1, 0],
        [1, 1, 1, 0],
    ]
    assert build_Bk(NonnegMatrix.ones(2, 2), 1).to_rows() == [[1, 1, 1], [1, 1, 1], [1, 1, 0]]


def test_build_Bk_full_k_is_identity():
    b = NonnegMatrix.from_rows([[1, 2], [3, 4]])
    assert build_Bk(b, 2) == b


def test_build_Bk_k_equals_min_rectangular():
    b = NonnegMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    bk = build_Bk(b, 2)
    # only a bottom row of ones is added
    assert bk.to_rows() == [[1, 2, 3], [4, 5, 6], [1, 1, 1]]


@pytest.mark.parametrize("k", [0, 3])
def test_build_Bk_range(k):
    with pytest.raises(ArgumentError):
        build_Bk(NonnegMatrix.ones(2, 3), k)


def test_perm_k_via_reduction_examples():
    j2 = NonnegMatrix.ones(2, 2)
    # frozen: naive expansion of [[1,1,1],[1,1,1],[1,1,0]] gives 4
    assert permanent_naive(build_Bk(j2, 1).to_rows()) == 4
    assert perm_k_via_reduction(j2, 1) == 4
    assert perm_k_via_reduction(j2, 2) == 2


def test_perm_k_via_reduction_random(rng):
    for _ in range(20):
        b = random_matrix(rng, 3, 4)
        for k in (1, 2, 3):
            assert perm_k_via_reduction(b, k) == perm_k_direct(b, k)


def test_rational_inputs():
    b = NonnegMatrix.from_rows([["1/2", 3], [1, "2/7"], [0, 5]])
    for k in (1, 2):
        assert perm_k_via_reduction(b, k) == perm_k_direct(b, k)


def test_build_Ak_shapes():
    k4 = SymZeroDiagMatrix.complete(4)
    assert build_Ak(k4, 2) == k4
    a1 = build_Ak(k4, 1)
    assert a1.order == 6
    rows = a1.to_rows()
    assert [r[4:] for r in rows[:4]] == [[1, 1]] * 4
    assert [r[4:] for r in rows[4:]] == [[0, 0], [0, 0]]
    assert build_Ak(SymZeroDiagMatrix.complete(3), 1).order == 4
    with pytest.raises(ArgumentError):
        build_Ak(k4, 3)
    with pytest.raises(ArgumentError):
        build_Ak(k4, 0)


def test_haf_k_via_reduction_examples():
    k4 = SymZeroDiagMatrix.complete(4)
    assert haf_k_via_reduction(k4, 2) == 3
    # frozen from enumerating the perfect matchings of the 6-vertex A_1
    assert hafnian(build_Ak(k4, 1)) == 12
    assert haf_k_via_reduction(k4, 1) == 6


def test_haf_k_via_reduction_random(rng):
    for _ in range(20):
        a = random_symmetric(rng, 6)
        for k in (1, 2, 3):
            assert haf_k_via_reduction(a, k) == haf_k_direct(a, k)


def test_pad_isolated_examples():
    p = pad_isolated(NonnegMatrix.from_rows([[1]]), 2, 2)
    assert p.to_rows() == [[1, 0], [0, 0]]
    assert perm_k_direct(p, 1) == 1
    p = pad_isolated(NonnegMatrix.ones(2, 2), 3, 3)
    assert perm_k_direct(p, 2) == 2
    b = NonnegMatrix.from_rows([[1, 2], [3, 4]])
    assert pad_isolated(b, 2, 2) == b
    with pytest.raises(ArgumentError):
        pad_isolated(b, 1, 3)


def test_padding_roundtrip(rng):
    for _ in range(10):
        k = rng.randint(1, 3)
        b = random_matrix(rng, k, k)
        for m in range(k, k + 4):
            for n in range(k, k + 4):
                assert perm_k_direct(pad_isolated(b, m, n), k) == permanent(b)


def test_exhaustive_01_up_to_2x3():
    for m, n in [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]:
        for bits in itertools.product((0, 1), repeat=m * n):
            b = NonnegMatrix(m, n, bits)
            g = graph_from_matrix(b)
            for k in range(1, min(m, n) + 1):
                assert perm_k_via_reduction(b, k) == perm_k_direct(b, k) == weighted_matching_sum(g, k)


@settings(max_examples=60, deadline=None)
@given(nonneg_matrices(max_rows=5, max_cols=5))
def test_bipartite_reduction_identity_and_divisibility(b):
    m, n = b.shape
    for k in range(1, min(m, n) + 1):
        p = permanent(build_Bk(b, k))
        assert p.numerator % (math.factorial(m - k) * math.factorial(n - k)) == 0
        assert perm_k_via_reduction(b, k) == perm_k_direct(b, k)


@settings(max_examples=60, deadline=None)
@given(symmetric_matrices(max_order=7))
def test_general_reduction_identity(a):
    g = graph_from_symmetric(a)
    for k in range(1, a.order // 2 + 1):
        assert haf_k_via_reduction(a, k) == haf_k_direct(a, k) == weighted_matching_sum(g, k)


def test_bipartite_embedding_consistency(rng):
    for _ in range(20):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        b = random_matrix(rng, m, n)
        a = bipartite_double_cover(b)
        for k in range(1, min(m, n) + 1):
            assert haf_k_via_reduction(a, k) == perm_k_via_reduction(b, k)


def test_divisibility_failure_is_reported(monkeypatch):
    monkeypatch.setattr(reduction, "permanent", lambda m, max_n: permanent(m) + 1)
    with pytest.raises(ConsistencyError, match="not divisible"):
        perm_k_via_reduction(NonnegMatrix.ones(3, 3), 1)
