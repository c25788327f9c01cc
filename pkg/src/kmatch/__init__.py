"""Exact and randomized counting of weighted k-matchings.

The number (or total weight) of k-matchings of a bipartite graph with
biadjacency matrix ``B`` equals ``perm(B_k) / ((m-k)! (n-k)!)`` for a padded
square matrix ``B_k``; for a general graph with adjacency matrix ``A`` it is
``haf(A_k) / (m-2k)!``.  This package builds those matrices, evaluates them
exactly, checks them against brute-force enumeration, and estimates them by
sequential importance sampling.
"""
from .core import (
    ArgumentError,
    ConsistencyError,
    DimensionError,
    ExactNumber,
    IndexSubset,
    MatchingError,
    NonnegMatrix,
    ParityError,
    ResourceLimitError,
    SymZeroDiagMatrix,
    bipartite_double_cover,
    enumerate_subsets,
    factorial,
    principal_submatrix,
    submatrix,
)
from .enumeration import (
    BipartiteGraph,
    WeightedGraph,
    count_k_matchings,
    graph_from_matrix,
    graph_from_symmetric,
    iter_k_matchings,
    matrix_from_graph,
    symmetric_from_graph,
    weighted_matching_sum,
)
from .exact import (
    SkewMatrix,
    determinant,
    haf_k_direct,
    hafnian,
    perm_k_direct,
    permanent,
    pfaffian,
)
from .polynomial import (
    MatchingPolynomial,
    haf_by_coefficient_extraction,
    matching_poly_bipartite,
    matching_poly_general,
    perm_by_coefficient_extraction,
    verify_real_negative_roots,
)
from .reduction import (
    build_Ak,
    build_Bk,
    haf_k_via_reduction,
    pad_isolated,
    perm_k_via_reduction,
)
from .approx import (
    EstimateReport,
    estimate_haf_k,
    estimate_hafnian,
    estimate_matching_poly_eval,
    estimate_perm_k,
    estimate_permanent,
)

__version__ = "0.1.0"
