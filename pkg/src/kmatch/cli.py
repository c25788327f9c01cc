"""Command-line interface.

Input formats
-------------
Matrix file: a header line ``m n`` for a rectangular nonnegative matrix or
``m`` for a symmetric zero-diagonal one, followed by ``m`` rows of
whitespace-separated entries (integers or ``p/q``).  Lines starting with
``#`` are comments; blank lines are ignored.

Graph file: ``v <count>`` followed by ``e u v w`` lines (1-based vertices,
positive weight ``w``; ``w`` may be omitted for weight 1).

Exit codes: 0 success, 2 malformed input or invalid arguments, 3 methods
disagree (``--check``) or an internal identity failed, 4 resource cap
exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Union

from . import approx
from .core import (
    ArgumentError,
    ConsistencyError,
    DimensionError,
    MatchingError,
    NonnegMatrix,
    ParityError,
    ResourceLimitError,
    SymZeroDiagMatrix,
    exact,
    format_exact,
)
from .enumeration import (
    WeightedGraph,
    count_k_matchings,
    graph_from_matrix,
    graph_from_symmetric,
    symmetric_from_graph,
    weighted_matching_sum,
)
from .exact import HAFNIAN_CAP, PERMANENT_CAP, haf_k_direct, hafnian, perm_k_direct, permanent
from .polynomial import matching_poly_bipartite, matching_poly_general, verify_real_negative_roots
from .reduction import build_Ak, build_Bk, haf_k_via_reduction, perm_k_via_reduction

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DISAGREE = 3
EXIT_RESOURCE = 4

METHODS = ("direct", "reduction", "brute")
DEFAULT_METHOD = {
    "perm": "direct",
    "haf": "direct",
    "perm_k": "reduction",
    "haf_k": "reduction",
    "matchings": "brute",
}

Loaded = Union[NonnegMatrix, SymZeroDiagMatrix, WeightedGraph]


class InputFormatError(MatchingError, ValueError):
    pass


class Disagreement(MatchingError):
    pass


# ------------------------------------------------------------------ files


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.append((lineno, stripped.split()))
    return out


def _count(token: str, lineno: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise InputFormatError(f"line {lineno}: expected a count, got {token!r}") from None
    if value < 0:
        raise InputFormatError(f"line {lineno}: negative count {value}")
    return value


def _entry(token: str, lineno: int):
    if "." in token or "e" in token.lower():
        raise InputFormatError(f"line {lineno}: {token!r} is not an integer or p/q rational")
    try:
        return exact(token)
    except ValueError:
        raise InputFormatError(f"line {lineno}: bad entry {token!r}") from None


def parse_matrix(text: str) -> Union[NonnegMatrix, SymZeroDiagMatrix]:
    lines = _content_lines(text)
    if not lines:
        raise InputFormatError("empty matrix file")
    (lineno, header), body = lines[0], lines[1:]
    if len(header) not in (1, 2):
        raise InputFormatError(f"line {lineno}: header must be 'm n' or 'm'")
    m = _count(header[0], lineno)
    n = _count(header[1], lineno) if len(header) == 2 else m
    if len(body) != m:
        raise InputFormatError(f"expected {m} rows, found {len(body)}")
    rows = []
    for lineno, tokens in body:
        if len(tokens) != n:
            raise InputFormatError(f"line {lineno}: expected {n} entries, found {len(tokens)}")
        rows.append([_entry(t, lineno) for t in tokens])
    try:
        if len(header) == 1:
            return SymZeroDiagMatrix.from_rows(rows)
        return NonnegMatrix.from_rows(rows, cols=n)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def parse_graph(text: str) -> WeightedGraph:
    lines = _content_lines(text)
    if not lines or lines[0][1][0] != "v" or len(lines[0][1]) != 2:
        raise InputFormatError("graph file must start with 'v <count>'")
    count = _count(lines[0][1][1], lines[0][0])
    edges = []
    for lineno, tokens in lines[1:]:
        if tokens[0] != "e" or len(tokens) not in (3, 4):
            raise InputFormatError(f"line {lineno}: expected 'e u v w'")
        u, v = _count(tokens[1], lineno), _count(tokens[2], lineno)
        w = _entry(tokens[3], lineno) if len(tokens) == 4 else 1
        edges.append((u, v, w))
    try:
        return WeightedGraph.from_edges(count, edges)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def load(path: Union[str, Path]) -> Loaded:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc.strerror}") from None
    lines = _content_lines(text)
    if lines and lines[0][1][0] == "v":
        return parse_graph(text)
    return parse_matrix(text)


def format_matrix(b: Union[NonnegMatrix, SymZeroDiagMatrix]) -> str:
    if isinstance(b, SymZeroDiagMatrix):
        header, rows = f"{b.order}", b.to_rows()
    else:
        header, rows = f"{b.rows} {b.cols}", b.to_rows()
    body = [" ".join(format_exact(v) for v in r) for r in rows]
    return "\n".join([header, *body]) + "\n"


def as_bipartite(obj: Loaded) -> NonnegMatrix:
    if isinstance(obj, NonnegMatrix):
        return obj
    if isinstance(obj, SymZeroDiagMatrix):
        return NonnegMatrix.from_rows(obj.to_rows(), cols=obj.order)
    raise InputFormatError("this mode needs a matrix file, not a graph")


def as_general(obj: Loaded) -> SymZeroDiagMatrix:
    if isinstance(obj, SymZeroDiagMatrix):
        return obj
    if isinstance(obj, WeightedGraph):
        return symmetric_from_graph(obj)
    try:
        return SymZeroDiagMatrix.from_rows(obj.to_rows())
    except ValueError as exc:
        raise InputFormatError(f"matrix is not symmetric with zero diagonal: {exc}") from None


# ---------------------------------------------------------------- count


def _require_k(k, mode: str) -> int:
    if k is None:
        raise ArgumentError(f"--k is required for mode {mode}")
    return k


def _count_methods(obj: Loaded, mode: str, k, max_n, unweighted: bool) -> dict:
    """Map each method name to a thunk computing the requested value."""
    pcap = max_n or PERMANENT_CAP
    hcap = max_n or HAFNIAN_CAP
    if mode in ("perm", "perm_k"):
        b = as_bipartite(obj)
        if mode == "perm":
            if not b.is_square:
                raise DimensionError(f"permanent of non-square {b.rows}x{b.cols} matrix")
            k = b.rows
        k = _require_k(k, mode)
        return {
            "direct": (lambda: permanent(b, max_n=pcap)) if mode == "perm" else (lambda: perm_k_direct(b, k)),
            "reduction": lambda: perm_k_via_reduction(b, k, max_n=pcap),
            "brute": lambda: weighted_matching_sum(graph_from_matrix(b), k),
        }
    if mode == "matchings":
        if not isinstance(obj, WeightedGraph):
            raise InputFormatError("mode matchings needs a graph file")
        g = obj
        if unweighted:
            g = WeightedGraph(g.vertex_count, tuple((u, v, 1) for u, v, _ in g.edges))
        k = _require_k(k, mode)
        a = symmetric_from_graph(g)
        return {
            "direct": lambda: haf_k_direct(a, k),
            "reduction": lambda: haf_k_via_reduction(a, k, max_n=hcap),
            "brute": (lambda: count_k_matchings(g, k)) if unweighted else (lambda: weighted_matching_sum(g, k)),
        }
    a = as_general(obj)
    if mode == "haf":
        if a.order % 2:
            raise ParityError(f"hafnian of odd order {a.order}")
        k = a.order // 2
    k = _require_k(k, mode)
    return {
        "direct": (lambda: hafnian(a, max_n=hcap)) if mode == "haf" else (lambda: haf_k_direct(a, k)),
        "reduction": lambda: haf_k_via_reduction(a, k, max_n=hcap),
        "brute": lambda: weighted_matching_sum(graph_from_symmetric(a), k),
    }


def cmd_count(args) -> int:
    obj = load(args.input)
    methods = _count_methods(obj, args.mode, args.k, args.max_n, args.unweighted)
    method = args.method or DEFAULT_METHOD[args.mode]
    if args.check:
        values = {}
        for name in METHODS:
            try:
                values[name] = methods[name]()
            except ArgumentError:
                # the padded construction needs k >= 1
                if name != "reduction":
                    raise
        distinct = set(values.values())
        if len(distinct) != 1:
            detail = ", ".join(f"{name}={format_exact(v)}" for name, v in values.items())
            raise Disagreement(f"methods disagree: {detail}")
        value = values[method] if method in values else next(iter(values.values()))
    else:
        value = methods[method]()
    print(format_exact(value))
    return EXIT_OK


# ------------------------------------------------------------ poly / reduce


def cmd_poly(args) -> int:
    obj = load(args.input)
    if args.kind == "bipartite":
        b = as_bipartite(obj)
        poly = matching_poly_bipartite(b, max_n=args.max_n or PERMANENT_CAP)
    else:
        a = as_general(obj)
        poly = matching_poly_general(a, max_n=args.max_n or HAFNIAN_CAP)
    print(" ".join(format_exact(c) for c in poly.coefficients))
    if args.verify_roots:
        report = verify_real_negative_roots(poly)
        print(f"real-negative-roots: {'true' if report.all_real_negative else 'false'}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    obj = load(args.input)
    if args.kind == "bipartite":
        reduced = build_Bk(as_bipartite(obj), args.k)
    else:
        reduced = build_Ak(as_general(obj), args.k)
    text = format_matrix(reduced)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return EXIT_OK


# -------------------------------------------------------------- estimate


def cmd_estimate(args) -> int:
    obj = load(args.input)
    kwargs = dict(eps=args.eps, delta=args.delta, proposal=args.proposal, workers=args.workers)
    samples, seed = args.samples, args.seed
    if args.mode == "perm":
        report = approx.estimate_permanent(as_bipartite(obj), samples, seed, **kwargs)
    elif args.mode == "perm_k":
        report = approx.estimate_perm_k(as_bipartite(obj), _require_k(args.k, "perm_k"), samples, seed, **kwargs)
    elif args.mode == "haf":
        report = approx.estimate_hafnian(as_general(obj), samples, seed, **kwargs)
    elif args.mode == "haf_k":
        report = approx.estimate_haf_k(as_general(obj), _require_k(args.k, "haf_k"), samples, seed, **kwargs)
    else:
        if args.x is None:
            raise ArgumentError("--x is required for mode poly")
        report = approx.estimate_matching_poly_eval(as_bipartite(obj), args.x, samples, seed, **kwargs)
    print(report.format())
    return EXIT_OK


# ------------------------------------------------------------------ main


def _rational_arg(text: str):
    try:
        return exact(text) if "." not in text and "e" not in text.lower() else float(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmatch", description="Count and estimate weighted k-matchings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact permanent / hafnian / k-matching sums")
    p.add_argument("input")
    p.add_argument("--mode", required=True, choices=list(DEFAULT_METHOD))
    p.add_argument("--k", type=int)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--check", action="store_true", help="run every method and require agreement")
    p.add_argument("--unweighted", action="store_true", help="matchings mode: ignore edge weights")
    p.add_argument("--max-n", type=int, help="cap on permanent/hafnian order")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("poly", help="matching polynomial coefficients")
    p.add_argument("input")
    p.add_argument("--kind", choices=("bipartite", "general"), default="bipartite")
    p.add_argument("--verify-roots", action="store_true")
    p.add_argument("--max-n", type=int)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("reduce", help="write the padded matrix B_k or A_k")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--kind", choices=("bipartite", "general"), default="bipartite")
    p.add_argument("-o", "--output", required=True, help="output path, '-' for stdout")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("estimate", help="Monte Carlo estimate")
    p.add_argument("input")
    p.add_argument("--mode", required=True, choices=("perm", "perm_k", "haf", "haf_k", "poly"))
    p.add_argument("--k", type=int)
    p.add_argument("--x", type=_rational_arg, help="evaluation point for mode poly")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--proposal", choices=approx.PROPOSALS, default="uniform")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"kmatch: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (Disagreement, ConsistencyError) as exc:
        print(f"kmatch: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (MatchingError, ValueError) as exc:
        print(f"kmatch: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
