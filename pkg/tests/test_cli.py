import math
import subprocess
import sys

import pytest

from kmatch.cli import (
    EXIT_DISAGREE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_RESOURCE,
    format_matrix,
    main,
    parse_graph,
    parse_matrix,
)
from kmatch import NonnegMatrix, SymZeroDiagMatrix
from kmatch import cli


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


J2 = "2 2\n1 1\n1 1\n"
J3 = "3 3\n1 1 1\n1 1 1\n1 1 1\n"
K4 = "# complete graph on 4 vertices\n4\n0 1 1 1\n1 0 1 1\n1 1 0 1\n1 1 1 0\n"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_count_examples(write, capsys):
    assert run(capsys, "count", write("j3", J3), "--mode", "perm") == (0, "6\n", "")
    assert run(capsys, "count", write("j2", J2), "--mode", "perm_k", "--k", 1, "--method", "reduction")[:2] == (0, "4\n")
    assert run(capsys, "count", write("k4", K4), "--mode", "haf_k", "--k", 1, "--check")[:2] == (0, "6\n")


def test_count_all_modes_and_methods(write, capsys):
    path = write("k4", K4)
    for method in ("direct", "reduction", "brute"):
        assert run(capsys, "count", path, "--mode", "haf", "--method", method)[1] == "3\n"
        assert run(capsys, "count", path, "--mode", "perm", "--method", method)[1] == "9\n"


def test_count_rational_output(write, capsys):
    path = write("r", "2 2\n1/2 1\n1 1/3\n")
    assert run(capsys, "count", path, "--mode", "perm", "--check")[:2] == (0, "7/6\n")


def test_matchings_mode(write, capsys):
    g = write("c6", "v 6\n" + "".join(f"e {i} {i % 6 + 1} 1\n" for i in range(1, 7)))
    assert run(capsys, "count", g, "--mode", "matchings", "--k", 3, "--check")[:2] == (0, "2\n")
    w = write("w", "v 3\ne 1 2 5\ne 2 3 2\n")
    assert run(capsys, "count", w, "--mode", "matchings", "--k", 1)[1] == "7\n"
    assert run(capsys, "count", w, "--mode", "matchings", "--k", 1, "--unweighted")[1] == "2\n"
    assert run(capsys, "count", write("j2", J2), "--mode", "matchings", "--k", 1)[0] == EXIT_INPUT


def test_check_detects_disagreement(write, capsys, monkeypatch):
    monkeypatch.setattr(cli, "perm_k_direct", lambda b, k: 0)
    code, out, err = run(capsys, "count", write("j2", J2), "--mode", "perm_k", "--k", 1, "--check")
    assert code == EXIT_DISAGREE and out == "" and "disagree" in err


def test_exit_codes(write, capsys):
    bad = write("bad", "2 2\n1 x\n3 4\n")
    assert run(capsys, "count", bad, "--mode", "perm")[0] == EXIT_INPUT
    short = write("short", "3 3\n1 1 1\n")
    assert run(capsys, "count", short, "--mode", "perm")[0] == EXIT_INPUT
    neg = write("neg", "1 1\n-1\n")
    assert run(capsys, "count", neg, "--mode", "perm")[0] == EXIT_INPUT
    flt = write("flt", "1 1\n0.5\n")
    assert run(capsys, "count", flt, "--mode", "perm")[0] == EXIT_INPUT
    assert run(capsys, "count", write("j3", J3), "--mode", "perm", "--max-n", 2)[0] == EXIT_RESOURCE
    assert run(capsys, "count", write("j2", J2), "--mode", "perm_k", "--k", 3)[0] == EXIT_INPUT
    assert run(capsys, "count", write("j2b", J2), "--mode", "perm_k")[0] == EXIT_INPUT
    assert run(capsys, "count", "/nonexistent/file", "--mode", "perm")[0] == EXIT_INPUT
    assert run(capsys, "count", write("j3b", J3), "--mode", "nope")[0] == EXIT_INPUT
    code, out, err = run(capsys, "count", bad, "--mode", "perm")
    assert out == "" and err.startswith("kmatch:")


def test_poly_examples(write, capsys):
    assert run(capsys, "poly", write("j2", J2))[1] == "1 4 2\n"
    assert run(capsys, "poly", write("z", "3 3\n0 0 0\n0 0 0\n0 0 0\n"))[1] == "1\n"
    out = run(capsys, "poly", write("k4", K4), "--kind", "general", "--verify-roots")[1]
    assert out == "1 6 3\nreal-negative-roots: true\n"


def test_reduce_examples(write, capsys, tmp_path):
    out = tmp_path / "b1"
    assert run(capsys, "reduce", write("j2", J2), "--k", 1, "-o", out)[0] == 0
    assert out.read_text() == "3 3\n1 1 1\n1 1 1\n1 1 0\n"
    first = out.read_text()
    run(capsys, "reduce", write("j2", J2), "--k", 1, "-o", out)
    assert out.read_text() == first
    sq = "2 2\n1 2\n3 4\n"
    run(capsys, "reduce", write("sq", sq), "--k", 2, "-o", out)
    assert out.read_text() == sq
    run(capsys, "reduce", write("k4", K4), "--k", 1, "--kind", "general", "-o", out)
    reduced = parse_matrix(out.read_text())
    assert isinstance(reduced, SymZeroDiagMatrix) and reduced.order == 6
    assert run(capsys, "reduce", write("j2b", J2), "--k", 5, "-o", out)[0] == EXIT_INPUT


def test_estimate_examples(write, capsys):
    perm = write("p", "3 3\n0 1 0\n0 0 1\n1 0 0\n")
    assert run(capsys, "estimate", perm, "--mode", "perm", "--samples", 10)[1] == \
        "estimate=1 stderr=0 samples=10 seed=0\n"
    zero = write("z", "2 2\n0 0\n1 1\n")
    assert run(capsys, "estimate", zero, "--mode", "perm", "--samples", 10)[1].startswith("estimate=0 ")
    j5 = write("j5", "5 5\n" + "1 1 1 1 1\n" * 5)
    line = run(capsys, "estimate", j5, "--mode", "perm", "--samples", 100000, "--seed", 7)[1]
    fields = dict(kv.split("=") for kv in line.split())
    assert abs(float(fields["estimate"]) - 120) <= 3 * float(fields["stderr"])
    again = run(capsys, "estimate", j5, "--mode", "perm", "--samples", 100000, "--seed", 7)[1]
    assert again == line


def test_estimate_other_modes(write, capsys):
    k4 = write("k4", K4)
    assert run(capsys, "estimate", k4, "--mode", "haf", "--samples", 100)[1].startswith("estimate=3 ")
    assert run(capsys, "estimate", k4, "--mode", "haf_k", "--k", 2, "--samples", 100)[0] == EXIT_OK
    j2 = write("j2", J2)
    assert run(capsys, "estimate", j2, "--mode", "poly", "--x", 0, "--samples", 10)[1].startswith("estimate=1 ")
    assert run(capsys, "estimate", j2, "--mode", "perm_k", "--k", 1, "--eps", 0.5, "--delta", 0.1)[0] == EXIT_OK
    assert run(capsys, "estimate", j2, "--mode", "perm", "--samples", 0)[0] == EXIT_INPUT


def test_graph_parsing():
    g = parse_graph("v 4\n# edges\ne 2 1 3\ne 3 4\n")
    assert g.vertex_count == 4 and [(u, v, int(w)) for u, v, w in g.edges] == [(1, 2, 3), (3, 4, 1)]
    for bad in ("e 1 2 1\n", "v 2\ne 1 1 1\n", "v 2\nx 1 2\n", "v 2\ne 1 3 1\n"):
        with pytest.raises(ValueError):
            parse_graph(bad)


def test_matrix_text_roundtrip():
    b = NonnegMatrix.from_rows([[1, "2/3"], [0, 5]])
    assert parse_matrix(format_matrix(b)) == b
    a = SymZeroDiagMatrix.complete(3)
    assert parse_matrix(format_matrix(a)) == a


def test_module_entry_point(tmp_path):
    p = tmp_path / "j3"
    p.write_text(J3)
    res = subprocess.run([sys.executable, "-m", "kmatch", "count", str(p), "--mode", "perm"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "6\n"
