import random

import pytest
from hypothesis import strategies as st

from kmatch import NonnegMatrix, SymZeroDiagMatrix


def random_matrix(rng: random.Random, m: int, n: int, hi: int = 9) -> NonnegMatrix:
    return NonnegMatrix.from_rows([[rng.randint(0, hi) for _ in range(n)] for _ in range(m)], cols=n)


def random_symmetric(rng: random.Random, m: int, hi: int = 9) -> SymZeroDiagMatrix:
    return SymZeroDiagMatrix.from_function(m, lambda i, j: rng.randint(0, hi))


@pytest.fixture
def rng():
    return random.Random(12345)


@st.composite
def nonneg_matrices(draw, max_rows=5, max_cols=5, max_entry=6, square=False):
    m = draw(st.integers(1, max_rows))
    n = m if square else draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(0, max_entry), min_size=m * n, max_size=m * n))
    return NonnegMatrix(m, n, tuple(entries))


@st.composite
def symmetric_matrices(draw, max_order=7, max_entry=6, even=False):
    m = draw(st.integers(1, max_order))
    if even:
        m += m % 2
    size = m * (m - 1) // 2
    entries = draw(st.lists(st.integers(0, max_entry), min_size=size, max_size=size))
    return SymZeroDiagMatrix(m, tuple(entries))


_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            item.user_properties.append(("criterion", tuple(m.args)))


def pytest_runtest_logreport(report):
    meta = dict(report.user_properties).get("criterion")
    if meta is None:
        return
    if report.when == "call" or report.outcome != "passed":
        number, title = meta
        previous = _criteria.get(number, (title, "PASS"))[1]
        outcome = "PASS" if report.passed and previous == "PASS" else "FAIL"
        _criteria[number] = (title, outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcome = _criteria[number]
        terminalreporter.write_line(f"{outcome}  criterion {number:2d}: {title}")
