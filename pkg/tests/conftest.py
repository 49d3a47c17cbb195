import pytest

from cellprotect import load_fixture


@pytest.fixture(scope="session")
def fig1():
    return load_fixture("fig1")


@pytest.fixture(scope="session")
def fig2():
    return load_fixture("fig2")


@pytest.fixture(scope="session")
def fig3():
    return load_fixture("fig3")


@pytest.fixture(scope="session")
def tk22():
    return load_fixture("tk22")


def cells(*names):
    """``cells("1:a", "2:b")`` as zero-based (row, col) pairs for default labels."""
    out = []
    for name in names:
        row, col = name.split(":")
        out.append((int(row) - 1, ord(col) - ord("a")))
    return out


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
