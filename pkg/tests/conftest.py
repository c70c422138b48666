import pytest

from frobhoch.catalog import builtin
from frobhoch.expressions import parse_element


@pytest.fixture(scope="session")
def S2():
    return builtin("S2")


@pytest.fixture(scope="session")
def T2():
    return builtin("T2")


@pytest.fixture(scope="session")
def CP2():
    return builtin("CP2")


@pytest.fixture(scope="session")
def M2():
    return builtin("M2")


def el(A, expr, arity=None):
    """Shorthand: parse an element or tensor expression over ``A``."""
    return parse_element(expr, A, arity)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
