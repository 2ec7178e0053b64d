import pytest

from christoffel_dpp.specfun import get_context


@pytest.fixture(scope="session")
def ctx():
    return get_context(256)


@pytest.fixture(scope="session")
def ctx512():
    return get_context(512)


@pytest.fixture(scope="session")
def mp(ctx):
    return ctx.mp


_ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one acceptance line; the lines are echoed in the terminal summary."""

    def put(name, ok, detail):
        _ACCEPTANCE.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        print(_ACCEPTANCE[-1])
        return ok

    return put


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
