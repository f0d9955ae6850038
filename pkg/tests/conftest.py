import pytest

from renacount.series import coeff_table


@pytest.fixture(scope="session")
def table_k2_2000():
    """Every series for k=2 up to z^2000 (about 8 s, built once)."""
    return coeff_table(2, 2000)


@pytest.fixture(scope="session")
def small_tables():
    return {k: coeff_table(k, 14) for k in (1, 2, 3, 4)}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
