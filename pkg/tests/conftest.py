import sys

import pytest

from fq2perm.fields import build_field


@pytest.fixture(scope="session")
def F5():
    return build_field(5)


@pytest.fixture(scope="session")
def F7():
    return build_field(7)


@pytest.fixture(scope="session")
def F9():
    return build_field(3, 2)


@pytest.fixture(scope="session")
def F4():
    return build_field(2, 2)


def fields_small():
    return [build_field(2), build_field(3), build_field(2, 2), build_field(5), build_field(7),
            build_field(2, 3), build_field(3, 2)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
