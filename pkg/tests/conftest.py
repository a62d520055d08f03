import time

import pytest
from hypothesis import HealthCheck, settings

from qreflection.casimir import material_table
from qreflection.gravity import lifetime_table
from qreflection.materials import get_material
from qreflection.optics import AtomPolarizability

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("default")

#: (criterion, PASS/FAIL, detail) lines collected by the acceptance suite
ACCEPTANCE = []


class Table1(list):
    seconds = None


@pytest.fixture(scope="session")
def acceptance():
    """Record one acceptance criterion, print its line and assert it."""
    def check(number, ok, detail):
        ACCEPTANCE.append((number, "PASS" if ok else "FAIL", detail))
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return check


@pytest.fixture(scope="session")
def pol():
    return AtomPolarizability.hydrogen()


@pytest.fixture(scope="session")
def tables():
    """CP tables of the three bulk surfaces, built once per session."""
    return {name: material_table(get_material(name)) for name in ("perfect", "silicon", "silica")}


@pytest.fixture(scope="session")
def table1():
    """Scattering lengths and lifetimes of the six reference surfaces (slow, run once).

    ``seconds`` holds the wall time of the full pipeline, tables included.
    """
    start = time.perf_counter()
    rows = Table1(lifetime_table())
    rows.seconds = time.perf_counter() - start
    return rows


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda item: item[0]):
            terminalreporter.write_line(f"criterion {line[0]:>2}: {line[1]}  {line[2]}")
