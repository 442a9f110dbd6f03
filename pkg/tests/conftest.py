from pathlib import Path

import pytest

from zoneplate import geometry as G
from zoneplate import materials as M
from zoneplate import propagation as P
from zoneplate import transmission as T

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

# (criterion, passed, detail) appended by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


@pytest.fixture(scope="session")
def si_table():
    return M.silicon_table()


@pytest.fixture(scope="session")
def si_805(si_table):
    return M.load_constants(si_table, 8050.0)


@pytest.fixture(scope="session")
def si_800(si_table):
    return M.load_constants(si_table, 8000.0)


@pytest.fixture(scope="session")
def design_805(si_805):
    return G.DesignParams(si_805.wavelength, 0.46)


@pytest.fixture(scope="session")
def plate_ref(design_805):
    """The tested first-order plate: N = 112, relief 10.5 um, membrane 16 um."""
    return G.assemble_compound(design_805, [(1, 0, 112)], 10.5e-6, 16e-6)


@pytest.fixture(scope="session")
def profile_ref(plate_ref, si_805):
    return T.sample_profile(plate_ref, si_805)


@pytest.fixture(scope="session")
def ideal_ref(plate_ref):
    return T.ideal_phase_profile(plate_ref)


@pytest.fixture(scope="session")
def field_ref(profile_ref, si_805):
    return P.propagate(profile_ref, si_805.wavelength, 0.46)


@pytest.fixture(scope="session")
def ideal_field_ref(ideal_ref, si_805):
    return P.propagate(ideal_ref, si_805.wavelength, 0.46)
