from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"
H4_FCIDUMP = DATA / "h4_sto3g_r1.5.fcidump"
# independent reference: pyscf FCI on the same integrals
H4_FCI_ENERGY = -1.9961503255188098
H4_HF_ENERGY = -1.8291374124430235


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def h4():
    from qadapt.fermion import build_molecular_hamiltonian
    from qadapt.fileformats import parse_fcidump

    mol = parse_fcidump(H4_FCIDUMP.read_text())
    return mol, build_molecular_hamiltonian(mol)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
