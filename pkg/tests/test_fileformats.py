import numpy as np
import pytest

from qadapt.fermion import build_molecular_hamiltonian
from qadapt.fileformats import (FormatError, format_pauli_hamiltonian, format_pool_file, parse_fcidump,
                                parse_pauli_hamiltonian, parse_pool_file, write_fcidump)
from qadapt.pauli import PauliString
from qadapt.pools import minimal_pool_v
from qadapt.statevector import basis_state, expectation

from conftest import H4_FCIDUMP, H4_HF_ENERGY

ONE_ORBITAL = """ &FCI NORB=1,NELEC=2,MS2=0,
  ORBSYM=1,
 &END
 -1.25 1 1 0 0
 0.5 1 1 1 1
 0.75 0 0 0 0
"""


def test_minimal_fcidump():
    mol = parse_fcidump(ONE_ORBITAL)
    assert mol.n_spatial == 1 and mol.n_electrons == 2
    assert mol.one_body[0, 0] == -1.25 and mol.two_body[0, 0, 0, 0] == 0.5
    assert mol.nuclear_repulsion == 0.75


def test_fcidump_fortran_exponent():
    mol = parse_fcidump(ONE_ORBITAL.replace("-1.25", "-1.25D+00"))
    assert mol.one_body[0, 0] == -1.25


@pytest.mark.parametrize("text,line", [
    (" &FCI NELEC=2\n &END\n", 1),
    (ONE_ORBITAL.replace("0.5 1 1 1 1", "abc 1 1 1 1"), 5),
    (ONE_ORBITAL.replace("0.5 1 1 1 1", "0.5 2 1 1 1"), 5),
    (ONE_ORBITAL.replace("0.5 1 1 1 1", "0.5 1 1"), 5),
])
def test_fcidump_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as err:
        parse_fcidump(text)
    assert err.value.line == line


def test_fcidump_unterminated_header():
    with pytest.raises(FormatError):
        parse_fcidump(" &FCI NORB=1,NELEC=2\n 1.0 1 1 0 0\n")


def test_h4_round_trip_and_hf_energy():
    mol = parse_fcidump(H4_FCIDUMP.read_text())
    again = parse_fcidump(write_fcidump(mol))
    assert np.array_equal(again.one_body, mol.one_body)
    assert np.array_equal(again.two_body, mol.two_body)
    assert again.nuclear_repulsion == mol.nuclear_repulsion
    H = build_molecular_hamiltonian(mol)
    hf = expectation(H, basis_state(8, mol.hf_occupation()))
    assert abs(hf - H4_HF_ENERGY) < 1e-9


def test_pauli_text():
    H = parse_pauli_hamiltonian("# toy\nnqubits 1\n-1.0 Z0\n")
    assert H.terms == {PauliString.from_label("Z"): -1.0}
    H = parse_pauli_hamiltonian("nqubits 1\n0.5 X0\n0.5 X0\n")
    assert H.terms == {PauliString.from_label("X"): 1.0}
    H = parse_pauli_hamiltonian("nqubits 2\n2.5\n1 X0 Y1\n")
    assert H.terms[PauliString.identity(2)] == 2.5
    assert parse_pauli_hamiltonian(format_pauli_hamiltonian(H)) == H


@pytest.mark.parametrize("text,line", [
    ("nqubits 2\n1.0 i X0\n", 2),
    ("nqubits 2\n1.0 X2\n", 2),
    ("nqubits 2\nfoo X0\n", 2),
    ("qubits 2\n", 1),
])
def test_pauli_text_errors(text, line):
    with pytest.raises(FormatError) as err:
        parse_pauli_hamiltonian(text)
    assert err.value.line == line


def test_pool_file_round_trip():
    ops = minimal_pool_v(4).pauli_generators()
    n, back = parse_pool_file(format_pool_file(4, ops))
    assert n == 4 and back == ops
    with pytest.raises(FormatError):
        parse_pool_file("nqubits 2\nX0 Y1\n")
