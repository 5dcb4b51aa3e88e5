"""Readers and writers for FCIDUMP integrals, Pauli-text Hamiltonians and pool files."""

from __future__ import annotations

import re
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from .fermion import MolecularHamiltonian
from .pauli import PauliParseError, PauliString, PauliSum, format_pauli, parse_pauli


class FormatError(ValueError):
    """Input file problem; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


# -- FCIDUMP -----------------------------------------------------------------

_HEADER_KEY = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^=]*?)(?=,?\s*[A-Za-z_][A-Za-z0-9_]*\s*=|$)")


def _parse_number(text: str, line: int) -> float:
    try:
        return float(text.replace("D", "E").replace("d", "e"))
    except ValueError:
        raise FormatError(f"non-numeric field {text!r}", line) from None


def _two_body_images(i: int, j: int, k: int, l: int):
    return {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
            (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}


def parse_fcidump(text: str, tol: float = 1e-10) -> MolecularHamiltonian:
    """Parse an FCIDUMP file (chemists' index order, 1-based orbital indices)."""
    lines = text.splitlines()
    header: List[str] = []
    body_start = None
    for no, raw in enumerate(lines, 1):
        stripped = raw.strip()
        header.append(stripped)
        if stripped.upper().startswith("&END") or stripped == "/" or stripped.upper().endswith("&END"):
            body_start = no
            break
    if body_start is None:
        raise FormatError("namelist header is not terminated by &END or /")
    joined = " ".join(header)
    joined = re.sub(r"&FCI|&END", " ", joined, flags=re.IGNORECASE).replace("/", " ")
    keys: Dict[str, str] = {}
    for key, value in _HEADER_KEY.findall(joined):
        keys[key.upper()] = value.strip().rstrip(",")
    for needed in ("NORB", "NELEC"):
        if needed not in keys:
            raise FormatError(f"header is missing {needed}", 1)
    try:
        norb = int(keys["NORB"])
        nelec = int(keys["NELEC"])
        ms2 = int(keys.get("MS2", "0") or 0)
    except ValueError:
        raise FormatError("NORB, NELEC and MS2 must be integers", 1) from None

    h = np.zeros((norb, norb))
    g = np.zeros((norb, norb, norb, norb))
    h_set = np.zeros((norb, norb), dtype=bool)
    g_set = np.zeros_like(g, dtype=bool)
    core = 0.0
    for no in range(body_start + 1, len(lines) + 1):
        fields = lines[no - 1].split()
        if not fields:
            continue
        if len(fields) != 5:
            raise FormatError(f"expected 'value i j k l', got {len(fields)} fields", no)
        value = _parse_number(fields[0], no)
        try:
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError:
            raise FormatError("orbital indices must be integers", no) from None
        if any(x < 0 or x > norb for x in (i, j, k, l)):
            raise FormatError(f"orbital index out of range 0..{norb}", no)
        if i and j and k and l:
            for idx in _two_body_images(i - 1, j - 1, k - 1, l - 1):
                if g_set[idx] and abs(g[idx] - value) > tol:
                    raise FormatError(f"two-body element {(i, j, k, l)} breaks 8-fold symmetry", no)
                g[idx] = value
                g_set[idx] = True
        elif i and j and not k and not l:
            for idx in ((i - 1, j - 1), (j - 1, i - 1)):
                if h_set[idx] and abs(h[idx] - value) > tol:
                    raise FormatError(f"one-body element {(i, j)} is not symmetric", no)
                h[idx] = value
                h_set[idx] = True
        elif not (i or j or k or l):
            core = value
        elif i and not (j or k or l):
            continue  # orbital energy
        else:
            raise FormatError(f"unrecognised index pattern {(i, j, k, l)}", no)
    return MolecularHamiltonian(norb, core, h, g, nelec, ms2)


def write_fcidump(mol: MolecularHamiltonian, tol: float = 0.0) -> str:
    m = mol.n_spatial
    out = [f" &FCI NORB={m},NELEC={mol.n_electrons or 0},MS2={mol.ms2},", " &END"]
    seen = set()
    for i, j, k, l in product(range(m), repeat=4):
        canon = min(_two_body_images(i, j, k, l))
        if canon in seen:
            continue
        seen.add(canon)
        v = float(mol.two_body[canon])
        if abs(v) > tol:
            out.append(f"{v!r} {canon[0] + 1} {canon[1] + 1} {canon[2] + 1} {canon[3] + 1}")
    for i in range(m):
        for j in range(i + 1):
            v = float(mol.one_body[i, j])
            if abs(v) > tol:
                out.append(f"{v!r} {i + 1} {j + 1} 0 0")
    out.append(f"{float(mol.nuclear_repulsion)!r} 0 0 0 0")
    return "\n".join(out) + "\n"


# -- Pauli text ---------------------------------------------------------------

def _data_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


def _read_nqubits(lines, what: str) -> int:
    try:
        no, first = next(lines)
    except StopIteration:
        raise FormatError(f"empty {what} file") from None
    parts = first.split()
    if len(parts) != 2 or parts[0] != "nqubits":
        raise FormatError("first data line must be 'nqubits <n>'", no)
    try:
        n = int(parts[1])
    except ValueError:
        raise FormatError("qubit count must be an integer", no) from None
    if n < 1:
        raise FormatError("qubit count must be positive", no)
    return n


def parse_pauli_hamiltonian(text: str) -> PauliSum:
    """Parse ``nqubits n`` then ``<coefficient> <tokens...>`` lines."""
    lines = _data_lines(text)
    n = _read_nqubits(lines, "Hamiltonian")
    terms: Dict[PauliString, float] = {}
    for no, line in lines:
        coeff_text, _, rest = line.partition(" ")
        coeff = _parse_number(coeff_text, no)
        try:
            p = parse_pauli(rest, n)
        except PauliParseError as exc:
            raise FormatError(str(exc), no) from None
        if p.phase:
            raise FormatError("Hamiltonian terms must be Hermitian (no 'i' token)", no)
        terms[p] = terms.get(p, 0.0) + coeff
    return PauliSum(n, terms)


def format_pauli_hamiltonian(op: PauliSum) -> str:
    if not op.is_hermitian:
        raise ValueError("only Hermitian sums can be written as Hamiltonians")
    out = [f"nqubits {op.n_qubits}"]
    for p, c in op.sorted_terms():
        out.append(f"{c:.17g} {format_pauli(p)}".rstrip())
    return "\n".join(out) + "\n"


def parse_pool_file(text: str) -> Tuple[int, List[PauliString]]:
    """Pool file: ``nqubits n`` then one ``i <tokens>`` generator per line."""
    lines = _data_lines(text)
    n = _read_nqubits(lines, "pool")
    ops = []
    for no, line in lines:
        try:
            p = parse_pauli(line, n)
        except PauliParseError as exc:
            raise FormatError(str(exc), no) from None
        if p.phase != 1:
            raise FormatError("pool generators must carry the leading 'i'", no)
        ops.append(p)
    return n, ops


def format_pool_file(n_qubits: int, ops: List[PauliString]) -> str:
    lines = [f"nqubits {n_qubits}"]
    for p in ops:
        if p.phase != 1:
            raise ValueError("pool generators must have phase i")
        lines.append(format_pauli(p))
    return "\n".join(lines) + "\n"
