"""Dense statevector simulation and exact ground states.

States are plain complex numpy arrays of length ``2**n``; basis index bit ``k``
is qubit ``k``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .pauli import PauliString, PauliSum

log = logging.getLogger(__name__)

DENSE_MAX_QUBITS = 12
MAX_QUBITS = 14

Operator = Union[PauliSum, sp.spmatrix, np.ndarray]


class ConvergenceError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _basis_indices(n: int) -> np.ndarray:
    return np.arange(2**n, dtype=np.int64)


def n_qubits_of(psi: np.ndarray) -> int:
    dim = psi.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"state length {dim} is not a power of two")
    return n


def basis_state(n: int, occupation: Union[str, Sequence[int]]) -> np.ndarray:
    """Computational basis state.

    ``occupation`` is either a bit string written with qubit 0 rightmost
    (``"10"`` is qubit 1 set) or a sequence of per-qubit 0/1 values indexed
    from qubit 0.
    """
    if isinstance(occupation, str):
        bits = [int(c) for c in reversed(occupation)]
    else:
        bits = [int(b) for b in occupation]
    if len(bits) != n:
        raise ValueError(f"occupation has length {len(bits)}, expected {n}")
    index = sum(b << k for k, b in enumerate(bits))
    psi = np.zeros(2**n, dtype=complex)
    psi[index] = 1.0
    return psi


def random_real_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Normalised standard-normal real vector."""
    v = rng.standard_normal(2**n)
    return (v / np.linalg.norm(v)).astype(complex)


def _pauli_factors(p: PauliString, n: int) -> tuple[np.ndarray, np.ndarray]:
    idx = _basis_indices(n)
    signs = 1 - 2 * (np.bitwise_count(idx & p.z) & 1).astype(np.int8)
    scalar = 1j ** ((p.phase + bin(p.x & p.z).count("1")) % 4)
    return idx ^ p.x, scalar * signs


def apply_pauli(p: PauliString, psi: np.ndarray) -> np.ndarray:
    """Return ``p @ psi``."""
    n = n_qubits_of(psi)
    if p.n_qubits != n:
        raise ValueError(f"Pauli acts on {p.n_qubits} qubits, state has {n}")
    # P(x,z)|b> = i^{|x&z|} (-1)^{|b&z|} |b ^ x>
    target, factor = _pauli_factors(p, n)
    out = np.empty_like(psi, dtype=complex)
    out[target] = factor * psi
    return out


def apply_exp(theta: float, tau: PauliString, psi: np.ndarray) -> np.ndarray:
    """Return ``exp(theta * tau) @ psi`` for an anti-Hermitian string ``tau``."""
    if not tau.is_antihermitian:
        raise ValueError("exponent generator must be anti-Hermitian (phase 1 or 3)")
    # tau^2 = -1
    return np.cos(theta) * psi + np.sin(theta) * apply_pauli(tau, psi)


def apply_pauli_sum(op: PauliSum, psi: np.ndarray) -> np.ndarray:
    out = np.zeros_like(psi, dtype=complex)
    for p, c in op.terms.items():
        out += c * apply_pauli(p, psi)
    return out


def to_sparse(op: PauliSum) -> sp.csr_matrix:
    n = op.n_qubits
    dim = 2**n
    idx = _basis_indices(n)
    rows, cols, vals = [], [], []
    for p, c in op.terms.items():
        target, factor = _pauli_factors(p, n)
        rows.append(target)
        cols.append(idx)
        vals.append(c * factor)
    if not rows:
        return sp.csr_matrix((dim, dim), dtype=complex)
    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return mat


def as_matrix(op: Operator):
    if isinstance(op, PauliSum):
        if not op.is_hermitian:
            raise ValueError("operator is not Hermitian")
        return to_sparse(op)
    return op


def expectation(op: Operator, psi: np.ndarray) -> float:
    """``<psi|H|psi>`` for Hermitian H; the imaginary residue is asserted tiny."""
    mat = as_matrix(op)
    val = np.vdot(psi, mat @ psi)
    scale = max(1.0, abs(val.real))
    if abs(val.imag) > 1e-10 * scale:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def is_real(psi: np.ndarray, tol: float = 1e-10) -> bool:
    return float(np.linalg.norm(psi.imag)) < tol


@dataclass
class GroundStateResult:
    energy: float
    state: np.ndarray
    residual: float


def lanczos_ground_state(mat, v0: np.ndarray, max_iter: int = 300,
                         tol: float = 1e-10) -> tuple[float, np.ndarray, int]:
    """Lowest eigenpair by Lanczos with full reorthogonalisation."""
    dim = v0.shape[0]
    max_iter = min(max_iter, dim)
    basis = np.zeros((max_iter + 1, dim), dtype=complex)
    alpha = np.zeros(max_iter)
    beta = np.zeros(max_iter)
    basis[0] = v0 / np.linalg.norm(v0)
    for j in range(max_iter):
        w = mat @ basis[j]
        alpha[j] = np.vdot(basis[j], w).real
        # two passes of Gram-Schmidt against the whole Krylov basis
        for _ in range(2):
            w -= basis[: j + 1].T @ (basis[: j + 1].conj() @ w)
        evals, evecs = np.linalg.eigh(
            np.diag(alpha[: j + 1]) + np.diag(beta[:j], 1) + np.diag(beta[:j], -1)
        )
        b = np.linalg.norm(w)
        # residual of the Ritz pair is |beta_j * last component|
        if b * abs(evecs[-1, 0]) < tol or b < 1e-14:
            vec = basis[: j + 1].T @ evecs[:, 0]
            return float(evals[0]), vec / np.linalg.norm(vec), j + 1
        beta[j] = b
        basis[j + 1] = w / b
    raise ConvergenceError(f"Lanczos did not converge in {max_iter} iterations")


def exact_ground_state(op: PauliSum, seed: int = 0, max_iter: int = 400) -> GroundStateResult:
    """Exact lowest eigenpair: dense ``eigh`` up to 12 qubits, Lanczos above."""
    n = op.n_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"exact diagonalisation limited to {MAX_QUBITS} qubits")
    mat = as_matrix(op)
    if n <= DENSE_MAX_QUBITS:
        dense = mat.toarray()
        # Hermitian matrices with real entries diagonalise in real arithmetic
        if np.abs(dense.imag).max(initial=0.0) == 0.0:
            dense = dense.real
        evals, evecs = np.linalg.eigh(dense)
        energy, state = float(evals[0]), evecs[:, 0].astype(complex)
    else:
        rng = np.random.default_rng(seed)
        energy, state, iters = lanczos_ground_state(mat, rng.standard_normal(2**n) + 0j, max_iter)
        log.debug("Lanczos converged after %d iterations", iters)
    residual = float(np.linalg.norm(mat @ state - energy * state))
    return GroundStateResult(energy, state, residual)
