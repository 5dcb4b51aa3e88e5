import numpy as np
import pytest
from scipy.linalg import expm

from qadapt.pauli import PauliString, PauliSum, odd_strings
from qadapt.statevector import (ConvergenceError, apply_exp, apply_pauli, apply_pauli_sum, basis_state,
                                exact_ground_state, expectation, is_real, lanczos_ground_state,
                                random_real_state, to_sparse)


def test_basis_state_conventions():
    assert np.argmax(basis_state(2, "10")) == 2
    assert np.argmax(basis_state(3, [1, 0, 0])) == 1
    with pytest.raises(ValueError):
        basis_state(2, "1")


def test_apply_exp_rotates_zero_to_minus_one():
    iy = PauliString.from_label("Y", 1)
    out = apply_exp(np.pi / 2, iy, basis_state(1, "0"))
    assert np.allclose(out, -basis_state(1, "1"))
    with pytest.raises(ValueError):
        apply_exp(0.1, PauliString.from_label("Y"), basis_state(1, "0"))


def test_apply_matches_dense(rng):
    for p in odd_strings(3):
        psi = random_real_state(3, rng)
        assert np.allclose(apply_pauli(p, psi), p.to_matrix() @ psi)
        assert np.allclose(apply_exp(0.37, p, psi), expm(0.37 * p.to_matrix()) @ psi)


def test_norm_and_reality_preserved_over_many_rotations(rng):
    n = 4
    pool = odd_strings(n)
    psi = random_real_state(n, rng)
    for _ in range(1000):
        psi = apply_exp(rng.uniform(-np.pi, np.pi), pool[rng.integers(len(pool))], psi)
    assert abs(np.linalg.norm(psi) - 1) < 1e-9
    assert np.linalg.norm(psi.imag) < 1e-9


def test_sparse_and_sum_match_dense(rng):
    strings = [PauliString(3, int(x), int(z)) for x, z in rng.integers(0, 8, size=(10, 2))]
    H = PauliSum(3, {s: rng.normal() for s in strings})
    psi = random_real_state(3, rng)
    assert np.allclose(to_sparse(H).toarray(), H.to_matrix())
    assert np.allclose(apply_pauli_sum(H, psi), H.to_matrix() @ psi)


def test_expectation_rejects_non_hermitian():
    with pytest.raises(ValueError):
        expectation(PauliSum(1, {PauliString.from_label("Y", 1): 1.0}), basis_state(1, "0"))


def test_exact_ground_state_dense_and_lanczos(rng):
    strings = [PauliString(5, int(x), int(z)) for x, z in rng.integers(0, 32, size=(40, 2))]
    H = PauliSum(5, {s: rng.normal() for s in strings if s.y_count % 2 == 0})
    ref = np.linalg.eigvalsh(H.to_matrix())[0]
    res = exact_ground_state(H)
    assert abs(res.energy - ref) < 1e-10 and res.residual < 1e-8
    e, vec, _ = lanczos_ground_state(to_sparse(H), rng.normal(size=32) + 0j)
    assert abs(e - ref) < 1e-9


def test_lanczos_reports_non_convergence(rng):
    mat = np.diag(np.arange(50.0))
    with pytest.raises(ConvergenceError):
        lanczos_ground_state(mat, rng.normal(size=50) + 0j, max_iter=3)


def test_is_real():
    assert is_real(np.array([1.0, 0.0], dtype=complex))
    assert not is_real(np.array([1.0, 1e-3j]))
