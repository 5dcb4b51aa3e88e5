"""Acceptance criteria, one test each; every test reports a PASS/FAIL line."""

import itertools
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, H4_FCI_ENERGY
from qadapt.adapt import AdaptConfig, AnsatzElement, pool_gradients, prepare_state, run_adapt
from qadapt.completeness import check_pool_mapping, completeness_fraction_scan, completeness_rank
from qadapt.experiments import pool_convergence, random_ordering_counts, random_real_hamiltonian
from qadapt.pauli import all_strings, commutator, count_odd_strings, is_odd, multiply, odd_strings
from qadapt.pools import fermionic_pool, minimal_pool_g, minimal_pool_v, pauli_pool, qubit_pool, random_odd_pool
from qadapt.resources import brute_force_counts, closed_form_averages, cnots_per_param, estimate_total_cnots
from qadapt.statevector import apply_exp, basis_state, exact_ground_state, expectation, random_real_state

CHEMICAL_ACCURACY = 1.6e-3


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_minimal_pools_complete():
    start = time.perf_counter()
    ranks = {}
    for n in range(2, 8):
        for name, pool in (("V", minimal_pool_v(n)), ("G", minimal_pool_g(n))):
            ranks[(name, n)] = completeness_rank(pool).gram_rank
    elapsed = time.perf_counter() - start
    ok = all(r == 2**n - 1 for (_, n), r in ranks.items()) and elapsed < 60
    report(1, ok, f"V and G rank 2^n-1 for n=2..7 ({elapsed:.1f}s)")


def test_criterion_2_completeness_fraction():
    start = time.perf_counter()
    fractions = {n: completeness_fraction_scan(n, 2 * n - 2, trials=200, seed=2024) for n in (3, 4, 5)}
    elapsed = time.perf_counter() - start
    ok = all(0.10 <= f <= 0.60 for f in fractions.values()) and elapsed < 600
    shown = ", ".join(f"n={n}: {f:.3f}" for n, f in fractions.items())
    report(2, ok, f"complete fraction at size 2n-2 over 200 trials: {shown} ({elapsed:.1f}s)")


def test_criterion_3_resource_oracle():
    start = time.perf_counter()
    exact = all((lambda r: (r.n_spin, r.n_pauli, r.n_z))(brute_force_counts(m)) == closed_form_averages(m)
                for m in range(2, 9))
    per4, per6 = float(cnots_per_param(4)), float(cnots_per_param(6))
    total = estimate_total_cnots(4, 11)
    elapsed = time.perf_counter() - start
    ok = exact and abs(per4 - 175) <= 1 and abs(per6 - 303) <= 1 and abs(total - 1928.41) <= 0.01 and elapsed < 60
    report(3, ok, f"exact for m=2..8: {exact}; per-param {per4:.2f}/{per6:.2f}; N(4,11)={total:.4f} "
                  f"({elapsed:.1f}s)")


def test_criterion_4_random_hamiltonian_convergence():
    start = time.perf_counter()
    config = AdaptConfig(grad_norm_eps=1e-6, max_iterations=500)
    minimal_fail, random_bad, random_stats = [], [], []
    for n in (3, 4, 5):
        for seed in range(10):
            H = random_real_hamiltonian(n, seed=1000 * n + seed)
            pools = [minimal_pool_v(n), minimal_pool_g(n), random_odd_pool(n, 2 * n - 2, seed=5000 * n + seed)]
            runs = pool_convergence(H, pools, seed, config)
            for run in runs[:2]:
                if not run.error < 1e-6:
                    minimal_fail.append((n, seed, run.pool, run.error))
            rnd = runs[2]
            converged = rnd.error < 1e-6
            random_stats.append((rnd.complete, converged))
            if converged != rnd.complete:
                random_bad.append((n, seed, rnd.complete, rnd.error))
    elapsed = time.perf_counter() - start
    n_complete = sum(c for c, _ in random_stats)
    ok = not minimal_fail and not random_bad and elapsed < 1800
    report(4, ok, f"V/G failures {minimal_fail}; random pools complete {n_complete}/30, "
                  f"verdict/convergence mismatches {random_bad} ({elapsed:.1f}s)")


def test_criterion_5_gradient_correctness():
    step = 1e-5
    worst = 0.0
    instances = 0
    for n in (2, 3, 4, 5):
        for k in range(13 if n < 5 else 11):
            seed = 100 * n + k
            rng = np.random.default_rng(seed)
            H = random_real_hamiltonian(n, seed)
            pool = random_odd_pool(n, min(2 * n, count_odd_strings(n)), seed)
            psi = random_real_state(n, rng)
            g = pool_gradients(H, pool, psi)
            for i, op in enumerate(pool):
                plus = prepare_state([AnsatzElement(op, step)], psi)
                minus = prepare_state([AnsatzElement(op, -step)], psi)
                fd = (expectation(H, plus) - expectation(H, minus)) / (2 * step)
                worst = max(worst, abs(g[i] - fd) / max(1e-6 * abs(fd), 1e-10))
            instances += 1
    ok = instances >= 50 and worst < 1
    report(5, ok, f"{instances} instances, worst error / tolerance = {worst:.2e}")


def test_criterion_6_property_suites():
    group_ok = True
    for n in (1, 2, 3):
        strings = list(all_strings(n))
        for a, b in itertools.product(strings, repeat=2):
            group_ok &= np.allclose(multiply(a, b).to_matrix(), a.to_matrix() @ b.to_matrix())
    odd = odd_strings(3)
    closure_ok = all(c is None or is_odd(c) for a, b in itertools.product(odd, repeat=2)
                     for c in [commutator(a, b)])
    rng = np.random.default_rng(6)
    pool = odd_strings(4)
    psi = random_real_state(4, rng)
    for _ in range(1000):
        psi = apply_exp(rng.uniform(-np.pi, np.pi), pool[rng.integers(len(pool))], psi)
    drift = abs(np.linalg.norm(psi) - 1)
    imag = float(np.linalg.norm(psi.imag))
    count_ok = all(count_odd_strings(n) == sum(1 for p in all_strings(n) if is_odd(p)) for n in range(1, 6))
    ok = group_ok and closure_ok and drift < 1e-9 and imag < 1e-9 and count_ok
    report(6, ok, f"group laws {group_ok}, odd closure {closure_ok}, norm drift {drift:.1e}, "
                  f"imag {imag:.1e}, odd counts {count_ok}")


def test_criterion_7_h4(h4):
    start = time.perf_counter()
    mol, H = h4
    ref = basis_state(H.n_qubits, mol.hf_occupation())
    fci = exact_ground_state(H).energy
    config = AdaptConfig(grad_norm_eps=1e-5, max_iterations=80)
    fp = fermionic_pool(mol.n_spatial)
    qubit = run_adapt(H, qubit_pool(fp), ref, config, exact_energy=fci)
    fermi = run_adapt(H, fp, ref, config, exact_energy=fci)
    n_params = qubit.params_to_reach(1e-6)
    q_cnot, f_cnot = qubit.cnots_to_reach(CHEMICAL_ACCURACY), fermi.cnots_to_reach(CHEMICAL_ACCURACY)
    elapsed = time.perf_counter() - start
    ratio = f_cnot / q_cnot if q_cnot and f_cnot else float("nan")
    ok = (abs(fci - H4_FCI_ENERGY) < 1e-9 and n_params is not None and 20 <= n_params <= 40
          and ratio >= 3 and elapsed < 3600)
    report(7, ok, f"qubit-ADAPT reaches 1e-6 with {n_params} parameters; CNOTs at 1.6e-3: "
                  f"qubit {q_cnot} vs fermionic {f_cnot} (x{ratio:.1f}); LiH/H6 not run ({elapsed:.1f}s)")


def test_criterion_8_pool_mapping():
    results = {n: check_pool_mapping(n) for n in range(2, 8)}
    report(8, all(results.values()), f"mapping holds for n=2..7: {results}")


def test_criterion_9_random_ordering_baseline():
    H = random_real_hamiltonian(2, seed=0)
    pool = pauli_pool(2, odd_strings(2), "random_odd")
    ref = basis_state(2, "00")
    fci = exact_ground_state(H).energy
    greedy = run_adapt(H, pool, ref, AdaptConfig(grad_norm_eps=1e-8), exact_energy=fci).params_to_reach(1e-6)
    counts = random_ordering_counts(H, pool, ref, range(10), n_ops=30, target=1e-6, config=AdaptConfig())
    median = float(np.median([np.inf if c is None else c for c in counts]))
    ok = greedy is not None and median >= greedy
    report(9, ok, f"gradient selection {greedy} parameters; random orderings {counts}, median {median}")
