"""Experiment recipes shared by the command line and the test suite."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .adapt import AdaptConfig, AdaptTrace, run_adapt, run_random_ordering
from .completeness import completeness_rank
from .pauli import PauliSum, even_strings
from .pools import OperatorPool
from .statevector import exact_ground_state, random_real_state

COEFF_RANGE = 2.0


def random_real_hamiltonian(n: int, seed: int, coeff_range: float = COEFF_RANGE) -> PauliSum:
    """Uniform coefficients in ``[-c, c]`` on every even-Y string (identity excluded)."""
    rng = np.random.default_rng(seed)
    strings = [p for p in even_strings(n) if p.weight > 0]
    coeffs = rng.uniform(-coeff_range, coeff_range, size=len(strings))
    return PauliSum(n, {p: float(c) for p, c in zip(strings, coeffs)})


@dataclass
class PoolRun:
    pool: str
    complete: bool
    trace: AdaptTrace

    @property
    def error(self) -> float:
        return self.trace.rows[-1].energy_error


def run_on_random_state(H: PauliSum, pool: OperatorPool, seed: int, config: AdaptConfig,
                        exact: Optional[float] = None) -> AdaptTrace:
    """ADAPT from a random real initial state drawn from ``seed``."""
    ref = random_real_state(H.n_qubits, np.random.default_rng(seed))
    if exact is None:
        exact = exact_ground_state(H).energy
    return run_adapt(H, pool, ref, config, exact_energy=exact)


def pool_convergence(H: PauliSum, pools: List[OperatorPool], seed: int,
                     config: AdaptConfig) -> List[PoolRun]:
    """Run every pool on one Hamiltonian and tag each run with its rank verdict."""
    exact = exact_ground_state(H).energy
    out = []
    for pool in pools:
        rep = completeness_rank(pool, state_seed=seed)
        trace = run_on_random_state(H, pool, seed, config, exact)
        out.append(PoolRun(pool.family, rep.complete, trace))
    return out


def random_ordering_counts(H: PauliSum, pool: OperatorPool, ref: np.ndarray, seeds,
                           n_ops: int, target: float, config: AdaptConfig) -> List[Optional[int]]:
    """Parameters needed by random orderings to get within ``target`` of the ground energy."""
    exact = exact_ground_state(H).energy
    out = []
    for s in seeds:
        trace = run_random_ordering(H, pool, ref, n_ops, s, config, exact_energy=exact)
        out.append(trace.params_to_reach(target))
    return out
