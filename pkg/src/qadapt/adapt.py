"""ADAPT-VQE: gradient-driven ansatz growth with full re-optimisation.

The ansatz is ``U(theta) = ... exp(theta_2 tau_2) exp(theta_1 tau_1)`` acting on
a reference state; the first operator added acts first.  Fermionic generators
are applied as first-order Trotter products over their Pauli factors.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .pauli import PauliString, PauliSum
from .pools import OperatorPool, PoolOperator
from .resources import cnot_count_pauli_exp
from .statevector import as_matrix, n_qubits_of

log = logging.getLogger(__name__)

TERMINATION_REASONS = ("gradient_converged", "max_iterations", "stalled")
TRACE_COLUMNS = ("iteration", "n_params", "label", "selected_grad", "energy", "energy_error",
                 "grad_norm", "cnot_count")


@dataclass
class AnsatzElement:
    operator: PoolOperator
    theta: float = 0.0


@dataclass
class OptimizerSettings:
    gtol: float = 1e-8
    evals_per_param: int = 200
    memory: int = 20


@dataclass
class AdaptConfig:
    grad_norm_eps: float = 1e-3
    max_iterations: int = 100
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    trotter_order_rule: str = "lexicographic"
    seed: int = 0
    allow_operator_repeats: bool = True
    stall_tol: float = 1e-12
    stall_window: int = 3

    def __post_init__(self):
        if not self.grad_norm_eps > 0:
            raise ValueError("grad_norm_eps must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.trotter_order_rule != "lexicographic":
            raise ValueError("only lexicographic Trotter ordering is implemented")


@dataclass
class TraceRow:
    iteration: int
    n_params: int
    label: str
    selected_grad: Optional[float]
    energy: float
    energy_error: Optional[float]
    grad_norm: Optional[float]
    cnot_count: int
    thetas: List[float] = field(default_factory=list)


@dataclass
class AdaptTrace:
    rows: List[TraceRow] = field(default_factory=list)
    termination: Optional[str] = None
    ansatz: List[AnsatzElement] = field(default_factory=list)
    exact_energy: Optional[float] = None
    optimizer_warnings: int = 0

    @property
    def energies(self) -> List[float]:
        return [r.energy for r in self.rows]

    @property
    def final_energy(self) -> float:
        return self.rows[-1].energy

    @property
    def n_params(self) -> int:
        return self.rows[-1].n_params

    def params_to_reach(self, error: float) -> Optional[int]:
        """Smallest parameter count whose energy error is below ``error``."""
        for r in self.rows:
            if r.energy_error is not None and r.energy_error < error:
                return r.n_params
        return None

    def cnots_to_reach(self, error: float) -> Optional[int]:
        for r in self.rows:
            if r.energy_error is not None and r.energy_error < error:
                return r.cnot_count
        return None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in self.rows:
            writer.writerow([r.iteration, r.n_params, r.label, _fmt(r.selected_grad), _fmt(r.energy),
                             _fmt(r.energy_error), _fmt(r.grad_norm), r.cnot_count])
        return buf.getvalue()


def _fmt(v: Optional[float]) -> str:
    return "" if v is None else f"{v:.17g}"


# -- state preparation ---------------------------------------------------------

class _Gate:
    """``exp(t * coeff * P)`` for a phase-i string P, with P applied as a gather."""

    __slots__ = ("param", "coeff", "perm", "factor")

    def __init__(self, param: int, coeff: float, p: PauliString, n: int):
        if not p.is_antihermitian:
            raise ValueError("Trotter factor must be anti-Hermitian")
        idx = np.arange(2**n, dtype=np.int64)
        perm = idx ^ p.x
        signs = 1 - 2 * (np.bitwise_count(idx & p.z) & 1).astype(np.int64)
        scalar = 1j ** ((p.phase + bin(p.x & p.z).count("1")) % 4)
        # (P psi)[j] = f[j ^ x] psi[j ^ x]
        self.param = param
        self.coeff = coeff
        self.perm = perm
        self.factor = (scalar * signs)[perm]

    def apply_p(self, psi: np.ndarray) -> np.ndarray:
        return self.factor * psi[self.perm]

    def apply(self, angle: float, psi: np.ndarray) -> np.ndarray:
        a = angle * self.coeff
        return math.cos(a) * psi + math.sin(a) * self.apply_p(psi)


def _compile(ops: Sequence[PoolOperator], n: int) -> List[_Gate]:
    gates = []
    for k, op in enumerate(ops):
        if op.n_qubits != n:
            raise ValueError(f"operator {op.label} acts on {op.n_qubits} qubits, state has {n}")
        gates += [_Gate(k, c, p, n) for c, p in op.factors]
    return gates


def _run_gates(gates: Sequence[_Gate], thetas: Sequence[float], ref: np.ndarray) -> np.ndarray:
    psi = np.array(ref, dtype=complex)
    for g in gates:
        psi = g.apply(thetas[g.param], psi)
    return psi


def prepare_state(ansatz: Sequence[AnsatzElement], ref: np.ndarray) -> np.ndarray:
    """Apply the ansatz to ``ref``; element 0 acts first."""
    n = n_qubits_of(ref)
    gates = _compile([e.operator for e in ansatz], n)
    return _run_gates(gates, [e.theta for e in ansatz], ref)


# -- gradients ------------------------------------------------------------------

def _energy(hmat, psi: np.ndarray) -> float:
    return float(np.vdot(psi, hmat @ psi).real)


def pool_gradients(H, pool: OperatorPool | Sequence[PoolOperator], psi: np.ndarray) -> np.ndarray:
    """``g_i = <psi|[H, tau_i]|psi> = 2 Re <H psi|tau_i psi>``."""
    hmat = as_matrix(H)
    n = n_qubits_of(psi)
    h_psi = hmat @ psi
    grads = np.empty(len(pool))
    for i, op in enumerate(pool):
        tau_psi = np.zeros_like(psi)
        for c, p in op.factors:
            tau_psi += c * _Gate(0, 1.0, p, n).apply_p(psi)
        val = np.vdot(h_psi, tau_psi)
        grads[i] = 2.0 * val.real
    return grads


def gradient_norm(g: Sequence[float]) -> float:
    return float(np.linalg.norm(np.asarray(g, dtype=float)))


def _energy_and_gradient(hmat, gates: Sequence[_Gate], thetas: np.ndarray,
                         ref: np.ndarray) -> tuple[float, np.ndarray]:
    """Energy and all parameter derivatives from one forward and one backward sweep."""
    psi = _run_gates(gates, thetas, ref)
    lam = hmat @ psi
    energy = float(np.vdot(psi, lam).real)
    grad = np.zeros(len(thetas))
    for g in reversed(gates):
        # d/dt of exp(t c P) is c P exp(t c P); P commutes with its own exponential
        grad[g.param] += 2.0 * g.coeff * np.vdot(lam, g.apply_p(psi)).real
        a = -thetas[g.param]
        psi = g.apply(a, psi)
        lam = g.apply(a, lam)
    return energy, grad


@dataclass
class VQEResult:
    thetas: np.ndarray
    energy: float
    n_evals: int
    converged: bool
    message: str = ""


def vqe_optimize(H, ansatz: Sequence[AnsatzElement] | Sequence[PoolOperator], theta_init,
                 ref: np.ndarray, settings: Optional[OptimizerSettings] = None) -> VQEResult:
    """L-BFGS-B over all ansatz parameters with analytic gradients."""
    settings = settings or OptimizerSettings()
    ops = [getattr(e, "operator", e) for e in ansatz]
    theta0 = np.asarray(theta_init, dtype=float)
    if theta0.shape != (len(ops),):
        raise ValueError(f"theta_init has length {theta0.size}, ansatz has {len(ops)}")
    hmat = as_matrix(H)
    n = n_qubits_of(ref)
    gates = _compile(ops, n)
    if not ops:
        return VQEResult(theta0, _energy(hmat, ref), 1, True, "empty ansatz")

    def fun(t):
        e, g = _energy_and_gradient(hmat, gates, t, ref)
        if not (np.isfinite(e) and np.all(np.isfinite(g))):
            raise FloatingPointError("NaN or infinity in the VQE objective")
        return e, g

    e0, g0 = fun(theta0)
    if np.max(np.abs(g0)) < settings.gtol:
        return VQEResult(theta0, e0, 1, True, "initial point is stationary")
    max_evals = settings.evals_per_param * len(ops)
    res = minimize(fun, theta0, jac=True, method="L-BFGS-B",
                   options={"gtol": settings.gtol, "ftol": 1e-15, "maxfun": max_evals,
                            "maxiter": max_evals, "maxcor": settings.memory})
    thetas, energy = np.asarray(res.x, dtype=float), float(res.fun)
    if energy > e0:
        thetas, energy = theta0, e0
    _, grad = fun(thetas)
    converged = bool(np.max(np.abs(grad)) < settings.gtol) or res.success
    if not converged:
        log.debug("VQE stopped without meeting gtol: %s", res.message)
    return VQEResult(thetas, energy, int(res.nfev) + 2, converged, str(res.message))


# -- outer loops ---------------------------------------------------------------------

def _element_cnots(op: PoolOperator) -> int:
    return sum(cnot_count_pauli_exp(p) for _, p in op.factors)


def _check_inputs(H, pool, ref) -> int:
    n = n_qubits_of(ref)
    if isinstance(H, PauliSum) and H.n_qubits != n:
        raise ValueError(f"Hamiltonian acts on {H.n_qubits} qubits, reference has {n}")
    if pool is not None and any(op.n_qubits != n for op in pool):
        raise ValueError("pool and reference qubit counts differ")
    norm = np.linalg.norm(ref)
    if abs(norm - 1) > 1e-10:
        raise ValueError(f"reference state is not normalised (norm {norm})")
    return n


def _error(energy: float, exact: Optional[float]) -> Optional[float]:
    return None if exact is None else abs(energy - exact)


class _Grower:
    """Shared bookkeeping for gradient-selected and random-order growth."""

    def __init__(self, H, pool, ref, config: AdaptConfig, exact_energy: Optional[float]):
        _check_inputs(H, pool, ref)
        self.hmat = as_matrix(H)
        self.pool = pool
        self.ref = np.asarray(ref, dtype=complex)
        self.config = config
        self.exact = exact_energy
        self.ops: List[PoolOperator] = []
        self.thetas = np.zeros(0)
        self.cnots = 0
        e = _energy(self.hmat, self.ref)
        self.trace = AdaptTrace(exact_energy=exact_energy)
        self.trace.rows.append(TraceRow(0, 0, "", None, e, _error(e, exact_energy), None, 0))

    def state(self) -> np.ndarray:
        return _run_gates(_compile(self.ops, n_qubits_of(self.ref)), self.thetas, self.ref)

    def gradients(self) -> np.ndarray:
        g = pool_gradients(self.hmat, self.pool, self.state())
        if not self.config.allow_operator_repeats:
            used = {id(op) for op in self.ops}
            g = np.array([0.0 if id(op) in used else v for op, v in zip(self.pool, g)])
        return g

    def grow(self, index: int, grad: Optional[float]) -> TraceRow:
        op = self.pool[index]
        self.ops.append(op)
        theta0 = np.append(self.thetas, 0.0)
        res = vqe_optimize(self.hmat, self.ops, theta0, self.ref, self.config.optimizer)
        if not res.converged:
            self.trace.optimizer_warnings += 1
        self.thetas = res.thetas
        self.cnots += _element_cnots(op)
        row = TraceRow(len(self.trace.rows), len(self.ops), op.label, grad, res.energy,
                       _error(res.energy, self.exact), None, self.cnots, res.thetas.tolist())
        self.trace.rows.append(row)
        return row

    def finish(self, reason: str) -> AdaptTrace:
        self.trace.termination = reason
        self.trace.ansatz = [AnsatzElement(op, float(t)) for op, t in zip(self.ops, self.thetas)]
        return self.trace


def run_adapt(H, pool: OperatorPool, ref: np.ndarray, config: Optional[AdaptConfig] = None,
              exact_energy: Optional[float] = None) -> AdaptTrace:
    """Grow the ansatz by largest |gradient| until the gradient norm drops below eps.

    Each row's ``grad_norm`` is the pool-gradient norm at that row's optimised state.
    """
    config = config or AdaptConfig()
    grower = _Grower(H, pool, ref, config, exact_energy)
    rows = grower.trace.rows
    small_steps = 0
    while True:
        g = grower.gradients()
        norm = gradient_norm(g)
        rows[-1].grad_norm = norm
        log.info("iter %d  E=%.12f  |g|=%.3e", rows[-1].iteration, rows[-1].energy, norm)
        if norm < config.grad_norm_eps:
            return grower.finish("gradient_converged")
        if len(rows) > 1:
            small_steps = small_steps + 1 if rows[-2].energy - rows[-1].energy < config.stall_tol else 0
            if small_steps >= config.stall_window:
                return grower.finish("stalled")
        if len(grower.ops) >= config.max_iterations:
            return grower.finish("max_iterations")
        best = int(np.argmax(np.abs(g)))  # first maximum wins ties
        grower.grow(best, float(g[best]))


def run_random_ordering(H, pool: OperatorPool, ref: np.ndarray, n_ops: int, seed: int,
                        config: Optional[AdaptConfig] = None,
                        exact_energy: Optional[float] = None) -> AdaptTrace:
    """Grow ``n_ops`` operators picked uniformly at random; optimisation as in :func:`run_adapt`.

    No stall or gradient stopping: the baseline always grows to ``n_ops``.
    """
    if n_ops < 0:
        raise ValueError("n_ops must be non-negative")
    config = config or AdaptConfig()
    rng = np.random.default_rng(seed)
    grower = _Grower(H, pool, ref, config, exact_energy)
    for _ in range(n_ops):
        if config.allow_operator_repeats:
            choices = np.arange(len(pool))
        else:
            used = {id(op) for op in grower.ops}
            choices = np.array([i for i, op in enumerate(pool) if id(op) not in used])
            if choices.size == 0:
                break
        grower.grow(int(rng.choice(choices)), None)
    return grower.finish("max_iterations")
