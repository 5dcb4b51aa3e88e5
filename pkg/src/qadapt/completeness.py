"""Pool completeness: commutator closure of Pauli generators and the overlap-matrix rank test."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .pauli import PauliString, commutator, count_odd_strings, format_pauli, multiply
from .pools import OperatorPool, minimal_pool_g, minimal_pool_v, random_odd_pool
from .statevector import is_real, random_real_state

RANK_TOL = 1e-8
_CHUNK = 512


@dataclass
class ClosureSet:
    n_qubits: int
    generators: List[PauliString]
    elements: List[PauliString]
    generation_depth: int
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: PauliString) -> bool:
        return p.key in self.keys

    @property
    def keys(self) -> set:
        return {e.key for e in self.elements}


def _anticommuting(xa, za, xb, zb) -> np.ndarray:
    sym = (xa[:, None] & zb[None, :]) ^ (za[:, None] & xb[None, :])
    return (np.bitwise_count(sym) & 1).astype(bool)


def lie_closure(generators: Sequence[PauliString], cap: Optional[int] = None) -> ClosureSet:
    """Fixed point of pairwise commutation, elements identified up to real scalar."""
    if not generators:
        raise ValueError("need at least one generator")
    n = generators[0].n_qubits
    if any(g.n_qubits != n for g in generators):
        raise ValueError("generators act on different qubit counts")
    if not all(g.is_antihermitian for g in generators):
        raise ValueError("generators must be anti-Hermitian")
    if cap is None:
        cap = count_odd_strings(n) if all(g.y_count % 2 for g in generators) else 4**n

    keys = {}
    for g in generators:
        keys.setdefault(g.key, None)
    xs = np.array([k[0] for k in keys], dtype=np.int64)
    zs = np.array([k[1] for k in keys], dtype=np.int64)
    truncated = len(xs) > cap
    if truncated:
        xs, zs = xs[:cap], zs[:cap]
    seen = set(zip(xs.tolist(), zs.tolist()))
    frontier = np.arange(len(xs))
    depth = 0
    while frontier.size and not truncated:
        found = []
        for start in range(0, frontier.size, _CHUNK):
            rows = frontier[start:start + _CHUNK]
            xa, za = xs[rows], zs[rows]
            mask = _anticommuting(xa, za, xs, zs)
            r, c = np.nonzero(mask)
            px, pz = xa[r] ^ xs[c], za[r] ^ zs[c]
            for key in zip(px.tolist(), pz.tolist()):
                if key not in seen:
                    seen.add(key)
                    found.append(key)
        if not found:
            break
        depth += 1
        if len(xs) + len(found) > cap:
            found = found[: cap - len(xs)]
            truncated = True
        start_idx = len(xs)
        xs = np.concatenate([xs, np.array([k[0] for k in found], dtype=np.int64)])
        zs = np.concatenate([zs, np.array([k[1] for k in found], dtype=np.int64)])
        frontier = np.arange(start_idx, len(xs))
    elements = [PauliString(n, int(x), int(z), 1) for x, z in zip(xs, zs)]
    return ClosureSet(n, list(generators), elements, depth, truncated)


def is_closed(closure: ClosureSet) -> bool:
    """Full pass: every non-zero commutator lands back in the set."""
    keys = closure.keys
    for a in closure.elements:
        for b in closure.elements:
            c = commutator(a, b)
            if c is not None and c.key not in keys:
                return False
    return True


def image_matrix(elements: Sequence[PauliString], psi: np.ndarray) -> np.ndarray:
    """Columns ``A_j |psi>`` for each element."""
    n = elements[0].n_qubits
    dim = 2**n
    xs = np.array([e.x for e in elements], dtype=np.int64)
    zs = np.array([e.z for e in elements], dtype=np.int64)
    powers = np.array([(e.phase + bin(e.x & e.z).count("1")) % 4 for e in elements])
    idx = np.arange(dim, dtype=np.int64)
    signs = 1 - 2 * (np.bitwise_count(idx[:, None] & zs[None, :]) & 1).astype(np.int64)
    values = (1j ** powers)[None, :] * signs * psi[:, None]
    out = np.zeros((dim, len(elements)), dtype=complex)
    out[idx[:, None] ^ xs[None, :], np.arange(len(elements))[None, :]] = values
    return out


def gram_matrix(elements: Sequence[PauliString] | ClosureSet, psi: np.ndarray) -> np.ndarray:
    """``M_ij = <psi| A_i^dagger A_j |psi>`` for a real state."""
    if isinstance(elements, ClosureSet):
        elements = elements.elements
    if not is_real(psi):
        raise ValueError("overlap matrix is defined for real states only")
    images = image_matrix(elements, psi)
    gram = images.conj().T @ images
    return gram.real


@dataclass
class CompletenessReport:
    n_qubits: int
    pool: str
    pool_size: int
    closure_size: int
    gram_rank: int
    threshold: int
    complete: bool
    truncated: bool
    state_seed: int
    singular_values: List[float] = field(default_factory=list, repr=False)

    def summary(self) -> str:
        verdict = "complete" if self.complete else "incomplete"
        if self.truncated:
            verdict += " (closure truncated; rank is a lower bound)"
        return (f"pool={self.pool} n={self.n_qubits} size={self.pool_size} "
                f"closure={self.closure_size} rank={self.gram_rank} "
                f"threshold={self.threshold} -> {verdict}")


def numerical_rank(images: np.ndarray, tol: float = RANK_TOL) -> tuple[int, np.ndarray]:
    s = np.linalg.svd(images, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0, s
    return int(np.sum(s > tol * s[0])), s


def completeness_rank(pool: OperatorPool | Sequence[PauliString], state_seed: int = 0,
                      tol: float = RANK_TOL, name: Optional[str] = None,
                      closure: Optional[ClosureSet] = None) -> CompletenessReport:
    """Rank of the closure images on a random real state against ``2**n - 1``."""
    if isinstance(pool, OperatorPool):
        gens = pool.pauli_generators()
        name = name or pool.family
    else:
        gens = list(pool)
        name = name or "custom"
    n = gens[0].n_qubits
    closure = closure or lie_closure(gens)
    psi = random_real_state(n, np.random.default_rng(state_seed))
    images = image_matrix(closure.elements, psi)
    rank, s = numerical_rank(images.real if is_real(images) else images, tol)
    threshold = 2**n - 1
    return CompletenessReport(n, name, len(gens), len(closure), rank, threshold,
                              rank >= threshold, closure.truncated, state_seed, s.tolist())


def _trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def completeness_scan(n: int, pool_size: int, trials: int, seed: int) -> List[dict]:
    """One row per random odd pool: closure size, rank and verdict."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rows = []
    for t in range(trials):
        s = _trial_seed(seed, t)
        pool = random_odd_pool(n, pool_size, s)
        rep = completeness_rank(pool, state_seed=s)
        rows.append({"n": n, "pool_size": pool_size, "trial": t, "closure_size": rep.closure_size,
                     "rank": rep.gram_rank, "complete": int(rep.complete)})
    return rows


def completeness_fraction_scan(n: int, pool_size: int, trials: int, seed: int) -> float:
    rows = completeness_scan(n, pool_size, trials, seed)
    return sum(r["complete"] for r in rows) / len(rows)


SCAN_COLUMNS = ("n", "pool_size", "trial", "closure_size", "rank", "complete")


def rows_to_csv(rows: Iterable[dict], columns: Sequence[str] = SCAN_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n",
                            extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _same_up_to_scalar(a: PauliString, b: PauliString) -> bool:
    return a.key == b.key


def _product(*ps: PauliString) -> PauliString:
    out = ps[0]
    for p in ps[1:]:
        out = multiply(out, p)
    return out


def check_pool_mapping(n: int) -> bool:
    """Every V element lies in the closure of G, and the listed product identities hold."""
    v = minimal_pool_v(n).pauli_generators()
    g = minimal_pool_g(n).pauli_generators()
    closure = lie_closure(g)
    if not all(p in closure for p in v):
        return False
    V = {i + 1: p for i, p in enumerate(v)}
    G = {i + 1: p for i, p in enumerate(g)}
    checks = [
        _same_up_to_scalar(V[n - 1], G[1]),
        _same_up_to_scalar(V[n], G[n]),
    ]
    if n >= 3:
        checks.append(_same_up_to_scalar(V[2 * n - 2], G[n + 1]))
    for k in range(2, n):
        chain = [G[1]] + [q for j in range(2, k + 1) for q in (G[j], G[j + n - 1])]
        checks.append(_same_up_to_scalar(V[n - k], _product(*chain)))
    for k in range(3, n):
        checks.append(_same_up_to_scalar(V[2 * n - k], _product(G[k - 1], G[k], V[n - k])))
    return all(checks)


def describe(closure: ClosureSet, limit: int = 10) -> str:
    shown = ", ".join(format_pauli(e) for e in closure.elements[:limit])
    more = "" if len(closure) <= limit else f", ... ({len(closure)} total)"
    return shown + more
