"""Operator pools: spin-adapted fermionic, qubit (Pauli fragments), minimal V/G and random pools."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .fermion import spin_adapted_doubles, spin_adapted_singles
from .pauli import PauliString, PauliSum, count_odd_strings, format_pauli, is_odd, odd_strings
from .resources import cnot_count_pauli_exp

FAMILIES = ("fermionic", "qubit", "qubit_no_z", "qubit_with_z", "minimal_v", "minimal_g",
            "random_odd", "subpool", "file")


@dataclass
class PoolOperator:
    """One anti-Hermitian generator.

    ``kind == "pauli"``: ``generator`` is a single phase-``i`` string.
    ``kind == "fermionic"``: ``generator`` is the Jordan-Wigner image as a
    :class:`PauliSum` whose keys are ``iP`` strings with real coefficients.
    """

    label: str
    kind: str
    generator: Union[PauliString, PauliSum]
    cnot_cost: int = 0
    factors: Tuple[Tuple[float, PauliString], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind == "pauli":
            p = self.generator
            if not p.is_antihermitian:
                raise ValueError(f"{self.label}: generator is not anti-Hermitian")
            self.factors = ((1.0, p),)
        elif self.kind == "fermionic":
            if not self.generator.is_antihermitian:
                raise ValueError(f"{self.label}: generator is not anti-Hermitian")
            # first-order Trotter factors in lexicographic token order
            self.factors = tuple(
                sorted(((c, p) for p, c in self.generator.terms.items()),
                       key=lambda t: format_pauli(t[1]))
            )
        else:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        self.cnot_cost = sum(cnot_count_pauli_exp(p) for _, p in self.factors)

    @property
    def n_qubits(self) -> int:
        return self.generator.n_qubits

    def as_sum(self) -> PauliSum:
        if self.kind == "pauli":
            return PauliSum(self.n_qubits, {self.generator: 1.0})
        return self.generator


@dataclass
class OperatorPool:
    n_qubits: int
    family: str
    operators: List[PoolOperator]
    provenance: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def __getitem__(self, i):
        return self.operators[i]

    @property
    def labels(self) -> List[str]:
        return [op.label for op in self.operators]

    @property
    def is_pauli(self) -> bool:
        return all(op.kind == "pauli" for op in self.operators)

    def pauli_generators(self) -> List[PauliString]:
        if not self.is_pauli:
            raise ValueError("pool contains fermionic operators")
        return [op.generator for op in self.operators]


def pauli_pool(n_qubits: int, strings: Sequence[PauliString], family: str,
               **provenance) -> OperatorPool:
    """Wrap ``iP`` strings as a pool, rejecting duplicates up to scalar."""
    seen = set()
    ops = []
    for p in strings:
        if p.n_qubits != n_qubits:
            raise ValueError("string qubit count does not match pool")
        if p.key in seen:
            raise ValueError(f"duplicate generator {format_pauli(p)}")
        seen.add(p.key)
        ops.append(PoolOperator(format_pauli(p), "pauli", p))
    return OperatorPool(n_qubits, family, ops, dict(provenance))


def fermionic_pool(m: int) -> OperatorPool:
    """Spin-adapted generalised singles and doubles over ``2m`` qubits."""
    n = 2 * m
    ops = [
        PoolOperator(gen.label, "fermionic", gen.jordan_wigner(n))
        for gen in spin_adapted_singles(m) + spin_adapted_doubles(m)
    ]
    return OperatorPool(n, "fermionic", ops, {"m": m})


def _xy_swap_key(p: PauliString) -> Tuple[int, int]:
    return (p.x, p.z ^ p.x)


def qubit_pool(fp: OperatorPool, strip_z: bool = True,
               dedupe_rotation_pairs: bool = False) -> OperatorPool:
    """Every distinct Pauli string of a fermionic pool, optionally without Z factors."""
    if fp.family != "fermionic":
        raise ValueError("qubit pools are derived from a fermionic pool")
    seen = set()
    strings = []
    for op in fp:
        for _, p in op.factors:
            q = p.strip_z() if strip_z else p
            q = q.with_phase(1)
            if q.weight == 0 or q.key in seen:
                continue
            if dedupe_rotation_pairs and _xy_swap_key(q) in seen:
                continue
            seen.add(q.key)
            strings.append(q)
    family = "qubit" if strip_z else "qubit_with_z"
    return pauli_pool(fp.n_qubits, strings, family, source=fp.provenance, strip_z=strip_z,
                      dedupe_rotation_pairs=dedupe_rotation_pairs)


def _on(n: int, ops: Dict[int, str]) -> PauliString:
    """Phase-``i`` string from 1-based qubit labels (qubit ``k`` is index ``k-1``)."""
    return PauliString.from_ops(n, {k - 1: c for k, c in ops.items()}, phase=1)


def _z_chain(lo: int, hi: int) -> Dict[int, str]:
    return {k: "Z" for k in range(lo, hi + 1)}


def minimal_pool_v(n: int, reduced: bool = False) -> OperatorPool:
    """Recursive minimal complete pool, ``V_n = {Z_n V_{n-1}, iY_n, iY_{n-1}}``.

    Listed as V_1..V_{2n-2}: the Z-chained ``Y_k`` for k = 1..n-1, then
    ``Y_n``, then ``Y_k`` with a gap at k+1 and Zs above it for k = 2..n-1.
    ``reduced`` drops ``iY_n``.
    """
    if n < 2:
        raise ValueError("minimal pools need n >= 2")
    strings = [_on(n, {**_z_chain(k + 1, n), k: "Y"}) for k in range(1, n)]
    if not reduced:
        strings.append(_on(n, {n: "Y"}))
    strings += [_on(n, {**_z_chain(k + 2, n), k: "Y"}) for k in range(2, n)]
    return pauli_pool(n, strings, "minimal_v", n=n, reduced=reduced)


def minimal_pool_g(n: int) -> OperatorPool:
    """Nearest-neighbour minimal complete pool: ``iZ_{k+1}Y_k`` and ``iY_k`` for k >= 2."""
    if n < 2:
        raise ValueError("minimal pools need n >= 2")
    strings = [_on(n, {k + 1: "Z", k: "Y"}) for k in range(n - 1, 0, -1)]
    strings += [_on(n, {k: "Y"}) for k in range(n, 1, -1)]
    return pauli_pool(n, strings, "minimal_g", n=n)


def random_odd_pool(n: int, size: int, seed: int) -> OperatorPool:
    """Uniform sample of ``size`` distinct odd strings."""
    total = count_odd_strings(n)
    if not 1 <= size <= total:
        raise ValueError(f"pool size must be in 1..{total}")
    rng = np.random.default_rng(seed)
    everything = odd_strings(n)
    picks = rng.choice(total, size=size, replace=False)
    return pauli_pool(n, [everything[i] for i in picks], "random_odd", n=n, size=size, seed=seed)


def random_subpool(pool: OperatorPool, fraction: float, seed: int) -> OperatorPool:
    """Keep ``ceil(fraction * len(pool))`` operators (at least one), in pool order."""
    if not 0 < fraction <= 1:
        raise ValueError("fraction must lie in (0, 1]")
    keep = max(1, ceil(fraction * len(pool)))
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(len(pool), size=keep, replace=False))
    return OperatorPool(pool.n_qubits, "subpool", [pool[i] for i in idx],
                        {"parent": pool.family, "fraction": fraction, "seed": seed})


def check_pool_invariants(pool: OperatorPool) -> None:
    seen = set()
    for op in pool:
        if op.kind == "pauli":
            if not is_odd(op.generator):
                raise AssertionError(f"{op.label} is not odd")
            if op.generator.key in seen:
                raise AssertionError(f"duplicate {op.label}")
            seen.add(op.generator.key)
