"""Fermionic operators, spin-adapted excitation generators and Jordan-Wigner.

Spin orbitals follow the interleaved convention: spatial orbital ``k`` with
spin up is index ``2k``, spin down is ``2k + 1``.  Under Jordan-Wigner an
occupied spin orbital is qubit state ``|1>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import sqrt
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .pauli import PauliString, PauliSum

Ladder = Tuple[int, bool]  # (spin-orbital index, is_creation)
Term = Tuple[float, Tuple[Ladder, ...]]


def up(k: int) -> int:
    return 2 * k


def down(k: int) -> int:
    return 2 * k + 1


@dataclass
class FermionOperator:
    """Sum of coefficient-weighted products of ladder operators."""

    terms: List[Term] = field(default_factory=list)

    def adjoint(self) -> "FermionOperator":
        return FermionOperator(
            [(c, tuple((i, not d) for i, d in reversed(ops))) for c, ops in self.terms]
        )

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        return FermionOperator(self.terms + other.terms)

    def __sub__(self, other: "FermionOperator") -> "FermionOperator":
        return FermionOperator(self.terms + [(-c, ops) for c, ops in other.terms])

    def max_index(self) -> int:
        return max((i for _, ops in self.terms for i, _ in ops), default=-1)


def excitation(coeff: float, creators: Sequence[int], annihilators: Sequence[int]) -> Term:
    """``coeff * a+_{c0} a+_{c1} ... a_{a0} a_{a1} ...`` in the written order."""
    return (coeff, tuple((i, True) for i in creators) + tuple((i, False) for i in annihilators))


def anti_hermitian(op: FermionOperator) -> FermionOperator:
    """``op - op^dagger``."""
    return op - op.adjoint()


# -- Jordan-Wigner ----------------------------------------------------------

@lru_cache(maxsize=None)
def _jw_ladder(index: int, creation: bool, n: int) -> PauliSum:
    chain = (1 << index) - 1
    bit = 1 << index
    # a = Z_{<i} (X_i + iY_i)/2,  a+ = Z_{<i} (X_i - iY_i)/2
    coeffs = {
        (bit, chain): 0.5 + 0j,
        (bit, chain | bit): (-0.5j if creation else 0.5j),
    }
    return PauliSum.from_complex(n, coeffs)


def jordan_wigner(op: FermionOperator, n_spin_orbitals: int) -> PauliSum:
    if op.max_index() >= n_spin_orbitals:
        raise ValueError(
            f"spin-orbital index {op.max_index()} out of range for {n_spin_orbitals} orbitals"
        )
    acc: Dict[Tuple[int, int], complex] = {}
    for coeff, ops in op.terms:
        prod = PauliSum.identity(n_spin_orbitals, coeff)
        for index, dagger in ops:
            prod = prod * _jw_ladder(index, dagger, n_spin_orbitals)
        for key, c in prod.complex_terms().items():
            acc[key] = acc.get(key, 0j) + c
    return PauliSum.from_complex(n_spin_orbitals, acc)


def number_operator(n_spin_orbitals: int) -> PauliSum:
    ops = FermionOperator([excitation(1.0, [k], [k]) for k in range(n_spin_orbitals)])
    return jordan_wigner(ops, n_spin_orbitals)


def sz_operator(n_spin_orbitals: int) -> PauliSum:
    ops = FermionOperator(
        [excitation(0.5 if k % 2 == 0 else -0.5, [k], [k]) for k in range(n_spin_orbitals)]
    )
    return jordan_wigner(ops, n_spin_orbitals)


# -- spin-adapted generators -------------------------------------------------

DoubleIndex = Tuple[int, int, int, int]  # spin orbitals for a+_P a+_Q a_R a_S


@dataclass
class SpinAdaptedGenerator:
    """A spin-adapted excitation ``sum_k c_k E_k - h.c.``.

    ``terms`` holds only the excitation half (``E_k``), canonicalised and
    normalised to a unit coefficient vector.
    """

    label: str
    rank: int  # 1 for singles, 2 for doubles
    group: Optional[int]  # orbital-index group 1..5 for doubles
    spin: Optional[str]  # "T" or "S" for doubles
    spatial: Tuple[int, ...]
    terms: List[Tuple[float, Tuple[Tuple[int, ...], Tuple[int, ...]]]]

    def fermion_operator(self) -> FermionOperator:
        return anti_hermitian(FermionOperator([excitation(c, cr, an) for c, (cr, an) in self.terms]))

    def jordan_wigner(self, n_spin_orbitals: int) -> PauliSum:
        return jordan_wigner(self.fermion_operator(), n_spin_orbitals)


def _sorted_with_sign(pair: Tuple[int, int]) -> Tuple[Tuple[int, int], int]:
    a, b = pair
    return ((a, b), 1) if a < b else ((b, a), -1)


def _canonical_doubles(raw: Iterable[Tuple[float, DoubleIndex]]):
    """Sort creator and annihilator pairs, drop Pauli-excluded terms, merge."""
    acc: Dict[Tuple[Tuple[int, int], Tuple[int, int]], float] = {}
    for c, (p, q, r, s) in raw:
        if p == q or r == s:
            continue
        cr, s1 = _sorted_with_sign((p, q))
        an, s2 = _sorted_with_sign((r, s))
        acc[(cr, an)] = acc.get((cr, an), 0.0) + c * s1 * s2
    return [(c, k) for k, c in acc.items() if abs(c) > 1e-14]


def _normalised(terms):
    norm = sqrt(sum(c * c for c, _ in terms))
    return [(c / norm, k) for c, k in terms]


def triplet_terms(p: int, q: int, r: int, s: int) -> List[Tuple[float, DoubleIndex]]:
    """Raw triplet excitation ``|T,M>_pq <T,M|_rs`` summed over M (spatial indices)."""
    u, d = up, down
    return [
        (1.0, (u(p), u(q), u(r), u(s))),
        (0.5, (u(p), d(q), u(r), d(s))),
        (0.5, (u(p), d(q), d(r), u(s))),
        (0.5, (d(p), u(q), u(r), d(s))),
        (0.5, (d(p), u(q), d(r), u(s))),
        (1.0, (d(p), d(q), d(r), d(s))),
    ]


def singlet_terms(p: int, q: int, r: int, s: int) -> List[Tuple[float, DoubleIndex]]:
    """Raw singlet excitation ``|S,0>_pq <S,0|_rs`` (spatial indices)."""
    u, d = up, down
    return [
        (0.5, (u(p), d(q), u(r), d(s))),
        (-0.5, (u(p), d(q), d(r), u(s))),
        (-0.5, (d(p), u(q), u(r), d(s))),
        (0.5, (d(p), u(q), d(r), u(s))),
    ]


def _double(label: str, group: int, spin: str, idx: Tuple[int, int, int, int]) -> SpinAdaptedGenerator:
    raw = triplet_terms(*idx) if spin == "T" else singlet_terms(*idx)
    terms = _normalised(_canonical_doubles(raw))
    return SpinAdaptedGenerator(label, 2, group, spin, idx,
                                [(c, (cr, an)) for c, (cr, an) in terms])


def spin_adapted_singles(m: int) -> List[SpinAdaptedGenerator]:
    """One generator per spatial pair ``a < b``: ``a+_a a_b`` for both spins."""
    if m < 2:
        raise ValueError("need at least two spatial orbitals")
    out = []
    for a, b in combinations(range(m), 2):
        terms = _normalised([(1.0, ((up(a),), (up(b),))), (1.0, ((down(a),), (down(b),)))])
        out.append(SpinAdaptedGenerator(f"s({a},{b})", 1, None, None, (a, b), terms))
    return out


def double_index_groups(m: int) -> Dict[int, List[Tuple[int, int, int, int]]]:
    """Spatial index tuples ``(p, q, r, s)`` for each of the five orbital groups.

    1. all distinct (one entry per unordered pair of pairs)
    2. one creator orbital shared with one annihilator orbital (``q == r``)
    3. ``p == q``, ``r != s``
    4. ``p == q == r != s`` (ordered)
    5. ``p == q != r == s``
    """
    groups: Dict[int, List[Tuple[int, int, int, int]]] = {g: [] for g in range(1, 6)}
    for a, b, c, d in combinations(range(m), 4):
        groups[1] += [(a, b, c, d), (a, c, b, d), (a, d, b, c)]
    for q in range(m):
        others = [k for k in range(m) if k != q]
        for p, s in combinations(others, 2):
            groups[2].append((p, q, q, s))
        for r, s in combinations(others, 2):
            groups[3].append((q, q, r, s))
        for s in others:
            groups[4].append((q, q, q, s))
    for p, r in combinations(range(m), 2):
        groups[5].append((p, p, r, r))
    return groups


def spin_adapted_doubles(m: int) -> List[SpinAdaptedGenerator]:
    """Generalised spin-adapted doubles: triplet and singlet for groups 1-2, singlet otherwise."""
    if m < 2:
        raise ValueError("need at least two spatial orbitals")
    out = []
    for group, tuples in double_index_groups(m).items():
        spins = ("T", "S") if group <= 2 else ("S",)
        for idx in tuples:
            for spin in spins:
                label = f"d{group}{spin}({idx[0]},{idx[1]};{idx[2]},{idx[3]})"
                out.append(_double(label, group, spin, idx))
    return out


# -- molecular Hamiltonian ---------------------------------------------------

@dataclass
class MolecularHamiltonian:
    """Spatial-orbital integrals; ``two_body`` in chemists' order ``(pq|rs)``."""

    n_spatial: int
    nuclear_repulsion: float
    one_body: np.ndarray
    two_body: np.ndarray
    n_electrons: Optional[int] = None
    ms2: int = 0

    def check_symmetry(self, tol: float = 1e-10) -> None:
        h, g = self.one_body, self.two_body
        m = self.n_spatial
        if h.shape != (m, m) or g.shape != (m, m, m, m):
            raise ValueError("integral arrays have wrong shape")
        if not np.allclose(h, h.T, atol=tol):
            raise ValueError("one-body integrals are not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if not np.allclose(g, g.transpose(perm), atol=tol):
                raise ValueError(f"two-body integrals violate symmetry {perm}")

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    def hf_occupation(self) -> List[int]:
        """Closed-shell HF occupation per qubit (qubit 0 first)."""
        if self.n_electrons is None:
            raise ValueError("electron count unknown")
        if self.n_electrons % 2 or self.ms2 != 0:
            raise ValueError("only closed-shell references are supported")
        if self.n_electrons > self.n_qubits:
            raise ValueError("more electrons than spin orbitals")
        return [1 if k < self.n_electrons else 0 for k in range(self.n_qubits)]


def build_molecular_hamiltonian(mol: MolecularHamiltonian, tol: float = 1e-12) -> PauliSum:
    """Second-quantised electronic Hamiltonian, Jordan-Wigner mapped."""
    mol.check_symmetry()
    m, n = mol.n_spatial, mol.n_qubits
    h, g = mol.one_body, mol.two_body
    terms: List[Term] = [(mol.nuclear_repulsion, ())]
    for p in range(m):
        for q in range(m):
            if abs(h[p, q]) > tol:
                for spin in (up, down):
                    terms.append(excitation(h[p, q], [spin(p)], [spin(q)]))
    # 1/2 sum (pq|rs) a+_{p s1} a+_{r s2} a_{s s2} a_{q s1}
    for p, q, r, s in zip(*np.nonzero(np.abs(g) > tol)):
        for s1 in (up, down):
            for s2 in (up, down):
                P, Q, R, S = s1(p), s1(q), s2(r), s2(s)
                if P == R or Q == S:
                    continue
                terms.append(excitation(0.5 * g[p, q, r, s], [P, R], [S, Q]))
    return jordan_wigner(FermionOperator(terms), n)
