"""Symplectic algebra of n-qubit Pauli strings.

A string is stored as two integer bit masks plus a power of ``i``:

    I=(0,0), X=(1,0), Y=(1,1), Z=(0,1)

so the represented operator is ``i**phase * P_{n-1} (x) ... (x) P_0``.  Qubit 0 is
the least significant bit of both masks and the rightmost factor in the
dense (``"IXYZ"``-style) label.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, Iterator, Optional, Tuple

import numpy as np

PRUNE_TOL = 1e-12
MAX_ENUM_QUBITS = 16

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_TOKEN = re.compile(r"^([XYZ])(\d+)$")


class PauliParseError(ValueError):
    """Malformed Pauli token text. ``position`` is the 0-based token index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"token {position}: {message}")
        self.position = position


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True, order=True)
class PauliString:
    """``i**phase`` times a tensor product of single-qubit Paulis."""

    n_qubits: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        full = (1 << self.n_qubits) - 1
        if self.x & ~full or self.z & ~full or self.x < 0 or self.z < 0:
            raise ValueError(f"masks exceed {self.n_qubits} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0, 0)

    @classmethod
    def from_ops(cls, n_qubits: int, ops: Dict[int, str], phase: int = 0) -> "PauliString":
        """Build from ``{qubit: letter}``, e.g. ``{0: "X", 3: "Y"}``."""
        x = z = 0
        for q, letter in ops.items():
            if not 0 <= q < n_qubits:
                raise ValueError(f"qubit {q} out of range for n={n_qubits}")
            if letter in "XY":
                x |= 1 << q
            if letter in "ZY":
                z |= 1 << q
            if letter not in "XYZ":
                raise ValueError(f"bad Pauli letter {letter!r}")
        return cls(n_qubits, x, z, phase)

    @classmethod
    def from_label(cls, label: str, phase: int = 0) -> "PauliString":
        """Dense label such as ``"ZZY"``; the last character acts on qubit 0."""
        n = len(label)
        return cls.from_ops(n, {n - 1 - k: c for k, c in enumerate(label) if c != "I"}, phase)

    # -- properties -------------------------------------------------------
    def letter(self, q: int) -> str:
        return _LETTERS[((self.x >> q) & 1, (self.z >> q) & 1)]

    @property
    def label(self) -> str:
        return "".join(self.letter(q) for q in reversed(range(self.n_qubits)))

    @property
    def support(self) -> Tuple[int, ...]:
        occ = self.x | self.z
        return tuple(q for q in range(self.n_qubits) if occ >> q & 1)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def y_count(self) -> int:
        return _popcount(self.x & self.z)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_antihermitian(self) -> bool:
        return self.phase % 2 == 1

    @property
    def key(self) -> Tuple[int, int]:
        """Phase-free identity of the string (equality up to scalar)."""
        return (self.x, self.z)

    def with_phase(self, phase: int) -> "PauliString":
        return PauliString(self.n_qubits, self.x, self.z, phase)

    def strip_z(self) -> "PauliString":
        """Drop every bare Z factor, keeping X/Y and the phase."""
        return PauliString(self.n_qubits, self.x, self.z & self.x, self.phase)

    def to_matrix(self) -> np.ndarray:
        mats = {
            "I": np.eye(2, dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]]),
            "Z": np.diag([1.0 + 0j, -1.0]),
        }
        out = np.eye(1, dtype=complex)
        for c in self.label:
            out = np.kron(out, mats[c])
        return (1j ** self.phase) * out

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __str__(self) -> str:
        return format_pauli(self)


def _check_dims(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} vs {b.n_qubits}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a @ b``."""
    _check_dims(a, b)
    # P(x,z) = i^{|x&z|} X^x Z^z and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1
    x, z = a.x ^ b.x, a.z ^ b.z
    phase = (
        a.phase + b.phase
        + _popcount(a.x & a.z) + _popcount(b.x & b.z)
        + 2 * _popcount(a.z & b.x)
        - _popcount(x & z)
    )
    return PauliString(a.n_qubits, x, z, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_dims(a, b)
    return _popcount((a.x & b.z) ^ (a.z & b.x)) % 2 == 0


def commutator(a: PauliString, b: PauliString) -> Optional[PauliString]:
    """``[a, b] / 2`` as a single string, or ``None`` when they commute.

    Anticommuting strings satisfy ``[a, b] = 2ab``.
    """
    if commutes(a, b):
        return None
    return multiply(a, b)


def y_parity(p: PauliString) -> str:
    return "odd" if p.y_count % 2 else "even"


def is_odd(p: PauliString) -> bool:
    return p.y_count % 2 == 1


def weight(p: PauliString) -> int:
    return p.weight


# -- text form --------------------------------------------------------------

def parse_pauli(text: str, n_qubits: int) -> PauliString:
    """Parse tokens like ``"i X0 Y3"``. An empty token list is the identity."""
    tokens = text.split()
    phase = 0
    ops: Dict[int, str] = {}
    for pos, tok in enumerate(tokens):
        if tok == "i" and pos == 0:
            phase = 1
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise PauliParseError(f"malformed token {tok!r}", pos)
        q = int(m.group(2))
        if q >= n_qubits:
            raise PauliParseError(f"qubit index {q} >= n={n_qubits}", pos)
        if q in ops:
            raise PauliParseError(f"duplicate qubit index {q}", pos)
        ops[q] = m.group(1)
    return PauliString.from_ops(n_qubits, ops, phase)


def format_pauli(p: PauliString) -> str:
    """Canonical token text, ascending qubit index.

    Phase 1 is written as a leading ``i``; phases 2 and 3 get a ``-`` sign
    (``-`` and ``-i``), which :func:`parse_pauli` does not accept.
    """
    body = " ".join(f"{p.letter(q)}{q}" for q in p.support)
    prefix = {0: "", 1: "i", 2: "-", 3: "-i"}[p.phase]
    return " ".join(s for s in (prefix, body) if s)


# -- enumeration ------------------------------------------------------------

def count_odd_strings(n: int) -> int:
    """Number of n-qubit Pauli strings with an odd number of Y factors."""
    if not 1 <= n <= MAX_ENUM_QUBITS:
        raise OverflowError(f"n={n} outside supported range 1..{MAX_ENUM_QUBITS}")
    return 2 ** (n - 1) * (2**n - 1)


def all_strings(n: int) -> Iterator[PauliString]:
    for x, z in product(range(2**n), repeat=2):
        yield PauliString(n, x, z)


def odd_strings(n: int) -> list[PauliString]:
    """Every odd-Y string as the anti-Hermitian generator ``iP``, in (x, z) order."""
    return [p.with_phase(1) for p in all_strings(n) if is_odd(p)]


def even_strings(n: int) -> list[PauliString]:
    return [p for p in all_strings(n) if not is_odd(p)]


# -- weighted sums ----------------------------------------------------------

class PauliSum:
    """Sum of Pauli strings with real coefficients.

    Keys are phase-normalised: phase 0 for Hermitian terms, phase 1 for the
    anti-Hermitian ``iP`` terms. Build from complex data with
    :meth:`from_complex`.
    """

    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits: int, terms: Optional[Dict[PauliString, float]] = None,
                 tol: float = PRUNE_TOL):
        self.n_qubits = n_qubits
        acc: Dict[PauliString, float] = {}
        for p, c in (terms or {}).items():
            if p.n_qubits != n_qubits:
                raise ValueError("term qubit count does not match sum")
            # fold phases 2, 3 into a sign on phases 0, 1
            key = p.with_phase(p.phase % 2)
            sign = -1.0 if p.phase >= 2 else 1.0
            acc[key] = acc.get(key, 0.0) + sign * float(c)
        self.terms = {p: c for p, c in acc.items() if abs(c) > tol}

    @classmethod
    def from_complex(cls, n_qubits: int, coeffs: Dict[Tuple[int, int], complex],
                     tol: float = PRUNE_TOL) -> "PauliSum":
        """From ``{(x, z): c}`` meaning ``sum c * P(x, z)``."""
        terms: Dict[PauliString, float] = {}
        for (x, z), c in coeffs.items():
            if abs(c.real) > tol:
                terms[PauliString(n_qubits, x, z, 0)] = c.real
            if abs(c.imag) > tol:
                terms[PauliString(n_qubits, x, z, 1)] = c.imag
        return cls(n_qubits, terms, tol)

    @classmethod
    def identity(cls, n_qubits: int, coeff: float = 1.0) -> "PauliSum":
        return cls(n_qubits, {PauliString.identity(n_qubits): coeff})

    def complex_terms(self) -> Dict[Tuple[int, int], complex]:
        out: Dict[Tuple[int, int], complex] = {}
        for p, c in self.terms.items():
            out[p.key] = out.get(p.key, 0j) + (1j ** p.phase) * c
        return out

    @property
    def is_hermitian(self) -> bool:
        return all(p.is_hermitian for p in self.terms)

    @property
    def is_antihermitian(self) -> bool:
        return all(p.is_antihermitian for p in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[PauliString, float]]:
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        return (isinstance(other, PauliSum) and other.n_qubits == self.n_qubits
                and other.terms == self.terms)

    def isclose(self, other: "PauliSum", atol: float = 1e-12) -> bool:
        diff = (self - other).terms
        return all(abs(c) <= atol for c in diff.values())

    def __add__(self, other: "PauliSum") -> "PauliSum":
        merged = dict(self.terms)
        for p, c in other.terms.items():
            merged[p] = merged.get(p, 0.0) + c
        return PauliSum(self.n_qubits, merged)

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + other * -1.0

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return PauliSum(self.n_qubits, {p: c * other for p, c in self.terms.items()})
        if isinstance(other, PauliSum):
            acc: Dict[Tuple[int, int], complex] = {}
            for pa, ca in self.terms.items():
                for pb, cb in other.terms.items():
                    prod = multiply(pa, pb)
                    acc[prod.key] = acc.get(prod.key, 0j) + (1j ** prod.phase) * ca * cb
            return PauliSum.from_complex(self.n_qubits, acc)
        return NotImplemented

    __rmul__ = __mul__

    def sorted_terms(self) -> list[Tuple[PauliString, float]]:
        """Terms ordered by weight, then by token text."""
        return sorted(self.terms.items(), key=lambda t: (t[0].weight, _sort_tokens(t[0]), t[0].phase))

    def to_matrix(self) -> np.ndarray:
        dim = 2**self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for p, c in self.terms.items():
            out += c * p.to_matrix()
        return out

    def __repr__(self) -> str:
        body = " + ".join(f"{c:.6g}*({format_pauli(p) or 'I'})" for p, c in self.sorted_terms())
        return f"PauliSum(n={self.n_qubits}: {body or '0'})"


def _sort_tokens(p: PauliString) -> Tuple[Tuple[int, str], ...]:
    return tuple((q, p.letter(q)) for q in p.support)


def iter_terms(sums: Iterable[PauliSum]) -> Iterator[PauliString]:
    for s in sums:
        yield from s.terms
