"""CNOT resource counts: staircase costs, closed-form averages for spin-adapted
doubles, and an enumeration oracle for the same averages.

The closed forms describe a counting model rather than raw Jordan-Wigner
output:

* a fermionic term ``a+a+aa - h.c.`` contributes one Pauli string per
  distinct X/Y pattern of its image (8 with four distinct spin orbitals,
  2 with a repeated one, even though the latter has 4 strings that differ
  only by one Z);
* its Z-chain length is taken with every spin orbital treated as spin-up,
  i.e. ``f(b - a) + f(d - c)`` over the sorted spatial indices
  ``a <= b <= c <= d`` with ``f(0) = 0`` and ``f(k) = 2k - 1``.

:func:`brute_force_counts` reports the raw Jordan-Wigner totals next to the
model totals.
"""

from __future__ import annotations

import csv
import io
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .pauli import PauliString

log = logging.getLogger(__name__)

GROUPS = (1, 2, 3, 4, 5)


def cnot_count_pauli_exp(p: PauliString) -> int:
    """CNOTs in the staircase circuit for ``exp(i theta P)``: ``2 (weight - 1)``."""
    if p.weight == 0:
        log.debug("identity string costs no CNOTs")
        return 0
    return 2 * (p.weight - 1)


def ansatz_cnot_count(ansatz: Iterable) -> int:
    """Sum of Trotter-factor costs over ansatz elements (or pool operators)."""
    total = 0
    for element in ansatz:
        op = getattr(element, "operator", element)
        total += sum(cnot_count_pauli_exp(p) for _, p in op.factors)
    return total


# -- closed forms -------------------------------------------------------------

def closed_form_averages(m: int) -> Tuple[Fraction, Fraction, Fraction]:
    """Exact ``(N_spin, N_pauli, N_z)`` averages for ``m`` spatial orbitals."""
    if m < 2:
        raise ValueError("m must be at least 2")
    n_spin = Fraction(5 * m**2 - m - 8, m**2 + m)
    n_pauli = Fraction(8 * (5 * m**3 - 15 * m**2 + 14 * m - 4), 5 * m**3 - 6 * m**2 - 7 * m + 8)
    n_z = Fraction(12 * m**3 - 30 * m**2 + 34 * m - 20, 3 * (5 * m**2 - m - 8))
    return n_spin, n_pauli, n_z


def closed_form_totals(m: int) -> Dict[str, Fraction]:
    """Total counts over all five groups."""
    return {
        "combinations": Fraction(m * (m**3 + 2 * m**2 - m - 2), 8),
        "spin_groups": Fraction(m**2 * (m**2 - 1), 4),
        "fermi_ops": Fraction(m * (5 * m**3 - 6 * m**2 - 7 * m + 8), 4),
        "pauli_strings": Fraction(2 * m * (5 * m**3 - 15 * m**2 + 14 * m - 4)),
        "z_length": Fraction(m * (6 * m**4 - 21 * m**3 + 32 * m**2 - 27 * m + 10), 6),
    }


def cnots_per_param(m: int) -> Fraction:
    n_spin, n_pauli, n_z = closed_form_averages(m)
    return n_pauli * (6 + 2 * n_z) * n_spin


def estimate_total_cnots(m: int, n_params: int) -> float:
    if n_params < 0:
        raise ValueError("n_params must be non-negative")
    return float(cnots_per_param(m) * n_params)


# -- enumeration oracle -------------------------------------------------------

def _interval(k: int) -> int:
    return 0 if k == 0 else 2 * k - 1


def model_z_length(spin_orbitals: Iterable[int]) -> int:
    a, b, c, d = sorted(i // 2 for i in spin_orbitals)
    return _interval(b - a) + _interval(d - c)


@dataclass
class GroupCounts:
    combinations: int = 0
    spin_groups: int = 0
    fermi_ops: int = 0
    pauli_strings: int = 0
    z_length: int = 0
    jw_strings: int = 0


@dataclass
class FermionicCountReport:
    m: int
    groups: Dict[int, GroupCounts] = field(default_factory=dict)

    def total(self, name: str) -> int:
        return sum(getattr(g, name) for g in self.groups.values())

    @property
    def n_spin(self) -> Fraction:
        return Fraction(self.total("fermi_ops"), self.total("spin_groups"))

    @property
    def n_pauli(self) -> Fraction:
        return Fraction(self.total("pauli_strings"), self.total("fermi_ops"))

    @property
    def n_z(self) -> Fraction:
        return Fraction(self.total("z_length"), self.total("fermi_ops"))

    @property
    def cnots_per_param(self) -> Fraction:
        return self.n_pauli * (6 + 2 * self.n_z) * self.n_spin


def brute_force_counts(m: int) -> FermionicCountReport:
    """Enumerate every spin-adapted double and count its terms, strings and Z chains."""
    from .fermion import FermionOperator, anti_hermitian, excitation, jordan_wigner, spin_adapted_doubles

    if not 2 <= m <= 8:
        raise ValueError("enumeration supported for 2 <= m <= 8")
    n = 2 * m
    groups = {g: GroupCounts() for g in GROUPS}
    combos = defaultdict(set)
    for gen in spin_adapted_doubles(m):
        counts = groups[gen.group]
        combos[gen.group].add(gen.spatial)
        counts.spin_groups += 1
        for _, (cr, an) in gen.terms:
            counts.fermi_ops += 1
            image = jordan_wigner(anti_hermitian(FermionOperator([excitation(1.0, cr, an)])), n)
            counts.jw_strings += len(image)
            counts.pauli_strings += len({(p.x, p.z & p.x) for p in image.terms})
            counts.z_length += model_z_length(cr + an)
    for g, c in groups.items():
        c.combinations = len(combos[g])
    return FermionicCountReport(m, groups)


REPORT_COLUMNS = ("m", "group", "combinations", "spin_groups", "fermi_ops", "pauli_strings",
                  "z_length", "jw_strings")


def report_csv(reports: Iterable[FermionicCountReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for rep in reports:
        for g, c in rep.groups.items():
            writer.writerow([rep.m, g, c.combinations, c.spin_groups, c.fermi_ops,
                             c.pauli_strings, c.z_length, c.jw_strings])
        writer.writerow([rep.m, "total"] + [rep.total(k) for k in REPORT_COLUMNS[2:]])
    return buf.getvalue()
