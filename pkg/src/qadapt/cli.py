"""Command-line entry point: ``qadapt <subcommand> [flags]``.

Data goes to files in ``--output``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from .adapt import AdaptConfig, run_adapt
from .completeness import completeness_rank, completeness_scan, rows_to_csv
from .experiments import random_real_hamiltonian
from .fermion import MolecularHamiltonian, build_molecular_hamiltonian
from .fileformats import FormatError, format_pauli_hamiltonian, parse_fcidump, parse_pauli_hamiltonian, parse_pool_file
from .pauli import PauliString, PauliSum
from .pools import (OperatorPool, fermionic_pool, minimal_pool_g, minimal_pool_v, pauli_pool, qubit_pool,
                    random_odd_pool, random_subpool)
from .resources import brute_force_counts, closed_form_averages, cnots_per_param, report_csv
from .statevector import MAX_QUBITS, basis_state, exact_ground_state, random_real_state

log = logging.getLogger("qadapt")

EXIT_OK, EXIT_INPUT, EXIT_MAX_ITER, EXIT_STALLED = 0, 1, 2, 3
EXIT_BY_REASON = {"gradient_converged": EXIT_OK, "max_iterations": EXIT_MAX_ITER, "stalled": EXIT_STALLED}
SCAN_CAP = 7


class InputError(Exception):
    pass


# -- helpers ---------------------------------------------------------------------

def _write(outdir: Path, name: str, text: str) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(text)
    log.info("wrote %s", path)
    return path


def _echo_config(args: argparse.Namespace) -> None:
    lines = [f"{k} = {v}" for k, v in sorted(vars(args).items()) if k not in ("func",)]
    _write(Path(args.output), "config.txt", "\n".join(lines) + "\n")


def _read_text(path: Optional[str]) -> str:
    if not path:
        raise InputError("--input is required")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_hamiltonian(path: str) -> tuple[PauliSum, Optional[MolecularHamiltonian]]:
    """Pauli-text or FCIDUMP, told apart by the ``&FCI`` namelist."""
    text = _read_text(path)
    if "&FCI" in text.upper():
        mol = parse_fcidump(text)
        return build_molecular_hamiltonian(mol), mol
    return parse_pauli_hamiltonian(text), None


def build_pool(name: str, n: int, mol: Optional[MolecularHamiltonian], seed: int,
               size: Optional[int] = None, m: Optional[int] = None) -> OperatorPool:
    if name.startswith("file:"):
        n_file, ops = parse_pool_file(_read_text(name[5:]))
        if n_file != n:
            raise InputError(f"pool file is for {n_file} qubits, Hamiltonian has {n}")
        return pauli_pool(n, ops, "file", path=name[5:])
    if name in ("v", "g") and n == 1:
        # both families need n >= 2; {iY} is the complete one-qubit pool
        return pauli_pool(1, [PauliString.from_label("Y", phase=1)], f"minimal_{name}")
    if name == "v":
        return minimal_pool_v(n)
    if name == "g":
        return minimal_pool_g(n)
    if name == "random":
        return random_odd_pool(n, size or 2 * n - 2, seed)
    if name in ("fermionic", "qubit", "qubit-with-z"):
        m = mol.n_spatial if mol is not None else m
        if m is None or 2 * m != n:
            raise InputError(f"pool {name!r} needs an FCIDUMP input or --m with 2m = {n}")
        fp = fermionic_pool(m)
        if name == "fermionic":
            return fp
        return qubit_pool(fp, strip_z=(name == "qubit"))
    raise InputError(f"unknown pool {name!r}")


def _parse_sizes(text: str) -> List[int]:
    out: List[int] = []
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        try:
            out += list(range(int(lo), int(hi or lo) + 1))
        except ValueError:
            raise InputError(f"bad size list {text!r}") from None
    return out


# -- subcommands -----------------------------------------------------------------

def cmd_run_adapt(args) -> int:
    H, mol = load_hamiltonian(args.input)
    return _adapt_on(H, mol, args)


def _adapt_on(H: PauliSum, mol: Optional[MolecularHamiltonian], args) -> int:
    n = H.n_qubits
    pool = build_pool(args.pool, n, mol, args.seed, args.size, args.m)
    if args.fraction is not None:
        pool = random_subpool(pool, args.fraction, args.seed)
    if args.random_state:
        ref = random_real_state(n, np.random.default_rng(args.seed))
    elif mol is not None:
        ref = basis_state(n, mol.hf_occupation())
    else:
        ref = basis_state(n, [0] * n)
    exact = exact_ground_state(H, seed=args.seed).energy if n <= MAX_QUBITS else None
    config = AdaptConfig(grad_norm_eps=args.eps, max_iterations=args.max_iter, seed=args.seed)
    _echo_config(args)
    log.info("pool %s with %d operators on %d qubits", pool.family, len(pool), n)
    trace = run_adapt(H, pool, ref, config, exact_energy=exact)
    _write(Path(args.output), "trace.csv", trace.to_csv())
    print(f"{trace.termination}: E = {trace.final_energy:.12f} with {trace.n_params} parameters",
          file=sys.stderr)
    return EXIT_BY_REASON[trace.termination]


def cmd_pool_scan(args) -> int:
    if args.n is None:
        raise InputError("--n is required")
    if args.n > SCAN_CAP and not args.allow_large:
        raise InputError(f"n > {SCAN_CAP} needs --allow-large")
    if args.trials < 1:
        raise InputError("--trials must be at least 1 (no data otherwise)")
    sizes = _parse_sizes(args.sizes) if args.sizes else [2 * args.n - 2]
    _echo_config(args)
    summary, detail = [], []
    for size in sizes:
        rows = completeness_scan(args.n, size, args.trials, args.seed)
        detail += rows
        frac = sum(r["complete"] for r in rows) / len(rows)
        summary.append({"n": args.n, "pool_size": size, "fraction_complete": f"{frac:.17g}"})
        print(f"n={args.n} size={size} fraction={frac:.3f}", file=sys.stderr)
    _write(Path(args.output), "scan.csv", rows_to_csv(summary, ("n", "pool_size", "fraction_complete")))
    _write(Path(args.output), "scan_trials.csv", rows_to_csv(detail))
    return EXIT_OK


def cmd_check_pool(args) -> int:
    if args.pool.startswith("file:"):
        n, ops = parse_pool_file(_read_text(args.pool[5:]))
        pool = pauli_pool(n, ops, "file")
    else:
        if args.n is None:
            raise InputError("--n is required")
        pool = build_pool(args.pool, args.n, None, args.seed, args.size, args.m)
    if not pool.is_pauli:
        raise InputError("completeness checks need a Pauli-string pool")
    _echo_config(args)
    rep = completeness_rank(pool, state_seed=args.seed)
    print(rep.summary(), file=sys.stderr)
    cols = ("n_qubits", "pool", "pool_size", "closure_size", "gram_rank", "threshold", "complete", "truncated")
    _write(Path(args.output), "check.csv", rows_to_csv([vars(rep)], cols))
    return EXIT_OK


def cmd_estimate(args) -> int:
    ms = _parse_sizes(args.m_list) if args.m_list else [args.m or 4]
    _echo_config(args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "source", "n_spin", "n_pauli", "n_z", "cnots_per_param", "total_cnots"])
    reports = []
    for m in ms:
        n_spin, n_pauli, n_z = closed_form_averages(m)
        per = cnots_per_param(m)
        total = "" if args.n_params is None else f"{float(per * args.n_params):.17g}"
        writer.writerow([m, "closed_form", *(f"{float(v):.17g}" for v in (n_spin, n_pauli, n_z, per)), total])
        if 2 <= m <= 8:
            rep = brute_force_counts(m)
            reports.append(rep)
            per_b = rep.cnots_per_param
            total_b = "" if args.n_params is None else f"{float(per_b * args.n_params):.17g}"
            writer.writerow([m, "enumeration", *(f"{float(v):.17g}" for v in
                                                  (rep.n_spin, rep.n_pauli, rep.n_z, per_b)), total_b])
            if per_b != per:
                log.warning("m=%d: enumeration and closed form disagree", m)
        print(f"m={m}: {float(per):.2f} CNOTs per parameter", file=sys.stderr)
    _write(Path(args.output), "estimate.csv", buf.getvalue())
    if reports:
        _write(Path(args.output), "groups.csv", report_csv(reports))
    return EXIT_OK


def cmd_random_hamiltonian(args) -> int:
    if args.n is None:
        raise InputError("--n is required")
    H = random_real_hamiltonian(args.n, args.seed)
    _echo_config(args)
    _write(Path(args.output), "hamiltonian.txt", format_pauli_hamiltonian(H))
    if not args.run:
        return EXIT_OK
    args.random_state = True
    return _adapt_on(H, None, args)


def cmd_diag(args) -> int:
    H, _ = load_hamiltonian(args.input)
    _echo_config(args)
    res = exact_ground_state(H, seed=args.seed)
    _write(Path(args.output), "diag.csv",
           f"n_qubits,energy,residual\n{H.n_qubits},{res.energy:.17g},{res.residual:.17g}\n")
    print(f"E0 = {res.energy:.12f}", file=sys.stderr)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="Hamiltonian file (Pauli text or FCIDUMP)")
    p.add_argument("--output", default="out", help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-3, help="gradient-norm threshold")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--pool", default="qubit",
                   help="fermionic, qubit, qubit-with-z, v, g, random or file:PATH")
    p.add_argument("--n", type=int, help="number of qubits")
    p.add_argument("--m", type=int, help="number of spatial orbitals")
    p.add_argument("--size", type=int, help="random pool size (default 2n-2)")
    p.add_argument("--fraction", type=float, help="keep a random fraction of the pool")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--random-state", action="store_true", help="start from a random real state")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qadapt", description="qubit-ADAPT-VQE toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "run-adapt": (cmd_run_adapt, "grow an ADAPT ansatz and write its trace"),
        "pool-scan": (cmd_pool_scan, "fraction of complete random pools"),
        "check-pool": (cmd_check_pool, "closure and rank test for one pool"),
        "estimate": (cmd_estimate, "CNOT estimates for fermionic doubles"),
        "random-hamiltonian": (cmd_random_hamiltonian, "sample a random real Hamiltonian"),
        "diag": (cmd_diag, "exact ground-state energy"),
    }
    for name, (func, helptext) in commands.items():
        p = sub.add_parser(name, help=helptext)
        _common(p)
        p.set_defaults(func=func)
        if name == "pool-scan":
            p.add_argument("--sizes", help="pool sizes, e.g. 1-6 or 4,5,6")
            p.add_argument("--allow-large", action="store_true", help=f"permit n > {SCAN_CAP}")
        if name == "estimate":
            p.add_argument("--m-list", help="range of m, e.g. 2-8")
            p.add_argument("--n-params", type=int, help="also report total CNOTs")
        if name == "random-hamiltonian":
            p.add_argument("--run", action="store_true", help="run ADAPT on the sampled Hamiltonian")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (InputError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
