import subprocess
import sys

import numpy as np
import pytest

from qadapt.cli import main
from qadapt.fileformats import parse_pauli_hamiltonian

from conftest import H4_FCI_ENERGY, H4_FCIDUMP


def _csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, l.split(","))) for l in lines[1:]]


def test_toy_hamiltonian_single_row(tmp_path):
    ham = tmp_path / "z.txt"
    ham.write_text("nqubits 1\n-1.0 Z0\n")
    out = tmp_path / "out"
    assert main(["run-adapt", "--input", str(ham), "--pool", "v", "--output", str(out)]) == 0
    rows = _csv(out / "trace.csv")
    assert len(rows) == 1 and float(rows[0]["energy"]) == -1.0
    config = (out / "config.txt").read_text()
    assert "eps = 0.001" in config and "pool = v" in config


def test_run_adapt_is_deterministic(tmp_path):
    ham = tmp_path / "h.txt"
    assert main(["random-hamiltonian", "--n", "3", "--seed", "4", "--output", str(tmp_path / "gen")]) == 0
    ham.write_text((tmp_path / "gen" / "hamiltonian.txt").read_text())
    args = ["run-adapt", "--input", str(ham), "--pool", "g", "--random-state", "--eps", "1e-6", "--seed", "2"]
    assert main(args + ["--output", str(tmp_path / "a")]) == 0
    assert main(args + ["--output", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()
    assert float(_csv(tmp_path / "a" / "trace.csv")[-1]["energy_error"]) < 1e-6


def test_exit_codes(tmp_path):
    ham = tmp_path / "h.txt"
    main(["random-hamiltonian", "--n", "3", "--seed", "1", "--output", str(tmp_path)])
    ham.write_text((tmp_path / "hamiltonian.txt").read_text())
    assert main(["run-adapt", "--input", str(ham), "--pool", "v", "--max-iter", "1", "--eps", "1e-9",
                 "--random-state", "--output", str(tmp_path / "m")]) == 2
    assert main(["run-adapt", "--input", str(tmp_path / "missing.txt"), "--output", str(tmp_path / "x")]) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("nqubits 2\n1.0 Q0\n")
    assert main(["run-adapt", "--input", str(bad), "--output", str(tmp_path / "x")]) == 1
    assert main(["run-adapt", "--input", str(ham), "--pool", "nonsense", "--output", str(tmp_path / "x")]) == 1


def test_h4_qubit_run(tmp_path):
    out = tmp_path / "h4"
    code = main(["run-adapt", "--input", str(H4_FCIDUMP), "--pool", "qubit", "--eps", "1e-5",
                 "--output", str(out)])
    assert code == 0
    rows = _csv(out / "trace.csv")
    assert abs(float(rows[-1]["energy"]) - H4_FCI_ENERGY) < 1e-6


def test_pool_scan(tmp_path):
    assert main(["pool-scan", "--n", "2", "--sizes", "1-6", "--trials", "30", "--output", str(tmp_path)]) == 0
    rows = _csv(tmp_path / "scan.csv")
    fracs = {int(r["pool_size"]): float(r["fraction_complete"]) for r in rows}
    assert fracs[1] == 0.0 and fracs[6] == 1.0
    assert all(v < 1.0 for k, v in fracs.items() if k < 2)
    assert main(["pool-scan", "--n", "4", "--trials", "40", "--output", str(tmp_path / "b")]) == 0
    frac = float(_csv(tmp_path / "b" / "scan.csv")[0]["fraction_complete"])
    assert 0 < frac < 1
    assert main(["pool-scan", "--n", "8", "--output", str(tmp_path / "c")]) == 1
    assert main(["pool-scan", "--n", "3", "--trials", "0", "--output", str(tmp_path / "c")]) == 1


def test_check_pool(tmp_path, capsys):
    assert main(["check-pool", "--pool", "v", "--n", "5", "--output", str(tmp_path / "v")]) == 0
    assert _csv(tmp_path / "v" / "check.csv")[0]["complete"] == "True"
    assert main(["check-pool", "--pool", "g", "--n", "7", "--output", str(tmp_path / "g")]) == 0
    assert "complete" in capsys.readouterr().err
    pool = tmp_path / "one.txt"
    pool.write_text("nqubits 2\ni Y0\n")
    assert main(["check-pool", "--pool", f"file:{pool}", "--output", str(tmp_path / "f")]) == 0
    assert _csv(tmp_path / "f" / "check.csv")[0]["complete"] == "False"


def test_estimate(tmp_path):
    assert main(["estimate", "--m-list", "4,6", "--output", str(tmp_path)]) == 0
    rows = _csv(tmp_path / "estimate.csv")
    per = {(r["m"], r["source"]): float(r["cnots_per_param"]) for r in rows}
    assert abs(per[("4", "closed_form")] - 175) < 1 and abs(per[("6", "closed_form")] - 303) < 1
    assert per[("4", "closed_form")] == per[("4", "enumeration")]
    assert (tmp_path / "groups.csv").exists()


def test_random_hamiltonian(tmp_path):
    main(["random-hamiltonian", "--n", "3", "--seed", "9", "--output", str(tmp_path / "a")])
    main(["random-hamiltonian", "--n", "3", "--seed", "9", "--output", str(tmp_path / "b")])
    text = (tmp_path / "a" / "hamiltonian.txt").read_text()
    assert text == (tmp_path / "b" / "hamiltonian.txt").read_text()
    H = parse_pauli_hamiltonian(text)
    assert all(-2 <= c <= 2 for c in H.terms.values())
    mat = H.to_matrix()
    assert np.allclose(mat.imag, 0) and np.allclose(mat, mat.T)
    assert main(["random-hamiltonian", "--n", "3", "--seed", "9", "--run", "--pool", "v", "--eps", "1e-6",
                 "--output", str(tmp_path / "c")]) == 0
    assert (tmp_path / "c" / "trace.csv").exists()


def test_diag(tmp_path):
    assert main(["diag", "--input", str(H4_FCIDUMP), "--output", str(tmp_path)]) == 0
    row = _csv(tmp_path / "diag.csv")[0]
    assert abs(float(row["energy"]) - H4_FCI_ENERGY) < 1e-9


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qadapt.cli", "estimate", "--m", "4", "--output", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert "175.31" in proc.stderr
