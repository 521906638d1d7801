import json
import subprocess
import sys


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "kfibpal", *args], capture_output=True, text=True
    )


def test_search_line_format():
    proc = run_cli("search", "--kmin", "5", "--kmax", "5", "--nmin", "11", "--nmax", "11")
    lines = proc.stdout.strip().splitlines()
    assert proc.returncode == 0
    assert lines[0] == "5,11,464,4,6,1,1"
    summary = json.loads(lines[-1])
    assert summary["hits"][0]["value"] == "464"
    assert summary["schema"] == 1


def test_pow2_scan_summary():
    proc = run_cli("pow2-scan", "--max-ell", "1", "--max-m", "2")
    summary = json.loads(proc.stdout.strip().splitlines()[-1])
    assert proc.returncode == 0
    assert summary["candidates"] == 9 * 9 * 1 * 2
    assert summary["hits"] == []


def test_alpha_subcommand():
    proc = run_cli("alpha", "--k", "3", "--prec", "40")
    data = json.loads(proc.stdout)
    assert proc.returncode == 0
    assert data["sign_change_certified"]
    lo = data["lo"]
    assert lo.startswith("18392867")  # 1.8392867... scaled by the printed exponent


def test_matveev_subcommand():
    proc = run_cli("matveev", "--t", "3", "--D", "1", "--B", "9", "--A", "2,1,3")
    data = json.loads(proc.stdout)
    assert proc.returncode == 0
    assert data["log_gamma_lower_bound"] < 0


def test_caps_subcommand():
    proc = run_cli("caps", "--k", "900")
    data = json.loads(proc.stdout)
    assert proc.returncode == 0
    assert int(data["n_cap"]) < 19 * 10**58
    assert data["large_k_caps"]["k"] == str(32 * 10**30)


def test_reduce_subcommand(tmp_path):
    problem = {
        "etas": [
            {"kind": "log-alpha", "k": 2},
            {"kind": "log-10", "negate": True},
            {"kind": "log-expr-9f-over-d", "k": 2, "d": 1},
        ],
        "C": str(21 * 10**178),
        "X": [str(2 * 10**59), str(2 * 10**59), "1"],
        "c3": "33/2",
        "c4": "log10",
        "prec": 240,
    }
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem))
    proc = run_cli("reduce", str(path))
    data = json.loads(proc.stdout)
    assert proc.returncode == 0
    assert data["condition_ok"]
    assert 0 < data["h_bound"] < 140
    assert len(data["floors"]) == 3


def test_reduce_rational_etas(tmp_path):
    problem = {
        "etas": [
            {"kind": "log-rational", "p": 4, "q": 9},
            {"kind": "log-10"},
            {"kind": "log-rational", "p": 1, "q": 2},
        ],
        "C": str(10**30),
        "X": ["1", str(10**6), str(10**6)],
        "c3": "81/2",
        "c4": "log2",
        "prec": 120,
    }
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem))
    proc = run_cli("reduce", str(path))
    data = json.loads(proc.stdout)
    assert proc.returncode == 0
    assert data["condition_ok"]
