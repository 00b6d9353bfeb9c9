import json
import subprocess
import sys

import pytest

from wreathcount.cli import EXIT_COMPUTE, EXIT_OK, EXIT_USAGE, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_d4(capsys):
    code, out, _ = run(["invariants", "--degree", "4", "--gens", "(1,2,3,4);(1,3)"], capsys)
    rec = json.loads(out)
    assert code == EXIT_OK
    assert (rec["order"], rec["ind"], rec["a"], rec["b_q"], rec["primitive"]) == (8, 1, "1/1", 1, False)


def test_invariants_catalog_name(capsys):
    code, out, _ = run(["invariants", "--group", "C3"], capsys)
    assert code == 0 and json.loads(out)["a"] == "1/2"


def test_rank_bound(capsys):
    code, out, _ = run(["rank-bound", "--ell", "2", "--S", "2"], capsys)
    rec = json.loads(out)
    assert code == 0 and (rec["s"], rec["bound"], rec["exact"]) == (3, 7, 3)


def test_count_c2(capsys):
    code, out, _ = run(["count-c2", "--x", "10"], capsys)
    assert code == 0 and json.loads(out)["count"] == 6


def test_count_towers_csv(capsys):
    code, out, _ = run(["count-towers", "--fields", "-4", "--x", "150", "--format", "csv"], capsys)
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "x,z_tilde,z_d4,y,mode" and lines[1] == "150,1,0,1,tower"


def test_count_towers_dump(capsys):
    code, out, _ = run(["count-towers", "--fields", "-4", "--x", "150", "--dump"], capsys)
    row = json.loads(out)
    assert row["tower_disc"] == 144 and row["type"] == "V4"


def test_wreath(capsys):
    code, out, _ = run(["wreath", "--inner", "C2", "--outer", "C3"], capsys)
    rec = json.loads(out)
    assert code == 0 and rec["order"] == 24 and rec["decomposition_e"] == 2


def test_residue(capsys):
    code, out, _ = run(["residue", "--D", "4"], capsys)
    assert code == 0 and abs(json.loads(out)["partial_lo"] - 0.042425) < 1e-5


def test_usage_errors(capsys):
    assert run(["invariants", "--degree", "4", "--gens", "(1,5)"], capsys)[0] == EXIT_USAGE
    assert run(["invariants", "--bogus"], capsys)[0] == EXIT_USAGE
    assert run(["count-towers", "--fields", "x", "--x", "10"], capsys)[0] == EXIT_USAGE
    assert run(["invariants", "--degree", "3", "--gens", "(1,2)"], capsys)[0] == EXIT_USAGE


def test_compute_errors(capsys):
    code, _, err = run(["count-towers", "--fields", "-20", "--x", "100"], capsys)
    assert code == EXIT_COMPUTE and "-20" in err
    code, _, _ = run(["wreath", "--inner", "S5", "--outer", "S3"], capsys)
    assert code == EXIT_COMPUTE


def test_output_files_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["count-towers", "--fields", "-4,-3,5", "--x", "5000", "--samples", "1000"]
    assert main(argv + ["--csv", str(a), "--no-header"]) == 0
    assert main(argv + ["--csv", str(b), "--no-header"]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert main(argv + ["--csv", str(c)]) == 0
    head, rest = c.read_bytes().split(b"\n", 1)
    assert head.startswith(b"# wreathcount") and rest == a.read_bytes()


def test_verify_subset(capsys):
    code, out, err = run(["verify", "--only", "1,3"], capsys)
    assert code == 0 and err.count("[PASS]") == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wreathcount", "count-c2", "--x", "10"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["count"] == 6
