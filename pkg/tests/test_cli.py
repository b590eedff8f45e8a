import subprocess
import sys

import pytest

from spircds.cli import main
from spircds.constructions import canonical_scheme
from spircds.scheme import emit_scheme, parse_scheme
from spircds.verifier import parse_report

from conftest import mutant_b1, mutant_no_s2


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_canonical(capsys):
    code, out, _ = run(capsys, "verify", "--canonical", "k3_u2log3")
    assert code == 0
    assert "upload                     3.169925 bits" in out
    assert "download                   3 bits" in out
    assert "randomness                 2 bits" in out


def test_verify_machine_format(capsys):
    code, out, _ = run(capsys, "verify", "--canonical", "k3_u4", "--format", "machine")
    assert code == 0
    r = parse_report(out)
    assert r.passed and (r.upload_bits, r.download_bits, r.randomness_bits) == (4.0, 2.0, 1.0)


def test_verify_broken_file(tmp_path, capsys):
    path = tmp_path / "broken.scheme"
    path.write_text(emit_scheme(mutant_no_s2()))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 2
    assert "database privacy           FAIL" in out
    assert "counterexample:" in out


def test_verify_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "verify", str(tmp_path / "missing.scheme"))
    assert code == 1
    assert err.startswith("spircds:")


def test_verify_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.scheme"
    path.write_text(emit_scheme(canonical_scheme("k2_u2")).replace("modulus 2", "modulus 4"))
    code, _, err = run(capsys, "verify", str(path))
    assert code == 1
    assert "modulus not prime" in err


def test_usage_errors(capsys):
    assert run(capsys, "verify")[0] == 1
    assert run(capsys, "verify", "--canonical", "nope")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1


def test_double_writes_scheme(tmp_path, capsys):
    out = tmp_path / "k4.scheme"
    assert run(capsys, "double", "--canonical", "k2_u2", "--out", str(out))[0] == 0
    assert parse_scheme(out.read_text()).K == 4
    assert run(capsys, "verify", str(out))[0] == 0


def test_double_of_invalid_scheme(tmp_path, capsys):
    path = tmp_path / "b1.scheme"
    path.write_text(emit_scheme(mutant_b1()))
    code, _, err = run(capsys, "double", str(path))
    assert code == 2
    assert "failed verification" in err


def test_repeat(capsys):
    code, out, _ = run(capsys, "repeat", "--canonical", "k3_u4", "--l", "2")
    assert code == 0
    s = parse_scheme(out)
    assert (s.msg.L, s.rho) == (2, 2)


def test_graph(capsys):
    code, out, _ = run(capsys, "graph", "--canonical", "k3_u4")
    assert code == 0
    assert out.count(" -- ") == 16
    assert out.count("dashed") == 4


def test_region_file_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "region", "--k", "3", "--l", "1", "--out", str(a))[0] == 0
    assert run(capsys, "region", "--k", "3", "--l", "1", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "upload_bits,download_bits,total_bits,witness_scheme,kind"
    corners = [l.split(",") for l in lines[1:] if l.endswith(",corner")]
    assert len(corners) == 2
    assert min(float(c[2]) for c in corners) == 6.0


def test_region_unsupported(capsys):
    code, _, err = run(capsys, "region", "--k", "4")
    assert code == 1
    assert "region known only for K=3, L=1" in err


def test_decode_table(capsys):
    code, out, _ = run(capsys, "decode-table", "--canonical", "k2_u2", "--k", "2")
    assert code == 0
    rows = [l.split() for l in out.splitlines()[2:]]
    assert len(rows) == 8
    for pair, a1, a2, w in rows:
        if pair == "A0:B1":
            assert int(w[1]) == (int(a1[1]) + int(a2[1])) % 2


def test_decode_table_unreliable(tmp_path, capsys):
    path = tmp_path / "b1.scheme"
    path.write_text(emit_scheme(mutant_b1()))
    code, out, err = run(capsys, "decode-table", str(path), "--k", "1")
    assert code == 2
    assert "AMBIGUOUS" in out
    assert "not decodable" in err


def test_decode_table_bad_index(capsys):
    assert run(capsys, "decode-table", "--canonical", "k2_u2", "--k", "3")[0] == 1


def test_list_canonical(capsys):
    code, out, _ = run(capsys, "list-canonical")
    assert code == 0
    assert [l.split()[0] for l in out.splitlines()] == ["k2_u2", "k3_u2log3", "k3_u4", "k4_u4"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "spircds", "verify", "--canonical", "k2_u2", "--format", "machine"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "reliability pass" in proc.stdout
