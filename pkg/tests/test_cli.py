import json
import shutil
import subprocess
from pathlib import Path

import pytest

from helpers import linear_field
from linsym.algebra import build_algebra
from linsym.cli import (EXIT_EXACTNESS, EXIT_NONCOMMUTING, EXIT_OK, EXIT_PARSE, EXIT_VERIFY, main)
from linsym.formats import encode_generator, load_algebra, load_system
from linsym.verify import verify_algebra

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return p


@pytest.mark.parametrize("name,line", [
    ("jordan_2_3.json", "dim = 13, N = 4, non-nilpotent"),
    ("jordan_rotation_real.json", "dim = 18, N = 7, non-nilpotent"),
    ("scalar_3.json", "dim = 24, free system"),
    ("nilpotent_pair.json", "dim = 18, N = 8, nilpotent"),
    ("sqrt2_companion.json", "dim = 7, N = 2, non-nilpotent"),
])
def test_dim_reports(capsys, name, line):
    code, out, _ = run(capsys, "dim", "--input", SYSTEMS / name)
    assert code == EXIT_OK
    assert line in out


def test_dim_json_output(capsys, tmp_path):
    dest = tmp_path / "dim.json"
    code, _, _ = run(capsys, "dim", "--input", SYSTEMS / "jordan_2_3.json", "--output", dest)
    assert code == EXIT_OK
    info = json.loads(dest.read_text())
    assert info["dimension"] == 13 and info["partition"] == [4]


def test_noncommuting_exit_code(capsys):
    code, _, err = run(capsys, "dim", "--input", SYSTEMS / "noncommuting.json")
    assert code == EXIT_NONCOMMUTING and "commute" in err


@pytest.mark.parametrize("doc", [
    {"n": 2},
    {"n": 2, "D": [[1, 2], [3]]},
    {"n": 2, "D": [["1/0", 0], [0, 1]]},
    {"n": 2, "D": [[1, 0], [0, 1]], "A": [[0, 0], [0, 0]], "B": [[0, 0], [0, 0]]},
    {"n": 3, "jordan_blocks": [{"eig": "1", "size": 2}]},
    {"n": 2, "field": "quaternion", "D": [[1, 0], [0, 1]]},
])
def test_malformed_input_exit_code(capsys, tmp_path, doc):
    code, _, err = run(capsys, "dim", "--input", write(tmp_path, "bad.json", doc))
    assert code == EXIT_PARSE and err


def test_unreadable_files(capsys, tmp_path):
    assert run(capsys, "dim", "--input", tmp_path / "missing.json")[0] == EXIT_PARSE
    p = tmp_path / "junk.json"
    p.write_text("{not json", encoding="utf-8")
    assert run(capsys, "dim", "--input", p)[0] == EXIT_PARSE
    assert run(capsys, "dim")[0] == EXIT_PARSE


def test_exact_mode_needs_rational_eigenvalues(capsys, tmp_path):
    code, _, err = run(capsys, "algebra", "--input", SYSTEMS / "sqrt2_companion.json",
                       "--output", tmp_path / "a.json")
    assert code == EXIT_EXACTNESS and "--mode numeric" in err
    code, _, _ = run(capsys, "algebra", "--input", SYSTEMS / "sqrt2_companion.json",
                     "--output", tmp_path / "a.json", "--mode", "numeric")
    assert code == EXIT_OK
    assert load_algebra(tmp_path / "a.json").dimension == 7


def test_algebra_dilation_record(capsys, tmp_path):
    dest = tmp_path / "nil.json"
    assert run(capsys, "algebra", "--input", SYSTEMS / "nilpotent_pair.json", "--output", dest)[0] == EXIT_OK
    doc = json.loads(dest.read_text())
    assert doc["dimension"] == 18 == len(doc["generators"])
    dil = [g for g in doc["generators"] if g["family"] == "dilation"]
    assert len(dil) == 1
    assert dil[0]["c1"] == "1"
    H = dil[0]["H"]
    assert [H[i][i] for i in range(4)] == ["-2", "-4", "-2", "-4"]


def test_algebra_small_and_free(capsys, tmp_path):
    dest = tmp_path / "d.json"
    run(capsys, "algebra", "--input", SYSTEMS / "diag_1_4.json", "--output", dest)
    assert load_algebra(dest).dimension == 7
    run(capsys, "algebra", "--input", SYSTEMS / "scalar_2.json", "--output", dest)
    alg = load_algebra(dest)
    assert alg.dimension == 15 and set(alg.families()) == {"projective"}


def test_algebra_to_stdout(capsys):
    code, out, err = run(capsys, "algebra", "--input", SYSTEMS / "diag_1_4.json")
    assert code == EXIT_OK
    assert json.loads(out)["dimension"] == 7
    assert "dim = 7" in err


@pytest.mark.parametrize("name,extra", [
    ("jordan_rotation_real.json", []),
    ("scalar_2.json", []),
    ("damped_pair.json", []),
    ("sqrt2_companion.json", ["--mode", "numeric"]),
])
def test_round_trip_verifies(capsys, tmp_path, name, extra):
    dest = tmp_path / "alg.json"
    assert run(capsys, "algebra", "--input", SYSTEMS / name, "--output", dest, *extra)[0] == EXIT_OK
    code, out, _ = run(capsys, "verify", "--input", SYSTEMS / name, "--algebra", dest)
    assert code == EXIT_OK, out
    dim = load_algebra(dest).dimension
    assert f"PASS {dim}/{dim}" in out


def test_round_trip_residuals_identical(capsys, tmp_path):
    spec = load_system(SYSTEMS / "jordan_rotation_real.json")
    alg = build_algebra(spec.structure(), spec.field)
    dest = tmp_path / "alg.json"
    run(capsys, "algebra", "--input", SYSTEMS / "jordan_rotation_real.json", "--output", dest)
    again = load_algebra(dest)
    a = verify_algebra(alg, seed=3, closure=False)
    b = verify_algebra(again, seed=3, closure=False)
    assert a.max_residuals == b.max_residuals and a.exact_zero == b.exact_zero


def test_injected_non_symmetry_is_reported(capsys, tmp_path):
    dest = tmp_path / "alg.json"
    run(capsys, "algebra", "--input", SYSTEMS / "jordan_rotation_real.json", "--output", dest)
    doc = json.loads(dest.read_text())
    doc["generators"][11] = encode_generator(linear_field(5, {(3, 2): 1}))
    dest.write_text(json.dumps(doc), encoding="utf-8")
    code, out, _ = run(capsys, "verify", "--input", SYSTEMS / "jordan_rotation_real.json", "--algebra", dest)
    assert code == EXIT_VERIFY
    assert "FAIL: generators [11]" in out
    assert "closure: FAIL" in out


def test_verify_rejects_mismatched_system(capsys, tmp_path):
    dest = tmp_path / "alg.json"
    run(capsys, "algebra", "--input", SYSTEMS / "jordan_2_3.json", "--output", dest)
    code, out, _ = run(capsys, "verify", "--input", SYSTEMS / "nilpotent_pair.json", "--algebra", dest)
    assert code == EXIT_VERIFY and "mismatch" in out


@pytest.mark.parametrize("n,line", [(2, "all of [7, 8] attained"), (3, "all of [10, 13] attained"),
                                    (4, "all of [13, 20] attained"), (5, "missing: 26, 27")])
def test_scan(capsys, n, line):
    code, out, _ = run(capsys, "scan", "--n", n)
    assert code == EXIT_OK and line in out


def test_scan_out_of_range(capsys):
    assert run(capsys, "scan", "--n", 9)[0] == EXIT_PARSE
    assert run(capsys, "scan", "--n", 1)[0] == EXIT_PARSE


def test_reports_are_deterministic(capsys, tmp_path):
    dest = tmp_path / "alg.json"
    run(capsys, "algebra", "--input", SYSTEMS / "sqrt2_companion.json", "--output", dest, "--mode", "numeric")
    outs = [run(capsys, "verify", "--input", SYSTEMS / "sqrt2_companion.json", "--algebra", dest,
                "--seed", 7, "--samples", 12)[1] for _ in range(2)]
    assert outs[0] == outs[1] and "samples = 12, seed = 7" in outs[0]


@pytest.mark.skipif(shutil.which("linsym") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["linsym", "dim", "--input", str(SYSTEMS / "jordan_2_3.json")],
                          capture_output=True, text=True, env={"LINSYM_LOG_LEVEL": "bogus", "PATH": "/usr/bin:/usr/local/bin"})
    assert proc.returncode == 0 and "dim = 13" in proc.stdout


def test_scalar_encoding_round_trip():
    from fractions import Fraction
    from linsym.formats import ParseError, decode_scalar, encode_scalar
    from linsym.scalars import I, sqrt_exact
    for x in (Fraction(-3, 7), Fraction(0), sqrt_exact(Fraction(2)) + Fraction(1, 2) * I, 0.25 - 1.5j):
        assert decode_scalar(encode_scalar(x)) == x
    assert encode_scalar(Fraction(5, 10)) == "1/2"
    for bad in (True, "x/2", {"numeric": [1]}, {"exact": {"a": "1"}}, [1, 2]):
        with pytest.raises(ParseError):
            decode_scalar(bad)


def test_algebra_file_round_trip_is_lossless(tmp_path):
    from linsym.formats import algebra_to_dict, save_algebra
    from helpers import make_structure
    alg = build_algebra(make_structure([(2, 2), (3, 1)]))
    dest = tmp_path / "a.json"
    save_algebra(alg, dest)
    again = load_algebra(dest)
    assert algebra_to_dict(again) == algebra_to_dict(alg)
    assert all(a.phi == b.phi and a.H == b.H for a, b in zip(alg.generators, again.generators))
