import csv
import json

import numpy as np
import pytest

from quadembed import fixtures as F
from quadembed.cli import main, sweep
from quadembed.errors import ParseError
from quadembed.io import (format_complex, load_problem, parse_problem, read_matrix, read_poly,
                          write_matrix)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.mark.parametrize("cplx", [False, True])
def test_native_round_trip_is_exact(tmp_path, rng, cplx):
    A = rng.standard_normal((5, 4)) + (1j * rng.standard_normal((5, 4)) if cplx else 0)
    p = write_matrix(tmp_path / "A", A, "native")
    assert p.suffix == ".npy"
    assert np.array_equal(read_matrix(p), A)


@pytest.mark.parametrize("cplx", [False, True])
def test_mm_round_trip(tmp_path, rng, cplx):
    A = rng.standard_normal((5, 4)) + (1j * rng.standard_normal((5, 4)) if cplx else 0)
    B = read_matrix(write_matrix(tmp_path / "A", A, "mm"))
    assert np.abs(B - A).max() <= 1e-15 * np.abs(A).max()


def test_truncated_mm_file(tmp_path):
    p = tmp_path / "bad.mtx"
    p.write_text("%%MatrixMarket matrix array real general\n3 3\n1.0\n2.0\n")
    with pytest.raises(ParseError):
        read_matrix(p)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_matrix(tmp_path / "nope.mtx")


def _doc(**over):
    doc = {"class": "symmetric", "matrices": {"M": {"identity": 2}, "D": [[0, 0], [0, 0]],
                                              "K": [[1, 0], [0, 4]]},
           "groups": [{"lam_c": [0, 1], "lam_a": [0, 1.5]}]}
    doc.update(over)
    return doc


def test_parse_problem_forms(tmp_path):
    write_matrix(tmp_path / "K", np.diag([1.0, 4.0]), "mm")
    doc = _doc(matrices={"M": {"identity": 2}, "D": {"re": [[0, 0], [0, 0]], "im": [[0, 1], [-1, 0]]},
                         "K": {"file": "K.mtx"}}, field="complex", **{"class": "hermitian"})
    prob = parse_problem(doc, tmp_path)
    assert np.allclose(prob.Q.K, np.diag([1, 4]))
    assert prob.Q.D[0, 1] == 1j
    assert prob.spec.groups[0].lam_a == 1.5j


def test_load_problem_round_trip(tmp_path):
    (tmp_path / "p.json").write_text(json.dumps(_doc(name="toy")))
    assert load_problem(tmp_path / "p.json").name == "toy"


@pytest.mark.parametrize("bad", [
    {"class": "symmetric"},
    _doc(groups=[{"lam_c": 1}]),
    _doc(groups=[{"lam_c": 1, "lam_a": 2, "zeta": 3}]),
    _doc(**{"class": "banana"}),
])
def test_schema_errors(bad):
    with pytest.raises(ParseError):
        parse_problem(bad)


def test_load_problem_bad_json(tmp_path):
    (tmp_path / "p.json").write_text("{not json")
    with pytest.raises(ParseError):
        load_problem(tmp_path / "p.json")


def test_format_complex():
    assert format_complex(2 - 3j) == "2-3i"
    assert format_complex(1.5) == "1.5"
    assert format_complex(complex(-0.0, 0.0)) == "0"
    assert format_complex(0.8878j) == "0+0.8878i"


def _write_poly(path, M, D, K):
    return [str(write_matrix(path / n, A, "mm")) for n, A in zip("MDK", (M, D, K))]


def test_cli_verify_exit_codes(tmp_path, capsys):
    Q = parse_problem(F.gyroscopic_3()).Q
    files = _write_poly(tmp_path, Q.M, Q.D, Q.K)
    assert main(["verify", *files, "--class", "t-even"]) == 0
    assert main(["verify", *files, "--class", "symmetric"]) == 1
    assert main(["verify", *files, "--class", "banana"]) == 2
    assert main(["verify", str(tmp_path / "x.mtx"), *files[1:], "--class", "t-even"]) == 2
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert json.loads(err)["exit_code"] == 2


def test_cli_bad_arguments():
    assert main(["embed"]) == 2
    assert main(["frobnicate"]) == 2


def test_cli_eig_gyroscopic(tmp_path, capsys):
    Q = parse_problem(F.gyroscopic_3()).Q
    assert main(["eig", *_write_poly(tmp_path, Q.M, Q.D, Q.K), "--out", str(tmp_path / "e")]) == 0
    out = capsys.readouterr().out
    assert "0.887833" in out and "3.18946" in out
    lam = read_matrix(tmp_path / "e" / "eigenvalues.mtx").ravel()
    for target in (0.8878j, 3.1895j):
        assert np.min(np.abs(lam - target)) < 1e-4
        assert np.min(np.abs(lam + target)) < 1e-4


def test_cli_eig_mass_spring(tmp_path, capsys):
    Q = parse_problem(F.mass_spring_10()).Q
    assert main(["eig", *_write_poly(tmp_path, Q.M, Q.D, Q.K)]) == 0
    out = capsys.readouterr().out
    assert "-6.7757" in out and "71.146" in out


def test_cli_eig_identity(tmp_path, capsys):
    I = np.eye(2)
    assert main(["eig", *_write_poly(tmp_path, I, 0 * I, I), "--out", str(tmp_path)]) == 0
    lam = np.sort_complex(read_matrix(tmp_path / "eigenvalues.mtx").ravel())
    assert np.allclose(lam, [-1j, -1j, 1j, 1j])


def test_cli_embed_psd(tmp_path):
    assert main(["embed", "mass-spring-10", "--method", "psd-algo", "--check-spillover",
                 "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["RR_f"] <= 1e-10 and rep["ok"]
    assert rep["psd"]["dM_ok"] and rep["psd"]["dK_ok"]
    assert (tmp_path / "report.txt").exists()


def test_cli_embed_maodai(tmp_path):
    assert main(["--format", "native", "embed", "gyroscopic-3", "--method", "maodai",
                 "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["norm_dM"] == pytest.approx(F.GYRO3_NORMS[0], abs=5e-4)
    dM = read_matrix(tmp_path / "dM.npy")
    assert np.linalg.norm(dM) == pytest.approx(rep["norm_dM"])


def test_cli_embed_unchanged_is_zero(tmp_path):
    doc = F.gyroscopic_3()
    for g in doc["groups"]:
        g["lam_a"] = g["lam_c"]
        g.update(a=1.0, b=0.0, c=1.0)
    (tmp_path / "p.json").write_text(json.dumps(doc))
    assert main(["embed", str(tmp_path / "p.json"), "--check-spillover",
                 "--out", str(tmp_path / "o")]) == 0
    for n in ("dM", "dD", "dK"):
        assert not np.any(read_matrix(tmp_path / "o" / f"{n}.mtx"))
    rep = json.loads((tmp_path / "o" / "report.json").read_text())
    assert rep["RR_a"] <= 1e-12


def test_sweep_single_point_matches_embed(tmp_path):
    prob = parse_problem(F.gyroscopic_3())
    a1 = prob.spec.groups[0].a
    rows = list(sweep(prob, [("a1", np.array([a1]))]))
    assert len(rows) == 1 and rows[0]["status"] == "ok"
    main(["embed", "gyroscopic-3", "--check-spillover", "--out", str(tmp_path)])
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rows[0]["RR_f"] == pytest.approx(rep["RR_f"], rel=1e-6, abs=1e-15)


def test_cli_sweep_csv(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["sweep", "gyroscopic-3", "--param", "c2=0.2:2:10", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 10
    assert float(rows[0]["c2"]) == pytest.approx(0.2)


def test_cli_sweep_unknown_parameter(capsys):
    assert main(["sweep", "gyroscopic-3", "--param", "q7=0:1:2"]) == 2
    assert main(["sweep", "gyroscopic-3", "--param", "a1=oops"]) == 2
    assert main(["sweep", "gyroscopic-3"]) == 2


def test_cli_examples_write(tmp_path, capsys):
    assert main(["examples", "--write", str(tmp_path)]) == 0
    assert "mass-spring-10" in capsys.readouterr().out
    prob = load_problem(tmp_path / "gyroscopic-3.json")
    assert prob.Q.n == 3 and len(prob.spec.groups) == 2


def test_read_poly_not_conformal(tmp_path):
    files = _write_poly(tmp_path, np.eye(2), np.eye(2), np.eye(2))
    write_matrix(tmp_path / "K", np.eye(3), "mm")
    with pytest.raises(Exception) as info:
        read_poly(*files)
    assert "conformal" in str(info.value)
