import csv
import io
import json
import math

import pytest

from nlho.cli import ConfigError, main, parse_config_text


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_default(capsys):
    code, out, err = run(capsys, "spectrum")
    assert code == 0
    assert "\r" not in out
    r = rows(out)
    assert len(r) == 10
    assert out.splitlines()[0] == "n,epsilon_n,E_n,E_n_fd,rel_gap,f_n"
    assert all(float(x["rel_gap"]) < 1e-6 for x in r)
    assert json.loads(err)["passed"] is True


def test_spectrum_weak_deformation(capsys):
    code, out, _ = run(capsys, "--lambda", "1e-9", "spectrum")
    assert code == 0
    for x in rows(out):
        assert float(x["E_n"]) == pytest.approx(int(x["n"]) + 0.5, abs=1e-7)


def test_spectrum_near_v_zero(capsys):
    # v = 1e-12: one shallow level, eps_0 ~ v, too wide for any finite box
    code, out, err = run(capsys, "spectrum", "--lambda", "1e6")
    r = rows(out)
    assert code == 0 and len(r) == 1
    assert float(r[0]["epsilon_n"]) == pytest.approx(0.0, abs=1e-11)
    assert json.loads(err)["unresolved_levels"] == [0]


def test_spectrum_tolerance_breach(capsys):
    code, _, _ = run(capsys, "spectrum", "--tol", "spectrum_rel=1e-12")
    assert code == 2


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "spectrum", "--levels", "3")
    doc = json.loads(out)
    assert code == 0 and len(doc["rows"]) == 3
    assert doc["rows"][0]["E_n"] == pytest.approx(0.4756246098625196, rel=1e-15)


def test_wavefunction_nodes_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["wavefunction", "--n", "3", "--out", str(a)]) == 0
    err = capsys.readouterr().err
    assert json.loads(err)["nodes"] == 3
    assert main(["wavefunction", "--n", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    r = rows(a.read_text())
    assert list(r[0]) == ["X", "x", "phi_n", "oracle_phi_n"]


def test_wavefunction_ground_single_signed(capsys):
    code, out, _ = run(capsys, "wavefunction", "--n", "0", "--samples", "101")
    vals = [float(x["phi_n"]) for x in rows(out)]
    assert code == 0 and all(v >= 0 for v in vals)


def test_wavefunction_unbound(capsys):
    code, _, err = run(capsys, "wavefunction", "--n", "10")
    assert code == 1 and "not bound" in err


def test_classical(capsys):
    code, out, err = run(capsys, "classical", "--amplitude", "1", "--stride", "10000")
    s = json.loads(err)
    assert code == 0
    assert s["predicted_period"] == pytest.approx(2 * math.pi * math.sqrt(1.1), rel=1e-15)
    assert s["energy_drift"] < 1e-9
    assert len(rows(out)) == 11


def test_classical_sho(capsys):
    code, _, err = run(capsys, "--lambda", "0", "classical", "--periods", "10", "--stride", "1000")
    assert code == 0
    assert json.loads(err)["measured_period"] == pytest.approx(2 * math.pi, rel=1e-10)


def test_classical_bad_amplitude(capsys):
    assert run(capsys, "classical", "--amplitude", "0")[0] == 1


def test_coherent_type2_vacuum(capsys):
    code, out, _ = run(capsys, "coherent", "--type", "2", "--label", "0")
    r = rows(out)
    assert code == 0 and float(r[0]["prob"]) == 1.0 and all(float(x["prob"]) == 0 for x in r[1:])


def test_coherent_type1(capsys):
    code, _, err = run(capsys, "--grid-n", "1024", "coherent", "--type", "1", "--label", "0.7+0.2i")
    s = json.loads(err)
    assert code == 0 and s["measured"]["A_eigen_residual"] < 1e-6


def test_coherent_type3_zero(capsys):
    code, _, err = run(capsys, "--grid-n", "1024", "coherent", "--type", "3", "--label", "0")
    assert code == 0 and json.loads(err)["measured"]["steps"] == 0


def test_coherent_domain_violation(capsys):
    assert run(capsys, "coherent", "--type", "1", "--label", "40")[0] == 1
    assert run(capsys, "--lambda", "0", "coherent", "--type", "3", "--label", "0.1")[0] == 1
    assert run(capsys, "coherent", "--type", "1", "--label", "abc")[0] == 1


def test_complexifier_check(capsys):
    code, out, _ = run(capsys, "complexifier-check")
    doc = json.loads(out)
    assert code == 0 and [c["number"] for c in doc["criteria"]] == [7, 8]
    assert doc["measured"]["heisenberg_order"] == pytest.approx(2.0, abs=0.05)


def test_validate_negative_control(capsys):
    code, out, _ = run(capsys, "validate", "--grid-n", "200")
    doc = json.loads(out)
    assert code == 2
    failed = {c["number"] for c in doc["criteria"] if not c["passed"]}
    assert 1 in failed


def test_usage_error_exit_code(capsys):
    assert run(capsys)[0] == 1
    assert run(capsys, "spectrum", "--bogus")[0] == 1
    assert run(capsys, "--format", "xml", "spectrum")[0] == 1
    assert run(capsys, "--help")[0] == 0


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# natural units\nlambda = 0.2\ntol.spectrum_rel = 1e-5\n")
    code, out, err = run(capsys, "--config", str(cfg), "spectrum", "--levels", "2")
    assert code == 0 and json.loads(err)["tolerance"] == 1e-5
    code, out, _ = run(capsys, "--config", str(cfg), "--lambda", "0.1", "--format", "json", "spectrum", "--levels", "1")
    assert json.loads(out)["rows"][0]["E_n"] == pytest.approx(0.4756246098625196)


def test_config_json(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text('{"lambda": 0.1, "grid_n": 2000, "tolerances": {"spectrum_rel": 1e-4}}')
    assert run(capsys, "--config", str(cfg), "spectrum", "--levels", "2")[0] == 0


@pytest.mark.parametrize("text,line,col", [
    ("lambda=0.1\n  bogus = 3\n", 2, 3),
    ("lambda=abc\n", 1, 8),
    ("lambda 0.1\n", 1, 1),
    ('{"lambda": 0.1,\n "mass": }\n', 2, 10),
])
def test_malformed_config_locations(text, line, col):
    with pytest.raises(ConfigError) as e:
        parse_config_text(text)
    assert (e.value.line, e.value.column) == (line, col)


def test_malformed_config_exit(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mass=1\nfoo=2\n")
    code, _, err = run(capsys, "--config", str(cfg), "spectrum")
    assert code == 1 and "line 2, column 1" in err


def test_unknown_tolerance(capsys):
    assert run(capsys, "spectrum", "--tol", "nope=1")[0] == 1
    assert run(capsys, "spectrum", "--tol", "spectrum_rel")[0] == 1


def test_bad_physical_params(capsys):
    assert run(capsys, "--mass", "-1", "spectrum")[0] == 1
    assert run(capsys, "--grid-n", "4", "spectrum")[0] == 1
