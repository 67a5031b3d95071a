"""
Tests for the command-line front end and the run configuration.
"""
import json

import pytest

from src.config import Config, RunConfig
from src.errors import ConfigError
from src.main import main

CUBIC_JET = '{"sign": "+", "E0": "0", "a": ["1", "0"]}'


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def entries(normal_form):
    return {(e["j"], e["k"]): e["coeff"] for e in normal_form["b"]}


def test_forward_first_coefficients(capsys):
    code, result = run_json(capsys, ["forward", "--json", CUBIC_JET, "--max-degree", "4"])
    assert code == 0
    assert entries(result) == {(0, 2): "-15/4", (1, 0): "1/2"}
    assert result["max_degree"] == 4 and result["sign"] == "+"


def test_forward_output_is_deterministic(capsys):
    argv = ["forward", "--json", '{"a": ["1/3", "-2", "5/7", "1"]}', "--max-degree", "8", "--emit-generator"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["generator"]


def test_forward_raw_symbol(capsys):
    symbol = {"sign": "+", "terms": [
        {"l": 0, "m": 2, "n": 0, "coeff": "1/2"}, {"l": 2, "m": 0, "n": 0, "coeff": "1/2"},
        {"l": 2, "m": 1, "n": 0, "coeff": "-3"}, {"l": 4, "m": 0, "n": 0, "coeff": "9/2"},
    ]}
    code, result = run_json(capsys, ["forward", "--hamiltonian", "--json", json.dumps(symbol), "--max-degree", "8"])
    assert code == 0
    assert result["b"] == []


def test_forward_reads_input_file_and_writes_output(tmp_path, capsys):
    source = tmp_path / "jet.json"
    source.write_text(CUBIC_JET, encoding="utf-8")
    target = tmp_path / "out" / "nf.json"
    assert main(["forward", "--input", str(source), "--output", str(target), "--max-degree", "4"]) == 0
    assert capsys.readouterr().out == ""
    assert entries(json.loads(target.read_text(encoding="utf-8")))[(0, 2)] == "-15/4"


def test_invert_recovers_jet(capsys):
    normal_form = {"sign": "+", "E0": "0", "max_degree": 4,
                   "b": [{"j": 0, "k": 2, "coeff": "-15/4"}, {"j": 1, "k": 0, "coeff": "1/2"}]}
    code, result = run_json(capsys, ["invert", "--json", json.dumps(normal_form), "--max-degree", "4"])
    assert code == 0
    assert result["a"] == ["1", "0"]
    assert result["provenance"]["exact"]
    code, result = run_json(capsys, ["invert", "--json", json.dumps(normal_form), "--sign", "-"])
    assert result["a"] == ["-1", "0"]


def test_roundtrip(capsys):
    jet = '{"a": ["1/3", "-2", "5/7", "1", "-1/2", "3"]}'
    code, result = run_json(capsys, ["roundtrip", "--json", jet, "--max-degree", "8"])
    assert code == 0
    assert result["match"]
    assert result["recovered"]["a"] == ["1/3", "-2", "5/7", "1", "-1/2", "3"]


def test_predict(capsys):
    code, result = run_json(capsys, ["predict", "--json", CUBIC_JET, "--max-degree", "4",
                                     "--hbar-list", "0.1", "0.05", "--levels", "3"])
    assert code == 0
    assert [p["hbar"] for p in result["predictions"]] == [0.1, 0.05]
    assert all(len(p["eigenvalues"]) == 3 for p in result["predictions"])


def test_selftest_passes(capsys):
    code, result = run_json(capsys, ["selftest", "--samples", "2", "--max-degree", "6", "--seed", "3"])
    assert code == 0
    assert result["passed"]
    assert {c["check"] for c in result["checks"]} >= {"first_terms", "oracle", "gauge", "zoll", "sigma",
                                                      "delta_pathway", "nondegenerate", "roundtrip"}


def test_exit_code_for_malformed_input(capsys):
    assert main(["forward", "--json", '{"a": [1, ']) == 2
    assert main(["forward", "--json", '{"a": ["0.5"]}']) == 2
    assert main(["forward", "--json", CUBIC_JET, "--max-degree", "5"]) == 2
    assert main(["predict", "--json", CUBIC_JET, "--hbar-list", "0.01", "0.02"]) == 2


def test_exit_code_for_degenerate_input(capsys):
    harmonic = '{"sign": "+", "E0": "0", "max_degree": 4, "b": []}'
    assert main(["invert", "--json", harmonic, "--max-degree", "4"]) == 3
    negative = '{"max_degree": 4, "b": [{"j": 1, "k": 0, "coeff": "-1"}]}'
    assert main(["invert", "--json", negative]) == 3
    assert main(["predict", "--json", '{"sign": "-", "a": ["1"]}', "--hbar-list", "0.1"]) == 3


def test_exit_code_for_failed_verification(capsys):
    argv = ["dos-min", "--potential", "x**2/2", "--half-width", "0.8", "--hbar-list", "0.01"]
    assert main(argv) == 4


def test_verify_reports_convergence_slopes(capsys):
    argv = ["verify", "--json", '{"a": ["1/10"]}', "--degree", "4", "--levels", "2"]
    code, result = run_json(capsys, argv)
    assert code == 0
    assert result["passed"] and result["degree"] == 4
    assert len(result["records"]) == 8
    assert [fit["level"] for fit in result["fits"]] == [0, 1]


def test_verify_exit_code_for_missed_slope(capsys, monkeypatch):
    monkeypatch.setenv("QBNF_SLOPE_SLACK", "-2")
    argv = ["verify", "--json", '{"a": ["1/10"]}', "--degree", "4", "--levels", "2"]
    code, result = run_json(capsys, argv)
    assert code == 4
    assert result["passed"] is False


@pytest.mark.parametrize("degree", ["5", "2", "18"])
def test_verify_rejects_bad_prediction_degree(capsys, degree):
    argv = ["verify", "--json", '{"a": ["1/10"]}', "--degree", degree]
    assert main(argv) == 2
    assert capsys.readouterr().out == ""


def test_dos_max_on_double_well(capsys):
    code, result = run_json(capsys, ["dos-max", "--half-width", "2.5", "--hbar-list", "0.005"])
    assert code == 0
    assert result["curvature"] == pytest.approx(-1.0)
    (fit,) = result["fits"]
    assert fit["relative_error"] < 0.1
    assert fit["c_analytic"] == pytest.approx(2.0)


def test_dos_min_uses_curvature_of_the_minimum(capsys):
    code, result = run_json(capsys, ["dos-min", "--potential", "x**2", "--hbar-list", "0.005"])
    assert code == 0
    assert result["curvature"] == pytest.approx(2.0)
    assert result["fits"][0]["ratio"] == pytest.approx(1.0, rel=0.05)
    assert main(["dos-min", "--potential", "-x**2/2 + x**4/4"]) == 2


def test_run_config_validation():
    assert RunConfig("forward", max_degree=6).max_degree == 6
    with pytest.raises(ConfigError):
        RunConfig("forward", max_degree=18)
    with pytest.raises(ConfigError):
        RunConfig("predict", hbar_list=[0.1, -0.1])
    with pytest.raises(ConfigError):
        RunConfig("predict", hbar_list=[0.05, 0.1])
    assert RunConfig("verify", prediction_degree=6).prediction_degree == 6
    with pytest.raises(ConfigError):
        RunConfig("verify", prediction_degree=7)
    assert not hasattr(Config(), "ensure_dirs")
