# tests/test_cli.py
import csv
import io
import json
import math

import pytest

from core.errors import DomainError, SchemaViolation
from core.model import validate_params
from core.output import OutputWriter, make_json_safe, validate_document
from core.run_config import RunConfig, parse_beta_range, parse_complex, parse_periods
from main import main
from modules.cli import verify
from modules.spectral.eigen import default_degree


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def run_csv(capsys, *argv):
    code = main(list(argv) + ["--output", "csv"])
    return code, list(csv.reader(io.StringIO(capsys.readouterr().out)))


# ----------------------
# partition / trace
# ----------------------
def test_partition_at_beta0(capsys):
    code, doc = run_json(capsys, "partition", "--beta", "0", "--n", "1:4")
    assert code == 0
    assert [r["Z"] for r in doc["rows"]] == [2.0, 4.0, 8.0, 16.0]
    assert doc["config"]["lambda"] == [0.5]


def test_partition_single_channel(capsys):
    code, doc = run_json(capsys, "partition", "--m", "1", "--lambda", "0.5", "--J", "1", "--beta", "1", "--n", "1")
    assert code == 0
    row, = doc["rows"]
    assert row["Z"] == pytest.approx(2.0 * math.e, rel=1e-14)
    assert row["residual"] < 1e-12


def test_bad_lambda_exits_2(capsys):
    assert main(["partition", "--lambda", "1.5"]) == 2
    assert "DomainError" in capsys.readouterr().err


def test_period_cap_exits_3(capsys):
    assert main(["partition", "--n", "25"]) == 3


def test_trace_rows(capsys):
    code, doc = run_json(capsys, "trace", "--beta", "0.5", "--n", "1,2", "--degree", "40")
    assert code == 0
    first = doc["rows"][0]
    assert first["agreement"] < 1e-12
    assert first["trace_matrix"] == pytest.approx(first["closed"], rel=1e-8)


# ----------------------
# spectrum
# ----------------------
def test_spectrum_csv_at_beta0(capsys):
    code, rows = run_csv(capsys, "spectrum", "--beta", "0", "--degree", "6")
    assert code == 0
    assert rows[0] == ["index", "eigenvalue", "parity", "tail_gap"]
    assert [float(r[1]) for r in rows[1:4]] == [2.0, 1.0, 0.5]
    gaps = {r[3] for r in rows[1:]}
    assert len(gaps) == 1 and float(gaps.pop()) < 1e-12


def test_spectrum_empty_range(capsys):
    code, rows = run_csv(capsys, "spectrum", "--beta-range", "1:0:0.1", "--degree", "6")
    assert code == 0
    assert rows == [["beta", "index", "eigenvalue", "parity", "tail_gap"]]
    code, doc = run_json(capsys, "spectrum", "--beta-range", "1:0:0.1", "--degree", "6")
    assert code == 0
    assert doc["rows"] == []
    assert doc["result"] == {"N": 6, "beta": None, "tail_gap": None, "size": 0}


def test_spectrum_contains_sinh_branch(capsys):
    code, doc = run_json(capsys, "spectrum", "--beta", "1")
    assert code == 0
    values = [r["eigenvalue"] for r in doc["rows"]]
    assert min(abs(v - math.e) for v in values) < 1e-8
    assert all(isinstance(v, float) for v in values)
    assert doc["result"]["N"] == 60


def test_spectrum_plotdata(capsys):
    assert main(["spectrum", "--beta-range", "0:1:0.5", "--degree", "6", "--emit", "plotdata"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["x", "y", "series"]
    assert len(rows) == 1 + 3 * 7
    assert {r[0] for r in rows[1:]} == {"0", "0.5", "1"}


# ----------------------
# zeta / zeros
# ----------------------
def test_zeta_at_beta0(capsys):
    code, doc = run_json(capsys, "zeta", "--beta", "0", "--z", "0.25")
    assert code == 0
    assert doc["result"]["value"]["re"] == pytest.approx(2.0, rel=1e-12)
    assert doc["result"]["value"]["im"] == 0.0
    assert len(doc["result"]["factors"]) == 2


def test_zeta_at_origin(capsys):
    code, doc = run_json(capsys, "zeta", "--z", "0")
    assert code == 0
    assert doc["result"]["value"] == {"re": 1.0, "im": 0.0}


def test_zeta_series_cross_check(capsys):
    code, doc = run_json(capsys, "zeta", "--beta", "0.3", "--z", "0.1", "--cross-check", "series",
                         "--series-terms", "16")
    assert code == 0
    assert doc["result"]["series_difference"] < 1e-6


def test_zeta_pole_exits_4(capsys):
    assert main(["zeta", "--beta", "0", "--z", "0.5"]) == 4
    assert "PoleAt" in capsys.readouterr().err


def test_zeros_default_model(capsys):
    code, doc = run_json(capsys, "zeros", "--z", "1")
    assert code == 0
    hits = [r for r in doc["rows"] if abs(r["beta"] - math.log(2.0)) < 1e-8]
    assert hits and hits[0]["alpha"] == [1] and hits[0]["kind"] == "zero"


def test_zeros_default_z(capsys):
    code, doc = run_json(capsys, "zeros")
    assert code == 0
    assert doc["config"]["z"] == [1.0, 0.0]
    hits = [r for r in doc["rows"] if abs(r["beta"] - math.log(2.0)) < 1e-8]
    assert hits and hits[0]["alpha"] == [1] and hits[0]["kind"] == "zero"
    code, doc = run_json(capsys, "zeta", "--beta", "0")
    assert doc["config"]["z"] == [0.25, 0.0]


def test_zeros_empty_range(capsys):
    code, rows = run_csv(capsys, "zeros", "--z", "1", "--beta-range", "1:0:0.1")
    assert code == 0
    assert rows == [["beta", "alpha", "kind", "factor_value_re", "factor_value_im", "multiplicity"]]


def test_zeros_rejects_complex_z(capsys):
    assert main(["zeros", "--z", "1,0.5"]) == 2


# ----------------------
# asymptotics
# ----------------------
def test_asymptotics_rows(capsys):
    code, doc = run_json(capsys, "asymptotics", "--lambda", "0.4", "--beta", "5", "--degree", "40", "--count", "2")
    assert code == 0
    assert len(doc["rows"]) == 2
    assert doc["rows"][0]["alpha"] == [0]
    assert doc["rows"][0]["prediction"] == pytest.approx(math.exp(5.0 * 0.4 / 0.6), rel=1e-14)


def test_asymptotics_rejects_half_lambda(capsys):
    assert main(["asymptotics", "--beta", "5"]) == 2


# ----------------------
# verify
# ----------------------
def test_verify_default_passes(capsys):
    code, doc = run_json(capsys, "verify", "--deterministic")
    assert code == 0
    assert doc["passed"] is True
    names = {c["name"] for c in doc["checks"]}
    assert {"trace_partition", "beta0_zeta", "trivial_zero", "kernel_trace"} <= names
    assert all(c["passed"] for c in doc["checks"])


def test_verify_break_me_fails(capsys):
    code, doc = run_json(capsys, "verify", "--break-me")
    assert code == 1
    assert doc["passed"] is False
    failed = {c["name"] for c in doc["checks"] if not c["passed"]}
    assert "beta0_spectrum" in failed


def test_verify_two_channel_half_model(capsys):
    code, doc = run_json(capsys, "verify", "--m", "2", "--lambda", "0.5,0.5", "--J", "0.6,0.4", "--deterministic")
    assert code in (0, 1)
    validate_document(doc)
    checks = {c["name"]: c for c in doc["checks"]}
    assert {"kernel_trace", "model_reduction", "half_reduction", "eigenfamilies", "symmetry"} <= set(checks)
    assert checks["kernel_trace"]["value"] is not None and checks["kernel_trace"]["value"] < 1e-6
    assert checks["asymptotics"]["skipped"] is True
    for name in ("model_reduction", "half_reduction", "half_eigenvalue", "eigenfamilies", "trivial_zero", "symmetry"):
        assert checks[name]["passed"] and not checks[name]["skipped"], name


def test_verify_strong_coupling_reports(capsys):
    code, doc = run_json(capsys, "verify", "--lambda", "0.3", "--J", "2", "--deterministic")
    assert code in (0, 1)
    validate_document(doc)
    checks = {c["name"]: c for c in doc["checks"]}
    assert checks["kernel_trace"]["passed"]
    assert not any(c["detail"].startswith(("OverflowError", "FloatingPointError")) for c in doc["checks"])


def test_verify_survives_a_raising_check(capsys, monkeypatch):
    def check_exploding(ctx):
        raise OverflowError("math range error")

    monkeypatch.setattr(verify, "CHECKS", [verify.check_closed_trace, check_exploding])
    code, doc = run_json(capsys, "verify")
    assert code == 1
    validate_document(doc)
    assert doc["passed"] is False
    closed, exploding = doc["checks"]
    assert closed["passed"]
    assert exploding == {"name": "exploding", "passed": False, "value": None, "tolerance": None,
                         "detail": "OverflowError: math range error", "skipped": False}


def _context(params):
    half = verify.half_model(params)
    return verify.VerifyContext(params, params, half, half, default_degree(params.m))


def test_asymptotics_check_runs_below_one_half():
    result = verify.check_asymptotics(_context(validate_params(1, [0.4], [1.0])))
    assert not result.skipped
    assert result.passed
    assert result.value < result.tolerance


@pytest.mark.slow
def test_trivial_zero_three_channels():
    result = verify.check_trivial_zero(_context(validate_params(3, [0.1, 0.15, 0.2], [0.5, 0.3, 0.2])))
    assert result.passed, result.detail
    assert result.value < 1e-8


# ----------------------
# config and output plumbing
# ----------------------
def test_deterministic_output_is_byte_identical(capsys):
    argv = ["partition", "--m", "2", "--lambda", "0.3,0.2", "--J", "1,0.5", "--beta", "0.7", "--n", "1:8",
            "--deterministic"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_config_file_and_flag_override(tmp_path, capsys):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"m": 1, "lambda": [0.5], "J": [1.0], "beta": 0.0, "n": [1, 2]}))
    code, doc = run_json(capsys, "partition", "--config", str(path))
    assert [r["Z"] for r in doc["rows"]] == [2.0, 4.0]
    code, doc = run_json(capsys, "partition", "--config", str(path), "--beta", "1")
    assert doc["rows"][0]["Z"] == pytest.approx(2.0 * math.e)


def test_config_rejects_unknown_keys(tmp_path, capsys):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"temperature": 3}))
    assert main(["partition", "--config", str(path)]) == 2
    assert main(["partition", "--config", str(tmp_path / "missing.json")]) == 2


def test_run_config_json_round_trip():
    cfg = RunConfig(m=2, lam=[0.3, 0.2], J=[1.0, 0.5], beta=-0.5, z=[0.1, -0.2], beta_range=[0.0, 1.0, 0.25],
                    alpha=[1, 0], deterministic=True)
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg
    assert again.betas() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert again.z_value == complex(0.1, -0.2)
    assert again.workers == 1


def test_flag_parsers():
    assert parse_periods("4") == [4]
    assert parse_periods("1,3") == [1, 3]
    assert parse_periods("1:4") == [1, 2, 3, 4]
    assert parse_beta_range("0:2:0.5") == [0.0, 2.0, 0.5]
    assert parse_complex("0.3") == [0.3, 0.0]
    assert parse_complex("0.3,-1") == [0.3, -1.0]
    for bad in (lambda: parse_periods("a"), lambda: parse_beta_range("0:1"), lambda: parse_complex("1,2,3")):
        with pytest.raises(DomainError):
            bad()


def test_json_safe_values():
    safe = make_json_safe({"z": 1 + 2j, "x": float("inf"), "t": (1, 2)})
    assert safe == {"z": {"re": 1.0, "im": 2.0}, "x": "inf", "t": [1, 2]}


def test_schema_rejects_bad_documents():
    with pytest.raises(SchemaViolation):
        validate_document({"command": "partition"})
    with pytest.raises(SchemaViolation):
        OutputWriter("json", io.StringIO()).emit({"command": "launch", "config": RunConfig().to_dict(), "rows": []})
    with pytest.raises(DomainError):
        OutputWriter("xml")


def test_file_logging(tmp_path, monkeypatch):
    import config
    from core.utils import get_logger

    path = tmp_path / "logs" / "run.log"
    monkeypatch.setitem(config.LOGGING, "log_to_file", True)
    monkeypatch.setitem(config.LOGGING, "filename", str(path))
    monkeypatch.setitem(config.LOGGING, "level", "INFO")
    log = get_logger("tests.file_logging")
    log.info("enumerated %d blocks", 3)
    for handler in log.handlers:
        handler.flush()
    assert "enumerated 3 blocks" in path.read_text()
