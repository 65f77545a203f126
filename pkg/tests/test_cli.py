import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ccatrap.cli import (
    EXIT_DOMAIN,
    EXIT_IO,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    RunConfig,
    config_from_args,
    run,
)
from ccatrap.export import read_csv
from ccatrap.spectrum import bound_energies
from ccatrap.model import ModelParams

finite = st.floats(-1e6, 1e6, allow_nan=False)


@given(
    st.sampled_from(["emit", "field", "spectrum", "figure"]),
    st.floats(0.01, 100.0),
    finite,
    st.integers(1, 10**6),
    st.lists(st.floats(0.001, 1e3), max_size=5),
    st.floats(1e-14, 1e-2),
)
def test_config_text_round_trip(sub, g, tmax, tsteps, etas, tol):
    cfg = RunConfig(subcommand=sub, g=g, tmax=tmax, tsteps=tsteps, etas=tuple(etas), tol=tol)
    assert RunConfig.from_text(cfg.to_text()) == cfg
    assert RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_flags_override_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\neta = 2\ntmax = 7\nwindow = 3\n")
    cfg = config_from_args(["emit", "--config", str(path), "--tmax", "9"])
    assert (cfg.g, cfg.tmax, cfg.window) == (2.0, 9.0, 3)


def test_figure_presets():
    assert config_from_args(["figure", "2"]).etas == (0.1, 0.4, 0.8, 1.0, 2.0, 10.0)
    assert config_from_args(["figure", "3"]).etas == (0.1, 0.8, 2.0)
    assert config_from_args(["figure", "5", "--etas", "1.5"]).etas == (1.5,)


def _manifest(out):
    return json.loads((out / "manifest.json").read_text())


def test_emit_rabi(tmp_path):
    assert run(["emit", "--eta", "10", "--tmax", "3", "--tsteps", "61", "--out", str(tmp_path)]) == 0
    _, data = read_csv(tmp_path / "emit.csv")
    wp, _ = bound_energies(ModelParams.from_eta(10.0))
    dev = np.abs(data["p_e"] - np.cos(wp * data["Jt"]) ** 2)
    assert dev[data["Jt"] >= 1].max() < 0.05
    man = _manifest(tmp_path)
    assert RunConfig.from_dict(man["config"]) == config_from_args(
        ["emit", "--eta", "10", "--tmax", "3", "--tsteps", "61", "--out", str(tmp_path)])
    q = man["results"]["quadrature"]
    assert q["max_error"] <= q["requested_tol"]


def test_outputs_deterministic(tmp_path):
    args = ["field", "--eta", "0.8", "--tmax", "5", "--tsteps", "6", "--window", "8"]
    assert run(args + ["--out", str(tmp_path / "a")]) == 0
    assert run(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("field.csv", "emit.csv", "field.pgm"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_thresholds_report(tmp_path, capsys):
    assert run(["thresholds", "--eps-c", "2.7e-3", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "thresholds.json").read_text())
    assert rep["floc"] == pytest.approx(0.38, abs=0.01)
    assert rep["atr"] == pytest.approx(0.90, abs=0.01)
    assert "floc" in capsys.readouterr().out


def test_figure4_columns_and_saturation(tmp_path):
    assert run(["figure", "4", "--out", str(tmp_path)]) == 0
    _, data = read_csv(tmp_path / "fig4.csv")
    assert list(data) == ["eta", "eps_floc", "eps_atr", "omega_plus_minus_2J"]
    assert data["eta"].size == 200
    assert data["eps_floc"][-1] == pytest.approx(0.5, abs=1e-3)
    assert data["eps_atr"][-1] == pytest.approx(0.5, abs=0.02)


def test_spectrum_table(tmp_path):
    assert run(["spectrum", "--etas", "0.5,1", "--out", str(tmp_path)]) == 0
    _, data = read_csv(tmp_path / "spectrum.csv")
    assert data["omega_plus"][1] == pytest.approx(np.sqrt(2 + np.sqrt(5)))


def test_validate_pass_and_fail(tmp_path, monkeypatch):
    base = ["validate", "--eta", "0.8", "--tmax", "10", "--tsteps", "5", "--window", "10",
            "--oracle-N", "128"]
    assert run(base + ["--out", str(tmp_path / "ok")]) == EXIT_OK
    rep = json.loads((tmp_path / "ok" / "validate.json").read_text())
    assert rep["passed"] and rep["max_psi_dev"] < 1e-8

    import ccatrap.cli as cli
    from ccatrap.oracle import ValidationReport

    monkeypatch.setattr(cli, "oracle_validate", lambda *a, **k: ValidationReport(
        0.8, 128, 10.0, 10, 2e-3, 0.0, 1e-3))
    assert run(base + ["--out", str(tmp_path / "bad")]) == EXIT_VALIDATION
    assert _manifest(tmp_path / "bad")["exit_code"] == EXIT_VALIDATION


def test_validate_wrap_is_precondition_error(tmp_path):
    code = run(["validate", "--eta", "1", "--tmax", "100", "--oracle-N", "64",
                "--window", "5", "--out", str(tmp_path)])
    assert code == EXIT_DOMAIN
    man = _manifest(tmp_path)
    assert man["exit_code"] == EXIT_DOMAIN and man["status"] == "failed"


def test_quadrature_failure_recorded(tmp_path):
    code = run(["emit", "--eta", "0.8", "--tmax", "5", "--tsteps", "3", "--tol", "1e-300",
                "--out", str(tmp_path)])
    assert code == EXIT_NUMERICAL
    man = _manifest(tmp_path)
    assert man["exit_code"] == EXIT_NUMERICAL and man["error"]


def test_usage_errors(capsys):
    assert run(["emit", "--bogus"]) == EXIT_USAGE
    assert run(["nope"]) == EXIT_USAGE
    assert run(["emit", "--g", "1", "--eta", "1"]) == EXIT_USAGE


def test_domain_and_io_errors(tmp_path):
    assert run(["emit", "--eta", "-1", "--out", str(tmp_path)]) == EXIT_DOMAIN
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(["emit", "--out", str(blocker / "sub")]) == EXIT_IO
    assert run(["emit", "--config", str(tmp_path / "missing.cfg")]) == EXIT_IO
