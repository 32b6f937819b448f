import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

from ruelle_zeta import __version__
from ruelle_zeta.cli import main
from ruelle_zeta.errors import NumericalError
from ruelle_zeta.provenance import verify_output
from ruelle_zeta.workflow import PipelineRunner

QUIET = ["--nmax", "3", "--kmax", "1"]


def _invoke(*args):
    return CliRunner().invoke(main, list(args), catch_exceptions=False)


def test_version():
    result = _invoke("version")
    assert result.exit_code == 0
    assert result.output.strip() == __version__


@pytest.mark.integration
def test_orbits_command(tmp_path):
    result = _invoke("orbits", *QUIET, "--out", str(tmp_path / "o"))
    assert result.exit_code == 0, result.output
    table = tmp_path / "o" / "orbits.csv"
    assert table.read_text().splitlines()[0] == "word,domain,m,T,Lambda,sign,residual"
    assert verify_output(table)


@pytest.mark.integration
def test_zeta_command(tmp_path):
    result = _invoke("zeta", *QUIET, "--lambda", "2,0", "--lambda", "3,1", "--out", str(tmp_path))
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "zeta.csv").read_text().splitlines()
    assert lines[0] == "re,im,Z_re,Z_im,tail_bound"
    assert len(lines) == 3


@pytest.mark.parametrize(
    "args",
    [
        ["--d-over-r", "1.5"],
        ["--rect", "1,0,0,1"],
        ["--rect", "0,1"],
        ["--grid", "10"],
        ["--nmax", "0"],
    ],
)
def test_configuration_errors_exit_2(tmp_path, args):
    result = _invoke("orbits", *args, "--out", str(tmp_path))
    assert result.exit_code == 2


def test_numerical_failure_exits_3(tmp_path, monkeypatch):
    def fail(self):
        raise NumericalError("no convergence")

    monkeypatch.setattr(PipelineRunner, "run_orbits", fail)
    result = _invoke("orbits", *QUIET, "--out", str(tmp_path))
    assert result.exit_code == 3


@pytest.mark.integration
def test_worker_count_does_not_change_output(tmp_path):
    for workers in ("1", "2"):
        result = _invoke("orbits", "--nmax", "5", "--workers", workers, "--out", str(tmp_path / workers))
        assert result.exit_code == 0, result.output
    serial = (tmp_path / "1" / "orbits.csv").read_bytes()
    parallel = (tmp_path / "2" / "orbits.csv").read_bytes()
    assert serial == parallel


@pytest.mark.integration
@pytest.mark.slow
def test_worker_count_does_not_change_scan_or_distributions(tmp_path):
    settings = ["--nmax", "5", "--kmax", "1", "--rect", "-1,0.5,0,3", "--grid", "40x20", "--sigma", "0.1"]
    for workers in ("1", "8"):
        out = str(tmp_path / workers)
        result = _invoke("resonances", *settings, "--workers", workers, "--out", out)
        assert result.exit_code == 0, result.output
        result = _invoke("distribution", *settings, "--resonance", "leading", "--workers", workers, "--out", out)
        assert result.exit_code == 0, result.output
    # sidecars record the worker count, so only the data files are compared
    names = ["resonances.csv"] + sorted(
        str(p.relative_to(tmp_path / "1"))
        for pattern in ("distribution/*.csv", "distribution/*.pgm")
        for p in (tmp_path / "1").glob(pattern)
    )
    assert "distribution/localization.csv" in names
    assert any(name.endswith(".pgm") for name in names)
    for name in names:
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "8" / name).read_bytes(), name


@pytest.mark.integration
@pytest.mark.slow
def test_cli_smoke(tmp_path):
    env = dict(**{k: v for k, v in subprocess.os.environ.items()}, PYTHONPATH=str(Path(__file__).resolve().parents[2] / "src"))
    cmd = [sys.executable, "-m", "ruelle_zeta.cli", "smoke"]
    result = subprocess.run(cmd, cwd=tmp_path, env=env, capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    out = tmp_path / "runs" / "smoke"
    for name in ("orbits.csv", "zeta.csv", "resonances.csv", "distribution/localization.csv"):
        assert (out / name).exists()
        assert verify_output(out / name)
    assert list((out / "distribution").glob("res000_k1_sigma0.1.pgm"))
