"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Unit tests for the command-line interface
"""
import json
import logging

import numpy as np
import pytest

from src.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, build_parser, main
from src.diffeo.csv_io import write_diffeo_csv
from src.diffeo.group import Diffeo
from src.paths.csv_io import read_path_csv, write_path_csv
from src.paths.grid import GridSpec, Path


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    """Run every command inside tmp_path and restore root logging afterwards."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("POLARWIENER_OUTPUT_DIR", raising=False)
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield tmp_path
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


def test_parser_global_flags_before_and_after_command():
    """Test common flags work on either side of the sub-command."""
    parser = build_parser()
    args = parser.parse_args(['--seed', '5', 'verify', '--check', 'lemma1'])
    assert args.seed == 5
    assert args.check == ['lemma1']
    args = parser.parse_args(['verify', '--seed', '9', '--workers', '2'])
    assert args.seed == 9
    assert args.workers == 2


def test_parser_rejects_unknown_check():
    """Test unknown check ids are usage errors."""
    with pytest.raises(SystemExit) as excinfo:
        build_parser().parse_args(['verify', '--check', 'lemma99'])
    assert excinfo.value.code == 2


def test_no_command_prints_help(capsys):
    """Test running without a command is a usage error."""
    assert main([]) == EXIT_USAGE
    assert "verify" in capsys.readouterr().out


def test_decompose_and_reconstruct(workdir, smooth_positive):
    """Test decompose writes phi and rho and reconstruct rebuilds the path."""
    x = Path.from_function(GridSpec(513), smooth_positive)
    source = workdir / "x.csv"
    write_path_csv(source, x)

    phi_path = workdir / "phi.csv"
    assert main(['decompose', '--in', str(source), '--out', str(phi_path)]) == EXIT_OK
    sidecar = json.loads((workdir / "phi.json").read_text())
    assert sidecar["n_points"] == 513
    assert sidecar["rho"] > 0

    rebuilt = workdir / "rebuilt.csv"
    assert main(['reconstruct', '--in', str(phi_path), '--out', str(rebuilt)]) == EXIT_OK
    y = read_path_csv(rebuilt)
    assert np.max(np.abs(y.values - x.values)) / np.max(x.values) < 1e-3


def test_reconstruct_with_explicit_rho(workdir):
    """Test --rho with the identity gives a constant path."""
    phi_path = workdir / "identity.csv"
    write_diffeo_csv(phi_path, Diffeo.identity(GridSpec(65)))
    out = workdir / "constant.csv"
    assert main(['reconstruct', '--in', str(phi_path), '--rho', '2.5', '--out', str(out)]) == EXIT_OK
    assert np.allclose(read_path_csv(out).values, 2.5, atol=1e-12)


def test_reconstruct_without_rho(workdir):
    """Test a missing radius is a usage error."""
    phi_path = workdir / "identity.csv"
    write_diffeo_csv(phi_path, Diffeo.identity(GridSpec(65)))
    assert main(['reconstruct', '--in', str(phi_path)]) == EXIT_USAGE


def test_decompose_missing_file(workdir):
    """Test an unreadable input is an I/O error."""
    assert main(['decompose', '--in', str(workdir / "missing.csv")]) == EXIT_IO


def test_decompose_non_positive_path(workdir):
    """Test a path touching zero is a domain error."""
    source = workdir / "crossing.csv"
    write_path_csv(source, Path.from_function(GridSpec(65), lambda t: t - 0.5))
    assert main(['decompose', '--in', str(source)]) == EXIT_USAGE


def test_sample_paths(workdir):
    """Test sampled paths are written with the requested start."""
    code = main(['-o', str(workdir / "samples"), 'sample', '--count', '3',
                 '--start', '1.5', '--n-points', '33'])
    assert code == EXIT_OK
    files = sorted((workdir / "samples").glob("path_*.csv"))
    assert len(files) == 3
    first = read_path_csv(files[0])
    assert first.grid == GridSpec(33)
    assert first.values[0] == 1.5


def test_sample_diffeos(workdir):
    """Test sampled diffeomorphisms are written as t,phi,xi."""
    code = main(['sample', '--kind', 'diffeo', '--count', '2', '--n-points', '33',
                 '--output-dir', str(workdir / "phi")])
    assert code == EXIT_OK
    files = sorted((workdir / "phi").glob("diffeo_*.csv"))
    assert len(files) == 2
    assert files[0].read_text().splitlines()[0] == "t,phi,xi"


def test_sample_count_must_be_positive(workdir):
    """Test --count 0 is a usage error."""
    assert main(['sample', '--count', '0']) == EXIT_USAGE


def test_verify_oracles(workdir):
    """Test the deterministic oracle checks pass and write a report."""
    out = workdir / "report"
    assert main(['verify', '--check', 'oracles', '-o', str(out), '--format', 'csv']) == EXIT_OK
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] is True
    assert report["checks"]
    assert all(c["check_id"].startswith("oracle_") for c in report["checks"])
    assert (out / "report.csv").exists()


def test_verify_domain_error(workdir):
    """Test an out-of-domain parameter is a usage error."""
    assert main(['verify', '--check', 'lemma1', '--a', '-1', '-o', str(workdir)]) == EXIT_USAGE
