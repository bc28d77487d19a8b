"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Command-line interface: sampling, polar decomposition of CSV paths and verification runs
"""
import argparse
import json
import logging
import sys
from pathlib import Path as FilePath
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Add project root to path
sys.path.insert(0, str(FilePath(__file__).parent.parent))

from src import __version__
from src.config import load_config, merge_overrides
from src.diffeo.csv_io import read_diffeo_csv, write_diffeo_csv
from src.diffeo.measure import sample_mu
from src.errors import GridError, PolarWienerError
from src.montecarlo.estimate import EstimatorConfig
from src.montecarlo.verification import CHECKS, resolve_checks, run_checks
from src.paths.csv_io import read_path_csv, write_path_csv
from src.paths.grid import GridSpec
from src.paths.sampling import RngStream, sample_brownian
from src.polar.decomposition import PolarPair, decompose, reconstruct
from src.report import report_passed, write_report
from src.utils import ensure_directory, format_estimate, format_z, setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

# Stream of the `sample` command, kept clear of the estimator streams
SAMPLE_STREAM = 1 << 41


def build_settings(args) -> Dict[str, Any]:
    """
    Load the configuration file and apply command-line overrides.

    Flags that were not given are None and leave the file value alone.
    Single-valued flags also replace the matching verification grid.
    """
    config = load_config(args.config)
    get = lambda name: getattr(args, name, None)  # noqa: E731

    overrides: Dict[str, Any] = {
        "sampling": {"seed": get("seed"), "workers": get("workers")},
        "report": {"output_dir": get("output_dir"), "format": get("format")},
        "grid": {"n_points": get("n_points")},
        "estimators": {
            "sigma": get("sigma"),
            "a": get("a"),
            "beta": get("beta"),
            "theta": get("theta"),
            "rho": get("rho"),
            "kappa": get("kappa"),
            "n_samples": get("n"),
            "positivity": get("positivity"),
        },
    }
    settings = merge_overrides(config, overrides)

    est = settings["estimators"]
    verification: Dict[str, Any] = {}
    if get("a") is not None:
        verification["lemma1_a"] = [est["a"]]
    if any(get(name) is not None for name in ("beta", "rho", "sigma")):
        verification["lemma4_points"] = [[est["beta"], est["rho"], est["sigma"]]]
    if get("beta") is not None:
        verification["theorem3_betas"] = [est["beta"]]
    if get("kappa") is not None:
        settings["estimators"]["kappa_candidates"] = [est["kappa"]]
    return merge_overrides(settings, {"verification": verification})


def _output_dir(settings: Dict[str, Any]) -> FilePath:
    return ensure_directory(settings["report"]["output_dir"])


def verify_command(args) -> int:
    """Handle verify command."""
    settings = build_settings(args)
    check_ids = args.check or ["all"]
    try:
        resolve_checks(check_ids)
    except KeyError as e:
        logger.error(str(e.args[0]))
        return EXIT_USAGE

    cfg = EstimatorConfig.from_settings(settings)
    logger.info(f"Running checks {check_ids} (seed {cfg.seed}, n={cfg.n_samples}, "
                f"n_points={cfg.grid.n_points}, workers={cfg.workers})")
    records = run_checks(check_ids, settings, cfg)

    report = settings["report"]
    written = write_report(
        records,
        _output_dir(settings),
        seed=cfg.seed,
        settings=settings,
        fmt=report.get("format", "json"),
        schema_version=int(report.get("schema_version", 1)),
    )

    print(f"\n{len(records)} check records")
    for record in records:
        status = "ok  " if record.passed else "FAIL"
        if record.mean is None:
            value = "-"
        elif record.std_err:
            value = format_estimate(record.mean, record.std_err)
        else:
            value = f"{record.mean:.6g}"
        target = "" if record.target is None else f" target {record.target:.7g}"
        print(f"  [{status}] {record.check_id:30s} {value}{target} z={format_z(record.z_score)}")
    for path in written:
        print(f"Report: {path}")

    return EXIT_OK if report_passed(records) else EXIT_FAILED


def decompose_command(args) -> int:
    """Handle decompose command."""
    x = read_path_csv(args.input)
    polar = decompose(x)
    rho = float(polar.rho)
    output_dir = _output_dir(build_settings(args))
    stem = FilePath(args.input).stem

    diffeo_path = FilePath(args.out) if args.out else output_dir / f"{stem}_diffeo.csv"
    write_diffeo_csv(diffeo_path, polar.phi)
    rho_path = diffeo_path.with_suffix(".json")
    with open(rho_path, 'w') as f:
        json.dump({"rho": rho, "n_points": x.grid.n_points, "diffeo": diffeo_path.name},
                  f, indent=2, sort_keys=True)

    print(f"rho = {rho:.12g}")
    print(f"Diffeomorphism written to {diffeo_path}")
    return EXIT_OK


def _read_rho(args) -> Optional[float]:
    if args.rho is not None:
        return args.rho
    sidecar = FilePath(args.input).with_suffix(".json")
    if sidecar.exists():
        with open(sidecar, 'r') as f:
            return float(json.load(f)["rho"])
    return None


def reconstruct_command(args) -> int:
    """Handle reconstruct command."""
    phi = read_diffeo_csv(args.input)
    rho = _read_rho(args)
    if rho is None:
        logger.error("No --rho given and no .json sidecar next to the diffeomorphism file")
        return EXIT_USAGE

    x = reconstruct(PolarPair(rho, phi))
    output_dir = _output_dir(build_settings(args))
    path = FilePath(args.out) if args.out else output_dir / f"{FilePath(args.input).stem}_path.csv"
    write_path_csv(path, x)
    print(f"Path written to {path}")
    return EXIT_OK


def sample_command(args) -> int:
    """Handle sample command."""
    settings = build_settings(args)
    cfg = EstimatorConfig.from_settings(settings)
    output_dir = _output_dir(settings)
    gen = RngStream(cfg.seed, SAMPLE_STREAM).generator()
    grid = GridSpec(cfg.grid.n_points)

    written: List[FilePath] = []
    if args.kind == "path":
        batch = sample_brownian(cfg.sigma, grid, args.start, gen, args.count)
        for i in range(args.count):
            path = output_dir / f"path_{i:04d}.csv"
            write_path_csv(path, batch[i])
            written.append(path)
    else:
        batch = sample_mu(cfg.sigma, grid, gen, args.count)
        for i in range(args.count):
            path = output_dir / f"diffeo_{i:04d}.csv"
            write_diffeo_csv(path, batch[i])
            written.append(path)

    logger.info(f"Sampled {args.count} {args.kind} files (sigma={cfg.sigma}, n_points={grid.n_points})")
    print(f"Wrote {len(written)} files to {output_dir}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, default=None):
    # sub-command copies default to SUPPRESS so they never mask a value given before the command
    parser.add_argument('--config', '-c', default=default, help='Path to a YAML config file (default: config/default.yaml)')
    parser.add_argument('--verbose', '-v', action='store_true', default=default or False, help='Enable verbose logging')
    parser.add_argument('--workers', type=int, default=default, help='Worker threads (results do not depend on it)')
    parser.add_argument('--seed', type=int, default=default, help='Root seed of all random streams')
    parser.add_argument('--output-dir', '-o', dest='output_dir', default=default,
                        help='Output directory (default: report.output_dir or $POLARWIENER_OUTPUT_DIR)')


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the four sub-commands."""
    parser = argparse.ArgumentParser(
        prog='polarwiener',
        description='PolarWiener - Polar Decomposition of the Wiener Measure',
        epilog='Exit codes: 0 success, 1 verification failure, 2 usage or domain error, 3 I/O error.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    _add_common(parser)

    subparsers = parser.add_subparsers(dest='command', help='Command to run')
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, argparse.SUPPRESS)

    # Verify command
    verify_parser = subparsers.add_parser(
        'verify', parents=[common],
        help='Run Monte Carlo and deterministic checks and write a report',
    )
    verify_parser.add_argument(
        '--check', action='append', choices=['all'] + list(CHECKS),
        help='Check to run; repeatable (default: all)',
    )
    verify_parser.add_argument('--a', type=float, help='Damping coefficient')
    verify_parser.add_argument('--sigma', type=float, help='Wiener dispersion')
    verify_parser.add_argument('--beta', type=float, help='Mobius index (> -1)')
    verify_parser.add_argument('--theta', type=float, help='Endpoint ratio x(1)/x(0)')
    verify_parser.add_argument('--rho', type=float, help='Radial coordinate for j/lemma4')
    verify_parser.add_argument('--kappa', type=float, help='Radial constant (replaces the candidate list)')
    verify_parser.add_argument('--n', type=int, help='Monte Carlo samples per estimate')
    verify_parser.add_argument('--n-points', dest='n_points', type=int, help='Grid size')
    verify_parser.add_argument('--positivity', choices=['indicator', 'bridge', 'closed_form'],
                               help='Positivity weighting of left-hand sides')
    verify_parser.add_argument('--format', choices=['json', 'csv'], help='Report format (default: json)')

    # Decompose command
    decompose_parser = subparsers.add_parser(
        'decompose', parents=[common],
        help='Polar decomposition of a positive path CSV (t,value)',
    )
    decompose_parser.add_argument('--in', dest='input', required=True, help='Path CSV')
    decompose_parser.add_argument('--out', help='Diffeomorphism CSV (rho goes to a .json next to it)')

    # Reconstruct command
    reconstruct_parser = subparsers.add_parser(
        'reconstruct', parents=[common],
        help='Rebuild a path from rho and a diffeomorphism CSV (t,phi,xi)',
    )
    reconstruct_parser.add_argument('--in', dest='input', required=True, help='Diffeomorphism CSV')
    reconstruct_parser.add_argument('--rho', type=float, help='Radial coordinate (default: .json sidecar)')
    reconstruct_parser.add_argument('--out', help='Output path CSV')

    # Sample command
    sample_parser = subparsers.add_parser(
        'sample', parents=[common],
        help='Write sampled Brownian paths or mu_sigma diffeomorphisms as CSV',
    )
    sample_parser.add_argument('--kind', choices=['path', 'diffeo'], default='path', help='What to sample')
    sample_parser.add_argument('--count', type=int, default=1, help='Number of samples (default: 1)')
    sample_parser.add_argument('--start', type=float, default=0.0, help='Start point of sampled paths')
    sample_parser.add_argument('--sigma', type=float, help='Dispersion')
    sample_parser.add_argument('--n-points', dest='n_points', type=int, help='Grid size')

    return parser


COMMANDS = {
    'verify': verify_command,
    'decompose': decompose_command,
    'reconstruct': reconstruct_command,
    'sample': sample_command,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    logging_config = load_config(args.config).get("logging", {})
    setup_logging(
        verbose=args.verbose,
        log_file=logging_config.get("file"),
        level=logging_config.get("level", "INFO"),
        max_size_mb=logging_config.get("max_size_mb", 10),
        backup_count=logging_config.get("backup_count", 3),
    )

    if getattr(args, 'count', 1) < 1:
        logger.error("--count must be at least 1")
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except (OSError, GridError) as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except (PolarWienerError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
