"""Command line interface for the ruelle_zeta package."""
from __future__ import annotations

import functools
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import click

from .config import load_config, smoke_config_path
from .constants import DOMAINS
from .errors import ConfigError, NumericalError
from .logging import setup_logger
from .resonances.scan import Rectangle
from .ruelle.grid import GridSpec
from .workflow.runner import PipelineRunner

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _parse_complex(text: str) -> complex:
    try:
        re, im = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"'{text}' is not RE,IM") from exc
    return complex(re, im)


def run_options(func):
    """Options shared by every computing subcommand."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
                     help="Run configuration (YAML or JSON)."),
        click.option("--d-over-r", type=float, help="Disc separation over radius."),
        click.option("--nmax", type=int, help="Longest prime cycle in the expansion."),
        click.option("--kmax", type=int, help="Number of zeta bands."),
        click.option("--domain", type=click.Choice(DOMAINS), help="Symbolic coding domain."),
        click.option("--rect", help="Scan rectangle re0,re1,im0,im1."),
        click.option("--sigma", "sigmas", type=float, multiple=True,
                     help="Section smoothing width (repeatable)."),
        click.option("--grid", help="Section grid NQxNP."),
        click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
                     help="Output directory."),
        click.option("--workers", type=int, help="Worker processes."),
        click.option("--verbose", is_flag=True, help="Enable verbose logging output."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _overrides(
    d_over_r: Optional[float],
    nmax: Optional[int],
    kmax: Optional[int],
    domain: Optional[str],
    rect: Optional[str],
    sigmas: Sequence[float],
    grid: Optional[str],
    out_dir: Optional[Path],
    workers: Optional[int],
) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}

    def put(section: str, key: str, value: Any) -> None:
        if value is not None:
            overrides.setdefault(section, {})[key] = value

    put("system", "d_over_r", d_over_r)
    put("expansion", "n_max", nmax)
    put("expansion", "k_max", kmax)
    put("expansion", "domain", domain)
    put("scan", "rectangle", list(Rectangle.parse(rect)) if rect else None)
    put("distribution", "sigmas", list(sigmas) if sigmas else None)
    put("distribution", "grid", list(GridSpec.parse(grid)) if grid else None)
    put("output", "out_dir", str(out_dir) if out_dir else None)
    put("compute", "workers", workers)
    return overrides


def guarded(func):
    """Map package errors to exit codes: 2 for configuration, 3 for numerics."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"Configuration error: {exc}", err=True)
            raise SystemExit(EXIT_CONFIG)
        except NumericalError as exc:
            click.echo(f"Numerical failure: {exc}", err=True)
            raise SystemExit(EXIT_NUMERICAL)
    return wrapper


def _runner(command: str, config_path, verbose, **flags) -> PipelineRunner:
    config = load_config(config_path, _overrides(**flags))
    out_dir = Path(config.output.out_dir)
    logger = setup_logger(verbose=verbose, log_file=out_dir / "ruelle_zeta.log")
    return PipelineRunner(config, logger=logger, command=command)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Pollicott-Ruelle resonances and invariant Ruelle distributions of 3-disc billiards."""


@main.command()
@run_options
@guarded
def orbits(config_path, verbose, **flags) -> None:
    """Solve all prime cycles up to --nmax and write orbits.csv."""
    _runner("orbits", config_path, verbose, **flags).run_orbits()


@main.command()
@run_options
@click.option("--lambda", "lambdas", multiple=True, help="Evaluation point RE,IM (repeatable).")
@guarded
def zeta(config_path, verbose, lambdas: Tuple[str, ...], **flags) -> None:
    """Evaluate the weighted zeta function Z_1 and write zeta.csv."""
    runner = _runner("zeta", config_path, verbose, **flags)
    points = [_parse_complex(text) for text in lambdas] or None
    runner.run_zeta(points)


@main.command()
@run_options
@guarded
def resonances(config_path, verbose, **flags) -> None:
    """Scan --rect for zeros of the zeta bands and write resonances.csv."""
    _runner("resonances", config_path, verbose, **flags).run_resonances()


@main.command()
@run_options
@click.option("--resonance", "selector",
              help="leading, an index into the scan, RE,IM or critical:WIDTH.")
@guarded
def distribution(config_path, verbose, selector: Optional[str], **flags) -> None:
    """Render smoothed Ruelle distributions as CSV grids and PGM images."""
    _runner("distribution", config_path, verbose, **flags).run_distribution(selector)


@main.command()
@click.option("--out", "out_dir", type=click.Path(file_okay=False, path_type=Path),
              default=Path("runs/smoke"), show_default=True, help="Output directory.")
@click.option("--verbose", is_flag=True, help="Show verbose output while the smoke test runs.")
@guarded
def smoke(out_dir: Path, verbose: bool) -> None:
    """Run every stage on the bundled small configuration."""
    config = load_config(smoke_config_path(), {"output": {"out_dir": str(out_dir)}})
    logger = setup_logger(verbose=verbose, log_file=out_dir / "ruelle_zeta.log")
    runner = PipelineRunner(config, logger=logger, command="smoke")
    runner.run_orbits()
    runner.run_zeta()
    runner.run_resonances()
    runner.run_distribution()


@main.command()
def version() -> None:
    """Print package version."""
    from . import __version__
    click.echo(__version__)


if __name__ == "__main__":
    main()
