#!/usr/bin/env python3

import functools
import json
import logging
import os
import platform
import sys
import time

import click
import numpy as np
import scipy
from colorama import init, Fore, Style

from src import __version__
from src.core.detect import (
    ENTANGLED,
    detect_correlation,
    detect_entanglement,
    variance_criterion,
)
from src.core.errors import (
    ContractViolationError,
    KernelSupportError,
    SkewForgeError,
)
from src.core.matrix_io import load_bipartite, load_density
from src.core.measures import q_uncertainty_routes
from src.core.selftest import run_selftest
from src.core.specfun import catalog, parse_spec
from src.core.sweep import SweepConfig, SweepRunner, write_rows

# Initialize colorama for cross-platform colored output
init()

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3
EXIT_CANCELLED = 130

logger = logging.getLogger(__name__)


class SpecType(click.ParamType):
    """Function identifier: wy, sld or wyd:<alpha>."""

    name = "spec"

    def convert(self, value, param, ctx):
        try:
            return parse_spec(value)
        except SkewForgeError as e:
            self.fail(str(e), param, ctx)


class DimsType(click.ParamType):
    """Subsystem dimensions written as m,n."""

    name = "m,n"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            m, n = (int(part) for part in value.split(","))
        except ValueError:
            self.fail(f"expected two integers as m,n, got {value!r}", param, ctx)
        if m < 1 or n < 1:
            self.fail(f"dimensions must be positive, got {value!r}", param, ctx)
        return m, n


def _fail(message, code):
    click.echo(f"{Fore.RED}Error: {message}{Style.RESET_ALL}", err=True)
    sys.exit(code)


def handle_errors(func):
    """Map SkewForge exceptions onto the exit code contract."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ContractViolationError, KernelSupportError) as e:
            _fail(str(e), EXIT_INVARIANT_VIOLATION)
        except SkewForgeError as e:
            _fail(str(e), EXIT_INPUT_ERROR)

    return wrapper


def _echo_json(document):
    click.echo(json.dumps(document, indent=2))


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Log debug messages to stderr')
@click.version_option(__version__, prog_name="SkewForge")
def cli(verbose):
    """SkewForge - metric adjusted skew information, quantum uncertainty and entanglement detection."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


@cli.command('uncertainty')
@click.option('--state', 'state_file', required=True, type=click.Path(dir_okay=False),
              help='Density matrix JSON file')
@click.option('--f', 'spec', required=True, type=SpecType(), help='wy, sld or wyd:<alpha>')
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
@handle_errors
def uncertainty(state_file, spec, as_json):
    """Q^f of a state by every route, with entropy and total variance."""
    rho = load_density(state_file)
    report = q_uncertainty_routes(spec, rho)

    if as_json:
        _echo_json(report.to_dict())
    else:
        click.echo(f"\n{Fore.GREEN}Q^{spec.identifier} of a {rho.dim}-dimensional state:{Style.RESET_ALL}")
        rows = [
            ("basis sum", report.q_basis),
            ("spectral sum", report.q_spectral),
            ("tilde-mean sum", report.q_tilde),
        ]
        if report.q_wy_closed is not None:
            rows.append(("n - (tr sqrt rho)^2", report.q_wy_closed))
        rows += [
            ("max deviation", report.max_deviation),
            ("entropy S", report.entropy),
            ("total variance U", report.total_variance),
            ("upper bound n-1", report.upper_bound),
        ]
        click.echo(f"{Fore.CYAN}{'Quantity':<22} {'Value'}{Style.RESET_ALL}")
        click.echo("-" * 45)
        for label, value in rows:
            click.echo(f"{label:<22} {value!r}")

    if not report.within_bounds:
        _fail(f"Q^{spec.identifier} left [0, {report.upper_bound:g}]", EXIT_INVARIANT_VIOLATION)
    if not as_json:
        click.echo(f"{Fore.GREEN}All routes within [0, n-1].{Style.RESET_ALL}")


@cli.command('detect')
@click.option('--state', 'state_file', required=True, type=click.Path(dir_okay=False),
              help='Bipartite density matrix JSON file')
@click.option('--dims', type=DimsType(), default=None, help='Subsystem dimensions m,n (default: from the file)')
@click.option('--f', 'spec', required=True, type=SpecType(), help='wy, sld or wyd:<alpha>')
@handle_errors
def detect(state_file, dims, spec):
    """Correlation and entanglement verdicts for a bipartite state (JSON)."""
    state = load_bipartite(state_file, dims)
    m, n = state.dims
    correlation = detect_correlation(spec, state)
    document = {"spec": spec.identifier, "dims": [m, n], "f_bar": correlation.to_dict()}

    if m == n:
        entanglement = detect_entanglement(spec, state)
        document["f_hat"] = entanglement.to_dict()
        document["v_hat"] = variance_criterion(state).to_dict()
        verdict = ENTANGLED if entanglement.verdict == ENTANGLED else correlation.verdict
    else:
        document["f_hat"] = None
        document["v_hat"] = None
        document["omitted"] = f"F_hat and V_hat need equal subsystem dimensions, got {m}x{n}"
        verdict = correlation.verdict
    document["verdict"] = verdict
    _echo_json(document)


@cli.command('sweep')
@click.option('--config', 'config_file', required=True, type=click.Path(dir_okay=False),
              help='Sweep configuration JSON file')
@click.option('--out', 'out_file', required=True, type=click.Path(dir_okay=False, writable=True),
              help='Output CSV file')
@click.option('--workers', type=click.IntRange(min=1), default=None, help='Thread pool size (overrides the config)')
@handle_errors
def sweep(config_file, out_file, workers):
    """Evaluate a state family on a parameter grid and write a CSV."""
    config = SweepConfig.from_file(config_file)
    runner = SweepRunner(config, workers)

    def progress_callback(progress, status):
        click.echo(f"\r{' ' * 60}\r{Fore.BLUE}[{progress:3d}%] {status}{Style.RESET_ALL}", nl=False)

    click.echo(f"Sweeping {len(config.grid())} points on {runner.workers} worker(s)...")
    runner.start(progress_callback)

    # Wait for the sweep to finish
    try:
        while runner.is_running:
            time.sleep(0.05)
        runner.join()
    except KeyboardInterrupt:
        click.echo("\nCancelling sweep...")
        runner.cancel()
        runner.join()

    click.echo()
    if isinstance(runner.error, SkewForgeError):
        raise runner.error
    if runner.error is not None:
        logger.debug("sweep worker failed", exc_info=runner.error)
        _fail(f"sweep failed: {type(runner.error).__name__}: {runner.error}", EXIT_INVARIANT_VIOLATION)
    if runner.cancelled:
        click.echo(f"{Fore.YELLOW}Sweep cancelled, nothing written.{Style.RESET_ALL}")
        sys.exit(EXIT_CANCELLED)

    rows = runner.rows
    write_rows(out_file, config, rows)
    entangled = sum(row.verdict == ENTANGLED for row in rows)
    click.echo(f"{Fore.GREEN}Wrote {len(rows)} rows to {out_file} ({entangled} entangled).{Style.RESET_ALL}")


@cli.command('selftest')
@click.option('--seed', type=int, default=42, show_default=True, help='Seed for every random input')
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
def selftest(seed, as_json):
    """Run the built-in property suites; exit 1 on any failure."""
    report = run_selftest(seed)

    if as_json:
        _echo_json(report.to_dict())
    else:
        click.echo(f"\n{Fore.GREEN}Selftest, seed {seed}:{Style.RESET_ALL}")
        click.echo(f"{Fore.CYAN}{'Suite':<10} {'Checks':>7} {'Failed':>7}  {'Worst residual'}{Style.RESET_ALL}")
        click.echo("-" * 60)
        for suite in report.suites:
            color = Fore.GREEN if suite.passed else Fore.RED
            click.echo(f"{color}{suite.name:<10}{Style.RESET_ALL} {suite.checks:>7} {len(suite.failures):>7}  "
                       f"{suite.worst_residual:.3e} ({suite.worst_check})")
            for failure in suite.failures:
                click.echo(f"   {Fore.RED}{failure}{Style.RESET_ALL}")

    if not report.passed:
        if not as_json:
            click.echo(f"{Fore.RED}Selftest failed.{Style.RESET_ALL}")
        sys.exit(EXIT_SELFTEST_FAILED)
    if not as_json:
        click.echo(f"{Fore.GREEN}All suites passed.{Style.RESET_ALL}")


@cli.command('info')
def system_info():
    """Display the function catalog and environment."""
    click.echo(f"\n{Fore.GREEN}Monotone functions:{Style.RESET_ALL}")
    click.echo(f"{Fore.CYAN}{'Identifier':<12} {'f(0)':<8} {'f(4)'}{Style.RESET_ALL}")
    click.echo("-" * 32)
    for spec in catalog():
        click.echo(f"{spec.identifier:<12} {spec.f_zero:<8.4g} {spec.f(4.0):.6g}")
    click.echo("wyd:<alpha> accepts any alpha in [0.001, 0.999].")

    click.echo(f"\n{Fore.GREEN}Environment:{Style.RESET_ALL}")
    click.echo(f"Python Version: {platform.python_version()} ({platform.python_implementation()})")
    click.echo(f"numpy {np.__version__}, scipy {scipy.__version__}")
    click.echo(f"Platform: {platform.platform()}")

    click.echo(f"\n{Fore.GREEN}SkewForge Information:{Style.RESET_ALL}")
    click.echo(f"Version: {__version__}")
    click.echo(f"Path: {os.path.dirname(os.path.dirname(os.path.abspath(__file__)))}")


if __name__ == '__main__':
    cli()
