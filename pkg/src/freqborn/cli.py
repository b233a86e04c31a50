"""Command-line surface: every analysis emitted as a reproducible CSV/JSON document.

Exit codes: 0 success, 2 usage error, 3 capacity error, 4 numerical-contract
violation.  Identical invocations produce byte-identical documents.
"""

from __future__ import annotations

import functools
import sys

import click
import numpy as np

from . import __version__
from .concentration import chebyshev_bound, convergence_scan, window_masses
from .continuum import Region, read_wavefunction_csv, region_frequency_analysis, region_probability
from .decomposition import (
    SingleCopyState,
    brute_force_decompose,
    decompose_multilevel,
    decompose_two_level,
    frequency_moments,
)
from .errors import CapacityError, ContractError, NormalizationError
from .finite_run import finite_run_distribution, outer_frequency_check, surprise_index
from .output import Table, render_csv, render_json, write_text

ORACLE_TOLERANCE = 1e-12


def guarded(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CapacityError as exc:
            click.echo(f"capacity error: {exc}", err=True)
            sys.exit(3)
        except (NormalizationError, ContractError) as exc:
            click.echo(f"numerical contract violation: {exc}", err=True)
            sys.exit(4)
        except (ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def state_options(command):
    command = click.option(
        "--renormalize", is_flag=True, help="Renormalize inputs instead of rejecting them."
    )(command)
    command = click.option(
        "--amps",
        default=None,
        help="Comma-separated complex amplitudes, entries like '0.6' or '0.6+0.8i'.",
    )(command)
    command = click.option(
        "--a2",
        type=float,
        default=None,
        help="Two-level shorthand: probability |a|^2 of the designated outcome.",
    )(command)
    return command


def output_options(command):
    command = click.option(
        "--out",
        "out_path",
        type=click.Path(dir_okay=False),
        default=None,
        help="Write the document to PATH atomically instead of stdout.",
    )(command)
    command = click.option(
        "--format",
        "output_format",
        type=click.Choice(["csv", "json"]),
        default="csv",
        show_default=True,
        help="Document format.",
    )(command)
    return command


def parse_amplitudes(text: str) -> list[complex]:
    entries = [piece.strip() for piece in text.split(",")]
    if len(entries) < 2:
        raise ValueError("need at least two comma-separated amplitudes")
    amplitudes = []
    for entry in entries:
        try:
            amplitudes.append(complex(entry.replace("i", "j")))
        except ValueError:
            raise ValueError(f"cannot parse amplitude {entry!r}") from None
    return amplitudes


def build_state(a2: float | None, amps: str | None, renormalize: bool) -> SingleCopyState:
    if (a2 is None) == (amps is None):
        raise click.UsageError("provide exactly one of --a2 or --amps")
    if a2 is not None:
        return SingleCopyState.from_alpha_probability(a2)
    return SingleCopyState(parse_amplitudes(amps), renormalize=renormalize)


def state_meta(a2: float | None, amps: str | None) -> dict:
    return {"a2": a2} if a2 is not None else {"amps": amps}


def parse_int_list(text: str, name: str) -> list[int]:
    try:
        return [int(piece.strip()) for piece in text.split(",") if piece.strip()]
    except ValueError:
        raise ValueError(f"{name} must be a comma-separated integer list, got {text!r}") from None


def emit(table: Table, output_format: str, out_path: str | None) -> None:
    if output_format == "csv":
        write_text(render_csv(table), out_path)
    else:
        write_text(render_json(table, __version__), out_path)


@click.group()
@click.version_option(__version__, prog_name="freqborn")
def main():
    """Fixed-frequency expansion toolkit for N-copy states.

    Expands repeated identical quantum systems over occupation sectors,
    measures how the sector mass concentrates at the single-copy
    probabilities, and checks the variance tail bound at finite N.

    \b
    Exit codes:
      0  success
      2  usage error
      3  capacity error (see FREQBORN_MAX_N)
      4  numerical-contract violation
    """


@main.command()
@click.option("--n", "num_copies", type=int, required=True, help="Copy count N.")
@state_options
@output_options
@guarded
def decompose(num_copies, a2, amps, renormalize, output_format, out_path):
    """Expand an N-copy state over its occupation sectors.

    \b
    Two-level columns:   n, r, log_weight, weight        (r = n/N)
    Multi-level columns: counts, r, log_weight, weight   (per-level values
                         joined by '|')
    Zero weights render as -inf in CSV and null in JSON.
    """
    state = build_state(a2, amps, renormalize)
    meta = {
        "command": "decompose",
        **state_meta(a2, amps),
        "n": num_copies,
        "renormalize": renormalize,
    }
    if state.num_levels == 2:
        decomp = decompose_two_level(state, num_copies)
        weights = np.exp(decomp.log_weights)
        denominator = float(num_copies)
        rows = [
            (n, n / denominator, float(decomp.log_weights[n]), float(weights[n]))
            for n in range(num_copies + 1)
        ]
        table = Table(("n", "r", "log_weight", "weight"), rows, meta)
    else:
        decomp = decompose_multilevel(state, num_copies)
        weights = np.exp(decomp.log_weights)
        denominator = float(num_copies)
        rows = []
        for i, (counts, log_weight) in enumerate(decomp.items()):
            joined_counts = "|".join(str(c) for c in counts)
            joined_r = "|".join(repr(c / denominator) for c in counts)
            rows.append((joined_counts, joined_r, log_weight, float(weights[i])))
        table = Table(("counts", "r", "log_weight", "weight"), rows, meta)
    emit(table, output_format, out_path)


@main.command()
@click.option("--ns", required=True, help="Comma-separated, strictly increasing copy counts.")
@click.option("--eps", type=float, required=True, help="Window half-width.")
@state_options
@output_options
@guarded
def scan(ns, eps, a2, amps, renormalize, output_format, out_path):
    """Measure outside-window mass against the tail bound for growing N.

    \b
    Columns: n, outside_mass, bound, inside_mass
    The window sits at r0 = |a|^2; bound = |a|^2 (1-|a|^2) / (eps^2 n).
    """
    state = build_state(a2, amps, renormalize)
    counts = parse_int_list(ns, "--ns")
    result = convergence_scan(state, eps, counts)
    rows = [
        (
            record.num_copies,
            record.window.mass_outside,
            record.window.chebyshev_bound,
            record.window.mass_inside,
        )
        for record in result.records
    ]
    meta = {"command": "scan", **state_meta(a2, amps), "ns": ns, "eps": eps}
    emit(Table(("n", "outside_mass", "bound", "inside_mass"), rows, meta), output_format, out_path)


@main.command()
@click.option("--a2", type=float, required=True, help="Probability |a|^2 of the designated outcome.")
@click.option("--n", "num_copies", type=int, required=True, help="Copy count N.")
@click.option("--eps", type=float, required=True, help="Window half-width.")
@output_options
@guarded
def bound(a2, num_copies, eps, output_format, out_path):
    """Evaluate the tail bound |a|^2 (1-|a|^2) / (eps^2 N).

    \b
    Columns: a2, n, eps, bound
    """
    value = chebyshev_bound(a2, num_copies, eps)
    meta = {"command": "bound", "a2": a2, "n": num_copies, "eps": eps}
    emit(Table(("a2", "n", "eps", "bound"), [(a2, num_copies, eps, value)], meta), output_format, out_path)


@main.command()
@click.option(
    "--wavefunction",
    "wavefunction_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="CSV file with header x,re,im on a uniform grid.",
)
@click.option("--region", "region_text", required=True, help="Half-open intervals 'lo:hi[,lo:hi...]'.")
@click.option("--n", "num_copies", type=int, required=True, help="Copy count N.")
@click.option("--eps", type=float, required=True, help="Window half-width.")
@click.option("--renormalize", is_flag=True, help="Renormalize the wavefunction instead of rejecting it.")
@output_options
@guarded
def cv(wavefunction_path, region_text, num_copies, eps, renormalize, output_format, out_path):
    """Reduce a sampled wavefunction plus a region to two-level statistics.

    \b
    Columns: a_sq, n, eps, mean_r, variance_r, predicted_variance,
             mass_below, mass_inside, mass_above, chebyshev_bound
    a_sq is the region's probability mass; the window sits at r0 = a_sq.
    """
    psi = read_wavefunction_csv(wavefunction_path, renormalize=renormalize)
    region = Region.parse(region_text)
    a_sq = region_probability(psi, region)
    report, window = region_frequency_analysis(psi, region, num_copies, eps)
    row = (
        a_sq,
        num_copies,
        eps,
        report.mean,
        report.variance,
        report.predicted_variance,
        window.mass_below,
        window.mass_inside,
        window.mass_above,
        window.chebyshev_bound,
    )
    meta = {
        "command": "cv",
        "wavefunction": wavefunction_path,
        "region": region_text,
        "n": num_copies,
        "eps": eps,
        "renormalize": renormalize,
    }
    columns = (
        "a_sq",
        "n",
        "eps",
        "mean_r",
        "variance_r",
        "predicted_variance",
        "mass_below",
        "mass_inside",
        "mass_above",
        "chebyshev_bound",
    )
    emit(Table(columns, [row], meta), output_format, out_path)


@main.command("finite-run")
@click.option("--n-inner", "num_measurements", type=int, required=True, help="Measurements per run.")
@click.option("--observed", type=int, default=None, help="Observed success count; appends the surprise index.")
@click.option("--outer", "num_runs", type=int, default=None, help="Repetitions of the whole run; appends the outer window analysis (needs --observed and --eps).")
@click.option("--eps", type=float, default=None, help="Window half-width for the outer analysis.")
@state_options
@output_options
@guarded
def finite_run(num_measurements, observed, num_runs, eps, a2, amps, renormalize, output_format, out_path):
    """Distribution over success counts of one finite run.

    \b
    Columns: n, mass
    With --observed, appends surprise_index (total mass of outcomes no more
    likely than the observed count).  With --outer N, appends the window
    analysis of the observed count's frequency across N runs at
    r0 = mass[observed].
    """
    state = build_state(a2, amps, renormalize)
    dist = finite_run_distribution(state, num_measurements)
    rows = [(n, float(mass)) for n, mass in enumerate(dist.masses.tolist())]
    meta = {
        "command": "finite-run",
        **state_meta(a2, amps),
        "n_inner": num_measurements,
    }
    annotations: dict = {}
    if observed is not None:
        annotations["observed"] = observed
        annotations["surprise_index"] = surprise_index(dist, observed)
    if num_runs is not None:
        if observed is None:
            raise click.UsageError("--outer needs --observed")
        if eps is None:
            raise click.UsageError("--outer needs --eps")
        window = outer_frequency_check(dist, num_runs, observed, eps)
        annotations["outer_runs"] = num_runs
        annotations["outer_eps"] = eps
        annotations["outer_r0"] = window.r0
        annotations["outer_mass_below"] = window.mass_below
        annotations["outer_mass_inside"] = window.mass_inside
        annotations["outer_mass_above"] = window.mass_above
        annotations["outer_chebyshev_bound"] = window.chebyshev_bound
    emit(Table(("n", "mass"), rows, meta, annotations), output_format, out_path)


@main.command("oracle-check")
@click.option("--n", "num_copies", type=int, required=True, help="Copy count N.")
@state_options
@output_options
@guarded
def oracle_check(num_copies, a2, amps, renormalize, output_format, out_path):
    """Compare the closed-form expansion against brute-force enumeration.

    \b
    Columns: levels, n, sectors, max_abs_deviation, threshold, status
    Exits 0 iff the largest per-sector weight deviation is at most 1e-12.
    """
    state = build_state(a2, amps, renormalize)
    if state.num_levels == 2:
        closed = decompose_two_level(state, num_copies)
    else:
        closed = decompose_multilevel(state, num_copies)
    oracle = brute_force_decompose(state, num_copies)
    closed_counts = np.column_stack(
        [closed.level_counts(i) for i in range(closed.num_levels)]
    )
    oracle_counts = np.column_stack(
        [oracle.level_counts(i) for i in range(oracle.num_levels)]
    )
    if not np.array_equal(closed_counts, oracle_counts):
        raise ContractError("sector enumerations disagree between routes")
    deviation = float(
        np.max(np.abs(np.exp(closed.log_weights) - np.exp(oracle.log_weights)))
    )
    passed = deviation <= ORACLE_TOLERANCE
    meta = {"command": "oracle-check", **state_meta(a2, amps), "n": num_copies}
    row = (
        state.num_levels,
        num_copies,
        closed.num_sectors,
        deviation,
        ORACLE_TOLERANCE,
        "PASS" if passed else "FAIL",
    )
    emit(
        Table(("levels", "n", "sectors", "max_abs_deviation", "threshold", "status"), [row], meta),
        output_format,
        out_path,
    )
    if not passed:
        click.echo(
            f"numerical contract violation: max deviation {deviation!r} above {ORACLE_TOLERANCE!r}",
            err=True,
        )
        sys.exit(4)


if __name__ == "__main__":
    main()
