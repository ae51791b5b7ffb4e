"""Command-line front end.

Data files are CSV with `.` decimals, a leading `#` comment line echoing the
full parameter set, and a single header row. Exit codes: 0 success, 2
usage/validation error, 1 runtime numerical failure. Output files are
written to a temporary name and atomically renamed.
"""

import json
import os
import sys

import click
import numpy as np

from .estimate import gph_estimate
from .fitloss import (
    best_matching_a,
    fit_ar_population,
    zeta_ar,
    zeta_fractional,
)
from .forecast import forecast_csa
from .harness import ExperimentConfig, run_experiment, resolve_workers
from .model import (
    CsaParams,
    FracParams,
    acf_csa_lags,
    acf_frac_lags,
    csa_spectrum_at_zero,
)
from .simulate import benchmark_generation, generate_csa_fast, generate_csa_naive, generate_frac_fast
from .specfun import ConvergenceError


def _atomic_write(path, text):
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_column(path, header, values, meta):
    lines = ["# " + json.dumps(meta, sort_keys=True), header]
    lines.extend(repr(float(v)) for v in values)
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_table(path, fieldnames, rows, meta):
    lines = ["# " + json.dumps(meta, sort_keys=True), ",".join(fieldnames)]
    for row in rows:
        lines.append(",".join(str(row.get(k, "")) for k in fieldnames))
    _atomic_write(path, "\n".join(lines) + "\n")


def _read_column(path):
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            token = line.split(",")[0]
            try:
                values.append(float(token))
            except ValueError:
                if lineno == 1 or (lineno == 2 and not values):
                    continue  # header row
                raise click.UsageError(
                    f"{path}:{lineno}: cannot parse {token!r} as a number"
                )
    if not values:
        raise click.UsageError(f"{path}: no numeric data found")
    return np.asarray(values)


def _csa_params(a, b, sigma):
    if a is None or b is None:
        raise click.UsageError("--a and --b are required for a CSA process")
    try:
        return CsaParams(a=a, b=b, sigma_eps=sigma)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _frac_params(d):
    if d is None:
        raise click.UsageError("--d is required for a fractional process")
    try:
        return FracParams(d=d)
    except ValueError as exc:
        raise click.UsageError(str(exc))


@click.group()
@click.version_option()
def main():
    """Long-memory generation, forecasting and analysis tools."""


@main.command()
@click.option("--process", type=click.Choice(["csa", "frac"]), required=True)
@click.option("--a", type=float, default=None, help="first Beta parameter (CSA)")
@click.option("--b", type=float, default=None, help="second Beta parameter (CSA)")
@click.option("--d", type=float, default=None, help="memory parameter (frac)")
@click.option("--sigma", type=float, default=1.0, help="innovation std deviation")
@click.option("--length", "-T", "length", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--method", type=click.Choice(["fast", "naive"]), default="fast", show_default=True)
@click.option("--units", type=int, default=None, help="cross-sectional units (naive; default T)")
@click.option("--burnin", type=int, default=None, help="warm-up steps (naive; default max(2000, T))")
@click.option("--out", type=click.Path(), required=True)
def simulate(process, a, b, d, sigma, length, seed, method, units, burnin, out):
    """Generate one sample path and write it as a one-column CSV."""
    if length < 1:
        raise click.UsageError(f"--length must be >= 1, got {length}")
    if process == "frac":
        if method == "naive":
            raise click.UsageError("--method naive applies only to --process csa")
        params = _frac_params(d)
        sample = generate_frac_fast(params, length, seed)
    else:
        params = _csa_params(a, b, sigma)
        if method == "fast":
            sample = generate_csa_fast(params, length, seed)
        else:
            n_units = units if units is not None else length
            if n_units < 1:
                raise click.UsageError(f"--units must be >= 1, got {n_units}")
            if burnin is not None and burnin < 0:
                raise click.UsageError(f"--burnin must be >= 0, got {burnin}")
            sample = generate_csa_naive(params, length, n_units, burn_in=burnin, seed=seed)
    meta = {
        "generator": sample.generator,
        "seed": seed,
        "length": length,
        **_param_meta(params),
    }
    if sample.n_units is not None:
        meta["n_units"] = sample.n_units
    _write_column(out, "value", sample.values, meta)


def _param_meta(params):
    if isinstance(params, CsaParams):
        return {"process": "csa", "a": params.a, "b": params.b, "sigma_eps": params.sigma_eps}
    return {"process": "frac", "d": params.d}


@main.command()
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--sigma", type=float, default=1.0)
@click.option("--horizon", "-h", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def forecast(infile, a, b, sigma, horizon, out):
    """Minimum-MSE forecasts of a CSA series read from a one-column CSV."""
    params = _csa_params(a, b, sigma)
    x = _read_column(infile)
    if horizon < 1:
        raise click.UsageError(f"--horizon must be >= 1, got {horizon}")
    if horizon > x.size:
        raise click.UsageError(f"--horizon {horizon} exceeds sample size {x.size}")
    try:
        result = forecast_csa(x, params, horizon)
    except (ValueError, ConvergenceError) as exc:
        raise click.ClickException(str(exc))
    meta = {
        **_param_meta(params),
        "horizon": horizon,
        "observations": int(x.size),
        "reconstruction_error": result.reconstruction_error,
    }
    _write_column(out, "forecast", result.point_forecasts, meta)


@main.command()
@click.option("--process", type=click.Choice(["csa", "frac"]), required=True)
@click.option("--a", type=float, default=None)
@click.option("--b", type=float, default=None)
@click.option("--d", type=float, default=None)
@click.option("--max-lag", type=int, default=50, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def acf(process, a, b, d, max_lag, out):
    """Theoretical autocorrelation function up to --max-lag."""
    if max_lag < 0:
        raise click.UsageError(f"--max-lag must be >= 0, got {max_lag}")
    if process == "csa":
        params = _csa_params(a, b, 1.0)
        values = acf_csa_lags(params, max_lag)
    else:
        params = _frac_params(d)
        values = acf_frac_lags(params, max_lag)
    _write_column(out, "acf", values, {**_param_meta(params), "max_lag": max_lag})


@main.command()
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--sigma", type=float, default=1.0)
def spectrum(a, b, sigma):
    """Spectral density of CSA(a, b) at the origin (requires b > 2)."""
    params = _csa_params(a, b, sigma)
    try:
        value = csa_spectrum_at_zero(params)
    except ConvergenceError as exc:
        raise click.ClickException(str(exc))
    click.echo(repr(value))


@main.command()
@click.option("--in", "infile", type=click.Path(exists=True), required=True)
@click.option("--bandwidth", type=int, default=None, help="default floor(sqrt(T))")
def gph(infile, bandwidth):
    """GPH log-periodogram memory estimate of a series file."""
    x = _read_column(infile)
    if bandwidth is not None and bandwidth < 3:
        raise click.UsageError(f"--bandwidth must be >= 3, got {bandwidth}")
    try:
        est = gph_estimate(x, bandwidth=bandwidth)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo(f"d_hat={est.d_hat!r} std_error={est.std_error!r} bandwidth={est.bandwidth}")


@main.command()
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--model", type=click.Choice(["ar", "fractional"]), default="ar", show_default=True)
@click.option("--order", type=int, default=1, show_default=True, help="AR order")
def fit(a, b, model, order):
    """Population fit of a misspecified model to CSA(a, b), with its
    relative one-step forecast error variance."""
    params = _csa_params(a, b, 1.0)
    if model == "ar":
        if order < 1:
            raise click.UsageError(f"--order must be >= 1, got {order}")
        coeffs = fit_ar_population(params, order)
        click.echo(
            f"model=ar({order}) zeta={zeta_ar(params, coeffs)!r} "
            f"coeffs={','.join(repr(float(c)) for c in coeffs)}"
        )
    else:
        if not 1.0 < b < 2.0:
            raise click.UsageError(
                f"fractional fits require b in (1, 2), got b={b}"
            )
        try:
            pure, arfima = zeta_fractional(params)
        except ConvergenceError as exc:
            raise click.ClickException(str(exc))
        click.echo(f"model=i(d) zeta={pure.zeta!r}")
        click.echo(
            f"model=arfima(1,d,0) zeta={arfima.zeta!r} alpha_i={arfima.fitted_params[0]!r}"
        )


@main.command()
@click.option("--k", type=int, required=True, help="number of lags to match")
@click.option("--d", type=float, required=True)
def match(k, d):
    """Best CSA(a, 2(1-d)) approximation to an I(d) autocorrelation."""
    if k < 1:
        raise click.UsageError(f"--k must be >= 1, got {k}")
    if not 0.0 < d < 0.5:
        raise click.UsageError(f"--d must lie in (0, 1/2), got {d}")
    try:
        a_star, loss = best_matching_a(k, d)
    except RuntimeError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"a_star={a_star!r} loss={loss!r} b={2.0 * (1.0 - d)!r}")


@main.command()
@click.option("--a", type=float, default=0.2, show_default=True)
@click.option("--b", type=float, default=1.6, show_default=True)
@click.option("--sizes", default="100,1000", show_default=True, help="comma-separated T values")
@click.option("--runs", type=int, default=5, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def benchmark(a, b, sizes, runs, out):
    """Wall-clock comparison of fast vs naive CSA generation (N = T)."""
    params = _csa_params(a, b, 1.0)
    try:
        size_list = [int(s) for s in sizes.split(",") if s]
    except ValueError:
        raise click.UsageError(f"cannot parse --sizes {sizes!r}")
    if not size_list or any(s < 1 for s in size_list):
        raise click.UsageError("--sizes needs positive integers")
    rows = benchmark_generation(params, size_list, runs=runs)
    table = [
        {
            "T": r.T,
            "n_units": r.n_units,
            "fast_seconds": r.fast_seconds,
            "naive_seconds": r.naive_seconds,
            "speedup": r.speedup,
        }
        for r in rows
    ]
    for r in table:
        click.echo(
            f"T={r['T']} N={r['n_units']} fast={r['fast_seconds']:.6f}s "
            f"naive={r['naive_seconds']:.6f}s speedup={r['speedup']:.1f}x"
        )
    if out:
        _write_table(
            out,
            ["T", "n_units", "fast_seconds", "naive_seconds", "speedup"],
            table,
            {"a": a, "b": b, "runs": runs},
        )


@main.command()
@click.option("--table", "which", type=click.Choice(["1", "2", "3"]), required=True)
@click.option("--scale", type=click.Choice(["desk", "paper"]), default="desk", show_default=True)
@click.option("--seed", type=int, default=20240817, show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--workers", type=int, default=None, help="default NONFRAC_WORKERS or CPU count")
def table(which, scale, seed, out, workers):
    """Reproduce one of the efficiency-loss / misspecification tables."""
    kwargs = {"master_seed": seed}
    if which == "1":
        if scale == "paper":
            kwargs.update(sample_size=10_000, replications=10_000)
        else:
            kwargs.update(sample_size=4096, replications=1000)
    cfg = ExperimentConfig(experiment=f"table{which}", **kwargs)
    try:
        result = run_experiment(cfg, workers=workers)
    except ConvergenceError as exc:
        raise click.ClickException(str(exc))
    result.write_csv(out)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_prefix", type=click.Path(), required=True, help="output prefix for .csv and .json")
@click.option("--workers", type=int, default=None)
def experiment(config_path, out_prefix, workers):
    """Run an experiment described by a JSON config file."""
    try:
        cfg = ExperimentConfig.from_file(config_path)
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"{config_path}: {exc}")
    try:
        result = run_experiment(cfg, workers=workers)
    except ConvergenceError as exc:
        raise click.ClickException(str(exc))
    result.write_csv(f"{out_prefix}.csv")
    result.write_json(f"{out_prefix}.json")


if __name__ == "__main__":
    main()
