"""Monte Carlo experiment runner.

Reproduces the GPH misspecification table (table1), the analytic AR and
fractional efficiency-loss tables (table2, table3) and the data behind the
figures, with deterministic index-derived seeding: the per-replication seed
is a pure function of (master_seed, cell index, replication index), so the
result is identical no matter how replications are scheduled across
workers.
"""

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from .estimate import gph_estimate, periodogram
from .fitloss import fit_ar_population, zeta_ar, zeta_fractional
from .model import (
    CsaParams,
    FracParams,
    acf_csa_lags,
    acf_frac_lags,
    csa_ma_coeffs,
    frac_ma_coeffs,
)
from .simulate import generate_csa_fast, generate_frac_fast
from .spectral import circular_convolve

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentResult",
    "run_experiment",
    "replication_seed",
    "resolve_workers",
]

EXPERIMENTS = (
    "table1",
    "table2",
    "table3",
    "fig_acf_shortmem",
    "fig_filter_match",
    "fig_antipersistence_acf",
    "fig_mean_periodogram",
    "fig_ar1_loss",
)

TABLE_A_GRID = (0.1, 0.5, 0.9, 1.3, 1.7)
TABLE_B_GRID = (1.8, 1.6, 1.4, 1.2, 1.1)
TABLE1_D_GRID = (0.4, 0.2, -0.2, -0.4)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    sample_size: int = 4096
    replications: int = 1000
    master_seed: int = 20240817
    parameter_grid: tuple = ()  # empty: use the experiment's default grid

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}"
            )
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.sample_size < 8:
            raise ValueError("sample_size must be >= 8")

    @classmethod
    def from_file(cls, path):
        """Load from a JSON file.

        Schema: {"experiment": str, "sample_size": int, "replications": int,
        "master_seed": int, "parameter_grid": [{"process": "csa", "a": .., "b": ..,
        "sigma_eps": ..} | {"process": "frac", "d": ..}, ...]}; all keys but
        "experiment" are optional.
        """
        with open(path) as fh:
            raw = json.load(fh)
        grid = tuple(_params_from_dict(entry) for entry in raw.pop("parameter_grid", []))
        return cls(parameter_grid=grid, **raw)

    def describe(self):
        out = {
            "experiment": self.experiment,
            "sample_size": self.sample_size,
            "replications": self.replications,
            "master_seed": self.master_seed,
            "parameter_grid": [_params_to_dict(p) for p in self.parameter_grid],
        }
        return out


def _params_from_dict(entry):
    entry = dict(entry)
    process = entry.pop("process")
    if process == "csa":
        return CsaParams(**entry)
    if process == "frac":
        return FracParams(**entry)
    raise ValueError(f"unknown process {process!r}")


def _params_to_dict(p):
    if isinstance(p, CsaParams):
        return {"process": "csa", "a": p.a, "b": p.b, "sigma_eps": p.sigma_eps}
    return {"process": "frac", "d": p.d}


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple  # one dict per (cell, statistic)
    metadata: dict

    def write_csv(self, path):
        keys = []
        for row in self.rows:
            for k in row:
                if k not in keys:
                    keys.append(k)
        lines = ["# " + json.dumps(self.metadata, sort_keys=True)]
        lines.append(",".join(keys))
        for row in self.rows:
            lines.append(",".join(_csv_cell(row.get(k)) for k in keys))
        _atomic_write(path, "\n".join(lines) + "\n")

    def write_json(self, path):
        payload = {"metadata": self.metadata, "rows": list(self.rows)}
        _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _atomic_write(path, text):
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def replication_seed(master_seed, cell_index, rep_index):
    """Seed sequence for one replication, independent of scheduling order."""
    return np.random.SeedSequence((master_seed, cell_index, rep_index))


def resolve_workers(workers=None):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("NONFRAC_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_experiment(cfg, workers=None):
    """Run one configured experiment and return its full result.

    Deterministic given the config; rows are emitted only once every cell
    finished, never partially.
    """
    t0 = time.perf_counter()
    runner = _RUNNERS[cfg.experiment]
    rows = runner(cfg, resolve_workers(workers))
    metadata = {
        "config": cfg.describe(),
        "wall_seconds": round(time.perf_counter() - t0, 3),
        "version": __version__,
    }
    return ExperimentResult(rows=tuple(rows), metadata=metadata)


# ---------------------------------------------------------------------------
# table 1: GPH estimates on simulated CSA and I(d) paths


def _table1_grid(cfg):
    if cfg.parameter_grid:
        return cfg.parameter_grid
    grid = []
    for d in TABLE1_D_GRID:
        grid.append(CsaParams(a=0.2, b=2.0 * (1.0 - d)))
        grid.append(FracParams(d=d))
    return tuple(grid)


def _gph_rep(task):
    master_seed, cell_index, rep_index, params, sample_size = task
    seed = replication_seed(master_seed, cell_index, rep_index)
    if isinstance(params, CsaParams):
        sample = generate_csa_fast(params, sample_size, seed)
    else:
        sample = generate_frac_fast(params, sample_size, seed)
    return gph_estimate(sample.values).d_hat


def _map_tasks(fn, tasks, workers):
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def _run_table1(cfg, workers):
    rows = []
    for cell_index, params in enumerate(_table1_grid(cfg)):
        tasks = [
            (cfg.master_seed, cell_index, r, params, cfg.sample_size)
            for r in range(cfg.replications)
        ]
        d_hats = np.array(_map_tasks(_gph_rep, tasks, workers))
        stats = {
            "mean_d_hat": float(d_hats.mean()),
            "sd_d_hat": float(d_hats.std(ddof=1)) if d_hats.size > 1 else 0.0,
            "count": d_hats.size,
        }
        base = _params_to_dict(params)
        nominal = params.memory_d if isinstance(params, CsaParams) else params.d
        for stat, value in stats.items():
            rows.append({"cell": cell_index, **base, "nominal_d": nominal, "statistic": stat, "value": value})
    return rows


# ---------------------------------------------------------------------------
# tables 2 and 3: analytic efficiency-loss grids


def _csa_grid(cfg):
    if cfg.parameter_grid:
        return cfg.parameter_grid
    return tuple(CsaParams(a=a, b=b) for a in TABLE_A_GRID for b in TABLE_B_GRID)


def _run_table2(cfg, workers):
    rows = []
    for cell_index, p in enumerate(_csa_grid(cfg)):
        for order in (1, 20):
            coeffs = fit_ar_population(p, order)
            rows.append(
                {
                    "cell": cell_index,
                    "a": p.a,
                    "b": p.b,
                    "statistic": f"zeta_ar{order}",
                    "value": zeta_ar(p, coeffs),
                }
            )
    return rows


def _run_table3(cfg, workers):
    rows = []
    for cell_index, p in enumerate(_csa_grid(cfg)):
        pure, arfima = zeta_fractional(p)
        for stat, value in (
            ("zeta_id", pure.zeta),
            ("zeta_arfima", arfima.zeta),
            ("alpha_i", arfima.fitted_params[0]),
        ):
            rows.append(
                {"cell": cell_index, "a": p.a, "b": p.b, "statistic": stat, "value": value}
            )
    return rows


# ---------------------------------------------------------------------------
# figure data


def _run_fig_acf_shortmem(cfg, workers):
    grid = cfg.parameter_grid or tuple(
        CsaParams(a=a, b=1.6) for a in (0.1, 0.5, 1.0, 2.0)
    )
    lags = 50
    rows = []
    for cell_index, p in enumerate(grid):
        acf = acf_csa_lags(p, lags)
        for lag, value in enumerate(acf):
            rows.append(
                {
                    "cell": cell_index,
                    "a": p.a,
                    "b": p.b,
                    "lag": lag,
                    "statistic": "acf",
                    "value": float(value),
                }
            )
    return rows


def _sample_acf(x, max_lag):
    x = x - x.mean()
    denom = float(np.dot(x, x))
    return np.array(
        [float(np.dot(x[k:], x[: x.size - k])) / denom for k in range(max_lag + 1)]
    )


def _run_fig_filter_match(cfg, workers):
    # one shared innovation stream filtered by both mechanisms
    frac = FracParams(d=0.2)
    csa = CsaParams(a=0.12, b=1.6)
    T = cfg.sample_size
    rng = np.random.default_rng(replication_seed(cfg.master_seed, 0, 0))
    eps = rng.standard_normal(T)
    series = {
        "frac": circular_convolve(eps, frac_ma_coeffs(frac, T).weights),
        "csa": circular_convolve(eps, csa_ma_coeffs(csa, T).weights),
    }
    rows = []
    for name, values in series.items():
        for t, v in enumerate(values):
            rows.append({"series": name, "index": t, "statistic": "value", "value": float(v)})
        for lag, v in enumerate(_sample_acf(values, 50)):
            rows.append({"series": name, "index": lag, "statistic": "sample_acf", "value": float(v)})
    return rows


def _run_fig_antipersistence_acf(cfg, workers):
    grid = cfg.parameter_grid or (FracParams(d=-0.2), CsaParams(a=0.09, b=2.4))
    lags = 110
    rows = []
    for cell_index, p in enumerate(grid):
        if isinstance(p, CsaParams):
            acf = acf_csa_lags(p, lags)
            base = {"process": "csa", "a": p.a, "b": p.b}
        else:
            acf = acf_frac_lags(p, lags)
            base = {"process": "frac", "d": p.d}
        for lag, value in enumerate(acf):
            rows.append(
                {"cell": cell_index, **base, "lag": lag, "statistic": "acf", "value": float(value)}
            )
    return rows


def _periodogram_rep(task):
    master_seed, cell_index, rep_index, params, sample_size = task
    seed = replication_seed(master_seed, cell_index, rep_index)
    if isinstance(params, CsaParams):
        sample = generate_csa_fast(params, sample_size, seed)
    else:
        sample = generate_frac_fast(params, sample_size, seed)
    return periodogram(sample.values).ordinates


def _run_fig_mean_periodogram(cfg, workers):
    grid = cfg.parameter_grid or tuple(
        p
        for d in (0.4, -0.4)
        for p in (FracParams(d=d), CsaParams(a=0.2, b=2.0 * (1.0 - d)))
    )
    rows = []
    for cell_index, params in enumerate(grid):
        tasks = [
            (cfg.master_seed, cell_index, r, params, cfg.sample_size)
            for r in range(cfg.replications)
        ]
        ordinates = _map_tasks(_periodogram_rep, tasks, workers)
        mean_pgram = np.mean(np.stack(ordinates), axis=0)
        m = (cfg.sample_size - 1) // 2
        freqs = 2.0 * np.pi * np.arange(1, m + 1) / cfg.sample_size
        base = _params_to_dict(params)
        for freq, value in zip(freqs, mean_pgram):
            rows.append(
                {
                    "cell": cell_index,
                    **base,
                    "frequency": float(freq),
                    "statistic": "mean_periodogram",
                    "value": float(value),
                }
            )
    return rows


def _run_fig_ar1_loss(cfg, workers):
    b_values = (1.8, 1.6, 1.4, 1.2)
    a_values = np.round(np.arange(0.05, 3.0001, 0.05), 2)
    rows = []
    for b in b_values:
        for a in a_values:
            p = CsaParams(a=float(a), b=b)
            alpha1 = float(fit_ar_population(p, 1)[0])
            rows.append({"a": float(a), "b": b, "statistic": "alpha_1", "value": alpha1})
            rows.append(
                {
                    "a": float(a),
                    "b": b,
                    "statistic": "zeta_ar1",
                    "value": zeta_ar(p, [alpha1]),
                }
            )
    return rows


_RUNNERS = {
    "table1": _run_table1,
    "table2": _run_table2,
    "table3": _run_table3,
    "fig_acf_shortmem": _run_fig_acf_shortmem,
    "fig_filter_match": _run_fig_filter_match,
    "fig_antipersistence_acf": _run_fig_antipersistence_acf,
    "fig_mean_periodogram": _run_fig_mean_periodogram,
    "fig_ar1_loss": _run_fig_ar1_loss,
}
