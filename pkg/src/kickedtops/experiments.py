"""Configuration-driven experiment runner.

Experiments are described by INI config files and produce CSV outputs plus a
JSON manifest that records the configuration, code version, seed, wall-clock
time, and a sha256 checksum for every file written.  Identical config and seed
always produce byte-identical outputs.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .spin import SpinBasis, CoherentParams, coherent_state, husimi
from .quantum import TopParams, variance_series
from .classical import (
    ClassicalPoint,
    sample_ensemble,
    ensemble_variance_series,
    average_lyapunov,
    poincare_section,
)
from .coupled import CoupledParams, entropy_series
from .perturbation import (
    SIGMA_SAT_SQ,
    D_0,
    RateOutOfDomainError,
    correlation_matrix,
    product_correlation,
    production_rate,
    gamma_eff,
    estimate_omega,
    sigma_sq_estimate,
)

EXPERIMENT_KINDS = (
    "single-top",
    "classical",
    "coupled",
    "sweep-eps",
    "sweep-k",
    "correlation",
    "weak-chaos-scan",
    "pheno-fit",
)

# Initial conditions in the chaotic sea of the classical map at k = 3,
# selected by requiring a finite-time Lyapunov exponent above 0.25.
# Overridable through the [initial] section's init_set option.
CHAOTIC_SEA_SET = (
    (0.89, 0.63),
    (0.79, 1.81),
    (1.892, -1.412),
    (2.393, -1.777),
    (1.481, -1.4),
    (0.648, -2.326),
    (2.56, -1.857),
    (1.242, 0.576),
    (1.115, 1.427),
)


class ConfigError(ValueError):
    """Raised when an experiment config fails validation."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of one experiment."""

    kind: str
    j: float = 80.0
    k_values: tuple[float, ...] = (3.0,)
    eps_values: tuple[float, ...] = (1e-3,)
    init1: tuple[float, float] = (0.89, 0.63)
    init2: tuple[float, float] = (0.89, 0.63)
    init_set: tuple[tuple[float, float], ...] = CHAOTIC_SEA_SET
    theta2_grid: tuple[float, ...] = ()
    horizon: int = 128
    fit_window: tuple[int, int] = (20, 100)
    ensemble: int = 100
    lyapunov_horizon: int = 300
    sigma: float = 0.0  # 0 means the coherent-state width 1/sqrt(j)
    omega_pad: int = 4
    seed: int = 0
    workers: int = 4
    output: str = "runs"

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"kind: unknown experiment kind {self.kind!r}")
        if self.j <= 0 or (2 * self.j) != int(round(2 * self.j)):
            raise ConfigError(f"j: must be a positive half integer, got {self.j}")
        if not self.k_values:
            raise ConfigError("k: at least one kick strength required")
        for eps in self.eps_values:
            if eps < 0:
                raise ConfigError(f"eps: coupling must be nonnegative, got {eps}")
        if self.horizon < 1:
            raise ConfigError(f"horizon: must be at least 1, got {self.horizon}")
        lo, hi = self.fit_window
        if not (0 <= lo < hi <= self.horizon):
            raise ConfigError(
                f"fit_window: need 0 <= lo < hi <= horizon, got ({lo}, {hi})"
            )
        if self.ensemble < 1:
            raise ConfigError(f"ensemble: must be positive, got {self.ensemble}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be positive, got {self.workers}")
        if self.sigma < 0:
            raise ConfigError(f"sigma: must be nonnegative, got {self.sigma}")
        if self.kind == "weak-chaos-scan" and not self.theta2_grid:
            raise ConfigError("theta2_grid: required for weak-chaos-scan")

    @property
    def k(self) -> float:
        return self.k_values[0]

    @property
    def eps(self) -> float:
        return self.eps_values[0]

    @property
    def ensemble_sigma(self) -> float:
        return self.sigma if self.sigma > 0 else float(self.j) ** -0.5

    def to_dict(self) -> dict:
        return asdict(self)


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.replace(",", " ").split())


def _parse_pairs(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for line in text.strip().splitlines():
        vals = _parse_floats(line)
        if len(vals) != 2:
            raise ConfigError(f"init_set: expected 'theta phi' pairs, got {line!r}")
        pairs.append((vals[0], vals[1]))
    return tuple(pairs)


def load_config(path: str | Path, overrides: dict | None = None) -> ExperimentConfig:
    """Parse an INI experiment config; `overrides` wins over file values."""
    parser = configparser.ConfigParser()
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    if not read:
        raise ConfigError(f"config file not found: {path}")
    merged: dict = {}
    if not parser.has_section("experiment"):
        raise ConfigError("missing [experiment] section")
    exp = parser["experiment"]
    merged["kind"] = exp.get("kind", "")
    merged["seed"] = exp.getint("seed", 0)
    merged["output"] = exp.get("output", "runs")
    merged["workers"] = exp.getint("workers", 4)
    if parser.has_section("system"):
        sys_ = parser["system"]
        merged["j"] = sys_.getfloat("j", 80.0)
        merged["k_values"] = _parse_floats(sys_.get("k", "3.0"))
        merged["eps_values"] = _parse_floats(sys_.get("eps", "1e-3"))
    if parser.has_section("initial"):
        init = parser["initial"]
        merged["init1"] = (init.getfloat("theta1", 0.89), init.getfloat("phi1", 0.63))
        merged["init2"] = (
            init.getfloat("theta2", merged["init1"][0]),
            init.getfloat("phi2", merged["init1"][1]),
        )
        if init.get("init_set", ""):
            merged["init_set"] = _parse_pairs(init["init_set"])
        if init.get("theta2_grid", ""):
            merged["theta2_grid"] = _parse_floats(init["theta2_grid"])
    if parser.has_section("run"):
        run = parser["run"]
        merged["horizon"] = run.getint("horizon", 128)
        merged["fit_window"] = (run.getint("fit_lo", 20), run.getint("fit_hi", 100))
        merged["ensemble"] = run.getint("ensemble", 100)
        merged["lyapunov_horizon"] = run.getint("lyapunov_horizon", 300)
        merged["sigma"] = run.getfloat("sigma", 0.0)
        merged["omega_pad"] = run.getint("omega_pad", 4)
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig(**merged)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


@dataclass
class RunManifest:
    """Record of one experiment run, written next to its outputs."""

    config: dict
    version: str = __version__
    seed: int = 0
    wall_clock_s: float = 0.0
    checksums: dict = field(default_factory=dict)
    status: str = "ok"
    error: str = ""

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_csv(path: Path, header: list[str], rows) -> None:
    """Write rows with full round-trip float precision."""
    def fmt(v) -> str:
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        return repr(float(v))

    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# experiment runners; each returns a list of written file paths


def _run_single_top(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    params = TopParams(cfg.j, cfg.k)
    init = CoherentParams(*cfg.init1)
    series = variance_series(params, init, cfg.horizon)
    var_path = outdir / "variance.csv"
    write_csv(var_path, ["t", "sigma2"], zip(series.times, series.values))
    basis = SpinBasis(cfg.j)
    state = coherent_state(basis, init)
    thetas = np.linspace(0.0, np.pi, 64)
    phis = np.linspace(-np.pi, np.pi, 128, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    q = husimi(state, list(zip(tt.ravel(), pp.ravel())))
    hus_path = outdir / "husimi.csv"
    write_csv(hus_path, ["theta", "phi", "Q"], zip(tt.ravel(), pp.ravel(), q))
    return [var_path, hus_path]


def _run_classical(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    init = CoherentParams(*cfg.init1)
    ens = sample_ensemble(init, cfg.ensemble_sigma, cfg.ensemble, cfg.seed)
    series = ensemble_variance_series(ens, cfg.k, cfg.horizon)
    var_path = outdir / "variance.csv"
    write_csv(var_path, ["t", "sigma2"], zip(series.times, series.values))
    rng = np.random.default_rng(cfg.seed)
    origins = [
        ClassicalPoint.from_angles(t, p)
        for t, p in zip(
            rng.uniform(0.05, np.pi - 0.05, 24), rng.uniform(-np.pi, np.pi, 24)
        )
    ]
    orbits = poincare_section(cfg.k, origins, cfg.horizon)
    rows = []
    for oid, orbit in enumerate(orbits):
        for t, (theta, phi) in enumerate(orbit):
            rows.append((oid, t, theta, phi))
    poi_path = outdir / "poincare.csv"
    write_csv(poi_path, ["orbit_id", "t", "theta", "phi"], rows)
    return [var_path, poi_path]


def _run_coupled(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    params = CoupledParams(cfg.j, cfg.k, cfg.k_values[-1], cfg.eps)
    series = entropy_series(
        params, CoherentParams(*cfg.init1), CoherentParams(*cfg.init2), cfg.horizon
    )
    path = outdir / "entropy.csv"
    write_csv(path, ["t", "S_lin", "S_vN"], zip(series.times, series.s_lin, series.s_vn))
    return [path]


def _run_correlation(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    c1 = correlation_matrix(TopParams(cfg.j, cfg.k), CoherentParams(*cfg.init1), cfg.horizon)
    c2 = correlation_matrix(
        TopParams(cfg.j, cfg.k_values[-1]), CoherentParams(*cfg.init2), cfg.horizon
    )
    d = product_correlation(c1, c2)
    rows = []
    for l in range(1, d.horizon + 1):
        for m in range(1, l + 1):
            val = d.at(l, m)
            rows.append((l, l - m, val.real, val.imag))
    path = outdir / "correlation.csv"
    write_csv(path, ["t", "tau", "ReD", "ImD"], rows)
    return [path]


def _map_ordered(fn, items, workers: int) -> list:
    """Run fn over items concurrently; results keep the input order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _run_sweep_eps(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    init1, init2 = CoherentParams(*cfg.init1), CoherentParams(*cfg.init2)

    def point(eps: float):
        params = CoupledParams(cfg.j, cfg.k, cfg.k_values[-1], eps)
        series = entropy_series(params, init1, init2, cfg.horizon)
        return eps, series.s_lin[-1], series.s_vn[-1]

    rows = _map_ordered(point, list(cfg.eps_values), cfg.workers)
    path = outdir / "sweep_eps.csv"
    write_csv(path, ["eps", "S_lin", "S_vN"], rows)
    return [path]


def _run_sweep_k(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    def point(item):
        k, (theta, phi) = item
        params = CoupledParams(cfg.j, k, k, cfg.eps)
        init = CoherentParams(theta, phi)
        series = entropy_series(params, init, init, cfg.horizon)
        rate = production_rate(series.times, series.s_lin, cfg.fit_window)
        gamma0 = 2 * cfg.eps**2 * cfg.j**2 * D_0
        return k, theta, phi, rate / gamma0

    items = [(k, ic) for k in cfg.k_values for ic in cfg.init_set]
    rows = _map_ordered(point, items, cfg.workers)
    path = outdir / "sweep_k.csv"
    write_csv(path, ["k", "theta", "phi", "Gamma_over_Gamma0"], rows)
    return [path]


FIT_HEADER = [
    "k",
    "theta",
    "phi",
    "Gamma_over_Gamma0",
    "Gamma_vN_over_Gamma0_tilde",
    "gamma_eff",
    "gamma_eff_valid",
    "lambda_sum",
    "omega",
    "sigma2_sq_over_sigma_sat_sq",
]


def _fit_row(cfg: ExperimentConfig, k: float, init1: CoherentParams, init2: CoherentParams, seed: int):
    params = CoupledParams(cfg.j, k, k, cfg.eps)
    series = entropy_series(params, init1, init2, cfg.horizon)
    gamma0 = 2 * cfg.eps**2 * cfg.j**2 * D_0
    gamma0_vn = 2 * cfg.eps**1.8 * cfg.j**2 * D_0
    rate = production_rate(series.times, series.s_lin, cfg.fit_window)
    rate_vn = production_rate(series.times, series.s_vn, cfg.fit_window)
    try:
        geff = gamma_eff(rate, gamma0)
        geff_ok = 1
    except RateOutOfDomainError:
        geff = float("inf")
        geff_ok = 0
    sigma = cfg.ensemble_sigma
    lam = average_lyapunov(init1, k, sigma, cfg.ensemble, cfg.lyapunov_horizon, seed)
    lam += average_lyapunov(init2, k, sigma, cfg.ensemble, cfg.lyapunov_horizon, seed + 1)
    top_hor = min(cfg.horizon, cfg.fit_window[1])
    c1 = correlation_matrix(TopParams(cfg.j, k), init1, top_hor)
    c2 = correlation_matrix(TopParams(cfg.j, k), init2, top_hor)
    omega = estimate_omega(product_correlation(c1, c2), cfg.omega_pad).omega
    s2 = sigma_sq_estimate(c2, cfg.fit_window)
    return (
        k,
        init2.theta,
        init2.phi,
        rate / gamma0,
        rate_vn / gamma0_vn,
        geff,
        geff_ok,
        lam,
        omega,
        s2 / SIGMA_SAT_SQ,
    )


def _run_pheno_fit(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    def point(item):
        idx, (k, (theta, phi)) = item
        init = CoherentParams(theta, phi)
        return _fit_row(cfg, k, init, init, cfg.seed + 2 * idx)

    items = list(enumerate((k, ic) for k in cfg.k_values for ic in cfg.init_set))
    rows = _map_ordered(point, items, cfg.workers)
    path = outdir / "fit_report.csv"
    write_csv(path, FIT_HEADER, rows)
    return [path]


def _run_weak_chaos_scan(cfg: ExperimentConfig, outdir: Path) -> list[Path]:
    init1 = CoherentParams(*cfg.init1)
    phi2 = cfg.init2[1]

    def point(item):
        idx, theta2 = item
        return _fit_row(cfg, cfg.k, init1, CoherentParams(theta2, phi2), cfg.seed + 2 * idx)

    rows = _map_ordered(point, list(enumerate(cfg.theta2_grid)), cfg.workers)
    path = outdir / "fit_report.csv"
    write_csv(path, FIT_HEADER, rows)
    return [path]


_RUNNERS = {
    "single-top": _run_single_top,
    "classical": _run_classical,
    "coupled": _run_coupled,
    "correlation": _run_correlation,
    "sweep-eps": _run_sweep_eps,
    "sweep-k": _run_sweep_k,
    "weak-chaos-scan": _run_weak_chaos_scan,
    "pheno-fit": _run_pheno_fit,
}


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    """Execute one experiment, writing outputs plus manifest.json."""
    outdir = Path(cfg.output)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(config=cfg.to_dict(), seed=cfg.seed)
    start = time.perf_counter()
    written: list[Path] = []
    try:
        written = _RUNNERS[cfg.kind](cfg, outdir)
    except (FloatingPointError, np.linalg.LinAlgError, ValueError) as exc:
        manifest.status = "numerical-failure"
        manifest.error = f"{type(exc).__name__}: {exc}"
    manifest.wall_clock_s = time.perf_counter() - start
    manifest.checksums = {p.name: _sha256(p) for p in written}
    manifest.write(outdir / "manifest.json")
    return manifest
