"""Experiment harness: Monte Carlo error grids for the two reference setups.

* heat61   — backward heat equation with unknown scalar diffusivity on the
             sine basis (severely ill-posed); fixed projection level
             J = round(sqrt(-ln eps)); Metropolis-within-Gibbs posterior.
* deconv62 — periodic blind deconvolution with a Laplace-kernel truth on the
             trigonometric basis (mildly ill-posed); adaptive level via the
             geometric-grid selection rule; fully conjugate Gibbs posterior.

The truth is f0(x) = 4x(1-x)(8x-5) in both setups. Replications are seeded
as base_seed + replication index (shared across grid cells, so cells see
common random numbers); the chain stream is offset so it never coincides
with the simulation stream. RMISE is computed in coefficient space.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Optional

import numpy as np

from .basis import (
    CoefficientVector,
    SINE_BASIS,
    TRIG_BASIS,
    coefficient_distance,
)
from .errors import ConfigError
from .estimator import GalerkinConfig, LepskiConfig, galerkin_estimate, lepski_select
from .forward import simulate
from .operator import ThetaKind, ThetaParam, heat_model, svd_diagonal_model
from .posterior import ChainConfig, PriorConfig, UpdatePolicy, gibbs_run, rmse_theta

CHAIN_SEED_OFFSET = 1_000_000_007


# --- closed-form ingredients -------------------------------------------------


def f0_values(x):
    """The benchmark truth evaluated pointwise."""
    x = np.asarray(x, dtype=float)
    return 4.0 * x * (1.0 - x) * (8.0 * x - 5.0)


def f0_coefficients(n: int) -> CoefficientVector:
    """Sine-basis coefficients of the benchmark truth up to level n.

    <f0, sqrt(2) sin(pi k .)> = -8 sqrt(2) (13 + 11 (-1)^k) / (pi^3 k^3).
    """
    k = np.arange(1, n + 1, dtype=float)
    coeffs = -8.0 * math.sqrt(2.0) * (13.0 + 11.0 * (-1.0) ** k) / (np.pi**3 * k**3)
    return CoefficientVector(SINE_BASIS, n, coeffs)


def f0_trig_coefficients(n: int) -> CoefficientVector:
    """Trigonometric-basis coefficients of the benchmark truth up to level n.

    Constant -2/3; per frequency j: sine -24 sqrt(2)/(pi^3 j^3),
    cosine 2 sqrt(2)/(pi^2 j^2).
    """
    coeffs = np.empty(2 * n + 1)
    coeffs[0] = -2.0 / 3.0
    j = np.arange(1, n + 1, dtype=float)
    coeffs[1::2] = -24.0 * math.sqrt(2.0) / (np.pi**3 * j**3)
    coeffs[2::2] = 2.0 * math.sqrt(2.0) / (np.pi**2 * j**2)
    return CoefficientVector(TRIG_BASIS, n, coeffs)


def laplace_singular_values(n: int, h: float = 0.1) -> ThetaParam:
    """Singular values of periodic convolution with the normalized
    two-sided exponential kernel of bandwidth h, for levels 0..n."""
    ch = 2.0 * h * (1.0 + math.exp(-1.0 / (2.0 * h)))
    lv = np.arange(0, n + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (
            (2.0 / h)
            / (ch * (4.0 * np.pi**2 * lv**2 + 1.0 / h**2))
            * (
                1.0
                - math.exp(-1.0 / (2.0 * h)) * np.cos(np.pi * lv)
                + math.exp(-1.0 / (2.0 * h)) * 2.0 * np.pi * lv * h * np.sin(np.pi * lv)
            )
        )
    vals[0] = 1.0
    return ThetaParam.sequence(vals)


def heat_level_rule(eps: float) -> int:
    """Projection level J = round(sqrt(-ln eps)) of the heat setup."""
    return round(math.sqrt(-math.log(eps)))


# --- configuration -----------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str
    eps_grid: tuple
    delta_grid: Optional[tuple] = None  # None: delta = eps per cell
    n_mc: int = 500
    base_seed: int = 0
    tau_sq: float = 1.0
    sigma_theta_sq: float = 1.0
    burn_in: int = 1000
    n_keep: int = 500
    thin: int = 5
    proposal_sd: Optional[float] = None
    adapt_proposal: bool = False
    galerkin_tau: float = 2.0
    delta_tune: float = 0.1
    s0: float = 1.0
    t_ill: float = 2.0
    dim_d: int = 1
    grid_base: float = 2.0
    exponent_override: Optional[float] = 1.5
    t_time: float = 0.1
    theta0: float = 1.0
    laplace_h: float = 0.1
    n_sim_factor: int = 4
    workers: int = 1
    output_dir: Optional[str] = None

    def validate(self) -> None:
        if self.preset not in ("heat61", "deconv62"):
            raise ConfigError(f"unknown preset {self.preset!r}")
        if not self.eps_grid:
            raise ConfigError("eps_grid must be non-empty")
        if self.delta_grid is not None and not self.delta_grid:
            raise ConfigError("delta_grid must be non-empty when given")
        for e in list(self.eps_grid) + list(self.delta_grid or []):
            if not 0.0 < e < 1.0:
                raise ConfigError(f"noise level {e} outside (0, 1)")
        if self.n_mc < 1:
            raise ConfigError("n_mc must be at least 1")
        if self.burn_in < 0 or self.n_keep < 1 or self.thin < 1:
            raise ConfigError("invalid chain lengths")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")

    def cells(self) -> list:
        if self.delta_grid is None:
            return [(e, e) for e in self.eps_grid]
        return list(product(self.eps_grid, self.delta_grid))

    def lepski_config(self) -> LepskiConfig:
        return LepskiConfig(
            delta_tune=self.delta_tune,
            s0=self.s0,
            t_ill=self.t_ill,
            dim_d=self.dim_d,
            b=self.grid_base,
            exponent_override=self.exponent_override,
        )

    def chain_config(self, seed: int) -> ChainConfig:
        return ChainConfig(
            burn_in=self.burn_in,
            n_keep=self.n_keep,
            thin=self.thin,
            proposal_sd=self.proposal_sd,
            adapt_proposal=self.adapt_proposal,
            seed=seed,
        )


def heat61_config(**overrides) -> ExperimentConfig:
    cfg = ExperimentConfig(
        preset="heat61",
        eps_grid=(1e-4, 1e-6, 1e-8),
        delta_grid=(1e-4, 1e-6, 1e-8),
        adapt_proposal=True,
    )
    return replace(cfg, **overrides)


def deconv62_config(**overrides) -> ExperimentConfig:
    cfg = ExperimentConfig(
        preset="deconv62",
        eps_grid=(1e-2, 1e-3),
        delta_grid=None,
    )
    return replace(cfg, **overrides)


# --- results -----------------------------------------------------------------


@dataclass(frozen=True)
class RepRecord:
    rep: int
    seed: int
    level: int
    err_post: float
    err_galerkin: float
    theta_err: float


@dataclass(frozen=True)
class CellResult:
    eps: float
    delta: float
    n_mc: int
    rmise_post: float
    rmise_galerkin: float
    rmse_theta: float
    lepski_counts: Optional[dict]
    records: list
    plot_payload: Optional[dict] = None

    def level_frequency(self, levels) -> float:
        if not self.lepski_counts:
            return 0.0
        total = sum(self.lepski_counts.values())
        return sum(self.lepski_counts.get(l, 0) for l in levels) / total


@dataclass
class ExperimentReport:
    preset: str
    config: ExperimentConfig
    cells: list = field(default_factory=list)
    wall_clock: float = 0.0
    partial: bool = False

    def cell(self, eps: float, delta: float) -> CellResult:
        for c in self.cells:
            if c.eps == eps and c.delta == delta:
                return c
        raise KeyError(f"no cell ({eps}, {delta})")


# --- replication workers -----------------------------------------------------


def _error_sq(estimate: CoefficientVector, truth: CoefficientVector) -> float:
    return coefficient_distance(estimate, truth) ** 2


def run_heat_replication(cfg: ExperimentConfig, eps: float, delta: float, rep: int):
    """One heat replication: simulate, Galerkin at the J-rule level, Gibbs."""
    seed = cfg.base_seed + rep
    J = heat_level_rule(eps)
    n_sim = cfg.n_sim_factor * SINE_BASIS.dim(J)
    model = heat_model(cfg.t_time)
    f0 = f0_coefficients(n_sim)
    theta0 = ThetaParam.scalar(cfg.theta0)
    obs = simulate(model, f0, theta0, eps, delta, n_sim, seed)
    gal = galerkin_estimate(obs, J, GalerkinConfig(tau=cfg.galerkin_tau))
    prior = PriorConfig(J, cfg.tau_sq, cfg.sigma_theta_sq, ThetaKind.SCALAR)
    summary = gibbs_run(
        obs, prior, cfg.chain_config(seed + CHAIN_SEED_OFFSET), UpdatePolicy.METROPOLIS
    )
    record = RepRecord(
        rep=rep,
        seed=seed,
        level=J,
        err_post=math.sqrt(_error_sq(summary.mean_f, f0)),
        err_galerkin=math.sqrt(_error_sq(gal.estimate, f0)),
        theta_err=rmse_theta(summary, theta0),
    )
    return record, (f0, gal, summary)


def run_deconv_replication(cfg: ExperimentConfig, eps: float, delta: float, rep: int):
    """One deconvolution replication: simulate, adaptive level, conjugate Gibbs."""
    seed = cfg.base_seed + rep
    lep = cfg.lepski_config()
    from .estimator import max_level

    top = int(round(cfg.grid_base ** max_level(eps, lep)))
    n_sim = cfg.n_sim_factor * TRIG_BASIS.dim(top)
    model = svd_diagonal_model(TRIG_BASIS)
    f0 = f0_trig_coefficients(n_sim)
    theta0 = laplace_singular_values(n_sim, cfg.laplace_h)
    obs = simulate(model, f0, theta0, eps, delta, n_sim, seed)
    sel = lepski_select(obs, lep, GalerkinConfig(tau=cfg.galerkin_tau))
    gal = sel.estimates[sel.level]
    prior = PriorConfig(sel.level, cfg.tau_sq, cfg.sigma_theta_sq, ThetaKind.SEQUENCE)
    summary = gibbs_run(
        obs, prior, cfg.chain_config(seed + CHAIN_SEED_OFFSET), UpdatePolicy.EXACT_GAUSSIAN
    )
    record = RepRecord(
        rep=rep,
        seed=seed,
        level=sel.level,
        err_post=math.sqrt(_error_sq(summary.mean_f, f0)),
        err_galerkin=math.sqrt(_error_sq(gal.estimate, f0)),
        theta_err=rmse_theta(summary, theta0),
    )
    return record, (f0, gal, summary)


def _worker(args):
    cfg, eps, delta, rep = args
    runner = run_heat_replication if cfg.preset == "heat61" else run_deconv_replication
    record, payload = runner(cfg, eps, delta, rep)
    if rep == 0:
        f0, gal, summary = payload
        payload = {
            "truth": f0,
            "galerkin": gal.estimate,
            "post_mean": summary.mean_f,
            "draws": summary.draws_f[:20],
        }
    else:
        payload = None
    return record, payload


def _run_cell(cfg: ExperimentConfig, eps: float, delta: float, with_lepski: bool) -> CellResult:
    args = [(cfg, eps, delta, rep) for rep in range(cfg.n_mc)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_worker, args))
    else:
        results = [_worker(a) for a in args]
    results.sort(key=lambda rp: rp[0].rep)  # order-independent aggregation
    records = [r for r, _ in results]
    payload = next((p for _, p in results if p is not None), None)
    counts = None
    if with_lepski:
        counts = {}
        for r in records:
            counts[r.level] = counts.get(r.level, 0) + 1
    return CellResult(
        eps=eps,
        delta=delta,
        n_mc=cfg.n_mc,
        rmise_post=math.sqrt(float(np.mean([r.err_post**2 for r in records]))),
        rmise_galerkin=math.sqrt(float(np.mean([r.err_galerkin**2 for r in records]))),
        rmse_theta=math.sqrt(float(np.mean([r.theta_err**2 for r in records]))),
        lepski_counts=counts,
        records=records,
        plot_payload=payload,
    )


def _run(cfg: ExperimentConfig, with_lepski: bool) -> ExperimentReport:
    cfg.validate()
    report = ExperimentReport(preset=cfg.preset, config=cfg)
    start = time.perf_counter()
    try:
        for eps, delta in cfg.cells():
            report.cells.append(_run_cell(cfg, eps, delta, with_lepski))
    except KeyboardInterrupt:
        report.partial = True
    report.wall_clock = time.perf_counter() - start
    return report


def run_heat(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.preset != "heat61":
        raise ConfigError("run_heat expects the heat61 preset")
    return _run(cfg, with_lepski=False)


def run_deconvolution(cfg: ExperimentConfig) -> ExperimentReport:
    if cfg.preset != "deconv62":
        raise ConfigError("run_deconvolution expects the deconv62 preset")
    return _run(cfg, with_lepski=True)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    return run_heat(cfg) if cfg.preset == "heat61" else run_deconvolution(cfg)
