"""Truncated product priors and the Metropolis-within-Gibbs posterior sampler.

The prior puts independent centered Gaussians on the coefficients of f up to
a truncation level J (variances tau_j^2 per level) and on the operator
parameter (variance sigma^2 per coordinate). Given the parameter, the
coefficient posterior factorizes into the per-coordinate Gaussians

    f_k | theta, Y  ~  N( rho tau^2 Y_k / (rho^2 tau^2 + eps^2),
                          eps^2 tau^2 / (rho^2 tau^2 + eps^2) ),

which the Gibbs sweep exploits. The parameter block is updated either by a
random-walk Metropolis step (heat model, nonlinear in theta) or by its exact
Gaussian conditional (diagonal SVD model, linear in theta). Posterior means
are reported both Rao-Blackwellized (average of conditional means over the
kept parameter states) and as plain draw averages.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from .basis import BasisSpec, CoefficientVector
from .errors import ChainDiverged, LevelMismatch, ModelMismatch, ShapeMismatch, SingularOperator
from .forward import Observation, log_likelihood_projected, log_prior_theta
from .operator import ModelKind, ThetaKind, ThetaParam, singular_values


@dataclass(frozen=True)
class PriorConfig:
    """Truncated product prior: support V_J for f, per-coordinate Gaussians."""

    level: int
    tau_sq: Union[float, np.ndarray] = 1.0
    sigma_theta_sq: float = 1.0
    theta_kind: ThetaKind = ThetaKind.SCALAR

    def __post_init__(self):
        if np.any(np.asarray(self.tau_sq) <= 0) or self.sigma_theta_sq <= 0:
            raise LevelMismatch("prior variances must be positive")

    def tau_sq_per_level(self, min_level: int) -> np.ndarray:
        n = self.level - min_level + 1
        t = np.asarray(self.tau_sq, dtype=float)
        if t.ndim == 0:
            return np.full(n, float(t))
        if t.size < n:
            raise LevelMismatch("tau_sq does not cover all prior levels")
        return t[:n]

    def tau_sq_per_coefficient(self, basis: BasisSpec, level: int) -> np.ndarray:
        if level > self.level:
            raise LevelMismatch(f"level {level} beyond prior truncation {self.level}")
        per_level = self.tau_sq_per_level(basis.min_level)
        return per_level[basis.levels(level) - basis.min_level]


@dataclass(frozen=True)
class ChainConfig:
    burn_in: int = 1000
    n_keep: int = 500
    thin: int = 5
    proposal_sd: Optional[float] = None  # None -> 2*delta
    adapt_proposal: bool = False
    seed: int = 0

    @property
    def n_iter(self) -> int:
        return self.burn_in + self.n_keep * self.thin


class UpdatePolicy(enum.Enum):
    METROPOLIS = "metropolis"
    EXACT_GAUSSIAN = "exact_gaussian"


@dataclass(frozen=True)
class PosteriorSummary:
    mean_f: CoefficientVector          # Rao-Blackwellized
    mean_f_draws: CoefficientVector    # plain average of the kept f draws
    draws_f: np.ndarray                # (n_keep, dim)
    mean_theta: ThetaParam
    draws_theta: np.ndarray            # (n_keep,) or (n_keep, n_levels)
    cond_var: np.ndarray               # average conditional variance per coefficient
    acceptance_rate: Optional[float]   # None for exact parameter updates
    proposal_sd_final: Optional[float] = None

    def to_csv(self, path) -> None:
        lv = self.mean_f.index_levels
        draw_mean = self.mean_f_draws.coeffs
        with open(path, "w", newline="") as fh:
            fh.write("index,level,rb_mean,draw_mean,cond_var\n")
            for i in range(lv.size):
                fh.write(
                    f"{i},{int(lv[i])},{self.mean_f.coeffs[i]:.17g},"
                    f"{draw_mean[i]:.17g},{self.cond_var[i]:.17g}\n"
                )


def conditional_f_given_theta(obs: Observation, theta: ThetaParam, prior: PriorConfig):
    """Per-coordinate Gaussian conditional of the coefficients given theta.

    Returns (mean, var) arrays over the flattened indices |k| <= prior.level.
    """
    rho = singular_values(obs.model, theta, prior.level)
    if np.any(rho == 0.0):
        raise SingularOperator("a singular value vanishes on the prior support")
    tau = prior.tau_sq_per_coefficient(obs.model.basis, prior.level)
    y = obs.y.coeffs[: rho.size]
    e2 = obs.eps**2
    denom = rho**2 * tau + e2
    return rho * tau * y / denom, e2 * tau / denom


def theta_conditional_gaussian(obs: Observation, f: CoefficientVector, j: int, prior: PriorConfig):
    """Exact per-level Gaussian conditional of theta given f (diagonal SVD only).

    Level ell collects every basis function it carries:
        precision = eps^-2 sum_{|k|=ell} f_k^2 + delta^-2 + sigma^-2
        mean = precision^-1 (eps^-2 sum_{|k|=ell} f_k Y_k + delta^-2 T_ell).
    """
    if obs.model.kind is not ModelKind.SVD_DIAGONAL:
        raise ModelMismatch("exact parameter conditional requires the diagonal SVD model")
    basis = obs.model.basis
    lv = basis.levels(f.level) - basis.min_level
    nl = j - basis.min_level + 1
    if f.level > j:
        raise LevelMismatch("f extends beyond the requested level")
    y = obs.y.coeffs[: f.coeffs.size]
    a = np.zeros(nl)
    b = np.zeros(nl)
    np.add.at(a, lv, f.coeffs**2)
    np.add.at(b, lv, f.coeffs * y)
    if obs.t.is_scalar:
        raise ShapeMismatch("sequence parameter expected")
    prec = a / obs.eps**2 + 1.0 / obs.delta**2 + 1.0 / prior.sigma_theta_sq
    mean = (b / obs.eps**2 + obs.t.values[:nl] / obs.delta**2) / prec
    return mean, 1.0 / prec


def mh_theta_step(
    obs: Observation,
    f: CoefficientVector,
    theta_cur: ThetaParam,
    j: int,
    prior: PriorConfig,
    chain: ChainConfig,
    rng: np.random.Generator,
):
    """One random-walk Metropolis update of the parameter block.

    Symmetric N(0, v^2) proposal, so the acceptance log-ratio is the
    projected log-likelihood difference plus the prior log-ratio. Scalar
    parameters are updated in one step; sequences coordinate by coordinate.
    Returns (theta_new, accepted) with ``accepted`` a flag for scalars and
    the accepted fraction for sequences.
    """
    v = chain.proposal_sd if chain.proposal_sd is not None else 2.0 * obs.delta
    if theta_cur.is_scalar:
        prop = ThetaParam.scalar(theta_cur.value + v * rng.standard_normal())
        dl = (
            log_likelihood_projected(obs, f, prop, j)
            - log_likelihood_projected(obs, f, theta_cur, j)
            + log_prior_theta(prop, prior)
            - log_prior_theta(theta_cur, prior)
        )
        if math.log(rng.uniform()) < dl:
            return prop, True
        return theta_cur, False

    cur = np.array(theta_cur.values, dtype=float)
    accepted = 0
    for i in range(cur.size):
        cand = cur.copy()
        cand[i] += v * rng.standard_normal()
        dl = (
            log_likelihood_projected(obs, f, ThetaParam.sequence(cand), j)
            - log_likelihood_projected(obs, f, ThetaParam.sequence(cur), j)
            - 0.5 * (cand[i] ** 2 - cur[i] ** 2) / prior.sigma_theta_sq
        )
        if math.log(rng.uniform()) < dl:
            cur = cand
            accepted += 1
    return ThetaParam.sequence(cur), accepted / cur.size


def _finite_or_raise(*arrays):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise ChainDiverged("chain produced a non-finite state")


def _write_trace(path, theta_hist, acc_flags):
    theta_hist = np.atleast_2d(theta_hist.T).T
    with open(path, "w", newline="") as fh:
        names = ",".join(f"theta_{i}" for i in range(theta_hist.shape[1]))
        fh.write(f"iter,{names},acc_flag\n")
        for it in range(theta_hist.shape[0]):
            vals = ",".join(f"{v:.17g}" for v in theta_hist[it])
            fh.write(f"{it},{vals},{int(acc_flags[it])}\n")


def gibbs_run(
    obs: Observation,
    prior: PriorConfig,
    chain: ChainConfig,
    policy: UpdatePolicy,
    trace_path=None,
) -> PosteriorSummary:
    """Alternate exact coefficient draws with parameter updates.

    The chain runs burn_in + n_keep*thin iterations, keeping every thin-th
    state after burn-in; the parameter starts at the observed T. The
    Rao-Blackwellized mean averages the conditional coefficient means over
    the kept parameter states. Deterministic given chain.seed.
    """
    basis = obs.model.basis
    J = prior.level
    if J > obs.y.level:
        raise LevelMismatch("prior truncation beyond the observation level")
    n = basis.dim(J)
    lv = basis.levels(J)
    y = np.ascontiguousarray(obs.y.coeffs[:n])
    tau = np.ascontiguousarray(prior.tau_sq_per_coefficient(basis, J))
    rng = np.random.default_rng(chain.seed)
    niter = chain.n_iter
    v0 = chain.proposal_sd if chain.proposal_sd is not None else 2.0 * obs.delta

    if obs.model.kind is ModelKind.HEAT:
        if policy is not UpdatePolicy.METROPOLIS:
            raise ModelMismatch("the heat parameter has no exact Gaussian conditional")
        decay = np.ascontiguousarray(np.pi**2 * lv.astype(float) ** 2 * obs.model.t_time)
        normals_f = rng.standard_normal((niter, n))
        normals_th = rng.standard_normal(niter)
        unifs = rng.uniform(size=niter)
        draws_f, theta_hist, acc_flags, rb_mean, rb_var, v_final = kernels.heat_chain(
            y, decay, obs.t.value, obs.eps, obs.delta, tau, prior.sigma_theta_sq,
            obs.t.value, chain.burn_in, chain.n_keep, chain.thin, v0,
            chain.adapt_proposal, normals_f, normals_th, unifs,
        )
        kept_idx = chain.burn_in + np.arange(1, chain.n_keep + 1) * chain.thin - 1
        draws_theta = theta_hist[kept_idx]
        mean_theta = ThetaParam.scalar(float(draws_theta.mean()))
        acc_rate = float(acc_flags[chain.burn_in:].mean())
    elif policy is UpdatePolicy.EXACT_GAUSSIAN:
        nl = J - basis.min_level + 1
        t_lv = np.ascontiguousarray(obs.t.values[:nl])
        lvl_idx = np.ascontiguousarray(lv - basis.min_level, dtype=np.intc)
        normals_f = rng.standard_normal((niter, n))
        normals_th = rng.standard_normal((niter, nl))
        draws_f, theta_hist, rb_mean, rb_var = kernels.svd_chain(
            y, lvl_idx, t_lv, obs.eps, obs.delta, tau, prior.sigma_theta_sq,
            t_lv, chain.burn_in, chain.n_keep, chain.thin, normals_f, normals_th,
        )
        kept_idx = chain.burn_in + np.arange(1, chain.n_keep + 1) * chain.thin - 1
        draws_theta = theta_hist[kept_idx]
        mean_theta = ThetaParam.sequence(draws_theta.mean(axis=0))
        acc_flags = np.ones(niter, dtype=np.uint8)
        acc_rate, v_final = None, None
    else:
        # Metropolis sweep on a sequence parameter: plain Python path, used
        # for cross-checking the exact Gaussian update on small problems.
        draws_f, theta_hist, acc_flags, rb_mean, rb_var, draws_theta = _svd_mh_chain(
            obs, prior, chain, rng
        )
        mean_theta = ThetaParam.sequence(draws_theta.mean(axis=0))
        acc_rate = float(np.mean(acc_flags[chain.burn_in:]))
        v_final = v0

    _finite_or_raise(draws_f, np.asarray(theta_hist), rb_mean)
    if trace_path is not None:
        _write_trace(trace_path, np.asarray(theta_hist), acc_flags)

    mean_f = CoefficientVector(basis, J, rb_mean)
    mean_f_draws = CoefficientVector(basis, J, draws_f.mean(axis=0))
    return PosteriorSummary(
        mean_f=mean_f,
        mean_f_draws=mean_f_draws,
        draws_f=draws_f,
        mean_theta=mean_theta,
        draws_theta=draws_theta,
        cond_var=rb_var,
        acceptance_rate=acc_rate,
        proposal_sd_final=v_final,
    )


def _svd_mh_chain(obs, prior, chain, rng):
    basis = obs.model.basis
    J = prior.level
    n = basis.dim(J)
    nl = J - basis.min_level + 1
    theta = ThetaParam.sequence(obs.t.values[:nl])
    draws_f = np.empty((chain.n_keep, n))
    draws_theta = np.empty((chain.n_keep, nl))
    theta_hist = np.empty((chain.n_iter, nl))
    acc_flags = np.zeros(chain.n_iter)
    rb_mean = np.zeros(n)
    rb_var = np.zeros(n)
    kept = 0
    for it in range(chain.n_iter):
        mean, var = conditional_f_given_theta(obs, theta, prior)
        f = CoefficientVector(basis, J, mean + np.sqrt(var) * rng.standard_normal(n))
        theta, frac = mh_theta_step(obs, f, theta, J, prior, chain, rng)
        theta_hist[it] = theta.values
        acc_flags[it] = frac
        if it >= chain.burn_in and (it - chain.burn_in + 1) % chain.thin == 0:
            draws_f[kept] = f.coeffs
            draws_theta[kept] = theta.values
            m, v = conditional_f_given_theta(obs, theta, prior)
            rb_mean += m
            rb_var += v
            kept += 1
    return draws_f, theta_hist, acc_flags, rb_mean / chain.n_keep, rb_var / chain.n_keep, draws_theta


def posterior_mean_theta(summary: PosteriorSummary) -> ThetaParam:
    return summary.mean_theta


def rmse_theta(summary: PosteriorSummary, theta0: ThetaParam) -> float:
    """Euclidean error of the posterior parameter mean against the truth."""
    mean = summary.mean_theta
    if mean.is_scalar != theta0.is_scalar:
        raise ShapeMismatch("parameter kinds differ")
    if mean.is_scalar:
        return abs(mean.value - theta0.value)
    n = mean.values.size
    if theta0.values.size < n:
        raise ShapeMismatch("truth does not cover the sampled levels")
    return float(np.linalg.norm(mean.values - theta0.values[:n]))
