"""Observation simulation and projected log-likelihood evaluation.

The data are a noisy image Y = K_theta f + eps*Z observed through its basis
coefficients Y_k, plus an independent noisy sample T = theta + delta*W of the
operator parameter. The projected log-likelihood keeps exactly the terms of
the density exponent that depend on (f, theta); all additive constants are
dropped, consistently across calls, so Metropolis ratios are unambiguous.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .basis import CoefficientVector, coefficients_from_csv, coefficients_to_csv
from .errors import LevelMismatch
from .operator import (
    ModelKind,
    OperatorModel,
    ThetaParam,
    singular_values,
)


@dataclass(frozen=True)
class Observation:
    y: CoefficientVector
    t: ThetaParam
    eps: float
    delta: float
    seed: int
    model: OperatorModel


def simulate(
    model: OperatorModel,
    f0: CoefficientVector,
    theta0: ThetaParam,
    eps: float,
    delta: float,
    n_sim: int,
    seed: int,
    allow_zero_noise: bool = False,
) -> Observation:
    """Draw Y_k = rho_{theta0,k} f0_k + eps*N(0,1) for |k| <= n_sim and
    T = theta0 + delta*N(0,1) (per coordinate). Deterministic given the seed.

    Zero noise levels are rejected unless ``allow_zero_noise`` is set (test
    hook for noiseless exactness checks).
    """
    if n_sim < f0.level:
        raise LevelMismatch(f"n_sim={n_sim} below the truth level {f0.level}")
    if (eps <= 0 or delta <= 0) and not allow_zero_noise:
        raise LevelMismatch("noise levels must be positive")
    rng = np.random.default_rng(seed)
    rho = singular_values(model, theta0, n_sim)
    signal = np.zeros(model.basis.dim(n_sim))
    signal[: f0.coeffs.size] = f0.coeffs
    y = rho * signal + eps * rng.standard_normal(signal.size)
    if theta0.is_scalar:
        t = ThetaParam.scalar(theta0.value + delta * rng.standard_normal())
    else:
        n_levels = n_sim - model.basis.min_level + 1
        if theta0.values.size < n_levels:
            raise LevelMismatch("theta0 does not cover all simulated levels")
        t = ThetaParam.sequence(
            theta0.values[:n_levels] + delta * rng.standard_normal(n_levels)
        )
    return Observation(
        y=CoefficientVector(model.basis, n_sim, y),
        t=t,
        eps=eps,
        delta=delta,
        seed=seed,
        model=model,
    )


def _theta_terms(obs: Observation, theta: ThetaParam, j: int) -> float:
    """delta^{-2}<P_j theta, T> - (2 delta^2)^{-1} ||P_j theta||^2."""
    d2 = obs.delta**2
    if theta.is_scalar:
        if not obs.t.is_scalar:
            raise LevelMismatch("scalar parameter against sequence observation")
        return (theta.value * obs.t.value - 0.5 * theta.value**2) / d2
    n = j - obs.model.basis.min_level + 1
    if theta.values.size < n or obs.t.values.size < n:
        raise LevelMismatch(f"parameter does not cover levels up to {j}")
    th = theta.values[:n]
    return float((th @ obs.t.values[:n] - 0.5 * th @ th) / d2)


def log_likelihood_projected(
    obs: Observation, f: CoefficientVector, theta: ThetaParam, j: int
) -> float:
    """Exponent of the level-j projected observation density at (f, theta).

    Telescopes over coordinates: raising j only adds per-coordinate terms.
    A scalar theta enters its terms directly, without projection.
    """
    if not (f.level <= j <= obs.y.level):
        raise LevelMismatch(f"need f.level <= {j} <= observation level")
    rho = singular_values(obs.model, theta, f.level)
    kf = rho * f.coeffs
    y = obs.y.coeffs[: kf.size]
    e2 = obs.eps**2
    val = (kf @ y - 0.5 * kf @ kf) / e2
    return float(val + _theta_terms(obs, theta, j))


def log_prior_theta(theta: ThetaParam, prior) -> float:
    """Centered Gaussian log-density of theta, additive constant dropped."""
    s2 = prior.sigma_theta_sq
    if theta.is_scalar:
        return -0.5 * theta.value**2 / s2
    return float(-0.5 * np.sum(theta.values**2) / s2)


def log_prior_f(f: CoefficientVector, prior) -> float:
    """Centered Gaussian log-density of the coefficients, constant dropped."""
    tau = prior.tau_sq_per_coefficient(f.basis, f.level)
    return float(-0.5 * np.sum(f.coeffs**2 / tau))


# --- serialization -----------------------------------------------------------


def save_observation(obs: Observation, directory) -> None:
    """Write y.csv / t.csv plus a metadata header (meta.json)."""
    import os

    os.makedirs(directory, exist_ok=True)
    coefficients_to_csv(obs.y, os.path.join(directory, "y.csv"))
    with open(os.path.join(directory, "t.csv"), "w", newline="") as fh:
        fh.write("index,value\n")
        if obs.t.is_scalar:
            fh.write(f"0,{obs.t.value:.17g}\n")
        else:
            for i, v in enumerate(obs.t.values):
                fh.write(f"{i},{v:.17g}\n")
    meta = {
        "eps": obs.eps,
        "delta": obs.delta,
        "seed": obs.seed,
        "model": obs.model.kind.value,
        "basis": obs.model.basis.kind.value,
        "t_time": obs.model.t_time,
        "level": obs.y.level,
        "theta_kind": obs.t.kind.value,
    }
    with open(os.path.join(directory, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=1, sort_keys=True)


def load_observation(directory) -> Observation:
    import os

    from .basis import BasisKind, BasisSpec

    with open(os.path.join(directory, "meta.json")) as fh:
        meta = json.load(fh)
    basis = BasisSpec(BasisKind(meta["basis"]))
    model = OperatorModel(ModelKind(meta["model"]), basis, t_time=meta["t_time"])
    y = coefficients_from_csv(basis, meta["level"], os.path.join(directory, "y.csv"))
    with open(os.path.join(directory, "t.csv")) as fh:
        next(fh)
        vals = [float(line.split(",")[1]) for line in fh if line.strip()]
    if meta["theta_kind"] == "scalar":
        t = ThetaParam.scalar(vals[0])
    else:
        t = ThetaParam.sequence(vals)
    return Observation(
        y=y, t=t, eps=meta["eps"], delta=meta["delta"], seed=meta["seed"], model=model
    )
