"""Galerkin projection estimator with spectral cutoff and adaptive level
selection.

The estimator solves the projected system K_{T,j} f = P_j Y built from the
observed parameter T (coefficient-wise division for the diagonal models) and
falls back to zero when the projected operator is too ill-conditioned
relative to a nominal scale sigma_j. The level is chosen adaptively: the
smallest candidate whose estimator stays within a noise-scaled threshold of
every finer candidate.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import BasisKind, CoefficientVector, coefficient_distance
from .errors import EmptyGrid, LevelMismatch
from .forward import Observation
from .operator import ModelKind, ThetaParam, sigma_schedule, singular_values


class ThetaRefPolicy(enum.Enum):
    PLUG_IN_FROM_T = "plug_in_from_t"
    FIXED = "fixed"


@dataclass(frozen=True)
class GalerkinConfig:
    """Cutoff multiplier tau (> 1) and the source of the sigma_j scale."""

    tau: float = 2.0
    theta_ref_policy: ThetaRefPolicy = ThetaRefPolicy.PLUG_IN_FROM_T
    theta_ref: Optional[ThetaParam] = None

    def __post_init__(self):
        if self.tau <= 1.0:
            raise LevelMismatch("cutoff multiplier tau must exceed 1")
        if self.theta_ref_policy is ThetaRefPolicy.FIXED and self.theta_ref is None:
            raise LevelMismatch("fixed reference policy needs a parameter value")


@dataclass(frozen=True)
class GalerkinResult:
    estimate: CoefficientVector
    cutoff_tripped: bool
    inverse_norm: float
    sigma_ref: float
    tau: float


def _sigma_ref(obs: Observation, j: int, cfg: GalerkinConfig) -> float:
    if cfg.theta_ref_policy is ThetaRefPolicy.FIXED:
        return sigma_schedule(obs.model, cfg.theta_ref, j)
    # plug-in from the observed T; the diagonal-SVD plug-in is floored at
    # delta since a noisy T can sit arbitrarily close to zero
    if obs.model.kind is ModelKind.SVD_DIAGONAL:
        return max(sigma_schedule(obs.model, obs.t, j), obs.delta)
    return sigma_schedule(obs.model, obs.t, j)


def galerkin_estimate(obs: Observation, j: int, cfg: GalerkinConfig) -> GalerkinResult:
    """Cutoff estimator at level j; reports which branch was taken.

    Diagonal case: coefficient-wise Y_k / rho_{T,k} when the inverse norm of
    the projected operator stays below tau/sigma_j, else the zero vector at
    level j.
    """
    if j > obs.y.level:
        raise LevelMismatch(f"level {j} beyond the observation level {obs.y.level}")
    rho = singular_values(obs.model, obs.t, j)
    amin = np.abs(rho).min() if rho.size else 0.0
    inverse_norm = math.inf if amin == 0.0 else 1.0 / amin
    sigma = _sigma_ref(obs, j, cfg)
    tripped = not (inverse_norm <= cfg.tau / sigma)
    if tripped:
        estimate = CoefficientVector.zeros(obs.model.basis, j)
    else:
        assert inverse_norm * sigma <= cfg.tau  # cutoff soundness
        estimate = CoefficientVector(obs.model.basis, j, obs.y.coeffs[: rho.size] / rho)
    return GalerkinResult(estimate, tripped, inverse_norm, sigma, cfg.tau)


@dataclass(frozen=True)
class LepskiConfig:
    """Tuning constants for the adaptive level selection.

    delta_tune scales the thresholds; s0 is the assumed regularity lower
    bound; t_ill the polynomial ill-posedness degree; b the geometric grid
    base. exponent_override replaces the threshold exponent t + d/2 of the
    geometric-grid variant (default 3/2).
    """

    delta_tune: float = 1.0
    s0: float = 1.0
    t_ill: float = 2.0
    dim_d: int = 1
    b: float = 2.0
    exponent_override: Optional[float] = None

    def __post_init__(self):
        if not (0.0 < self.delta_tune <= 1.0):
            raise LevelMismatch("delta_tune must lie in (0, 1]")
        if self.s0 <= 0 or self.t_ill < 0 or self.dim_d < 1 or self.b <= 1.0:
            raise LevelMismatch("invalid adaptive-selection constants")


def max_level(eps: float, cfg: LepskiConfig) -> int:
    """Largest admissible candidate exponent floor(ln(1/eps) / ((s0+t+d/2) ln b))."""
    if not 0.0 < eps < 1.0:
        raise LevelMismatch("noise level must lie in (0, 1)")
    rate = cfg.s0 + cfg.t_ill + cfg.dim_d / 2.0
    return math.floor(math.log(1.0 / eps) / (rate * math.log(cfg.b)))


def candidate_levels(obs: Observation, cfg: LepskiConfig) -> list[int]:
    """Candidate grid: consecutive integers 1..Jmax for the sine convention,
    geometric levels {1, b, b^2, ...} for the trigonometric one."""
    jmax = max_level(obs.eps, cfg)
    if jmax < 1:
        raise EmptyGrid(f"no admissible levels at eps={obs.eps}")
    if obs.model.basis.kind is BasisKind.TRIGONOMETRIC:
        grid = sorted({int(round(cfg.b**i)) for i in range(jmax + 1)})
        return [g for g in grid if g >= 1]
    return list(range(1, jmax + 1))


def _threshold(obs: Observation, cfg: LepskiConfig, i: int) -> float:
    log_term = math.log(1.0 / obs.eps)
    base = cfg.delta_tune * obs.eps * log_term**2
    if obs.model.basis.kind is BasisKind.TRIGONOMETRIC:
        expo = 1.5 if cfg.exponent_override is None else cfg.exponent_override
        return base * float(i) ** expo
    return base * 2.0 ** (i * (cfg.t_ill + cfg.dim_d / 2.0))


@dataclass(frozen=True)
class LepskiDiagnostics:
    rows: list = field(default_factory=list)  # (i, j, distance, threshold, accepted)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["i", "j", "distance", "threshold", "accepted"])
            for i, j, d, t, acc in self.rows:
                w.writerow([i, j, f"{d:.17g}", f"{t:.17g}", int(acc)])


@dataclass(frozen=True)
class LepskiResult:
    level: int
    diagnostics: LepskiDiagnostics
    estimates: dict  # level -> GalerkinResult


def lepski_select(obs: Observation, cfg: LepskiConfig, gcfg: GalerkinConfig) -> LepskiResult:
    """Smallest candidate level within threshold distance of all finer ones.

    If no candidate satisfies the condition the largest candidate is
    returned (smallest bias). Diagnostics hold every pairwise comparison.
    """
    grid = candidate_levels(obs, cfg)
    estimates = {j: galerkin_estimate(obs, j, gcfg) for j in grid}
    rows = []
    passing = {}
    for a, j in enumerate(grid):
        ok = True
        for i in grid[a + 1:]:
            dist = coefficient_distance(estimates[i].estimate, estimates[j].estimate)
            thr = _threshold(obs, cfg, i)
            acc = dist <= thr
            rows.append((i, j, dist, thr, acc))
            ok = ok and acc
        passing[j] = ok
    selected = next((j for j in grid if passing[j]), grid[-1])
    return LepskiResult(selected, LepskiDiagnostics(rows), estimates)


def oracle_level(f0: CoefficientVector, eps: float, cfg: LepskiConfig, radius: float) -> int:
    """Bias/variance balancing level, computable only when the truth is known.

    Diagnostic: smallest j <= Jmax with R b^{-j s0} <= R ln(1/eps) eps
    b^{j(t+d/2)} (normalizing constant 1); falls back to Jmax when the
    balance is pushed past the grid.
    """
    jmax = max_level(eps, cfg)
    if jmax < 1:
        raise EmptyGrid(f"no admissible levels at eps={eps}")
    log_term = math.log(1.0 / eps)
    for j in range(1, jmax + 1):
        bias = radius * cfg.b ** (-j * cfg.s0)
        noise = radius * log_term * eps * cfg.b ** (j * (cfg.t_ill + cfg.dim_d / 2.0))
        if bias <= noise:
            return j
    return jmax
