"""Parameterized forward operators in diagonal (SVD) form.

Both implemented models are diagonalized by a fixed basis, with all the
parameter dependence in the singular values:

* heat model        rho_{theta,k} = exp(-theta pi^2 k^2 t), sine basis,
                    theta a positive scalar (nonpositive values remain
                    representable so random-walk proposals never fault);
* diagonal SVD      rho_k = theta_{|k|}: the parameter is the sequence of
                    singular values itself, one per basis level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisKind, BasisSpec, CoefficientVector, SINE_BASIS
from .errors import IndexOutOfTheta, LevelMismatch, ModelMismatch


class ThetaKind(enum.Enum):
    SCALAR = "scalar"
    SEQUENCE = "sequence"


@dataclass(frozen=True)
class ThetaParam:
    """Operator parameter: a scalar (heat diffusivity) or a per-level sequence."""

    kind: ThetaKind
    value: float = 0.0
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @classmethod
    def scalar(cls, value: float) -> "ThetaParam":
        return cls(ThetaKind.SCALAR, value=float(value))

    @classmethod
    def sequence(cls, values) -> "ThetaParam":
        arr = np.array(values, dtype=float).ravel()
        arr.flags.writeable = False
        return cls(ThetaKind.SEQUENCE, values=arr)

    @property
    def is_scalar(self) -> bool:
        return self.kind is ThetaKind.SCALAR

    def __eq__(self, other):
        if not isinstance(other, ThetaParam):
            return NotImplemented
        if self.kind is not other.kind:
            return False
        if self.is_scalar:
            return self.value == other.value
        return np.array_equal(self.values, other.values)


class ModelKind(enum.Enum):
    HEAT = "heat"
    SVD_DIAGONAL = "svd_diagonal"


@dataclass(frozen=True)
class OperatorModel:
    kind: ModelKind
    basis: BasisSpec
    t_time: float = 0.0

    def __post_init__(self):
        if self.kind is ModelKind.HEAT:
            if self.basis.kind is not BasisKind.SINE_PERIODIC:
                raise ModelMismatch("the heat model is diagonal in the sine basis only")
            if self.t_time <= 0:
                raise ModelMismatch("heat model needs a positive observation time")


def heat_model(t_time: float, basis: BasisSpec = SINE_BASIS) -> OperatorModel:
    return OperatorModel(ModelKind.HEAT, basis, t_time=t_time)


def svd_diagonal_model(basis: BasisSpec) -> OperatorModel:
    return OperatorModel(ModelKind.SVD_DIAGONAL, basis)


def _sequence_value(model: OperatorModel, theta: ThetaParam, level: int) -> float:
    idx = level - model.basis.min_level
    if idx < 0 or idx >= theta.values.size:
        raise IndexOutOfTheta(f"no singular value for level {level}")
    return float(theta.values[idx])


def singular_value(model: OperatorModel, theta: ThetaParam, k: int) -> float:
    """Singular value paired with the basis level |k|."""
    if model.kind is ModelKind.HEAT:
        if not theta.is_scalar:
            raise ModelMismatch("heat model takes a scalar parameter")
        return math.exp(-theta.value * math.pi**2 * k**2 * model.t_time)
    if theta.is_scalar:
        raise ModelMismatch("diagonal SVD model takes a sequence parameter")
    return _sequence_value(model, theta, k)


def singular_values(model: OperatorModel, theta: ThetaParam, level: int) -> np.ndarray:
    """Vector of singular values over all flattened indices |k| <= level."""
    lv = model.basis.levels(level)
    if model.kind is ModelKind.HEAT:
        if not theta.is_scalar:
            raise ModelMismatch("heat model takes a scalar parameter")
        return np.exp(-theta.value * np.pi**2 * lv.astype(float) ** 2 * model.t_time)
    if theta.is_scalar:
        raise ModelMismatch("diagonal SVD model takes a sequence parameter")
    top = int(lv[-1]) if lv.size else model.basis.min_level - 1
    if top - model.basis.min_level >= theta.values.size:
        raise IndexOutOfTheta(f"sequence parameter stops before level {top}")
    return theta.values[lv - model.basis.min_level]


def apply(model: OperatorModel, theta: ThetaParam, f: CoefficientVector) -> CoefficientVector:
    """Coefficient-wise image (K_theta f)_k = rho_{theta,k} f_k."""
    rho = singular_values(model, theta, f.level)
    return CoefficientVector(f.basis, f.level, rho * f.coeffs)


@dataclass(frozen=True)
class DiagonalMatrix:
    """Projected operator K_{theta,j} on V_j; diagonal for all implemented models."""

    diag: np.ndarray

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag)

    @property
    def shape(self):
        return (self.diag.size, self.diag.size)


def projected_matrix(model: OperatorModel, theta: ThetaParam, j: int) -> DiagonalMatrix:
    """Galerkin matrix of the operator restricted to V_j."""
    if j < model.basis.min_level:
        raise LevelMismatch(f"level {j} has an empty approximation space")
    return DiagonalMatrix(singular_values(model, theta, j))


def inverse_opnorm(model: OperatorModel, theta: ThetaParam, j: int) -> float:
    """Operator norm of K_{theta,j}^{-1}; +inf when the matrix is singular."""
    rho = np.abs(singular_values(model, theta, j))
    if rho.size == 0:
        raise LevelMismatch(f"level {j} has an empty approximation space")
    m = rho.min()
    return float("inf") if m == 0.0 else float(1.0 / m)


def sigma_schedule(model: OperatorModel, theta_ref: ThetaParam, j: int) -> float:
    """Nominal ill-posedness scale sigma_j at a reference parameter.

    Used by the estimator to form the cutoff tau/sigma_j; callers plug in an
    estimate of the unknown parameter (typically the observed T).
    """
    if model.kind is ModelKind.HEAT:
        if not theta_ref.is_scalar:
            raise ModelMismatch("heat model takes a scalar parameter")
        return math.exp(-theta_ref.value * math.pi**2 * model.t_time * j**2)
    return abs(_sequence_value(model, theta_ref, j))
