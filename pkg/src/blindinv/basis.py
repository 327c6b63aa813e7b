"""Basis conventions and coefficient-space representation of functions.

Two orthonormal bases of L2([0,1]) are supported:

* sine basis           phi_k(x) = sqrt(2) sin(pi k x),  k >= 1
* trigonometric basis  phi_0 = 1, phi_{j,0}(x) = sqrt(2) sin(2 pi j x),
                       phi_{j,1}(x) = sqrt(2) cos(2 pi j x),  j >= 1

A function is represented by a finite coefficient vector truncated at a
level J: the sine basis keeps indices k <= J, the trigonometric basis keeps
the constant plus both functions of every frequency j <= J. The multi-index
(j, l) is flattened to a single ordered index (constant, then per level sin,
cos) so that serialization is deterministic.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import LevelMismatch


class BasisKind(enum.Enum):
    SINE_PERIODIC = "sine_periodic"
    TRIGONOMETRIC = "trigonometric"


class LevelScaling(enum.Enum):
    """Whether the approximation space V_j holds ~j or ~2^j basis functions."""

    LINEAR = "linear"
    DYADIC = "dyadic"


@dataclass(frozen=True)
class BasisSpec:
    kind: BasisKind
    dim_d: int = 1
    level_scaling: LevelScaling = LevelScaling.LINEAR

    def __post_init__(self):
        if self.dim_d != 1:
            raise LevelMismatch("only spatial dimension d=1 is implemented")

    @property
    def min_level(self) -> int:
        return 0 if self.kind is BasisKind.TRIGONOMETRIC else 1

    def dim(self, level: int) -> int:
        """Number of basis functions with |k| <= level."""
        if level < 0:
            raise LevelMismatch(f"negative level {level}")
        if self.kind is BasisKind.SINE_PERIODIC:
            return level
        return 2 * level + 1

    def levels(self, level: int) -> np.ndarray:
        """Level |k| of every flattened index up to the truncation level."""
        if self.kind is BasisKind.SINE_PERIODIC:
            return np.arange(1, level + 1)
        out = np.empty(2 * level + 1, dtype=int)
        out[0] = 0
        for j in range(1, level + 1):
            out[2 * j - 1] = j
            out[2 * j] = j
        return out

    def evaluate(self, level: int, x: np.ndarray) -> np.ndarray:
        """Matrix phi_k(x_i) of shape (len(x), dim(level))."""
        x = np.asarray(x, dtype=float)
        if self.kind is BasisKind.SINE_PERIODIC:
            k = np.arange(1, level + 1)
            return math.sqrt(2.0) * np.sin(np.pi * np.outer(x, k))
        cols = [np.ones_like(x)]
        for j in range(1, level + 1):
            cols.append(math.sqrt(2.0) * np.sin(2 * np.pi * j * x))
            cols.append(math.sqrt(2.0) * np.cos(2 * np.pi * j * x))
        return np.column_stack(cols) if cols else np.zeros((x.size, 0))


SINE_BASIS = BasisSpec(BasisKind.SINE_PERIODIC)
TRIG_BASIS = BasisSpec(BasisKind.TRIGONOMETRIC)


class CoefficientVector:
    """A function represented by basis coefficients up to a truncation level.

    Immutable; the coefficient array is copied on construction and marked
    read-only. The Euclidean norm of ``coeffs`` equals the L2 norm of the
    represented function (the basis is orthonormal).
    """

    __slots__ = ("basis", "level", "coeffs")

    def __init__(self, basis: BasisSpec, level: int, coeffs):
        arr = np.array(coeffs, dtype=float).ravel()
        if arr.size != basis.dim(level):
            raise LevelMismatch(
                f"{arr.size} coefficients but dim(V_{level}) = {basis.dim(level)}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CoefficientVector is immutable")

    def __repr__(self):
        return (
            f"CoefficientVector({self.basis.kind.value}, level={self.level}, "
            f"coeffs={self.coeffs!r})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, CoefficientVector)
            and self.basis == other.basis
            and self.level == other.level
            and np.array_equal(self.coeffs, other.coeffs)
        )

    @property
    def index_levels(self) -> np.ndarray:
        return self.basis.levels(self.level)

    @classmethod
    def zeros(cls, basis: BasisSpec, level: int) -> "CoefficientVector":
        return cls(basis, level, np.zeros(basis.dim(level)))


def project(f: CoefficientVector, j: int) -> CoefficientVector:
    """Orthogonal projection onto V_j: truncate to indices |k| <= j.

    For j >= f.level the vector is returned unchanged; projection never
    zero-pads.
    """
    if j < 0:
        raise LevelMismatch(f"negative level {j}")
    if j >= f.level:
        return f
    return CoefficientVector(f.basis, j, f.coeffs[: f.basis.dim(j)])


def l2_norm(f: CoefficientVector) -> float:
    return float(np.linalg.norm(f.coeffs))


def sobolev_norm(f: CoefficientVector, s: float) -> float:
    """Smoothness-weighted norm (sum_k w_k^{2s} f_k^2)^{1/2}.

    Linear level scaling weighs by the level |k| (the constant function of
    the trigonometric basis uses weight 1 so the norm stays finite); dyadic
    scaling weighs by 2^{|k|}.
    """
    lv = f.index_levels.astype(float)
    if f.basis.level_scaling is LevelScaling.DYADIC:
        w = 2.0**lv
    else:
        w = np.maximum(lv, 1.0)
    return float(np.sqrt(np.sum(w ** (2.0 * s) * f.coeffs**2)))


def evaluate_on_grid(f: CoefficientVector, n_points: int) -> np.ndarray:
    """Synthesize sum_k f_k phi_k on a uniform grid over [0,1].

    Returns an array of shape (n_points, 2) of (x, f(x)) pairs.
    """
    if n_points < 2:
        raise LevelMismatch("need at least 2 grid points")
    x = np.linspace(0.0, 1.0, n_points)
    vals = f.basis.evaluate(f.level, x) @ f.coeffs
    return np.column_stack([x, vals])


def coefficient_distance(a: CoefficientVector, b: CoefficientVector) -> float:
    """l2 distance over the union of levels; the shorter vector is zero-padded."""
    la, lb = a.coeffs, b.coeffs
    if la.size < lb.size:
        la, lb = lb, la
    d = la.copy()
    d[: lb.size] -= lb
    return float(np.linalg.norm(d))


# --- CSV serialization -------------------------------------------------------

CSV_HEADER = ("index", "level", "coeff")


def coefficients_to_csv(f: CoefficientVector, path) -> None:
    """Write `index,level,coeff` rows; floats round-trip bit-exactly."""
    lv = f.index_levels
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for i, c in enumerate(f.coeffs):
            w.writerow([i, int(lv[i]), f"{c:.17g}"])


def coefficients_from_csv(basis: BasisSpec, level: int, path) -> CoefficientVector:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if tuple(header) != CSV_HEADER:
            raise LevelMismatch(f"unexpected CSV header {header}")
        coeffs = [float(row[2]) for row in r]
    return CoefficientVector(basis, level, coeffs)
