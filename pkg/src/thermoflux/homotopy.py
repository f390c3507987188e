"""One-parameter family of oscillator ensembles interpolating a system and
its dual.

The family is pinned by two requirements at each angle t:

    mean_t     = mean * cos(t) + mean' * sin(t)
    variance_t = v * cos(t)^2 + v' * sin(t)^2

with (mean, v) the specific-energy mean/variance of the source and
(mean', v') of the dual.  Substituting the oscillator closed forms shows
the particle count enters only through the product n*v_t, giving the
closed-form parameters

    beta_t * a_t = log(n*v_t / mean_t^2),   a_t = n*v_t/mean_t - mean_t.

Negative beta_t*a_t (possible with the symmetric dual) is evaluated
formally and flagged; mean_t <= 0 or n*v_t = mean_t^2 is a degenerate
point and raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ThermoState, energy_stats
from .cumulants import CumulantVector, coefficient_table
from .duality import DualPair, dual_fluctuation_variances, mean_occupation_signed
from .errors import DegeneratePoint, DomainError, OrderTooLarge


@dataclass(frozen=True)
class HomotopyPath:
    """Endpoint data (means and scaled variances) of the interpolation."""

    mean: float        # specific-energy mean of the source
    mean_dual: float   # specific-energy mean of the dual
    nv: float          # n * Var(delta_eps) of the source
    nv_dual: float     # n * Var(delta_eps') of the dual
    n: float
    formal_dual: bool = False  # dual has a formally negative quantum

    @classmethod
    def from_dual_pair(cls, pair: DualPair) -> "HomotopyPath":
        v, v_dual = dual_fluctuation_variances(pair)
        mean = energy_stats(ThermoState(pair.beta), pair.source).mean / pair.n
        if pair.variant == "symmetric":
            mean_dual = pair.a_dual * mean_occupation_signed(
                pair.beta_dual * pair.a_dual
            )
        else:
            mean_dual = pair.beta  # imposed condition of the remark1 variant
        return cls(
            mean=mean,
            mean_dual=mean_dual,
            nv=pair.n * v,
            nv_dual=pair.n_dual * v_dual,
            n=pair.n,
            formal_dual=pair.unphysical_spectrum,
        )

    @classmethod
    def from_endpoints(cls, mean, variance, mean_dual, variance_dual, n):
        if not (variance > 0 and variance_dual > 0):
            raise DomainError("endpoint variances must be positive")
        return cls(
            mean=mean,
            mean_dual=mean_dual,
            nv=n * variance,
            nv_dual=n * variance_dual,
            n=n,
        )

    def mean_at(self, t: float) -> float:
        return self.mean * math.cos(t) + self.mean_dual * math.sin(t)

    def scaled_variance_at(self, t: float) -> float:
        c, s = math.cos(t), math.sin(t)
        return self.nv * c * c + self.nv_dual * s * s

    def variance_at(self, t: float) -> float:
        return self.scaled_variance_at(t) / self.n


@dataclass(frozen=True)
class PathPoint:
    t: float
    a: float
    beta: float
    mean: float
    variance: float
    formal: bool  # beta*a < 0, evaluated formally


def path_params(path: HomotopyPath, t: float) -> PathPoint:
    """Oscillator parameters (a_t, beta_t) reproducing (mean_t, variance_t)."""
    mean_t = path.mean_at(t)
    nv_t = path.scaled_variance_at(t)
    if not mean_t > 0:
        raise DegeneratePoint(f"interpolated mean {mean_t!r} <= 0 at t={t!r}")
    ratio = nv_t / (mean_t * mean_t)
    if ratio == 1.0:
        raise DegeneratePoint(f"n*v_t equals mean_t^2 at t={t!r} (a_t = 0)")
    x = math.log(ratio)  # beta_t * a_t
    a_t = nv_t / mean_t - mean_t
    beta_t = x / a_t
    return PathPoint(
        t=t,
        a=a_t,
        beta=beta_t,
        mean=mean_t,
        variance=nv_t / path.n,
        formal=x < 0,
    )


def path_cumulants(path: HomotopyPath, t: float, order: int) -> CumulantVector:
    """Cumulants of the centered specific-energy fluctuation of X_t.

    kappa_1 = 0 and kappa_2 = variance_t by construction; evaluation is
    formal (finite) when beta_t*a_t < 0.
    """
    if not 1 <= order <= 8:
        raise OrderTooLarge(f"path cumulant order must be in 1..8, got {order}")
    point = path_params(path, t)
    return _formal_fluctuation_cumulants(point.a, point.beta, path.n, order)


def _formal_fluctuation_cumulants(a, beta, n, order) -> CumulantVector:
    """Fluctuation cumulants from the coefficient table, valid for either
    sign of beta*a (the occupation 1/(exp(beta*a) - 1) extends formally)."""
    x = beta * a
    if x == 0:
        raise DegeneratePoint("beta*a = 0 has no cumulant expansion")
    if x > 0:
        nbar = math.exp(-x) / (-math.expm1(-x))
    else:
        nbar = 1.0 / math.expm1(x)
    table = coefficient_table(order)
    values = np.empty(order)
    powers = np.array([nbar**m for m in range(1, order + 1)])
    for k in range(1, order + 1):
        coeffs = np.array(table.rows[k - 1], dtype=float)
        values[k - 1] = (a / n) ** k * float(coeffs @ powers[:k]) * n
    values[0] = 0.0
    return CumulantVector(order=order, values=values)


def reflected_cumulants(path: HomotopyPath, t: float, order: int) -> CumulantVector:
    """Cumulants at angle t via the antipodal representation.

    The tomogram direction (cos t, sin t) equals -(cos(t-pi), sin(t-pi)),
    and reflecting the fluctuation variable flips odd cumulants.  Where
    both branches are defined they agree exactly, because the closed forms
    send mean_t -> -mean_t into a_t -> -a_t with x_t unchanged.
    """
    kv = path_cumulants(path, t - math.pi, order)
    signs = np.array([(-1.0) ** k for k in range(1, order + 1)])
    return CumulantVector(order=order, values=kv.values * signs)


def angle_cumulants(path: HomotopyPath, t: float, order: int) -> CumulantVector:
    """Cumulants for the tomogram at angle t in [0, pi), using whichever
    of the direct or antipodal branch is nondegenerate."""
    try:
        return path_cumulants(path, t, order)
    except DegeneratePoint:
        return reflected_cumulants(path, t, order)
