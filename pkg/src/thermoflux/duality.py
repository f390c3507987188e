"""Dual oscillator systems whose specific-energy fluctuations represent the
inverse-temperature fluctuations of the source system.

Two variants of the closing condition are supported:

* symmetric -- mean-energy product equals beta'*beta; the solve goes
  through the monotone function phi(z) = z/(1 - exp(-z)).  For beta*a > 0
  this forces beta'*a' < 0, i.e. a formally negative energy quantum; the
  dual is flagged unphysical and all closed forms are evaluated formally
  (they stay finite because exp(beta'*a') is in (0, 1)).
* remark1 -- dual mean energy pinned to beta; fully closed-form and
  all-positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import OscillatorEnsemble, ThermoState, energy_stats, mean_occupation
from .errors import DomainError, NoBracket

_NEWTON_TOL = 1e-13
_BISECT_TOL = 1e-8


def phi(z: float) -> float:
    """Monotone solvability function z / (1 - exp(-z)); phi(0) = 1."""
    if abs(z) < 1e-8:
        # removable singularity: z/(1-e^-z) = 1 + z/2 + z^2/12 + O(z^4)
        return 1.0 + z / 2.0 + z * z / 12.0
    return z / (-math.expm1(-z))


def phi_prime(z: float) -> float:
    """Derivative of phi, used by the Newton polish."""
    if abs(z) < 1e-6:
        return 0.5 + z / 6.0 - z**3 / 180.0
    em = -math.expm1(-z)  # 1 - e^-z
    return (em - z * math.exp(-z)) / (em * em)


@dataclass(frozen=True)
class DualPair:
    """A source system, its solved dual, and the defining-equation residuals."""

    a: float
    beta: float
    n: float
    a_dual: float
    beta_dual: float
    n_dual: float
    variant: str  # "symmetric" | "remark1"
    residuals: tuple  # per-equation absolute residuals
    unphysical_spectrum: bool

    @property
    def source(self) -> OscillatorEnsemble:
        return OscillatorEnsemble(a=self.a, n=self.n)

    @property
    def dual(self) -> OscillatorEnsemble:
        return OscillatorEnsemble(a=self.a_dual, n=self.n_dual)


def _solve_phi_equals(target: float) -> float:
    """Solve phi(y) = target for the unique real root by bracketed
    bisection followed by a Newton polish."""
    if not target > 0:
        raise NoBracket(f"phi only takes positive values, target {target!r}")
    # expanding bracket around 0; phi is strictly increasing with phi(0)=1
    if target == 1.0:
        return 0.0
    if target > 1.0:
        lo, hi = 0.0, 1.0
        while phi(hi) < target:
            hi *= 2.0
            if hi > 1e12:
                raise NoBracket("failed to bracket root above")
    else:
        lo, hi = -1.0, 0.0
        while phi(lo) > target:
            lo *= 2.0
            if lo < -1e12:
                raise NoBracket("failed to bracket root below")
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if phi(mid) < target:
            lo = mid
        else:
            hi = mid
    y = 0.5 * (lo + hi)
    for _ in range(60):
        step = (phi(y) - target) / phi_prime(y)
        y -= step
        if abs(step) < _NEWTON_TOL * max(1.0, abs(y)):
            break
    return y


def _system_residuals(a, beta, a_dual, beta_dual):
    """Residuals of the two defining equations of the symmetric variant."""
    eps = a * mean_occupation(beta * a)
    eps_dual = a_dual * mean_occupation_signed(beta_dual * a_dual)
    r1 = eps * eps_dual - beta_dual * beta
    r2 = (beta_dual * beta) ** 2 * math.exp(beta * a + beta_dual * a_dual) - 1.0
    return abs(r1), abs(r2)


def mean_occupation_signed(x: float) -> float:
    """Formal extension of the mean occupation 1/(e^x - 1) to x < 0."""
    if x > 0:
        return mean_occupation(x)
    if x == 0:
        raise DomainError("mean occupation undefined at beta*a = 0")
    return 1.0 / math.expm1(x)


def solve_symmetric(a: float, beta: float, n: float) -> DualPair:
    """Solve the symmetric closing condition (mean-energy product)."""
    if not (a > 0 and beta > 0):
        raise DomainError("symmetric duality solve requires a > 0 and beta > 0")
    y = _solve_phi_equals(1.0 / phi(beta * a))
    beta_dual = math.exp(-(beta * a + y) / 2.0) / beta
    a_dual = y / beta_dual
    res = _system_residuals(a, beta, a_dual, beta_dual)
    return DualPair(
        a=a,
        beta=beta,
        n=n,
        a_dual=a_dual,
        beta_dual=beta_dual,
        n_dual=n,
        variant="symmetric",
        residuals=res,
        unphysical_spectrum=a_dual < 0,
    )


def solve_remark1(a: float, beta: float, n: float) -> DualPair:
    """Closed-form all-positive dual with the dual mean energy pinned to beta."""
    if not (a > 0 and beta > 0):
        raise DomainError("remark1 duality solve requires a > 0 and beta > 0")
    u = beta * a / 2.0
    # log1p form keeps precision when sinh(u)/u is close to 1
    y = 2.0 * math.log1p((math.sinh(u) - u) / u)
    a_dual = beta * math.expm1(y)
    beta_dual = y / a_dual
    eps = a * mean_occupation(beta * a)
    eps_dual = a_dual * mean_occupation(beta_dual * a_dual)
    r1 = abs(eps_dual - beta)
    r2 = abs(math.exp(beta * a + y) * (beta * eps) ** 2 - 1.0)
    return DualPair(
        a=a,
        beta=beta,
        n=n,
        a_dual=a_dual,
        beta_dual=beta_dual,
        n_dual=n,
        variant="remark1",
        residuals=(r1, r2),
        unphysical_spectrum=False,
    )


@dataclass(frozen=True)
class DualityReport:
    equation_residuals: tuple
    variance_product_scaled: float  # Var(de) * Var(de') * n^2, target 1
    imposed_condition_residual: float


def dual_fluctuation_variances(pair: DualPair):
    """Specific-energy fluctuation variances (v, v') of source and dual.

    Evaluated through the same closed forms for both; for a formal dual
    (beta'*a' < 0) the expressions remain finite.
    """
    v = (
        energy_stats(ThermoState(pair.beta), pair.source).variance
        / pair.n**2
    )
    nbar_dual = mean_occupation_signed(pair.beta_dual * pair.a_dual)
    v_dual = pair.a_dual**2 * nbar_dual * (nbar_dual + 1.0) / pair.n_dual
    return v, v_dual


def verify_duality(pair: DualPair) -> DualityReport:
    """Check a solved pair against its defining system.

    Reports the per-equation residuals, the realized product
    Var(de)*Var(de')*n^2 against the uncertainty target 1, and the residual
    of the variant's imposed condition.
    """
    v, v_dual = dual_fluctuation_variances(pair)
    product = v * v_dual * pair.n * pair.n_dual

    eps = pair.a * mean_occupation(pair.beta * pair.a)
    eps_dual = pair.a_dual * mean_occupation_signed(pair.beta_dual * pair.a_dual)
    if pair.variant == "symmetric":
        imposed = abs(eps * eps_dual - pair.beta_dual * pair.beta)
    else:
        imposed = abs(eps_dual - pair.beta)
    return DualityReport(
        equation_residuals=pair.residuals,
        variance_product_scaled=product,
        imposed_condition_residual=imposed,
    )
