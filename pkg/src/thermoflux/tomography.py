"""Angle-indexed tomograms and the joint quasiprobability reconstruction.

A tomogram at angle t is the distribution of the rotated fluctuation
cos(t)*delta_eps + sin(t)*delta_beta.  It is represented as a truncated
Hermite (Gram-Charlier A) density around the matched zero-mean Gaussian,

    T(z) = g(z; v) * (1 + sum_{k=3}^{n0} gamma_k He_k(z/sqrt(v))),

with the gamma_k fixed by a triangular linear solve so the first n0 raw
moments match the prescribed cumulants exactly.  T may dip negative for
large skew; that is reported as a diagnostic, not an error.

The joint quasidensity on the (delta_eps, delta_beta) plane is recovered by
filtered backprojection,

    R(x, y) = (1/4pi^2) int_0^pi dt int_R dr |r| chi_t(-r)
              * exp(i r (x cos t + y sin t)),

with the radial integral done by the Gauss rule matched to the tomogram's
Gaussian factor and the angle integral by the periodic trapezoid rule.
R carries unit Lebesgue mass; the Wigner-normalized object is 2*pi*h*R
with h the semiclassical scale (2/n in internal units).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.hermite_e import hermeval

from . import _kernels
from ._parallel import map_slots
from .core import ManifoldPoint
from .cumulants import CumulantVector, cumulants_to_moments
from .errors import (
    DomainError,
    GridTooSmall,
    IllConditioned,
    QuadratureFailure,
)
from .homotopy import HomotopyPath, angle_cumulants
from .quadrature import radial_rule, uniform_angles


def _hermite_moment_coeff(n: int, k: int) -> float:
    """E[S^n He_k(S)] for standard normal S: n! / (2^j j!) with j = (n-k)/2."""
    if k > n or (n - k) % 2:
        return 0.0
    j = (n - k) // 2
    return math.factorial(n) / (2**j * math.factorial(j))


@dataclass(frozen=True)
class Tomogram:
    """Moment-matched density of one rotated fluctuation direction."""

    angle: float
    variance: float
    n0: int
    gamma: np.ndarray = field(repr=False)  # gamma[k] multiplies He_k; 0 for k < 3
    moments: np.ndarray = field(repr=False)  # matched raw moments 1..n0

    def _herm_coeffs(self) -> np.ndarray:
        c = self.gamma.copy()
        c[0] = 1.0
        return c

    def density(self, z):
        """T(z; cos angle, sin angle) on the unit direction."""
        z = np.asarray(z, dtype=float)
        s = z / math.sqrt(self.variance)
        g = np.exp(-0.5 * s * s) / math.sqrt(2.0 * math.pi * self.variance)
        return g * hermeval(s, self._herm_coeffs())

    def density_scaled(self, z, lam: float):
        """T(z; lam*cos, lam*sin) = |lam|^-1 T(z/lam; cos, sin)."""
        if lam == 0:
            raise DomainError("scale must be nonzero")
        return self.density(np.asarray(z) / lam) / abs(lam)

    def char_function(self, k):
        """chi(k) = int T(z) exp(ikz) dz, closed form Gaussian x polynomial."""
        k = np.asarray(k, dtype=float)
        sv = math.sqrt(self.variance)
        poly = np.ones_like(k, dtype=complex)
        for m in range(3, self.n0 + 1):
            if self.gamma[m]:
                poly = poly + self.gamma[m] * (1j * k * sv) ** m
        return np.exp(-0.5 * self.variance * k * k) * poly

    def min_density(self, n_scan: int = 2001, n_sigma: float = 8.0) -> float:
        """Smallest density value over +/- n_sigma; negative means the
        truncated expansion is not a proper density there (diagnostic)."""
        z = np.linspace(-n_sigma, n_sigma, n_scan) * math.sqrt(self.variance)
        return float(self.density(z).min())


def build_tomogram(cumulants: CumulantVector, n0: int, angle: float = 0.0) -> Tomogram:
    """Tomogram matched to the first n0 moments of the given cumulants.

    Requires a centered input (kappa_1 = 0) with positive variance and
    2 <= n0 <= 8.  The moment-matching system is triangular with diagonal
    n! * v^(n/2) > 0, so it cannot be singular for v > 0 (checked anyway).
    """
    if not 2 <= n0 <= 8:
        raise DomainError(f"truncation degree must be in 2..8, got {n0}")
    if cumulants.order < n0:
        raise DomainError("cumulant vector shorter than the truncation degree")
    v = cumulants.kappa(2)
    if not v > 0:
        raise DomainError("tomogram requires a positive variance")
    if abs(cumulants.kappa(1)) > 1e-12 * max(1.0, math.sqrt(v)):
        raise DomainError("tomogram input must be centered (kappa_1 = 0)")

    centered = CumulantVector(order=n0, values=cumulants.values[:n0].copy())
    targets = cumulants_to_moments(centered)

    gamma = np.zeros(n0 + 1)
    sv = math.sqrt(v)
    for n in range(3, n0 + 1):
        acc = sv**n * _hermite_moment_coeff(n, 0)
        for k in range(3, n):
            acc += sv**n * gamma[k] * _hermite_moment_coeff(n, k)
        diag = sv**n * _hermite_moment_coeff(n, n)
        if diag == 0.0:
            raise IllConditioned("degenerate diagonal in moment matching")
        gamma[n] = (targets[n - 1] - acc) / diag
    return Tomogram(angle=angle, variance=v, n0=n0, gamma=gamma, moments=targets)


def gaussian_tomogram(variance: float, angle: float = 0.0) -> Tomogram:
    """Pure Gaussian tomogram (all corrections vanish)."""
    kv = CumulantVector(order=2, values=np.array([0.0, variance]))
    return build_tomogram(kv, 2, angle=angle)


def gaussian_tomogram_family(v: float, v_dual: float, n_theta: int) -> list:
    """Gaussian family with the interpolated variances
    v_t = v cos^2 t + v' sin^2 t on the uniform angle grid."""
    return [
        gaussian_tomogram(
            v * math.cos(t) ** 2 + v_dual * math.sin(t) ** 2, angle=t
        )
        for t in uniform_angles(n_theta)
    ]


def homotopy_tomograms(
    path: HomotopyPath, n_theta: int, n0: int, surface: str = "consistent"
) -> list:
    """Moment-matched tomogram family driven by the interpolation path.

    surface="consistent" (default): the variance backbone
    v_t = v cos^2 t + v' sin^2 t is used at every angle, and the order-m
    corrections ride the homogeneous surface

        kappa_m(t) = kappa_m(0) cos^m t + kappa_m(pi/2) sin^m t,

    anchored on the path's own cumulants at the two marginal angles (cross
    cumulants are zeroed: the construction supplies no information about
    them).  Such a family is jointly consistent, so the reconstruction
    reproduces the marginal tomograms to quadrature accuracy.

    surface="raw": per-angle path cumulants everywhere.  The per-angle
    construction degenerates where the interpolated mean crosses zero;
    close to that arc its skew/kurtosis blow up like 1/mean_t, the family
    is not jointly consistent, and reconstruction marginals carry O(1e-3)
    moment errors that do not vanish with resolution.  Kept for
    inspecting the per-angle construction itself.
    """
    if surface not in ("consistent", "raw"):
        raise DomainError(f"unknown surface {surface!r}")
    order = max(n0, 2)
    out = []
    if surface == "raw":
        for t in uniform_angles(n_theta):
            kv = angle_cumulants(path, t, order)
            out.append(build_tomogram(kv, n0, angle=t))
        return out

    k0 = angle_cumulants(path, 0.0, order)
    k90 = angle_cumulants(path, math.pi / 2.0, order)
    for t in uniform_angles(n_theta):
        c, s = math.cos(t), math.sin(t)
        values = np.zeros(order)
        values[1] = path.variance_at(t)
        for m in range(3, order + 1):
            values[m - 1] = k0.kappa(m) * c**m + k90.kappa(m) * s**m
        kv = CumulantVector(order=order, values=values)
        out.append(build_tomogram(kv, n0, angle=t))
    return out


def make_grid(sigma_x: float, sigma_y: float, shape=(41, 41), n_sigma: float = 6.0):
    """Uniform grid of +/- n_sigma standard deviations per axis."""
    nx, ny = shape
    x = np.linspace(-n_sigma * sigma_x, n_sigma * sigma_x, nx)
    y = np.linspace(-n_sigma * sigma_y, n_sigma * sigma_y, ny)
    return x, y


@dataclass(frozen=True)
class QuasiDensityGrid:
    """Joint quasiprobability R(x, y) sampled on a rectangular lattice."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray  # shape (len(x), len(y)); may be negative
    h: float
    n0: int
    diagnostics: dict

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dy(self) -> float:
        return float(self.y[1] - self.y[0])

    def mass(self) -> float:
        return float(self.values.sum() * self.dx * self.dy)

    def marginal_x(self) -> np.ndarray:
        return self.values.sum(axis=1) * self.dy

    def marginal_y(self) -> np.ndarray:
        return self.values.sum(axis=0) * self.dx

    def moment_x(self, k: int) -> float:
        return float((self.x**k * self.marginal_x()).sum() * self.dx)

    def moment_y(self, k: int) -> float:
        return float((self.y**k * self.marginal_y()).sum() * self.dy)

    def negativity_fraction(self) -> float:
        return float(np.mean(self.values < 0.0))

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("x,y,value\n")
            for i, xi in enumerate(self.x):
                for j, yj in enumerate(self.y):
                    fh.write(f"{float(xi)!r},{float(yj)!r},{float(self.values[i, j])!r}\n")

    def json_header(self) -> dict:
        return {
            "grid": {
                "nx": len(self.x),
                "ny": len(self.y),
                "x_min": float(self.x[0]),
                "x_max": float(self.x[-1]),
                "y_min": float(self.y[0]),
                "y_max": float(self.y[-1]),
            },
            "h": self.h,
            "n0": self.n0,
            "diagnostics": dict(self.diagnostics),
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.json_header(), fh, sort_keys=True, indent=2)
            fh.write("\n")


def reconstruct(
    tomograms,
    h: float,
    x: np.ndarray,
    y: np.ndarray,
    n_r: int = 96,
    imag_tol: float = 1e-6,
) -> QuasiDensityGrid:
    """Filtered backprojection of a uniform tomogram family over [0, pi).

    The radial integral uses the Gauss rule for |r|exp(-v_t r^2/2) (n_r
    positive nodes, each standing for a +/- pair); the angle integral is
    the periodic trapezoid rule.  The result is real up to roundoff; the
    imaginary residue is reported and must stay below imag_tol.
    """
    n_theta = len(tomograms)
    if n_theta < 32:
        raise DomainError(f"need at least 32 angles, got {n_theta}")
    if not h > 0:
        raise DomainError("semiclassical parameter h must be positive")
    angles = uniform_angles(n_theta)
    for tom, t in zip(tomograms, angles):
        if abs(tom.angle - t) > 1e-9:
            raise DomainError("tomogram angles must form a uniform grid on [0, pi)")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def one_angle(j):
        tom = tomograms[j]
        r, w = radial_rule(tom.variance, n_r)
        r_signed = np.concatenate([r, -r])
        sv = math.sqrt(tom.variance)
        poly_neg = np.ones(len(r), dtype=complex)  # P(-r_i)
        poly_pos = np.ones(len(r), dtype=complex)  # P(+r_i)
        for m in range(3, tom.n0 + 1):
            if tom.gamma[m]:
                poly_neg = poly_neg + tom.gamma[m] * (-1j * r * sv) ** m
                poly_pos = poly_pos + tom.gamma[m] * (1j * r * sv) ** m
        coeff = np.concatenate([w * poly_neg, w * poly_pos])
        t = angles[j]
        return _kernels.angle_term(r_signed, coeff, math.cos(t), math.sin(t), x, y)

    slots = map_slots(one_angle, n_theta)
    total = np.zeros((len(x), len(y)), dtype=complex)
    for s in slots:
        total += s
    total *= (math.pi / n_theta) / (4.0 * math.pi**2)

    imag_residue = float(np.abs(total.imag).max())
    if imag_residue > imag_tol:
        raise QuadratureFailure(
            f"imaginary residue {imag_residue:.3e} exceeds {imag_tol:.1e}"
        )
    values = np.ascontiguousarray(total.real)
    n0 = max(t.n0 for t in tomograms)
    cell = (x[1] - x[0]) * (y[1] - y[0])
    diagnostics = {
        "imag_residue": imag_residue,
        "mass": float(values.sum() * cell),
        "negativity_fraction": float(np.mean(values < 0.0)),
        "min_value": float(values.min()),
    }
    return QuasiDensityGrid(
        x=x, y=y, values=values, h=h, n0=n0, diagnostics=diagnostics
    )


def gaussian_limit(alpha: ManifoldPoint, n: float, x: np.ndarray, y: np.ndarray) -> QuasiDensityGrid:
    """Closed-form concentration-limit quasidensity at a manifold point.

    R(x, y) = (n/2pi) exp(-n (lam x^2 + y^2/lam)/2) with lam = -s''(eps);
    unit mass analytically, variances (1/(n lam), lam/n), and
    Var_x * Var_y = (h/2)^2 with h = 2/n (saturated purity).
    """
    lam = alpha.lam
    if not lam > 0:
        raise DomainError("gaussian limit requires positive curvature")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    expo = -0.5 * n * (lam * x[:, None] ** 2 + y[None, :] ** 2 / lam)
    values = n / (2.0 * math.pi) * np.exp(expo)
    cell = (x[1] - x[0]) * (y[1] - y[0])
    diagnostics = {
        "imag_residue": 0.0,
        "mass": float(values.sum() * cell),
        "negativity_fraction": 0.0,
        "min_value": float(values.min()),
    }
    return QuasiDensityGrid(
        x=x, y=y, values=values, h=2.0 / n, n0=2, diagnostics=diagnostics
    )


def purity(grid: QuasiDensityGrid) -> float:
    """2*pi*h * int R^2; equals 1 exactly for a Gaussian saturating
    Var_x*Var_y = (h/2)^2 and is smaller for broader quasidensities.

    Requires the grid to cover at least 6 empirical standard deviations
    per axis.
    """
    mass = grid.mass()
    if mass == 0:
        raise GridTooSmall("grid carries no mass")
    mx = grid.moment_x(1) / mass
    my = grid.moment_y(1) / mass
    var_x = grid.moment_x(2) / mass - mx * mx
    var_y = grid.moment_y(2) / mass - my * my
    if var_x <= 0 or var_y <= 0:
        raise GridTooSmall("grid second moments are not positive")
    half_x = 0.5 * (grid.x[-1] - grid.x[0])
    half_y = 0.5 * (grid.y[-1] - grid.y[0])
    if half_x < 6.0 * math.sqrt(var_x) * (1.0 - 1e-9) or half_y < 6.0 * math.sqrt(
        var_y
    ) * (1.0 - 1e-9):
        raise GridTooSmall(
            "grid must cover >= 6 standard deviations in each axis"
        )
    return float(2.0 * math.pi * grid.h * (grid.values**2).sum() * grid.dx * grid.dy)
