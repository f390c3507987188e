"""Pure-numpy implementations of the hot kernels.

Same call signatures and the same arithmetic as the compiled extension in
_native.pyx; selected automatically when the extension is unavailable or
when THERMOFLUX_KERNELS=python.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def angle_term(r, coeff, cos_t, sin_t, x, y):
    """Backprojection contribution of one tomogram angle.

    Returns sum_i coeff[i] * exp(1j * r[i] * (x[a]*cos_t + y[b]*sin_t))
    as a complex (len(x), len(y)) array.
    """
    r = np.asarray(r, dtype=np.float64)
    coeff = np.asarray(coeff, dtype=np.complex128)
    u = cos_t * np.asarray(x)[:, None] + sin_t * np.asarray(y)[None, :]
    phase = np.exp(1j * np.multiply.outer(r, u.ravel()))
    return (coeff @ phase).reshape(len(x), len(y))


def occupation_energies(uniforms, log_q):
    """Total occupation numbers per sweep from a uniform stream.

    uniforms has shape (sweeps, n_oscillators) with entries in (0, 1];
    each entry maps to a geometric occupation floor(log(u)/log(q)).
    The result is an exact integer-valued float array.
    """
    occ = np.floor(np.log(uniforms) / log_q)
    return occ.sum(axis=1)
