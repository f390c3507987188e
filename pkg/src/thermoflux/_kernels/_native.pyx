# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: tomographic backprojection and geometric sampling.

Arithmetic mirrors _fallback.py; both backends must agree to ~1e-12.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, log, floor

cnp.import_array()

BACKEND = "native"


def angle_term(r, coeff, double cos_t, double sin_t, x, y):
    """Backprojection contribution of one tomogram angle (see _fallback)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r_ = np.ascontiguousarray(r, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c_ = np.ascontiguousarray(coeff, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_ = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y_ = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t nr = r_.shape[0], nx = x_.shape[0], ny = y_.shape[0]
    if c_.shape[0] != nr:
        raise ValueError("r and coeff must have equal length")
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((nx, ny), dtype=np.complex128)
    cdef Py_ssize_t a, b, i
    cdef double u, ph, acc_re, acc_im, cre, cim, cph, sph
    with nogil:
        for a in range(nx):
            for b in range(ny):
                u = cos_t * x_[a] + sin_t * y_[b]
                acc_re = 0.0
                acc_im = 0.0
                for i in range(nr):
                    ph = r_[i] * u
                    cph = cos(ph)
                    sph = sin(ph)
                    cre = c_[i].real
                    cim = c_[i].imag
                    acc_re += cre * cph - cim * sph
                    acc_im += cre * sph + cim * cph
                out[a, b] = acc_re + 1j * acc_im
    return out


def occupation_energies(uniforms, double log_q):
    """Total geometric occupations per sweep (see _fallback)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] u_ = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t m = u_.shape[0], n = u_.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double total
    with nogil:
        for i in range(m):
            total = 0.0
            for j in range(n):
                total += floor(log(u_[i, j]) / log_q)
            out[i] = total
    return out
