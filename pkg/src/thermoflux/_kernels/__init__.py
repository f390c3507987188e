"""Hot-kernel backend selection.

The compiled extension (_native, Cython) is preferred when importable; the
numpy fallback is used otherwise.  THERMOFLUX_KERNELS=python|native forces
a backend ("native" raises if the extension is missing).  Both backends
implement the same arithmetic; see benchmarks/kernel_bench.py for a
side-by-side timing.
"""

import os

from . import _fallback

_requested = os.environ.get("THERMOFLUX_KERNELS", "").strip().lower()
if _requested not in ("", "native", "python"):
    raise ImportError(
        f"THERMOFLUX_KERNELS must be 'native' or 'python', got {_requested!r}"
    )

_impl = _fallback
if _requested in ("", "native"):
    try:
        from . import _native

        _impl = _native
    except ImportError:
        if _requested == "native":
            raise

BACKEND = _impl.BACKEND
angle_term = _impl.angle_term
occupation_energies = _impl.occupation_energies


def get_backends():
    """Return {name: module} for every importable backend (for benchmarks/tests)."""
    backends = {"python": _fallback}
    try:
        from . import _native

        backends["native"] = _native
    except ImportError:
        pass
    return backends
