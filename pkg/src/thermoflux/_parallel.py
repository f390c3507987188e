"""Deterministic slot-parallel evaluation.

THERMOFLUX_THREADS caps the worker count (default 1).  Work units write
into per-slot results that are reduced in fixed slot order afterwards, so
results are identical for every thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("THERMOFLUX_THREADS", "1").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"THERMOFLUX_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def map_slots(fn, n_slots: int) -> list:
    """Evaluate fn(i) for i in range(n_slots), returning results in slot order."""
    workers = thread_count()
    if workers == 1 or n_slots <= 1:
        return [fn(i) for i in range(n_slots)]
    with ThreadPoolExecutor(max_workers=min(workers, n_slots)) as pool:
        return list(pool.map(fn, range(n_slots)))
