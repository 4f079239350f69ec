"""Worker-pool sizing controlled by the WCONS_THREADS environment variable.

Unset or "1" runs everything sequentially; "0" sizes the pool from the CPU
count; any other positive integer caps the pool at that many threads.
Results are merged by task index, so parallel and sequential runs produce
identical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["worker_count", "map_indexed"]

_ENV_VAR = "WCONS_THREADS"


def worker_count() -> int:
    raw = os.environ.get(_ENV_VAR, "1").strip()
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{_ENV_VAR} must be an integer, got {raw!r}")
    if n < 0:
        raise ValueError(f"{_ENV_VAR} must be nonnegative, got {n}")
    if n == 0:
        return os.cpu_count() or 1
    return n


def map_indexed(fn, items):
    """Apply ``fn`` to each item, in a thread pool when one is configured."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
