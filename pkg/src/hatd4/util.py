"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_budget(default=1):
    """Worker cap from the HATC_THREADS environment variable."""
    raw = os.environ.get("HATC_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return default
    return max(1, n)


def parallel_map(fn, items, threads=1):
    """Order-preserving map, threaded when threads > 1."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
