"""Order-preserving map with an optional thread pool.

The pool size comes from ``FUZZMET_THREADS`` (default 1, i.e. serial).
numpy releases the GIL inside the distance kernels, so threads help on
large clouds.  Results are always returned in input order.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count(threads: int | None = None) -> int:
    if threads is not None:
        return max(1, int(threads))
    raw = os.environ.get("FUZZMET_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items, threads: int | None = None) -> list:
    items = list(items)
    workers = min(thread_count(threads), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
