"""Thread-pool helper with a deterministic reduction order.

Workers split at pivot granularity.  Results always come back in index
order, so every reduction downstream sees the same sequence no matter how
many threads ran, and outputs stay byte-identical across worker counts.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

THREADS_ENV = "L1LINE_THREADS"

T = TypeVar("T")


def resolve_threads(threads: int | None = None) -> int:
    """Explicit argument, else the L1LINE_THREADS variable, else CPU count."""
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}")
        else:
            threads = os.cpu_count() or 1
    threads = int(threads)
    if threads < 1:
        raise ValueError("thread count must be at least 1")
    return threads


def map_indices(fn: Callable[[int], T], count: int,
                threads: int | None = None) -> list[T]:
    """Evaluate fn(0..count-1), in order, on up to ``threads`` workers."""
    t = resolve_threads(threads)
    if t == 1 or count <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=min(t, count)) as pool:
        return list(pool.map(fn, range(count)))
