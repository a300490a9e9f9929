"""Thread-pool helpers for the per-pixel trainers.

Pixel positions are independent, so trainers split the position range into
fixed-size chunks and may process chunks on worker threads.  Chunk
boundaries never depend on the thread count, and every chunk writes to a
disjoint output slice, so results are bit-identical for any thread count.
``PXFES_THREADS`` caps the pool size; unset means implementation-chosen.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_ENV_VAR = "PXFES_THREADS"
_DEFAULT_CAP = 8


def thread_count(requested: int | None = None) -> int:
    """Resolve the worker-thread count for a trainer call.

    An explicit ``requested`` wins, then the ``PXFES_THREADS`` environment
    variable, then ``min(8, cpu_count)``.
    """
    if requested is not None:
        if requested < 1:
            raise ValueError(f"thread count must be positive, got {requested}")
        return requested
    env = os.environ.get(_ENV_VAR)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{_ENV_VAR} must be a positive integer, got {env!r}")
        if value < 1:
            raise ValueError(f"{_ENV_VAR} must be a positive integer, got {env!r}")
        return value
    return min(_DEFAULT_CAP, os.cpu_count() or 1)


def chunk_spans(n_items: int, chunk_size: int) -> list[tuple[int, int]]:
    """Fixed [start, stop) spans covering ``range(n_items)``."""
    if chunk_size < 1:
        raise ValueError(f"chunk size must be positive, got {chunk_size}")
    return [(i, min(i + chunk_size, n_items)) for i in range(0, n_items, chunk_size)]


def run_chunks(spans, worker, threads: int) -> None:
    """Run ``worker(start, stop)`` over every span, possibly on a pool.

    Exceptions from workers propagate to the caller.
    """
    if threads <= 1 or len(spans) <= 1:
        for start, stop in spans:
            worker(start, stop)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(worker, start, stop) for start, stop in spans]
        for future in futures:
            future.result()
