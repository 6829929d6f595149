"""Process-pool helper shared by the census and enumeration code."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_workers() -> int:
    """Worker count from ``KTC_WORKERS``, else 1."""
    try:
        return max(1, int(os.environ.get("KTC_WORKERS", "1")))
    except ValueError:
        return 1


def ranges(total: int, chunk: int, start: int = 0) -> list[tuple[int, int]]:
    return [(a, min(a + chunk, total)) for a in range(start, total, chunk)]


def pmap(fn, tasks, workers: int | None = None) -> list:
    """``[fn(*t) for t in tasks]``, spread over processes; order preserved."""
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    if workers == 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, *zip(*tasks)))
