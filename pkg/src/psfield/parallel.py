"""Deterministic fan-out of independent tasks over worker processes."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def default_threads() -> int:
    return os.cpu_count() or 1


def run_partitioned(fn, tasks, threads: int = 1) -> list:
    """``[fn(t) for t in tasks]``, optionally spread over ``threads`` processes.

    Results come back in task order, so merges are independent of the
    worker count.
    """
    tasks = list(tasks)
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as ex:
        return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * threads))))
