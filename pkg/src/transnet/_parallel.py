"""Deterministic map over contiguous index ranges.

Work is always cut into the same fixed-size chunks whatever the worker
count, and results come back in chunk order, so outputs do not depend on
the number of threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")

DEFAULT_CHUNK = 8192


def chunk_ranges(lo: int, hi: int, chunk: int = DEFAULT_CHUNK) -> list[tuple[int, int]]:
    if chunk < 1:
        raise ValueError("chunk must be positive")
    return [(a, min(a + chunk, hi)) for a in range(lo, hi, chunk)]


def map_ranges(fn: Callable[[int, int], T], lo: int, hi: int, threads: int = 1,
               chunk: int = DEFAULT_CHUNK) -> list[T]:
    ranges = chunk_ranges(lo, hi, chunk)
    if threads is None or threads <= 1 or len(ranges) <= 1:
        return [fn(a, b) for a, b in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda r: fn(*r), ranges))
