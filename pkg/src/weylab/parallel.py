"""Deterministic chunked map-reduce.

Work is split into fixed-size chunks keyed by chunk index; partial results
are combined with a pairwise tree whose shape depends only on the number of
chunks.  The outcome is therefore bit-identical no matter how many worker
threads executed the chunks (numpy releases the GIL on large array ops, so
threads still help).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

DEFAULT_CHUNK = 512


def chunk_ranges(n_items: int, chunk: int) -> list[tuple[int, int]]:
    """Half-open index ranges of size `chunk` covering range(n_items)."""
    if n_items < 0:
        raise ValueError("n_items must be >= 0")
    if chunk < 1:
        raise ValueError("chunk must be >= 1")
    return [(lo, min(lo + chunk, n_items)) for lo in range(0, n_items, chunk)]


def pairwise_reduce(items: Sequence[R], combine: Callable[[R, R], R]) -> R:
    """Reduce with a fixed binary tree (shape depends only on len(items))."""
    if not items:
        raise ValueError("cannot reduce an empty sequence")
    level = list(items)
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            nxt.append(combine(level[i], level[i + 1]))
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def run_chunked(
    ranges: Sequence[tuple[int, int]],
    work: Callable[[int, int, int], R],
    combine: Callable[[R, R], R],
    threads: int = 1,
) -> R:
    """Evaluate work(chunk_idx, lo, hi) over all ranges and pairwise-combine.

    Results are collected by chunk index before reduction, so the reduction
    order never depends on thread scheduling.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if threads == 1 or len(ranges) <= 1:
        parts = [work(i, lo, hi) for i, (lo, hi) in enumerate(ranges)]
    else:
        parts: list[R] = [None] * len(ranges)  # type: ignore[list-item]

        def job(i: int) -> None:
            lo, hi = ranges[i]
            parts[i] = work(i, lo, hi)

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(job, range(len(ranges))))
    return pairwise_reduce(parts, combine)
