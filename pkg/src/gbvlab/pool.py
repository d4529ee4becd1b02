"""Worker pool ownership.

Library functions accept an optional `mapper` and never create workers of their
own; the CLI (or a test) owns the pool through `worker_pool`.
"""
from __future__ import annotations

import logging
import os
from contextlib import contextmanager
from multiprocessing import Pool
from multiprocessing.pool import Pool as PoolType
from typing import Callable, Iterable, Iterator, List, Optional, TypeVar

from .typing import Mapper

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


class SerialMap:
    def __call__(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        return list(map(func, items))


class ParallelMap:
    def __init__(self, pool: PoolType):
        self.pool = pool

    def __call__(self, func: Callable[[T], R], items: Iterable[T]) -> List[R]:
        # Pool.map returns results in input order.
        return self.pool.map(func, list(items))


def default_threads() -> int:
    if hasattr(os, "sched_getaffinity"):
        return len(os.sched_getaffinity(0))
    return os.cpu_count() or 1


def resolve_mapper(mapper: Optional[Mapper]) -> Mapper:
    return SerialMap() if mapper is None else mapper


def chunked(items: List[T], parts: int) -> List[List[T]]:
    """Splits items into at most `parts` contiguous, non-empty chunks."""
    parts = max(1, min(parts, len(items)))
    size, extra = divmod(len(items), parts)
    chunks, start = [], 0
    for index in range(parts):
        stop = start + size + (1 if index < extra else 0)
        chunks.append(items[start:stop])
        start = stop
    return chunks


@contextmanager
def worker_pool(threads: Optional[int] = None) -> Iterator[Mapper]:
    """Context manager yielding a map capability backed by a process pool."""
    threads = default_threads() if threads is None else threads
    if threads <= 1:
        logger.debug("Using in-process serial map")
        yield SerialMap()
        return
    logger.debug("Starting process pool with %d workers", threads)
    with Pool(processes=threads) as pool:
        yield ParallelMap(pool)
        pool.close()
        pool.join()
