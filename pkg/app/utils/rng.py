from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

from app.core.config import CHUNK_SIZE, WORKERS

logger = logging.getLogger(__name__)

R = TypeVar("R")


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for (seed, index); counter-based, order-free."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def chunk_sizes(total: int, chunk_size: int = CHUNK_SIZE) -> List[int]:
    """Split total draws into fixed-size chunks; the last one may be short."""
    if total <= 0:
        return []
    full, rest = divmod(total, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def run_chunked(task: Callable[[np.random.Generator, int], R], total: int, seed: int,
                chunk_size: int = CHUNK_SIZE, workers: int = WORKERS) -> List[R]:
    """
    Run task(rng, size) on every chunk and return the results in chunk order.

    Chunk k always draws from substream(seed, k), so results depend only on
    seed and chunk size, never on the worker count.
    """
    sizes = chunk_sizes(total, chunk_size)
    jobs = [(substream(seed, k), size) for k, size in enumerate(sizes)]
    logger.debug("Running chunked draws",
                 extra={"operation": "run_chunked", "seed": seed, "total": total, "chunks": len(jobs)})
    if workers <= 1 or len(jobs) <= 1:
        return [task(rng, size) for rng, size in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: task(*job), jobs))


def mean_and_se(sums: Sequence[float], sumsqs: Sequence[float], total: int) -> tuple:
    """Combine per-chunk sums into (mean, standard error of the mean)."""
    s = float(np.sum(sums))
    ss = float(np.sum(sumsqs))
    mean = s / total
    if total < 2:
        return mean, 0.0
    var = max((ss - s * s / total) / (total - 1), 0.0)
    return mean, float(np.sqrt(var / total))
