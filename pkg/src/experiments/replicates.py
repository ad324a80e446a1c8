"""Deterministic replicate pool.

Replicates get seeds derived from one top-level seed and a key path, run
serially or in worker processes, and come back ordered by replicate index
whatever the completion order.
"""

import logging
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import TypeVar

from src.exceptions import ValidationError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def resolve_workers(workers: int | None = None) -> int:
    """Worker count from the argument, else env PREQ_WORKERS, else 1."""
    if workers is None:
        raw = os.getenv("PREQ_WORKERS", "1")
        try:
            workers = int(raw)
        except ValueError as e:
            raise ValidationError(f"PREQ_WORKERS must be an integer, got {raw!r}") from e
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")
    return workers


def run_replicates(
    task: Callable[[int], T],
    seeds: Sequence[int],
    workers: int | None = None,
) -> list[T]:
    """
    Evaluate task(seed) for every replicate seed.

    Args:
        task: Picklable callable (module-level function or functools.partial of one)
        seeds: Replicate seeds, index i for replicate i
        workers: Worker processes (default: env PREQ_WORKERS or 1)

    Returns:
        Results in replicate order
    """
    workers = resolve_workers(workers)
    if workers == 1 or len(seeds) <= 1:
        return [task(seed) for seed in seeds]

    logger.info(f"Running {len(seeds)} replicates on {workers} workers")
    chunksize = max(1, len(seeds) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        # map preserves input order
        return list(executor.map(task, seeds, chunksize=chunksize))
