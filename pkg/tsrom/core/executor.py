"""Bounded worker pool used for per-chunk map stages."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from tsrom.errors import InvalidArgumentError
from tsrom.utils.helpers import validate_positive_int

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class ChunkExecutor:
    """
    Maps a function over chunks on a pool of independent workers.

    Results always come back in input order, so merging by position is
    identical to sequential execution regardless of scheduling.
    """

    def __init__(self, threads: int = 1):
        """
        Initialize the executor.

        Args:
            threads: Maximum number of concurrent workers
        """
        self.threads = validate_positive_int(threads, "threads")

    def map(
        self,
        fn: Callable[[T], R],
        items: Sequence[T],
        order: Optional[Sequence[int]] = None,
    ) -> List[R]:
        """
        Apply fn to every item.

        Args:
            fn: Pure function applied per item
            items: Work items
            order: Optional permutation giving the submission order

        Returns:
            Results in the order of items
        """
        items = list(items)
        if order is None:
            order = range(len(items))
        elif sorted(order) != list(range(len(items))):
            raise InvalidArgumentError("order must be a permutation of the item indices")

        results: List[Optional[R]] = [None] * len(items)

        if self.threads == 1 or len(items) <= 1:
            for index in order:
                results[index] = fn(items[index])
            return results  # type: ignore[return-value]

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = {index: pool.submit(fn, items[index]) for index in order}
            for index, future in futures.items():
                results[index] = future.result()

        logger.debug(f"Mapped {len(items)} items on {self.threads} workers")
        return results  # type: ignore[return-value]


_default_executor: Optional[ChunkExecutor] = None


def get_executor(executor: Optional[ChunkExecutor] = None) -> ChunkExecutor:
    """Return executor, or the shared single-worker executor when None"""
    global _default_executor
    if executor is not None:
        return executor
    if _default_executor is None:
        _default_executor = ChunkExecutor(threads=1)
    return _default_executor
