from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, Callable, TypeVar

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

_T = TypeVar("_T")
_R = TypeVar("_R")

THREADS_ENV = "ZEROLAB_NUM_THREADS"
logger = logging.getLogger(__name__)


def get_thread_count(threads: int | None = None) -> int:
    """Resolve the worker-thread count.

    An explicit `threads` wins, then the ``ZEROLAB_NUM_THREADS`` environment
    variable, then 1.
    """
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "").strip()
        if not raw:
            return 1
        try:
            threads = int(raw)
        except ValueError as e:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from e
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def ordered_map(
    func: Callable[[_T], _R],
    items: Iterable[_T],
    threads: int | None = None,
) -> Iterator[_R]:
    """Apply `func` to every item and yield the results in input order.

    With more than one thread the items are evaluated concurrently on a
    `ThreadPoolExecutor`, but consumers always see results in submission order,
    so any reduction over them is independent of the thread count.

    Parameters
    ----------
    func : Callable
        Pure function of one item.
    items : Iterable
        Work items.
    threads : int, optional
        Number of worker threads, see `get_thread_count`.
    """
    n = get_thread_count(threads)
    if n == 1:
        yield from map(func, items)
        return
    logger.debug("mapping %s over %d threads", getattr(func, "__name__", func), n)
    with ThreadPoolExecutor(max_workers=n, thread_name_prefix="zerolab") as pool:
        yield from pool.map(func, items)
