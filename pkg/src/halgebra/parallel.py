"""Parallel processing utilities for the identity checkers."""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, List, Optional, TypeVar

from halgebra.config import LOG_LEVEL_ENV

T = TypeVar("T")


def _configure_worker_logger() -> logging.Logger:
    """Configure a logger for worker processes."""
    logger = logging.getLogger("halgebra.parallel")
    # Check if handlers are already configured to avoid duplicate logs
    if not logger.handlers:
        log_level = os.environ.get(LOG_LEVEL_ENV, "INFO")
        numeric_level = getattr(logging, log_level.upper(), None)
        if not isinstance(numeric_level, int):
            numeric_level = int(log_level) if log_level.isdigit() else logging.INFO
        logger.setLevel(numeric_level)

        handler = logging.StreamHandler()
        formatter = logging.Formatter("%(asctime)s - %(processName)s - %(name)s - %(levelname)s - %(message)s")
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


def _run_in_worker(func: Callable[[Any], T], item: Any) -> T:
    logger = _configure_worker_logger()
    logger.debug(f"Worker {os.getpid()} evaluating {getattr(func, '__name__', func)}")
    return func(item)


def parallel_map(
    func: Callable[[Any], T],
    items: List[Any],
    max_workers: Optional[int] = None,
) -> List[T]:
    """
    Apply a function to every item, in worker processes when asked to.

    Parameters
    ----------
    func : Callable[[Any], T]
        A picklable (module-level) function of one argument.
    items : List[Any]
        The items to process. They must be picklable when ``max_workers > 1``.
    max_workers : Optional[int], optional
        Number of worker processes. None or 1 runs serially in this process.

    Returns
    -------
    List[T]
        Results in the order of ``items``.
    """
    logger = logging.getLogger("halgebra.parallel")
    if not max_workers or max_workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.info(f"Dispatching {len(items)} tasks to {max_workers} worker processes")
    with ProcessPoolExecutor(max_workers=max_workers) as executor:
        futures = [executor.submit(_run_in_worker, func, item) for item in items]
        results = [future.result() for future in futures]
    logger.info(f"Collected {len(results)} results")
    return results
