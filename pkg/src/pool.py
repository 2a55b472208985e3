"""
Worker pool for independent simulation tasks.
"""
import logging
from contextlib import contextmanager
from concurrent.futures import ThreadPoolExecutor

log = logging.getLogger(__name__)

# Global worker pool
_pool = None
_workers = 1


def init_pool(workers=1):
    """
    Initialize the worker pool.

    Args:
        workers: Number of worker threads; 1 runs tasks inline

    Returns:
        The initialized executor, or None when running inline
    """
    global _pool, _workers
    if workers < 1:
        raise ValueError(f"Worker count must be positive, got {workers}")
    if _pool is not None:
        close_pool()

    _workers = workers
    if workers > 1:
        _pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="sim-worker")
    log.debug("Worker pool initialized with %d worker(s)", workers)
    return _pool


def worker_count():
    """Number of workers tasks are spread over."""
    return _workers


@contextmanager
def get_executor():
    """
    Get the pool executor.

    Yields None when no pool is running, in which case callers run inline.
    """
    yield _pool


def run_tasks(fn, items):
    """
    Run fn over items and return the results in item order.

    Args:
        fn: Callable applied to each item; must not share mutable state
        items: Iterable of task inputs

    Returns:
        List of results, ordered like items regardless of scheduling
    """
    items = list(items)
    with get_executor() as executor:
        if executor is None or len(items) < 2:
            return [fn(item) for item in items]
        return list(executor.map(fn, items))


def close_pool():
    """Shut the worker pool down."""
    global _pool, _workers
    if _pool is not None:
        _pool.shutdown(wait=True)
        _pool = None
    _workers = 1
