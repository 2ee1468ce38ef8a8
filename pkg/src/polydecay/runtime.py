"""Process-wide runtime settings and the shared worker pool."""

import os
import threading
from concurrent.futures import ThreadPoolExecutor

# Configuration via environment variables
# POLYDECAY_THREADS=4 lets scipy.fft and the norm scans use four workers
_THREADS_ENV = "POLYDECAY_THREADS"

# Singleton pool instance with thread-safe lock
_executor: ThreadPoolExecutor | None = None
_lock = threading.Lock()


def thread_count() -> int:
    """Worker count from POLYDECAY_THREADS (default 1, invalid values fall back to 1)."""
    raw = os.environ.get(_THREADS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        return 1
    return max(count, 1)


def get_executor() -> ThreadPoolExecutor:
    """Get the shared thread pool.

    Creates the pool on first call and reuses it afterwards. Thread-safe, so
    concurrent scans never race to build two pools.

    Returns:
        ThreadPoolExecutor sized by POLYDECAY_THREADS
    """
    global _executor
    if _executor is None:
        with _lock:
            # Double-check after acquiring lock
            if _executor is None:
                _executor = ThreadPoolExecutor(
                    max_workers=thread_count(), thread_name_prefix="polydecay"
                )
    return _executor


def reset_executor() -> None:
    """Shut down the shared pool.

    Next call to get_executor() creates a new pool, picking up a changed
    POLYDECAY_THREADS. Thread-safe.
    """
    global _executor
    with _lock:
        if _executor is not None:
            _executor.shutdown(wait=True)
            _executor = None
