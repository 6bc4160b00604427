import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "OPTOLASER_THREADS"


def n_workers() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


def ordered_map(func, items):
    """Map ``func`` over ``items`` on a thread pool; results keep input order.

    The compiled kernels release the GIL, so threads give real parallelism.
    """
    items = list(items)
    workers = min(n_workers(), len(items))
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
