"""Order-preserving map over independent tasks.

``BLOCHLAB_THREADS`` caps the worker count (default 1).  Results are always
returned in input order, so reductions over them are deterministic whatever
the thread count.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def max_threads():
    try:
        n = int(os.environ.get("BLOCHLAB_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def pmap(fn, items):
    items = list(items)
    n = min(max_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
