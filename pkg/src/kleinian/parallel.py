"""Order-preserving map over a process pool.  Results never depend on the
worker count, only wall time does."""

import os
from concurrent.futures import ProcessPoolExecutor

ENV_WORKERS = "KLEINIAN_WORKERS"


def default_workers():
    try:
        return max(1, int(os.environ.get(ENV_WORKERS, "1")))
    except ValueError:
        return 1


def pmap(fn, items, workers=None):
    items = list(items)
    workers = default_workers() if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
