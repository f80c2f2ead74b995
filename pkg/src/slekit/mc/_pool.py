import os
from concurrent.futures import ProcessPoolExecutor


def default_workers() -> int:
    return os.cpu_count() or 1


def map_samples(fn, tasks, workers=None, chunksize=8):
    """Ordered map over independent sample tasks.

    Results come back in task order whatever the worker count, so aggregates
    do not depend on scheduling.
    """
    tasks = list(tasks)
    workers = default_workers() if workers is None else int(workers)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks, chunksize=chunksize))
