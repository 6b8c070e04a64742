from concurrent.futures import ThreadPoolExecutor


def ordered_map(func, items, n_jobs=None):
    """``list(map(func, items))``, optionally on a thread pool.

    Results keep input order, so output never depends on the schedule.
    """
    items = list(items)
    if n_jobs is None or n_jobs == 1 or len(items) < 2:
        return [func(item) for item in items]
    workers = None if n_jobs == -1 else int(n_jobs)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
