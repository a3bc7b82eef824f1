"""Order-preserving parallel map; worker count from FLAGMIRROR_THREADS."""
import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "FLAGMIRROR_THREADS"


def thread_count():
    raw = os.environ.get(ENV_THREADS, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    return max(1, n)


def pmap(fn, items):
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
