"""Small shared helpers."""

import hashlib
from concurrent.futures import ThreadPoolExecutor


def parallel_map(fn, items, threads=1):
    """Ordered map over items; thread count never affects the result."""
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
