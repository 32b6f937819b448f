"""Order-preserving map over independent pure evaluations."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from tqdm import tqdm

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1,
    *,
    desc: Optional[str] = None,
    progress: bool = False,
) -> List[R]:
    """Apply ``func`` to every item, keeping input order.

    ``func`` must be picklable when ``workers > 1``. Results do not depend on
    the worker count.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in tqdm(items, desc=desc, disable=not progress, leave=False)]
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        mapped = pool.map(func, items, chunksize=chunksize)
        return list(tqdm(mapped, total=len(items), desc=desc, disable=not progress, leave=False))


__all__ = ["parallel_map"]
