from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from app.config import Settings

T = TypeVar("T")
R = TypeVar("R")


def fan_out(func: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """
    Map `func` over `items`, keeping input order.

    Args:
        func: Pure function of one item.
        items: Work items.
        threads: Worker count; None reads Settings.THREADS, 1 runs inline.
    """
    threads = Settings.THREADS if threads is None else threads
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
