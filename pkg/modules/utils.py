# -*- coding:utf-8 -*-
from __future__ import annotations
from typing import Callable, Iterable, Iterator, List, Sequence, TypeVar
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
import hashlib
import json
import logging
import os
import time

from . import shared
from .errors import BudgetExhausted

T = TypeVar("T")
U = TypeVar("U")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def full_mask(size: int) -> int:
    return (1 << size) - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def format_mask(mask: int, labels: Sequence[str]) -> str:
    return "{" + ",".join(labels[i] for i in iter_bits(mask)) + "}"


def fingerprint(*parts) -> str:
    md5_hash = hashlib.md5()
    for part in parts:
        md5_hash.update(repr(part).encode("utf-8"))
        md5_hash.update(b"\x00")
    return md5_hash.hexdigest()


def parallel_map(func: Callable[[T], U], items: Sequence[T], threads=None, processes=False) -> List[U]:
    """Apply ``func`` to every item; results come back in input order.

    One worker (or one item) runs inline so that ``--threads 1`` never touches
    an executor. ``processes=True`` needs a picklable, top-level ``func``.
    """
    items = list(items)
    workers = shared.state.threads if threads is None else threads
    workers = max(1, min(workers, len(items)))
    if workers == 1:
        return [func(item) for item in items]
    executor_cls = ProcessPoolExecutor if processes else ThreadPoolExecutor
    logging.debug(f"parallel_map over {len(items)} items with {workers} workers ({executor_cls.__name__})")
    with executor_cls(max_workers=workers) as executor:
        return list(executor.map(func, items))


class Deadline:
    """Wall-clock budget shared by one search; ``None`` seconds means unlimited."""

    def __init__(self, seconds=None):
        self.seconds = seconds
        self.expires = None if seconds is None else time.monotonic() + seconds

    def check(self):
        if self.expires is not None and time.monotonic() > self.expires:
            raise BudgetExhausted(f"time budget of {self.seconds}s exhausted")


def save_json(path, data):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")
    logging.debug(f"wrote {path}")
    return path
