"""Connectivity quantities of a matroid: lambda, local connectivity, closures, kappa.

kappa(Q, R) is the minimum of lambda(X) over Q <= X <= E - R. The search is a
branch-and-bound over the free elements E - Q - R. Elements are decided from
the highest index down, "outside X" before "inside X", so complete
assignments are met in ascending mask order and the first minimizer found is
the one with the smallest mask.

For a partial assignment (A inside, B outside) every completion X satisfies

    lambda(X) >= max(sqcap_M(A, B), sqcap_M*(A, B))

because local connectivity is monotone in both arguments and lambda is
self-dual. At a complete assignment the primal term equals lambda(A).
"""

from __future__ import annotations
from dataclasses import dataclass
from math import ceil, log2
from typing import List, Optional
import logging

from .config import caches_disabled
from .errors import OutOfRange, OverlappingSets
from .matroids.base_matroid import BaseMatroid
from .presets import DEADLINE_CHECK_INTERVAL
from .utils import Deadline, is_subset, iter_bits, parallel_map


@dataclass(frozen=True)
class Separation:
    side: int
    lambda_value: int


@dataclass(frozen=True)
class KappaResult:
    value: int
    witness: Separation
    exhaustive: bool = True


def _check_range(M: BaseMatroid, *masks: int) -> None:
    for mask in masks:
        if mask < 0 or mask >> M.size:
            raise OutOfRange(mask, M.size)


def _check_disjoint(M: BaseMatroid, A: int, B: int, names="Q and R") -> None:
    _check_range(M, A, B)
    if A & B:
        raise OverlappingSets(f"{names} must be disjoint; both contain {M.ground.format(A & B)}")


def connectivity(M: BaseMatroid, X: int) -> int:
    """lambda_M(X) = r(X) + r(E - X) - r(E)."""
    _check_range(M, X)
    return M.rank(X) + M.rank(M.full ^ X) - M.rank(M.full)


def local_connectivity(M: BaseMatroid, A: int, B: int) -> int:
    """sqcap_M(A, B) = r(A) + r(B) - r(A | B) for disjoint A, B."""
    _check_disjoint(M, A, B, "the two sides")
    return M.rank(A) + M.rank(B) - M.rank(A | B)


def closure(M: BaseMatroid, X: int) -> int:
    _check_range(M, X)
    rX = M.rank(X)
    cl = X
    for e in range(M.size):
        if not X >> e & 1 and M.rank(X | 1 << e) == rX:
            cl |= 1 << e
    return cl


def coclosure(M: BaseMatroid, X: int) -> int:
    return closure(M.dual(), X)


class _SeparationSearch:
    def __init__(self, M: BaseMatroid, Q: int, R: int, deadline: Optional[Deadline] = None):
        self.M = M
        self.Q = Q
        self.R = R
        self.E = M.full
        self.rE = M.rank(self.E)
        self.order = sorted(iter_bits(self.E & ~Q & ~R), reverse=True)
        self.deadline = deadline
        self.nodes = 0

    def bound(self, A: int, B: int) -> int:
        rank = self.M.rank
        rest = self.E & ~(A | B)
        primal = rank(A) + rank(B) - rank(A | B)
        if not rest:
            return primal
        dual = rank(self.E ^ A) + rank(self.E ^ B) - self.rE - rank(rest)
        return max(primal, dual)

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes % DEADLINE_CHECK_INTERVAL == 0:
            self.deadline.check()

    def minimize(self, A: int, B: int, depth: int, floor: int, threshold: Optional[int]):
        """Smallest (value, side) below ``depth``; third item tells whether the threshold stopped it."""
        best = [None, None, False]

        def visit(A, B, i):
            self._tick()
            lb = self.bound(A, B)
            if best[0] is not None and lb >= best[0]:
                return False
            if i == len(self.order):
                best[0], best[1] = lb, A
                if threshold is not None and lb < threshold:
                    best[2] = True
                    return True
                return lb <= floor
            e = 1 << self.order[i]
            return visit(A, B | e, i + 1) or visit(A | e, B, i + 1)

        visit(A, B, depth)
        return best[0], best[1], best[2]

    def collect(self, bound_limit: int) -> List[Separation]:
        found: List[Separation] = []

        def visit(A, B, i):
            self._tick()
            lb = self.bound(A, B)
            if lb > bound_limit:
                return
            if i == len(self.order):
                found.append(Separation(A, lb))
                return
            e = 1 << self.order[i]
            visit(A, B | e, i + 1)
            visit(A | e, B, i + 1)

        visit(self.Q, self.R, 0)
        return found

    def prefixes(self, depth: int):
        """Partial assignments of the first ``depth`` decided elements, in ascending mask order."""
        head = self.order[:depth]
        for p in range(1 << depth):
            A, B = self.Q, self.R
            for j, e in enumerate(head):
                if p >> (depth - 1 - j) & 1:
                    A |= 1 << e
                else:
                    B |= 1 << e
            yield A, B


def kappa(
    M: BaseMatroid,
    Q: int,
    R: int,
    threshold: Optional[int] = None,
    threads: int = 1,
    deadline: Optional[Deadline] = None,
) -> KappaResult:
    """kappa_M(Q, R) with the smallest-mask minimizing witness.

    With ``threshold`` the search returns as soon as some lambda(X) < threshold
    is found; such results carry ``exhaustive=False`` and only bound kappa
    from above. ``threads > 1`` splits the search on the highest free
    elements and reduces the parts by (value, mask), which gives the same
    answer as the sequential search.
    """
    _check_disjoint(M, Q, R)
    search = _SeparationSearch(M, Q, R, deadline)
    floor = search.bound(Q, R)
    if threads <= 1 or len(search.order) < 2:
        value, side, stopped = search.minimize(Q, R, 0, floor, threshold)
    else:
        depth = min(len(search.order), ceil(log2(threads)) + 1)

        def solve(prefix):
            A, B = prefix
            part = _SeparationSearch(M, Q, R, deadline)
            return part.minimize(A, B, depth, floor, threshold)

        parts = [p for p in parallel_map(solve, list(search.prefixes(depth)), threads) if p[0] is not None]
        below = [p for p in parts if p[2]]
        if below:
            value, side, stopped = below[0]
        else:
            value, side, stopped = min(parts, key=lambda p: (p[0], p[1]))
    logging.debug(
        f"kappa({M.ground.format(Q)}, {M.ground.format(R)}) = {value} "
        f"witness {M.ground.format(side)} after {search.nodes} nodes, {M.rank_queries} rank queries on {M!r}"
    )
    return KappaResult(value, Separation(side, value), exhaustive=not stopped)


def enumerate_separations(M: BaseMatroid, Q: int, R: int, order_bound: int) -> List[Separation]:
    """Every X with Q <= X <= E - R and lambda(X) <= order_bound - 1, in mask order."""
    _check_disjoint(M, Q, R)
    if order_bound < 1:
        raise ValueError(f"order bound must be at least 1, got {order_bound}")
    return _SeparationSearch(M, Q, R).collect(order_bound - 1)


def naive_kappa(M: BaseMatroid, Q: int, R: int) -> KappaResult:
    """Reference kappa: every admissible X in mask order, no pruning, no memo."""
    _check_disjoint(M, Q, R)
    free = M.full & ~Q & ~R
    best = None
    with caches_disabled():
        sub = 0
        while True:
            X = Q | sub
            value = connectivity(M, X)
            if best is None or value < best.lambda_value:
                best = Separation(X, value)
            if sub == free:
                break
            sub = (sub - free) & free
    return KappaResult(best.lambda_value, best)


def is_separating(M: BaseMatroid, Q: int, R: int, X: int, order: int) -> bool:
    """Whether (X, E - X) is Q-R-separating of the given order."""
    return is_subset(Q, X) and not X & R and connectivity(M, X) <= order - 1
