from __future__ import annotations
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple
import logging

import colorama

from . import shared
from .classification import shrink_to_linking_pair
from .config import caches_disabled
from .connectivity import _check_disjoint, kappa
from .errors import ElementNotFree, TheoremViolation
from .matroids.base_matroid import BaseMatroid, Operation, carry_mask
from .utils import Deadline, fingerprint, iter_bits, parallel_map, popcount


def c_bound(k: int, l: int) -> int:
    """Size of F that guarantees an element keeping both connectivities: (2l+1) * 2^(2k+1)."""
    if k < 0 or l < 0:
        raise ValueError(f"connectivities must be non-negative, got ({k}, {l})")
    return (2 * l + 1) * 2 ** (2 * k + 1)


def conjecture_bound(k: int, l: int) -> int:
    """2kl - k - l + 1, one more than the free part of the (k+1) x (l+1) grid."""
    if k < 0 or l < 0:
        raise ValueError(f"connectivities must be non-negative, got ({k}, {l})")
    return 2 * k * l - k - l + 1


@dataclass(frozen=True, eq=False)
class IntertwineInstance:
    matroid: BaseMatroid
    q: int
    r: int
    s: int
    t: int
    name: str = ""

    def __post_init__(self):
        _check_disjoint(self.matroid, self.q, self.r, "Q and R")
        _check_disjoint(self.matroid, self.s, self.t, "S and T")

    @property
    def free(self) -> int:
        return self.matroid.full & ~(self.q | self.r | self.s | self.t)

    @property
    def free_size(self) -> int:
        return popcount(self.free)

    def connectivities(self, deadline: Optional[Deadline] = None) -> Tuple[int, int]:
        """(kappa(Q, R), kappa(S, T)), computed once per instance."""
        cached = self.__dict__.get("_kappas")
        if cached is None:
            cached = (
                kappa(self.matroid, self.q, self.r, deadline=deadline).value,
                kappa(self.matroid, self.s, self.t, deadline=deadline).value,
            )
            object.__setattr__(self, "_kappas", cached)
        return cached

    @property
    def k(self) -> int:
        return self.connectivities()[0]

    @property
    def l(self) -> int:
        return self.connectivities()[1]

    def in_minor(self, view: BaseMatroid) -> "IntertwineInstance":
        move = lambda mask: carry_mask(mask, self.matroid, view)
        return IntertwineInstance(view, move(self.q), move(self.r), move(self.s), move(self.t), self.name)

    def fingerprint(self) -> str:
        M = self.matroid
        return fingerprint(M.labels, M.signature(), self.q, self.r, self.s, self.t)

    def describe(self) -> str:
        fmt = self.matroid.ground.format
        return f"Q={fmt(self.q)} R={fmt(self.r)} S={fmt(self.s)} T={fmt(self.t)} F={fmt(self.free)}"


@dataclass
class IntertwineReport:
    element: Optional[int]
    operation: Optional[Operation]
    kappa_qr_before: int
    kappa_st_before: int
    kappa_qr_after: Optional[int]
    kappa_st_after: Optional[int]
    guaranteed: bool
    free_size: int
    c_bound: int
    conjecture_bound: int
    shrunk_pair: Optional[Tuple[int, int]] = None
    trace: List[Tuple[int, Operation]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.element is not None


@dataclass
class PairRow:
    element: int
    operation: Operation
    kappa_qr: int
    kappa_st: int
    preserves: bool


@dataclass
class ShrinkResult:
    instance: IntertwineInstance
    steps: List[Tuple[int, Operation]]
    consistent: bool

    @property
    def result(self) -> BaseMatroid:
        return self.instance.matroid


def _first_preserving(
    base: BaseMatroid,
    view: BaseMatroid,
    candidates: Sequence[int],
    pairs: Sequence[Tuple[int, int]],
    targets: Sequence[int],
    threads=None,
    deadline: Optional[Deadline] = None,
) -> Optional[Tuple[int, Operation]]:
    """Smallest (element, operation) of ``view`` keeping every pair at its target kappa.

    Elements and pairs are in ``base`` coordinates; deletion is tried before
    contraction. Inside the scan kappa stops early below the target.
    """
    jobs = [(e, op) for e in candidates for op in Operation]

    def keeps(job):
        e, op = job
        minor = op.apply(view, carry_mask(1 << e, base, view).bit_length() - 1)
        for (A, B), target in zip(pairs, targets):
            result = kappa(
                minor,
                carry_mask(A, base, minor),
                carry_mask(B, base, minor),
                threshold=target,
                deadline=deadline,
            )
            if result.value < target:
                return False
        return True

    width = max(1, shared.state.threads if threads is None else threads)
    for start in range(0, len(jobs), width):
        chunk = jobs[start : start + width]
        for job, ok in zip(chunk, parallel_map(keeps, chunk, width)):
            if ok:
                return job
    return None


def minor_kappas(inst: IntertwineInstance, e: int, op: Operation) -> Tuple[int, int]:
    """Exhaustive kappa(Q, R) and kappa(S, T) in M\\e or M/e."""
    view = op.apply(inst.matroid, e)
    move = lambda mask: carry_mask(mask, inst.matroid, view)
    return (
        kappa(view, move(inst.q), move(inst.r)).value,
        kappa(view, move(inst.s), move(inst.t)).value,
    )


def verify_intertwined(inst: IntertwineInstance, e: int, op: Operation) -> bool:
    """Recompute everything on fresh views with rank memoization switched off."""
    if not (0 <= e < inst.matroid.size and inst.free >> e & 1):
        raise ElementNotFree(f"element {e} is not in F")
    with caches_disabled():
        M = inst.matroid
        k = kappa(M, inst.q, inst.r).value
        l = kappa(M, inst.s, inst.t).value
        return minor_kappas(inst, e, op) == (k, l)


def _proof_path_search(inst: IntertwineInstance, threads=None, deadline=None):
    """Shrink (S, T) to a linking pair, then search the working minor until an element of F qualifies.

    Qualifying elements of (S | T) - (S1 | T1) are applied to the working minor
    and the search goes on.
    """
    M = inst.matroid
    k, l = inst.connectivities(deadline)
    S1, T1 = shrink_to_linking_pair(M, inst.s, inst.t)
    logging.debug(f"proof path: shrunk to S1={M.ground.format(S1)} T1={M.ground.format(T1)}")
    work = M.minor()
    trace: List[Tuple[int, Operation]] = []
    fixed = inst.q | inst.r | S1 | T1
    while True:
        alive = carry_mask(work.full, work, M)
        candidates = list(iter_bits(alive & ~fixed))
        job = _first_preserving(M, work, candidates, [(inst.q, inst.r), (S1, T1)], [k, l], threads, deadline)
        if job is None or inst.free >> job[0] & 1:
            return job, trace, (S1, T1)
        e, op = job
        logging.debug(f"proof path: {op.value} {M.labels[e]} outside F")
        trace.append(job)
        work = op.apply(work, carry_mask(1 << e, M, work).bit_length() - 1)


def find_intertwined_element(
    inst: IntertwineInstance,
    proof_path: bool = False,
    threads=None,
    deadline: Optional[Deadline] = None,
) -> IntertwineReport:
    """First (e, op) with e in F keeping kappa(Q, R) = k and kappa(S, T) = l.

    Elements are scanned in ascending index, deletion before contraction. The
    returned pair is re-verified with exhaustive kappa on fresh views.
    """
    M = inst.matroid
    k, l = inst.connectivities(deadline)
    report = IntertwineReport(
        element=None,
        operation=None,
        kappa_qr_before=k,
        kappa_st_before=l,
        kappa_qr_after=None,
        kappa_st_after=None,
        guaranteed=inst.free_size >= c_bound(k, l),
        free_size=inst.free_size,
        c_bound=c_bound(k, l),
        conjecture_bound=conjecture_bound(k, l),
    )
    if proof_path:
        job, report.trace, report.shrunk_pair = _proof_path_search(inst, threads, deadline)
    else:
        job = _first_preserving(
            M, M, list(iter_bits(inst.free)), [(inst.q, inst.r), (inst.s, inst.t)], [k, l], threads, deadline
        )

    if job is not None:
        e, op = job
        with caches_disabled():
            after = minor_kappas(inst, e, op)
        if after != (k, l):
            raise TheoremViolation(
                f"{op.value} {M.labels[e]} passed the scan but gives kappa pair {after} instead of {(k, l)}", inst
            )
        report.element, report.operation = e, op
        report.kappa_qr_after, report.kappa_st_after = after
        logging.info(f"{op.value} {M.labels[e]} keeps (k, l) = ({k}, {l})")
    elif report.guaranteed:
        logging.error(
            colorama.Back.RED
            + f"no qualifying element although |F| = {report.free_size} >= c({k},{l}) = {report.c_bound}"
            + colorama.Style.RESET_ALL
        )
        raise TheoremViolation(
            f"no element of F keeps both connectivities although |F| = {report.free_size} >= {report.c_bound}",
            inst,
        )
    return report


def exhaustive_pair_table(inst: IntertwineInstance, fresh: bool = False) -> List[PairRow]:
    """All four kappa values for every (e, op) with e in F, computed exhaustively."""
    k, l = inst.k, inst.l
    jobs = [(e, op) for e in iter_bits(inst.free) for op in Operation]

    def row(job):
        e, op = job
        qr, st = minor_kappas(inst, e, op)
        return PairRow(e, op, qr, st, (qr, st) == (k, l))

    if fresh:
        with caches_disabled():
            return [row(job) for job in jobs]
    return parallel_map(row, jobs)


def shrink_preserving_both(
    inst: IntertwineInstance, threads=None, deadline=None, proof_path: bool = False
) -> ShrinkResult:
    """Apply qualifying operations until none is left; every step keeps (k, l).

    Steps are logged in the coordinates of ``inst.matroid``. With ``proof_path``
    each step comes from the linking-pair search.
    """
    k, l = inst.connectivities(deadline)
    current = inst
    steps: List[Tuple[int, Operation]] = []
    while True:
        report = find_intertwined_element(current, proof_path=proof_path, threads=threads, deadline=deadline)
        if not report.found:
            break
        view = report.operation.apply(current.matroid, report.element)
        e = carry_mask(1 << report.element, current.matroid, inst.matroid).bit_length() - 1
        current = current.in_minor(view)
        if (current.k, current.l) != (k, l):
            raise TheoremViolation(f"step {report.operation.value} {inst.matroid.labels[e]} changed (k, l)", inst)
        steps.append((e, report.operation))
        logging.debug(f"shrink: {report.operation.value} {inst.matroid.labels[e]}, |F| = {current.free_size}")
    consistent = current.free_size < c_bound(k, l)
    if not consistent:
        raise TheoremViolation(
            f"shrinking stalled with |F| = {current.free_size} >= c({k},{l}) = {c_bound(k, l)}", current
        )
    return ShrinkResult(current, steps, consistent)
