from __future__ import annotations
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple
import logging

import colorama

from .connectivity import _check_disjoint, _check_range, enumerate_separations, kappa
from .errors import ElementInPair, ShrinkStuck, TheoremViolation
from .matroids.base_matroid import BaseMatroid, Operation, carry_mask
from .utils import iter_bits, parallel_map, popcount


@dataclass(frozen=True)
class PairClassification:
    element: int
    deletable: bool
    contractible: bool
    kappa_after_delete: int
    kappa_after_contract: int

    @property
    def flexible(self) -> bool:
        return self.deletable and self.contractible

    @property
    def kind(self) -> str:
        if self.flexible:
            return "flexible"
        return "deletable" if self.deletable else "contractible"


@dataclass
class ReductionLog:
    steps: List[Tuple[int, Operation]] = field(default_factory=list)
    result: Optional[BaseMatroid] = None

    def replay(self, matroid: BaseMatroid) -> BaseMatroid:
        view = matroid.minor()
        for e, op in self.steps:
            view = op.apply(view, view.project(matroid.lift(1 << e)).bit_length() - 1)
        return view


def kappa_after(M: BaseMatroid, Q: int, R: int, e: int, op: Operation, threshold=None, deadline=None):
    """kappa of (Q, R) in M\\e or M/e; Q and R are given in M's coordinates."""
    view = op.apply(M, e)
    return kappa(view, carry_mask(Q, M, view), carry_mask(R, M, view), threshold=threshold, deadline=deadline)


def classify(M: BaseMatroid, Q: int, R: int, e: int, k: Optional[int] = None) -> PairClassification:
    """Deletable/contractible flags of ``e`` with respect to (Q, R), from exact kappa in both minors."""
    _check_disjoint(M, Q, R)
    _check_range(M, 1 << e)
    if (Q | R) >> e & 1:
        raise ElementInPair(f"{M.labels[e]} belongs to Q or R")
    if k is None:
        k = kappa(M, Q, R).value
    after_delete = kappa_after(M, Q, R, e, Operation.Delete).value
    after_contract = kappa_after(M, Q, R, e, Operation.Contract).value
    result = PairClassification(
        element=e,
        deletable=after_delete == k,
        contractible=after_contract == k,
        kappa_after_delete=after_delete,
        kappa_after_contract=after_contract,
    )
    if not (result.deletable or result.contractible):
        logging.error(colorama.Back.RED + f"{M.labels[e]} is neither deletable nor contractible" + colorama.Style.RESET_ALL)
        raise TheoremViolation(f"element {M.labels[e]} is neither deletable nor contractible", (M, Q, R, e))
    return result


def classify_all(M: BaseMatroid, Q: int, R: int, F: int, threads=None) -> List[PairClassification]:
    _check_disjoint(M, Q, R)
    _check_range(M, F)
    if F & (Q | R):
        raise ElementInPair(f"{M.ground.format(F & (Q | R))} lie in Q or R")
    k = kappa(M, Q, R).value
    return parallel_map(lambda e: classify(M, Q, R, e, k), list(iter_bits(F)), threads)


def reduce_to_linking_minor(M: BaseMatroid, Q: int, R: int) -> ReductionLog:
    """Delete or contract every element outside Q | R while keeping kappa(Q, R).

    Elements go in ascending index; deletion is tried first. The result N has
    ground set Q | R and lambda_N(Q) = kappa_M(Q, R).
    """
    _check_disjoint(M, Q, R)
    k = kappa(M, Q, R).value
    log = ReductionLog(result=M.minor())
    for e in iter_bits(M.full & ~(Q | R)):
        N = log.result
        j = carry_mask(1 << e, M, N).bit_length() - 1
        for op in Operation:
            view = op.apply(N, j)
            value = kappa(view, carry_mask(Q, M, view), carry_mask(R, M, view), threshold=k).value
            if value == k:
                break
        else:
            raise TheoremViolation(f"neither deleting nor contracting {M.labels[e]} keeps kappa = {k}", (M, Q, R, e))
        logging.debug(f"linking minor: {op.value} {M.labels[e]}")
        log.steps.append((e, op))
        log.result = view
    return log


def shrink_to_linking_pair(M: BaseMatroid, S: int, T: int) -> Tuple[int, int]:
    """Subsets S1 of S and T1 of T with |S1| = |T1| = kappa(S1, T1) = kappa(S, T).

    Removes the smallest-index element whose removal keeps kappa, alternating
    between the two sides.
    """
    _check_disjoint(M, S, T, "S and T")
    target = kappa(M, S, T).value
    sides = [S, T]
    turn = 0
    while popcount(sides[0]) > target or popcount(sides[1]) > target:
        if popcount(sides[turn]) > target:
            for x in iter_bits(sides[turn]):
                trial = list(sides)
                trial[turn] ^= 1 << x
                if kappa(M, trial[0], trial[1], threshold=target).value == target:
                    logging.debug(f"shrink: dropped {M.labels[x]} from side {'ST'[turn]}")
                    sides = trial
                    break
            else:
                raise ShrinkStuck(
                    f"no element of {M.ground.format(sides[turn])} can leave while keeping kappa = {target}"
                )
        turn ^= 1
    return sides[0], sides[1]


def keep_flexible_violations(M: BaseMatroid, Q: int, R: int) -> List[Tuple[int, int]]:
    """Pairs (U, e) where e is non-contractible for (Q, R) but contractible for (U, R).

    U ranges over the Q-R-separating sets of order k + 1 and e over E - (U | R).
    An empty list is the expected outcome.
    """
    k = kappa(M, Q, R).value
    non_contractible: Dict[int, bool] = {}
    violations = []
    for sep in enumerate_separations(M, Q, R, k + 1):
        U = sep.side
        kappa_UR = kappa(M, U, R).value
        for e in iter_bits(M.full & ~(U | R)):
            if e not in non_contractible:
                non_contractible[e] = kappa_after(M, Q, R, e, Operation.Contract, threshold=k).value != k
            if not non_contractible[e]:
                continue
            if kappa_after(M, U, R, e, Operation.Contract, threshold=kappa_UR).value == kappa_UR:
                violations.append((U, e))
    return violations
