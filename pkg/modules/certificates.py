from __future__ import annotations
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple
import logging

from .classification import classify_all
from .connectivity import _check_disjoint, _check_range, connectivity, enumerate_separations, kappa
from .errors import CertificateNotFound, ElementInPair, FlexibleElement
from .matroids.base_matroid import BaseMatroid
from .utils import is_subset, iter_bits, mask_of, popcount


class Branch(Enum):
    Guts = "guts"
    Coguts = "coguts"


@dataclass
class NestedSequence:
    """Ordering f_1..f_n of F with nested Q-R-separating sets A_1 <= ... <= A_n.

    ``branch[i]`` records whether f_i sits in the closures (guts) or the
    coclosures (coguts) of both A_i - f_i and E - A_i.
    """

    ordering: List[int] = field(default_factory=list)
    chain: List[int] = field(default_factory=list)
    branch: List[Branch] = field(default_factory=list)

    def __len__(self):
        return len(self.ordering)


@dataclass
class ConditionVerdict:
    passed: bool = True
    first_violation: Optional[int] = None  # 1-based position

    def fail(self, position: int):
        if self.passed:
            self.passed = False
            self.first_violation = position


CONDITIONS = ("i", "ii", "iii", "iv")


@dataclass
class VerificationReport:
    conditions: Dict[str, ConditionVerdict] = field(
        default_factory=lambda: {name: ConditionVerdict() for name in CONDITIONS}
    )
    warnings: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.conditions.values())


def _spans(M: BaseMatroid, X: int, f: int) -> bool:
    return M.rank(X | 1 << f) == M.rank(X)


def branch_holding(M: BaseMatroid, dual: BaseMatroid, f: int, A: int) -> Optional[Branch]:
    """Which disjunct of the guts/coguts condition holds for f in A; guts wins ties."""
    inside = A & ~(1 << f)
    outside = M.full & ~A
    if _spans(M, inside, f) and _spans(M, outside, f):
        return Branch.Guts
    if _spans(dual, inside, f) and _spans(dual, outside, f):
        return Branch.Coguts
    return None


def build_nested_sequence(M: BaseMatroid, Q: int, R: int, F: int, threads=None) -> NestedSequence:
    """Backtracking over (next element, next separating set) in (index, mask) order."""
    _check_disjoint(M, Q, R)
    _check_range(M, F)
    if F & (Q | R):
        raise ElementInPair(f"{M.ground.format(F & (Q | R))} lie in Q or R")
    if not F:
        return NestedSequence()
    flexible = [c.element for c in classify_all(M, Q, R, F, threads) if c.flexible]
    if flexible:
        raise FlexibleElement(f"flexible elements cannot be certified: {M.ground.format(mask_of(flexible))}")

    k = kappa(M, Q, R).value
    by_trace: Dict[int, List[int]] = defaultdict(list)
    for sep in enumerate_separations(M, Q, R, k + 1):
        by_trace[sep.side & F].append(sep.side)
    logging.debug(f"nested sequence: {sum(map(len, by_trace.values()))} separations of order {k + 1}")

    dual = M.dual()
    dead: Set[Tuple[int, int]] = set()

    def extend(used: int, previous: int) -> Optional[List[Tuple[int, int, Branch]]]:
        if used == F:
            return []
        if (used, previous) in dead:
            return None
        for f in iter_bits(F & ~used):
            for A in by_trace.get(used | 1 << f, ()):
                if not is_subset(previous, A):
                    continue
                branch = branch_holding(M, dual, f, A)
                if branch is None:
                    continue
                tail = extend(used | 1 << f, A)
                if tail is not None:
                    return [(f, A, branch)] + tail
        dead.add((used, previous))
        return None

    steps = extend(0, Q)
    if steps is None:
        raise CertificateNotFound(
            f"no nested sequence for F={M.ground.format(F)} with Q={M.ground.format(Q)}, R={M.ground.format(R)}"
        )
    return NestedSequence(
        ordering=[f for f, _, _ in steps],
        chain=[A for _, A, _ in steps],
        branch=[b for _, _, b in steps],
    )


def verify_nested_sequence(M: BaseMatroid, Q: int, R: int, F: int, cert: NestedSequence) -> VerificationReport:
    """Check conditions (i)-(iv) from rank queries alone; nothing from the builder is trusted."""
    report = VerificationReport()
    k = kappa(M, Q, R).value
    dual = M.dual()
    n = max(len(cert.ordering), len(cert.chain), len(cert.branch))

    for i, A in enumerate(cert.chain, start=1):
        if A < 0 or A >> M.size or not is_subset(Q, A) or A & R:
            report.conditions["i"].fail(i)
            continue
        value = connectivity(M, A)
        if value > k:
            report.conditions["i"].fail(i)
        elif value < k:
            report.warnings.append(f"lambda(A_{i}) = {value} < k = {k}")

    for i in range(len(cert.chain) - 1):
        if not is_subset(cert.chain[i], cert.chain[i + 1]):
            report.conditions["ii"].fail(i + 1)

    prefix = 0
    for i in range(n):
        if i >= len(cert.ordering) or i >= len(cert.chain):
            report.conditions["iii"].fail(i + 1)
            break
        prefix |= 1 << cert.ordering[i]
        if cert.chain[i] & F != prefix:
            report.conditions["iii"].fail(i + 1)
    if report.conditions["iii"].passed and (prefix != F or popcount(prefix) != len(cert.ordering)):
        report.conditions["iii"].fail(n + 1)

    for i in range(n):
        if i >= len(cert.ordering) or i >= len(cert.chain) or i >= len(cert.branch):
            report.conditions["iv"].fail(i + 1)
            break
        f, A, branch = cert.ordering[i], cert.chain[i], cert.branch[i]
        if A < 0 or A >> M.size or not A >> f & 1:
            report.conditions["iv"].fail(i + 1)
            continue
        target = M if branch == Branch.Guts else dual
        inside = A & ~(1 << f)
        if not (_spans(target, inside, f) and _spans(target, M.full & ~A, f)):
            report.conditions["iv"].fail(i + 1)

    for warning in report.warnings:
        logging.warning(warning)
    return report
