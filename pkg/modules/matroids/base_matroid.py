from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Sequence, Tuple
import logging

import numpy as np

from .. import config
from .. import shared
from ..presets import AXIOM_SAMPLES, EXHAUSTIVE_AXIOM_LIMIT, MAX_GROUND_SIZE
from ..errors import InvalidRankFunction, OutOfRange, OverlappingSets, SizeCapExceeded
from ..utils import format_mask, full_mask, iter_bits, popcount


class MatroidType(Enum):
    Unknown = -1
    Uniform = 0
    Graphic = 1
    Linear = 2
    Table = 3
    Dual = 4
    Minor = 5

    @classmethod
    def get_type(cls, type_name: str):
        matroid_type = None
        type_name_lower = type_name.lower()
        if "uniform" in type_name_lower:
            matroid_type = MatroidType.Uniform
        elif "graphic" in type_name_lower:
            matroid_type = MatroidType.Graphic
        elif "linear" in type_name_lower:
            matroid_type = MatroidType.Linear
        elif "table" in type_name_lower:
            matroid_type = MatroidType.Table
        else:
            matroid_type = MatroidType.Unknown
        return matroid_type


def default_labels(size: int) -> Tuple[str, ...]:
    return tuple(f"e{i + 1}" for i in range(size))


@dataclass(frozen=True)
class GroundSet:
    labels: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        if len(labels) > MAX_GROUND_SIZE:
            raise SizeCapExceeded(f"{len(labels)} elements exceed the cap of {MAX_GROUND_SIZE}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"element labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(labels)})

    @classmethod
    def of_size(cls, size: int, labels: Sequence[str] | None = None) -> "GroundSet":
        if labels is None:
            labels = default_labels(size)
        if len(labels) != size:
            raise ValueError(f"expected {size} labels, got {len(labels)}")
        return cls(tuple(labels))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return full_mask(self.size)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown element label: {label}") from None

    def mask_of(self, labels: Iterable[str]) -> int:
        mask = 0
        for label in labels:
            mask |= 1 << self.index(label)
        return mask

    def labels_of(self, mask: int) -> List[str]:
        return [self.labels[i] for i in iter_bits(mask)]

    def format(self, mask: int) -> str:
        return format_mask(mask, self.labels)


def _byte_tables(mapping: Dict[int, int], source_size: int) -> List[List[int]]:
    """Per-byte lookup tables translating a source mask bit by bit."""
    tables = []
    for offset in range(0, max(source_size, 1), 8):
        table = [0] * 256
        for byte in range(256):
            out = 0
            for bit in range(8):
                src = offset + bit
                if byte >> bit & 1 and src in mapping:
                    out |= 1 << mapping[src]
            table[byte] = out
        tables.append(table)
    return tables


def _translate(tables: List[List[int]], mask: int) -> int:
    out = 0
    for i, table in enumerate(tables):
        out |= table[(mask >> (8 * i)) & 0xFF]
    return out


class BaseMatroid:
    """A rank oracle over a ground set of at most 32 elements.

    Subclasses implement ``_rank``; ``rank`` checks the range and memoizes.
    The memo is all-or-nothing: it exists only when every subset fits under
    ``config.rank_cache_limit``.
    """

    matroid_type = MatroidType.Unknown

    def __init__(self, ground: GroundSet) -> None:
        self.ground = ground
        self.rank_queries = 0
        if 2 ** ground.size <= config.rank_cache_limit:
            self._cache = {}
        else:
            self._cache = None
            logging.debug(f"rank cache disabled for {ground.size} elements")

    @property
    def size(self) -> int:
        return self.ground.size

    @property
    def full(self) -> int:
        return self.ground.full

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.ground.labels

    def rank(self, mask: int) -> int:
        if mask < 0 or mask >> self.ground.size:
            raise OutOfRange(mask, self.ground.size)
        use_cache = self._cache is not None and shared.state.rank_cache_enabled
        if use_cache:
            value = self._cache.get(mask)
            if value is not None:
                return value
        self.rank_queries += 1
        value = self._rank(mask)
        if use_cache:
            self._cache[mask] = value
        return value

    def _rank(self, mask: int) -> int:
        raise NotImplementedError

    def signature(self) -> tuple:
        """Construction data identifying the oracle, hashed by instance fingerprints."""
        raise NotImplementedError

    # -- views ---------------------------------------------------------
    @property
    def root(self) -> "BaseMatroid":
        return self

    @property
    def survivors(self) -> Tuple[int, ...]:
        return tuple(range(self.size))

    def lift(self, mask: int) -> int:
        """Translate a mask of this matroid into a mask of ``root``."""
        return mask

    def project(self, root_mask: int) -> int:
        """Translate a ``root`` mask into this matroid, dropping removed elements."""
        return root_mask & self.full

    def dual(self) -> "BaseMatroid":
        return DualMatroid(self)

    def minor(self, deleted: int = 0, contracted: int = 0) -> "MinorMatroid":
        return MinorMatroid(self, deleted, contracted)

    def delete(self, e: int) -> "MinorMatroid":
        return self.minor(deleted=1 << e)

    def contract(self, e: int) -> "MinorMatroid":
        return self.minor(contracted=1 << e)

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size})"


class DualMatroid(BaseMatroid):
    matroid_type = MatroidType.Dual

    def __init__(self, base: BaseMatroid) -> None:
        super().__init__(base.ground)
        self.base = base
        self._base_rank = base.rank(base.full)

    def _rank(self, mask: int) -> int:
        return popcount(mask) - self._base_rank + self.base.rank(self.full ^ mask)

    def signature(self) -> tuple:
        return ("dual", self.base.signature())

    def dual(self) -> BaseMatroid:
        return self.base

    def __repr__(self):
        return f"DualMatroid({self.base!r})"


class MinorMatroid(BaseMatroid):
    """``root`` with ``deleted`` and ``contracted`` removed.

    A minor of a minor is re-expressed over the same root, so deleting and
    contracting disjoint sets commute and ``survivors`` always lists root
    indices. Surviving elements keep their relative order.
    """

    matroid_type = MatroidType.Minor

    def __init__(self, base: BaseMatroid, deleted: int = 0, contracted: int = 0) -> None:
        for mask in (deleted, contracted):
            if mask < 0 or mask >> base.size:
                raise OutOfRange(mask, base.size)
        if deleted & contracted:
            raise OverlappingSets(
                f"deleted and contracted sets overlap: {base.ground.format(deleted & contracted)}"
            )
        if isinstance(base, MinorMatroid):
            root = base._root
            deleted = base.lift(deleted) | base.deleted
            contracted = base.lift(contracted) | base.contracted
        else:
            root = base
        self._root = root
        self.deleted = deleted
        self.contracted = contracted
        removed = deleted | contracted
        self._survivors = tuple(i for i in range(root.size) if not removed >> i & 1)
        super().__init__(GroundSet(tuple(root.labels[i] for i in self._survivors)))
        self._lift_tables = _byte_tables(dict(enumerate(self._survivors)), len(self._survivors))
        self._project_tables = _byte_tables(
            {src: dst for dst, src in enumerate(self._survivors)}, root.size
        )
        self._contracted_rank = root.rank(contracted)

    @property
    def root(self) -> BaseMatroid:
        return self._root

    @property
    def survivors(self) -> Tuple[int, ...]:
        return self._survivors

    def lift(self, mask: int) -> int:
        return _translate(self._lift_tables, mask)

    def project(self, root_mask: int) -> int:
        return _translate(self._project_tables, root_mask)

    def _rank(self, mask: int) -> int:
        return self._root.rank(self.lift(mask) | self.contracted) - self._contracted_rank

    def signature(self) -> tuple:
        return ("minor", self._root.signature(), self.deleted, self.contracted)

    def __repr__(self):
        return (
            f"MinorMatroid({self._root!r}, deleted={self._root.ground.format(self.deleted)}, "
            f"contracted={self._root.ground.format(self.contracted)})"
        )


def validate_rank_axioms(
    matroid: BaseMatroid, samples: int | None = None, seed: int = 0, exhaustive: bool = False
) -> None:
    """Check the rank axioms, exhaustively when the ground set is small.

    The exhaustive pass checks the local forms (unit increase, monotone step,
    local submodularity), which together imply the global axioms.
    """
    n = matroid.size
    if matroid.rank(0) != 0:
        raise InvalidRankFunction("rank of the empty set is not 0")
    if exhaustive or (samples is None and n <= EXHAUSTIVE_AXIOM_LIMIT):
        _validate_exhaustive(matroid)
    else:
        _validate_sampled(matroid, samples or AXIOM_SAMPLES, seed)


def _validate_exhaustive(matroid: BaseMatroid) -> None:
    n = matroid.size
    fmt = matroid.ground.format
    for X in range(1 << n):
        rX = matroid.rank(X)
        for e in range(n):
            if X >> e & 1:
                continue
            Xe = X | 1 << e
            step = matroid.rank(Xe) - rX
            if step not in (0, 1):
                raise InvalidRankFunction(
                    f"monotonicity/unit increase violated: r({fmt(Xe)}) - r({fmt(X)}) = {step}"
                )
            for f in range(e + 1, n):
                if X >> f & 1:
                    continue
                Xf = X | 1 << f
                if matroid.rank(Xe) + matroid.rank(Xf) < matroid.rank(Xe | Xf) + rX:
                    raise InvalidRankFunction(
                        f"submodularity violated at X={fmt(X)}, e={matroid.labels[e]}, f={matroid.labels[f]}"
                    )


def _validate_sampled(matroid: BaseMatroid, samples: int, seed: int) -> None:
    n = matroid.size
    fmt = matroid.ground.format
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        X = int(rng.integers(0, 1 << n)) if n else 0
        Y = int(rng.integers(0, 1 << n)) if n else 0
        rX, rY = matroid.rank(X), matroid.rank(Y)
        if matroid.rank(X | Y) + matroid.rank(X & Y) > rX + rY:
            raise InvalidRankFunction(f"submodularity violated at X={fmt(X)}, Y={fmt(Y)}")
        if matroid.rank(X & Y) > rX:
            raise InvalidRankFunction(f"monotonicity violated at {fmt(X & Y)} in {fmt(X)}")
        if n:
            e = int(rng.integers(0, n))
            if matroid.rank(X | 1 << e) - rX not in (0, 1):
                raise InvalidRankFunction(f"unit increase violated at X={fmt(X)}, e={matroid.labels[e]}")


class Operation(Enum):
    Delete = "delete"
    Contract = "contract"

    def apply(self, matroid: BaseMatroid, e: int) -> MinorMatroid:
        if self == Operation.Delete:
            return matroid.delete(e)
        return matroid.contract(e)


def carry_mask(mask: int, source: BaseMatroid, target: BaseMatroid) -> int:
    """Move a mask between two views of the same root; elements missing from ``target`` drop out."""
    return target.project(source.lift(mask))
