from __future__ import annotations
from typing import List, Sequence, Tuple
import logging

import numpy as np

from ..presets import SUPPORTED_PRIMES, TABLE_MAX_SIZE
from ..errors import InvalidRankFunction, SizeCapExceeded
from ..utils import iter_bits, popcount
from .base_matroid import BaseMatroid, GroundSet, MatroidType, validate_rank_axioms
from .linear_algebra import gf2_columns, gf2_rank, gfp_rank


class UniformMatroid(BaseMatroid):
    matroid_type = MatroidType.Uniform

    def __init__(self, rank: int, size: int, labels: Sequence[str] | None = None) -> None:
        if not 0 <= rank <= size:
            raise ValueError(f"uniform matroid needs 0 <= rank <= size, got U({rank},{size})")
        super().__init__(GroundSet.of_size(size, labels))
        self.r = rank

    def _rank(self, mask: int) -> int:
        return min(popcount(mask), self.r)

    def signature(self) -> tuple:
        return ("uniform", self.r, self.size)

    def __repr__(self):
        return f"UniformMatroid({self.r}, {self.size})"


class GraphicMatroid(BaseMatroid):
    """Cycle matroid of a multigraph; loops and parallel edges are allowed.

    Rank of an edge set is the number of edges a union-find accepts, i.e. the
    size of a spanning forest of the subgraph.
    """

    matroid_type = MatroidType.Graphic

    def __init__(
        self,
        vertex_count: int,
        edges: Sequence[Tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> None:
        edges = [(int(u), int(v)) for u, v in edges]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u},{v}) leaves the vertex range 0..{vertex_count - 1}")
        super().__init__(GroundSet.of_size(len(edges), labels))
        self.vertex_count = vertex_count
        self.edges = edges

    def _rank(self, mask: int) -> int:
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        rank = 0
        for j in iter_bits(mask):
            u, v = self.edges[j]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank

    def signature(self) -> tuple:
        return ("graphic", self.vertex_count, tuple(self.edges))

    def __repr__(self):
        return f"GraphicMatroid(vertices={self.vertex_count}, edges={len(self.edges)})"


class LinearMatroid(BaseMatroid):
    """Column matroid of an r x n matrix over GF(2), GF(3) or GF(5)."""

    matroid_type = MatroidType.Linear

    def __init__(self, prime: int, matrix, labels: Sequence[str] | None = None) -> None:
        if prime not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported field GF({prime}); supported: {SUPPORTED_PRIMES}")
        matrix = np.asarray(matrix, dtype=np.int64)
        if matrix.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        super().__init__(GroundSet.of_size(matrix.shape[1], labels))
        self.prime = prime
        self.matrix = matrix % prime
        if prime == 2:
            self._columns = gf2_columns(self.matrix)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    def _rank(self, mask: int) -> int:
        if mask == 0:
            return 0
        if self.prime == 2:
            return gf2_rank(self._columns[j] for j in iter_bits(mask))
        return gfp_rank(self.matrix[:, list(iter_bits(mask))], self.prime)

    def signature(self) -> tuple:
        return ("linear", self.prime, tuple(map(tuple, self.matrix.tolist())))

    def __repr__(self):
        return f"LinearMatroid(GF({self.prime}), {self.rows}x{self.size})"


class TableMatroid(BaseMatroid):
    """Explicit rank table indexed by mask; validated against the axioms on construction."""

    matroid_type = MatroidType.Table

    def __init__(self, ranks: Sequence[int], labels: Sequence[str] | None = None) -> None:
        ranks = [int(x) for x in ranks]
        size = len(ranks).bit_length() - 1
        if len(ranks) != 1 << size:
            raise InvalidRankFunction(f"a rank table needs 2^n entries, got {len(ranks)}")
        if size > TABLE_MAX_SIZE:
            raise SizeCapExceeded(f"rank tables are limited to {TABLE_MAX_SIZE} elements")
        super().__init__(GroundSet.of_size(size, labels))
        self.table = ranks
        validate_rank_axioms(self, exhaustive=True)

    @classmethod
    def from_oracle(cls, matroid: BaseMatroid) -> "TableMatroid":
        if matroid.size > TABLE_MAX_SIZE:
            raise SizeCapExceeded(f"rank tables are limited to {TABLE_MAX_SIZE} elements")
        return cls([matroid.rank(X) for X in range(1 << matroid.size)], matroid.labels)

    def _rank(self, mask: int) -> int:
        return self.table[mask]

    def signature(self) -> tuple:
        return ("table", tuple(self.table))

    def __repr__(self):
        return f"TableMatroid(size={self.size})"


def get_matroid(matroid_type, labels=None, **params) -> BaseMatroid:
    """Build a concrete oracle from a type name (or ``MatroidType``) and its parameters."""
    if isinstance(matroid_type, str):
        matroid_type = MatroidType.get_type(matroid_type)
    logging.debug(f"building {matroid_type.name} matroid with {sorted(params)}")
    if matroid_type == MatroidType.Uniform:
        return UniformMatroid(params["rank"], params["size"], labels=labels)
    elif matroid_type == MatroidType.Graphic:
        return GraphicMatroid(params["vertices"], params["edges"], labels=labels)
    elif matroid_type == MatroidType.Linear:
        return LinearMatroid(params["field"], params["matrix"], labels=labels)
    elif matroid_type == MatroidType.Table:
        return TableMatroid(params["ranks"], labels=labels)
    raise ValueError(f"unknown matroid type: {matroid_type}")
