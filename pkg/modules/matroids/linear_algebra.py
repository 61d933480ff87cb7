"""Rank kernels over prime fields.

GF(2) columns are int bitsets (bit i = row i) reduced against an xor basis;
GF(3) and GF(5) go through numpy row reduction modulo p.
"""

from __future__ import annotations

from typing import Iterable, List

import numpy as np


def gf2_rank(columns: Iterable[int]) -> int:
    basis: List[int] = []  # kept sorted by leading bit, descending
    for vec in columns:
        for b in basis:
            vec = min(vec, vec ^ b)
        if vec:
            basis.append(vec)
            basis.sort(reverse=True)
    return len(basis)


def gf2_columns(matrix) -> List[int]:
    """Pack each column of a 0/1 matrix into an int, row i at bit i."""
    A = np.asarray(matrix, dtype=np.int64) & 1
    columns = []
    for j in range(A.shape[1]):
        vec = 0
        for i in np.nonzero(A[:, j])[0]:
            vec |= 1 << int(i)
        columns.append(vec)
    return columns


def gfp_rank(matrix, prime: int) -> int:
    A = np.asarray(matrix, dtype=np.int64) % prime
    if A.size == 0:
        return 0
    m, n = A.shape
    r = 0
    for c in range(n):
        if r >= m:
            break
        rows = np.nonzero(A[r:, c])[0]
        if rows.size == 0:
            continue
        p = r + int(rows[0])
        if p != r:
            A[[r, p], :] = A[[p, r], :]
        inv = pow(int(A[r, c]), -1, prime)
        A[r, :] = (A[r, :] * inv) % prime
        # eliminate column c in all other rows
        others = np.nonzero(A[:, c])[0]
        others = others[others != r]
        if others.size:
            A[others, :] = (A[others, :] - np.outer(A[others, c], A[r, :])) % prime
        r += 1
    return r


__all__ = ["gf2_rank", "gf2_columns", "gfp_rank"]
