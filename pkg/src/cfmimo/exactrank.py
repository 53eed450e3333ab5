"""Exact rank of Gaussian-integer matrices.

Rank is taken over Q(i), the fraction field of Z[i]. Elimination is
fraction-free: a row is reduced against an echelon basis by
cross-multiplication, and the integer content is divided out after every
step so entries stay small. Python integers never overflow, so no rank
decision ever depends on floating point.
"""
from __future__ import annotations

from math import gcd
from typing import Iterable

import numpy as np


def _entry(x) -> tuple[int, int]:
    if isinstance(x, tuple):
        re, im = x
    elif isinstance(x, (int, np.integer)):
        return int(x), 0
    else:
        z = complex(x)
        re, im = z.real, z.imag
    if int(re) != re or int(im) != im:
        raise ValueError(f"{x!r} is not a Gaussian integer")
    return int(re), int(im)


def sparse_rows(matrix) -> list[dict[int, tuple[int, int]]]:
    """Convert a Gaussian-integer matrix to rows of ``{column: (re, im)}``."""
    if isinstance(matrix, np.ndarray) and matrix.ndim == 2:
        rows = matrix.tolist()
    else:
        rows = [list(r) for r in matrix]
    out = []
    for r in rows:
        d = {}
        for j, x in enumerate(r):
            e = _entry(x)
            if e != (0, 0):
                d[j] = e
        out.append(d)
    return out


def _content_reduce(row: dict) -> dict:
    c = 0
    for re, im in row.values():
        c = gcd(c, gcd(re, im))
        if c == 1:
            return row
    return {j: (re // c, im // c) for j, (re, im) in row.items()}


def _reduce(row: dict, basis: dict[int, dict]) -> dict:
    """Eliminate every basis pivot from ``row``; returns the remainder."""
    row = dict(row)
    while row:
        col = min(row)
        piv = basis.get(col)
        if piv is None:
            return row
        pr, pi = piv[col]
        vr, vi = row[col]
        new = {}
        # row <- p * row - v * piv
        for j in row.keys() | piv.keys():
            ar, ai = row.get(j, (0, 0))
            br, bi = piv.get(j, (0, 0))
            re = pr * ar - pi * ai - (vr * br - vi * bi)
            im = pr * ai + pi * ar - (vr * bi + vi * br)
            if re or im:
                new[j] = (re, im)
        row = _content_reduce(new)
    return row


def _rank_sparse(rows: Iterable[dict], limit: int | None = None) -> int:
    basis: dict[int, dict] = {}
    for r in rows:
        rem = _reduce(r, basis)
        if rem:
            basis[min(rem)] = rem
            if limit is not None and len(basis) >= limit:
                break
    return len(basis)


def rank(matrix, limit: int | None = None) -> int:
    """Exact rank over Q(i). Stops early once ``limit`` independent rows are found."""
    rows = sparse_rows(matrix) if not _is_sparse(matrix) else matrix
    return _rank_sparse(rows, limit)


def rank_without_row(matrix, row_index: int, limit: int | None = None) -> int:
    rows = sparse_rows(matrix) if not _is_sparse(matrix) else list(matrix)
    if not 0 <= row_index < len(rows):
        raise IndexError(f"row {row_index} out of range for {len(rows)} rows")
    return _rank_sparse((r for i, r in enumerate(rows) if i != row_index), limit)


def _is_sparse(matrix) -> bool:
    return isinstance(matrix, list) and all(isinstance(r, dict) for r in matrix)

