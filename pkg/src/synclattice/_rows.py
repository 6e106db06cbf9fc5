"""Vectorised helpers over stacks of partition label rows.

A *row* is a length-n integer array in restricted-growth form: labels are
assigned in order of first occurrence, so equal partitions give equal rows.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .partition import Partition, from_labels

DTYPE = np.int16


def canon(codes: np.ndarray) -> np.ndarray:
    """Relabel every row of ``codes`` into restricted-growth form."""
    codes = np.atleast_2d(codes)
    k, n = codes.shape
    if k == 0 or n == 0:
        return codes.astype(DTYPE).reshape(k, n)
    eq = codes[:, :, None] == codes[:, None, :]
    first = eq.argmax(axis=2)  # first position carrying the same code
    is_first = first == np.arange(n)
    rank = np.cumsum(is_first, axis=1) - 1
    return np.take_along_axis(rank, first, axis=1).astype(DTYPE)


def rows_of(parts: Iterable[Partition], n: int) -> np.ndarray:
    rows = [p.labels for p in parts]
    if not rows:
        return np.empty((0, n), dtype=DTYPE)
    return canon(np.asarray(rows, dtype=np.int64))


def partitions_of(rows: np.ndarray) -> list[Partition]:
    return [from_labels(r) for r in rows.tolist()]


def join_with(rows: np.ndarray, row: np.ndarray) -> np.ndarray:
    """Common refinement of each row with ``row``."""
    n = rows.shape[1]
    return canon(rows.astype(np.int64) * (n + 1) + row.astype(np.int64))


def meet_with(rows: np.ndarray, row: np.ndarray) -> np.ndarray:
    """Equivalence closure of each row with ``row``."""
    k, n = rows.shape
    if k == 0:
        return rows.copy()
    x = np.tile(np.arange(n, dtype=np.int64), (k, 1))
    offsets = (np.arange(k, dtype=np.int64) * n)[:, None]
    idx_rows = offsets + rows.astype(np.int64)
    idx_row = offsets + row.astype(np.int64)[None, :]
    big = np.iinfo(np.int64).max
    while True:
        prev = x
        for idx in (idx_rows, idx_row):
            buf = np.full(k * n, big, dtype=np.int64)
            np.minimum.at(buf, idx.ravel(), x.ravel())
            x = buf[idx]
        if np.array_equal(x, prev):
            break
    return canon(x)


def keys(rows: np.ndarray) -> np.ndarray | list[bytes]:
    """Hashable exact keys for rows; a packed int64 array when it fits."""
    k, n = rows.shape
    if n <= 15:
        weights = (np.int64(16) ** np.arange(n, dtype=np.int64))[::-1]
        return rows.astype(np.int64) @ weights
    return [r.tobytes() for r in np.ascontiguousarray(rows)]


def unique_rows(rows: np.ndarray) -> np.ndarray:
    if len(rows) == 0:
        return rows
    k = keys(rows)
    if isinstance(k, np.ndarray):
        _, first = np.unique(k, return_index=True)
        return rows[first]
    return np.unique(rows, axis=0)


def missing(candidates: np.ndarray, pool_keys) -> np.ndarray:
    """Boolean mask of candidate rows whose key is absent from ``pool_keys``."""
    ck = keys(candidates)
    if isinstance(ck, np.ndarray):
        return ~np.isin(ck, pool_keys)
    pool = set(pool_keys)
    return np.array([key not in pool for key in ck], dtype=bool)


def join_closure(generators: Iterable[Partition], n: int) -> np.ndarray:
    """All joins (common refinements) of nonempty subsets of the generators."""
    closed = np.empty((0, n), dtype=DTYPE)
    closed_keys = keys(closed)
    for g in generators:
        row = rows_of([g], n)
        if len(closed) and not missing(row, closed_keys)[0]:
            continue  # already present, so every x v g is present too
        fresh = unique_rows(np.vstack([row, join_with(closed, row[0])]))
        fresh = fresh[missing(fresh, closed_keys)]
        closed = np.vstack([closed, fresh])
        closed_keys = keys(closed)
    return closed
