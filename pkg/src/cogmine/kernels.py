"""Integer hot loops: subsequence support counting and cumulative coverage hits.

Each kernel has a numba implementation and a pure-numpy one with identical
results. Numba is used when importable unless ``COGMINE_DISABLE_NUMBA`` is set
to a truthy value; ``BACKEND`` records the choice made at import time.
"""
from __future__ import annotations

import os

import numpy as np

PAD = -1

_disabled = os.environ.get("COGMINE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def pad_sequences(sequences) -> tuple[np.ndarray, np.ndarray]:
    """Pack integer sequences into a ``PAD``-filled (n, max_len) int64 matrix plus lengths."""
    lengths = np.array([len(s) for s in sequences], dtype=np.int64)
    width = int(lengths.max()) if len(lengths) else 0
    out = np.full((len(sequences), max(width, 1)), PAD, dtype=np.int64)
    for i, s in enumerate(sequences):
        out[i, : len(s)] = s
    return out, lengths


# -- numpy reference path -----------------------------------------------------

def count_support_numpy(db: np.ndarray, lengths: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    n, width = db.shape
    cols = np.arange(width)
    valid = cols[None, :] < lengths[:, None]
    counts = np.zeros(len(candidates), dtype=np.int64)
    for c, cand in enumerate(candidates):
        pos = np.zeros(n, dtype=np.int64)
        alive = np.ones(n, dtype=bool)
        for item in cand:
            hit = (db == item) & valid & (cols[None, :] >= pos[:, None])
            found = hit.any(axis=1)
            alive &= found
            pos = np.where(found, hit.argmax(axis=1) + 1, width + 1)
        counts[c] = int(alive.sum())
    return counts


def cumulative_hits_numpy(visits: np.ndarray, membership: np.ndarray) -> np.ndarray:
    t = len(visits)
    s = membership.shape[0]
    if t == 0:
        return np.zeros((0, s), dtype=np.int64)
    inside = visits >= 0
    _, first = np.unique(np.where(inside, visits, -1), return_index=True)
    fresh = np.zeros(t, dtype=bool)
    fresh[first] = True
    fresh &= inside
    cols = np.where(inside, visits, 0)
    hits = membership[:, cols].astype(np.int64) * fresh[None, :]
    return np.cumsum(hits, axis=1).T.copy()


# -- numba path ---------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def count_support_numba(db, lengths, candidates):
        n = db.shape[0]
        m, k = candidates.shape
        counts = np.zeros(m, dtype=np.int64)
        for c in range(m):
            total = 0
            for s in range(n):
                j = 0
                length = lengths[s]
                for p in range(length):
                    if db[s, p] == candidates[c, j]:
                        j += 1
                        if j == k:
                            break
                if j == k:
                    total += 1
            counts[c] = total
        return counts

    @njit(cache=True)
    def cumulative_hits_numba(visits, membership):
        s, u = membership.shape
        t = visits.shape[0]
        out = np.zeros((t, s), dtype=np.int64)
        seen = np.zeros(u, dtype=np.bool_)
        running = np.zeros(s, dtype=np.int64)
        for i in range(t):
            v = visits[i]
            if v >= 0 and not seen[v]:
                seen[v] = True
                for j in range(s):
                    if membership[j, v]:
                        running[j] += 1
            for j in range(s):
                out[i, j] = running[j]
        return out

    BACKEND = "numba"
    _count_support = count_support_numba
    _cumulative_hits = cumulative_hits_numba
else:
    BACKEND = "numpy"
    _count_support = count_support_numpy
    _cumulative_hits = cumulative_hits_numpy


def count_support(db: np.ndarray, lengths: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Number of database rows containing each candidate row as a (gapped) subsequence."""
    candidates = np.ascontiguousarray(candidates, dtype=np.int64)
    if candidates.ndim != 2:
        raise ValueError("candidates must be a 2-D array")
    if candidates.shape[0] == 0 or db.shape[0] == 0:
        return np.zeros(candidates.shape[0], dtype=np.int64)
    if candidates.shape[1] == 0:
        return np.full(candidates.shape[0], db.shape[0], dtype=np.int64)
    return _count_support(np.ascontiguousarray(db, dtype=np.int64), np.ascontiguousarray(lengths, dtype=np.int64), candidates)


def cumulative_hits(visits: np.ndarray, membership: np.ndarray) -> np.ndarray:
    """Row ``t`` holds, per submap, how many distinct member units ``visits[:t+1]`` touched.

    ``visits`` indexes columns of the boolean ``membership`` matrix; negative
    entries are visits outside every submap.
    """
    visits = np.ascontiguousarray(visits, dtype=np.int64)
    membership = np.ascontiguousarray(membership, dtype=np.bool_)
    return _cumulative_hits(visits, membership)
