# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot loops (same API as ``_pykernels``)."""

import numpy as np

cimport cython
from libc.stdint cimport int64_t, uint64_t

BACKEND = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def _to_words(masks, int nwords):
    arr = np.zeros((len(masks), max(nwords, 1)), dtype=np.uint64)
    cdef int i, k
    for i, m in enumerate(masks):
        for k in range(nwords):
            arr[i, k] = (m >> (64 * k)) & 0xFFFFFFFFFFFFFFFF
    return arr


def dd_pairs(pos, neg, every, int nbits, int max_card, qmasks=None):
    cdef int nwords = (nbits + 63) // 64
    if nwords == 0:
        nwords = 1
    cdef uint64_t[:, :] P = _to_words(pos, nwords)
    cdef uint64_t[:, :] N = _to_words(neg, nwords)
    cdef uint64_t[:, :] A = _to_words(every, nwords)
    cdef uint64_t[:, :] Q
    cdef bint use_q = qmasks is not None
    if use_q:
        Q = _to_words(list(qmasks), nwords)
    else:
        Q = _to_words([0, 0, 0], nwords)
    cdef int np_ = len(pos), nn = len(neg), na = len(every)
    cdef uint64_t[:] u = np.zeros(nwords, dtype=np.uint64)
    cdef int i, j, k, r, inside, card
    cdef uint64_t x0, x1, x2, bad
    cdef bint ok
    out = []
    for i in range(np_):
        for j in range(nn):
            card = 0
            for k in range(nwords):
                u[k] = P[i, k] | N[j, k]
                card += __builtin_popcountll(u[k])
            if card > max_card:
                continue
            if use_q:
                bad = 0
                for k in range(nwords):
                    x0 = u[k] & Q[0, k]
                    x1 = (u[k] & Q[1, k]) >> 1
                    x2 = (u[k] & Q[2, k]) >> 2
                    if k + 1 < nwords:
                        x1 |= (u[k + 1] & Q[1, k + 1]) << 63
                        x2 |= (u[k + 1] & Q[2, k + 1]) << 62
                    bad |= (x0 & x1) | (x0 & x2) | (x1 & x2)
                if bad:
                    continue
            inside = 0
            for r in range(na):
                ok = True
                for k in range(nwords):
                    if A[r, k] & ~u[k]:
                        ok = False
                        break
                if ok:
                    inside += 1
                    if inside > 2:
                        break
            if inside == 2:
                out.append((i, j))
    return out


def minimal_elements(vectors):
    cdef Py_ssize_t n = len(vectors)
    if n == 0:
        return []
    cdef Py_ssize_t d = len(vectors[0])
    big = False
    for v in vectors:
        for val in v:
            if val > 4611686018427387903 or val < 0:
                big = True
                break
        if big:
            break
    if big:
        from ._pykernels import minimal_elements as slow
        return slow(vectors)
    cdef int64_t[:, :] V = np.asarray(vectors, dtype=np.int64).reshape(n, d)
    sums = [sum(v) for v in vectors]
    order = sorted(range(n), key=lambda k: sums[k])
    cdef int64_t[:] kept = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t nk = 0, a, b, c, x, y
    cdef bint dominated, le
    for a in range(n):
        x = order[a]
        dominated = False
        for b in range(nk):
            y = kept[b]
            le = True
            for c in range(d):
                if V[y, c] > V[x, c]:
                    le = False
                    break
            if le:
                dominated = True
                break
        if not dominated:
            kept[nk] = x
            nk += 1
    return sorted(int(kept[b]) for b in range(nk))
