"""Numba kernels shared by the similarity and embedding layers.

Feature sets travel as two uint64 lanes (lo, hi), enough for the
128-feature cap. Sequences are packed flat: per element one lo/hi pair,
the phoneme id of the element's last phone, and a vowel flag for that
phone; an offsets array delimits words.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange, set_num_threads

__all__ = [
    "align_score",
    "pair_scores",
    "scan_scores",
    "sgd_apply",
    "set_num_threads",
]

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S56 = np.uint64(56)


@njit(cache=True, inline="always")
def _popcount(x):
    # SWAR bit count on one uint64 lane
    x = x - ((x >> _S1) & _M1)
    x = (x & _M2) + ((x >> _S2) & _M2)
    x = (x + (x >> _S4)) & _M4
    return (x * _H01) >> _S56


@njit(cache=True, inline="always")
def _element_sim(alo, ahi, blo, bhi, aend, bend, avow, vowel_weighted):
    """Similarity of two sequence elements plus an exact-match flag.

    Jaccard of the feature sets; under vowel weighting, sqrt when both
    elements end in the same vowel phone, squared otherwise. The match
    flag is bitwise set equality, immune to float rounding.
    """
    ilo = alo & blo
    ihi = ahi & bhi
    ulo = alo | blo
    uhi = ahi | bhi
    inter = _popcount(ilo) + _popcount(ihi)
    union = _popcount(ulo) + _popcount(uhi)
    s = np.float64(inter) / np.float64(union)
    if vowel_weighted:
        if avow and aend == bend:
            s = np.sqrt(s)
        else:
            s = s * s
    exact = ilo == ulo and ihi == uhi
    return s, exact


@njit(cache=True)
def align_score(alo, ahi, aend, avow, blo, bhi, bend, bvow,
                p, vowel_weighted, use_max):
    """Alignment similarity of two packed element sequences.

    First row and column accumulate without penalty; interior cells add
    1 on an exact feature-set match and otherwise add sim/p to the best
    neighbor, where "best" is the smaller neighbor by default (use_max
    flips it). The total is normalized by the longer sequence length.
    """
    n = alo.shape[0]
    m = blo.shape[0]
    prev = np.empty(m, np.float64)
    cur = np.empty(m, np.float64)

    s, _ = _element_sim(alo[0], ahi[0], blo[0], bhi[0],
                        aend[0], bend[0], avow[0], vowel_weighted)
    prev[0] = s
    for j in range(1, m):
        s, _ = _element_sim(alo[0], ahi[0], blo[j], bhi[j],
                            aend[0], bend[j], avow[0], vowel_weighted)
        prev[j] = prev[j - 1] + s

    for i in range(1, n):
        s, _ = _element_sim(alo[i], ahi[i], blo[0], bhi[0],
                            aend[i], bend[0], avow[i], vowel_weighted)
        cur[0] = prev[0] + s
        for j in range(1, m):
            s, exact = _element_sim(alo[i], ahi[i], blo[j], bhi[j],
                                    aend[i], bend[j], avow[i],
                                    vowel_weighted)
            if exact:
                cur[j] = 1.0 + prev[j - 1]
            else:
                if use_max:
                    best = max(prev[j], cur[j - 1])
                else:
                    best = min(prev[j], cur[j - 1])
                cur[j] = s / p + best
        prev, cur = cur, prev

    return prev[m - 1] / max(n, m)


@njit(cache=True, parallel=True)
def scan_scores(qlo, qhi, qend, qvow,
                lo, hi, end, vow, offsets,
                p, vowel_weighted, use_max):
    """Alignment similarity of one query against every packed word."""
    k = offsets.shape[0] - 1
    out = np.empty(k, np.float64)
    for w in prange(k):
        a = offsets[w]
        b = offsets[w + 1]
        out[w] = align_score(qlo, qhi, qend, qvow,
                             lo[a:b], hi[a:b], end[a:b], vow[a:b],
                             p, vowel_weighted, use_max)
    return out


@njit(cache=True, parallel=True)
def pair_scores(iidx, jidx, lo, hi, end, vow, offsets,
                p, vowel_weighted, use_max):
    """Alignment similarity for index pairs (iidx[t], jidx[t])."""
    t = iidx.shape[0]
    out = np.empty(t, np.float64)
    for x in prange(t):
        ia = offsets[iidx[x]]
        ib = offsets[iidx[x] + 1]
        ja = offsets[jidx[x]]
        jb = offsets[jidx[x] + 1]
        out[x] = align_score(lo[ia:ib], hi[ia:ib], end[ia:ib], vow[ia:ib],
                             lo[ja:jb], hi[ja:jb], end[ja:jb], vow[ja:jb],
                             p, vowel_weighted, use_max)
    return out


@njit(cache=True)
def sgd_apply(V, iidx, jidx, targets, lr):
    """One mini-batch of factorization updates, applied in batch order.

    Errors and gradients for the whole batch are computed against the
    pre-update matrix, then applied sequentially, so results do not
    depend on thread count. A self pair (i == j) contributes the exact
    gradient 4 * err * V[i] through the two accumulated updates.
    """
    t = iidx.shape[0]
    d = V.shape[1]
    gi = np.empty((t, d), np.float64)
    gj = np.empty((t, d), np.float64)
    loss = 0.0
    for x in range(t):
        i = iidx[x]
        j = jidx[x]
        dot = 0.0
        for c in range(d):
            dot += V[i, c] * V[j, c]
        err = dot - targets[x]
        loss += err * err
        for c in range(d):
            gi[x, c] = 2.0 * err * V[j, c]
            gj[x, c] = 2.0 * err * V[i, c]
    for x in range(t):
        i = iidx[x]
        j = jidx[x]
        for c in range(d):
            V[i, c] -= lr * gi[x, c]
            V[j, c] -= lr * gj[x, c]
    return loss
