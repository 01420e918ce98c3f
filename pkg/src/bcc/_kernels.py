"""Compiled inner loops for support enumeration."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _popcount64(v):
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (v * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _is_hit(acc_s, acc_l, d):
    for j in range(acc_s.shape[1]):
        if acc_s[d, j] != 0:
            return False
    for j in range(acc_l.shape[1]):
        if acc_l[d, j] != 0:
            return True
    return False


@njit(cache=True)
def enumerate_logicals(syn, log, starts, w, limit, out_pos, out_ch):
    """Enumerate weight-``w`` Paulis that have zero syndrome and nonzero logical action.

    ``syn[q, c]`` / ``log[q, c]`` are the syndrome and logical-commutation words of
    the ``c``-th single-qubit Pauli choice on qubit ``q``. The smallest support index
    is drawn from ``starts``; all others exceed it. Up to ``limit`` hits are written
    to ``out_pos``/``out_ch``; the hit count is returned (stopping at ``limit``).
    """
    n, C, Ws = syn.shape
    Wl = log.shape[2]
    pos = np.zeros(w, np.int64)
    ch = np.zeros(w, np.int64)
    acc_s = np.zeros((w + 1, Ws), np.uint64)
    acc_l = np.zeros((w + 1, Wl), np.uint64)
    count = 0
    for si in range(starts.shape[0]):
        first = starts[si]
        if first > n - w:
            continue
        pos[0] = first
        for c0 in range(C):
            ch[0] = c0
            for j in range(Ws):
                acc_s[1, j] = syn[first, c0, j]
            for j in range(Wl):
                acc_l[1, j] = log[first, c0, j]
            if w == 1:
                if _is_hit(acc_s, acc_l, 1):
                    out_pos[count, 0] = first
                    out_ch[count, 0] = c0
                    count += 1
                    if count >= limit:
                        return count
                continue
            d = 1
            pos[1] = first
            ch[1] = C - 1
            while d >= 1:
                ch[d] += 1
                if ch[d] == C:
                    ch[d] = 0
                    pos[d] += 1
                if pos[d] > n - (w - d):
                    d -= 1
                    continue
                p = pos[d]
                c = ch[d]
                for j in range(Ws):
                    acc_s[d + 1, j] = acc_s[d, j] ^ syn[p, c, j]
                for j in range(Wl):
                    acc_l[d + 1, j] = acc_l[d, j] ^ log[p, c, j]
                if d == w - 1:
                    if _is_hit(acc_s, acc_l, w):
                        for t in range(w):
                            out_pos[count, t] = pos[t]
                            out_ch[count, t] = ch[t]
                        count += 1
                        if count >= limit:
                            return count
                else:
                    d += 1
                    pos[d] = pos[d - 1]
                    ch[d] = C - 1
    return count


@njit(cache=True)
def low_weight_span(basis, max_weight, limit, out):
    """Gray-code walk over the span of ``basis`` rows, collecting nonzero elements of weight <= ``max_weight``."""
    r, W = basis.shape
    cur = np.zeros(W, np.uint64)
    count = 0
    total = np.int64(1) << np.int64(r)
    for i in range(1, total):
        b = 0
        t = i
        while (t & 1) == 0:
            t >>= 1
            b += 1
        wt = 0
        for j in range(W):
            cur[j] ^= basis[b, j]
            wt += _popcount64(cur[j])
        if wt <= max_weight:
            if count < limit:
                for j in range(W):
                    out[count, j] = cur[j]
            count += 1
    return count
