"""Compiled twin of the branch-set growth search in :mod:`rigbench.minors`.

Walks exactly the same tree as the pure-Python reference (same seeds, same
branching choices, same node count) with an explicit stack and host
bitsets stored as ``uint64`` words.  All mask arithmetic stays in
``uint64``; mixing in signed ints would silently promote to float.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U0 = np.uint64(0)
U1 = np.uint64(1)
ALL = np.uint64(0xFFFFFFFFFFFFFFFF)

SEED = 0
GROW = 1

RESULT_ABSENT = 0
RESULT_FOUND = 1
RESULT_BUDGET = 2


@njit(cache=True)
def _ctz(x):
    n = 0
    if x & np.uint64(0xFFFFFFFF) == U0:
        n += 32
        x >>= np.uint64(32)
    if x & np.uint64(0xFFFF) == U0:
        n += 16
        x >>= np.uint64(16)
    if x & np.uint64(0xFF) == U0:
        n += 8
        x >>= np.uint64(8)
    if x & np.uint64(0xF) == U0:
        n += 4
        x >>= np.uint64(4)
    if x & np.uint64(0x3) == U0:
        n += 2
        x >>= np.uint64(2)
    if x & U1 == U0:
        n += 1
    return n


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> U1) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _nonzero(a):
    for i in range(a.shape[0]):
        if a[i] != U0:
            return True
    return False


@njit(cache=True)
def _intersects(a, b):
    for i in range(a.shape[0]):
        if a[i] & b[i] != U0:
            return True
    return False


@njit(cache=True)
def _first_bit_from(a, start):
    """Smallest set bit of ``a`` at index >= start, or -1."""
    W = a.shape[0]
    wi = start >> 6
    if wi >= W:
        return -1
    off = start & 63
    word = a[wi] & (ALL << np.uint64(off))
    while True:
        if word != U0:
            return (wi << 6) + _ctz(word)
        wi += 1
        if wi >= W:
            return -1
        word = a[wi]


@njit(cache=True)
def _reach(hm, xs, nxs, allowed, region, nreg, front):
    """Closure of xs through allowed; fills region and its neighbourhood nreg."""
    W = xs.shape[0]
    any_front = False
    for i in range(W):
        region[i] = xs[i]
        nreg[i] = nxs[i]
        front[i] = nxs[i] & allowed[i] & ~xs[i]
        if front[i] != U0:
            any_front = True
    while any_front:
        for i in range(W):
            region[i] |= front[i]
        for i in range(W):
            word = front[i]
            while word != U0:
                low = word & (~word + U1)
                b = (i << 6) + _ctz(low)
                for j in range(W):
                    nreg[j] |= hm[b, j]
                word ^= low
        any_front = False
        for i in range(W):
            front[i] = nreg[i] & allowed[i] & ~region[i]
            if front[i] != U0:
                any_front = True


@njit(cache=True)
def _add(hm, X, NX, AL, nonadj, induced, i, w):
    W = hm.shape[1]
    wi = w >> 6
    bit = U1 << np.uint64(w & 63)
    X[i, wi] |= bit
    for j in range(W):
        NX[i, j] |= hm[w, j]
    if induced:
        for x in range(nonadj.shape[1]):
            if nonadj[i, x]:
                for j in range(W):
                    AL[x, j] &= ~hm[w, j]
                AL[x, wi] &= ~bit


@njit(cache=True)
def _free(used, fullw, out):
    for j in range(used.shape[0]):
        out[j] = fullw[j] & ~used[j]


@njit(cache=True)
def search(hm, fullw, k, pe_u, pe_v, nonadj, sym_before, induced, budget, enumerate_all, max_found):
    """Run the search.  Returns (result, nodes, found_count, found_sets).

    ``found_sets[f, i]`` holds the branch set of pattern position ``i`` in the
    ``f``-th model found.  With ``enumerate_all`` the search continues after
    each model (recording at most ``max_found``) and returns RESULT_ABSENT at
    the end of the tree.
    """
    n = hm.shape[0]
    W = hm.shape[1]
    E = pe_u.shape[0]
    D = k + 2 + n + n * k
    Xs = np.zeros((D, k, W), dtype=np.uint64)
    NXs = np.zeros((D, k, W), dtype=np.uint64)
    ALs = np.zeros((D, k, W), dtype=np.uint64)
    useds = np.zeros((D, W), dtype=np.uint64)
    ftype = np.zeros(D, dtype=np.int64)
    fidx = np.zeros(D, dtype=np.int64)
    cand = np.zeros((D, W), dtype=np.uint64)
    pos = np.zeros(D, dtype=np.int64)
    phase = np.zeros(D, dtype=np.int64)
    side = np.zeros(D, dtype=np.int64)
    wsel = np.zeros(D, dtype=np.int64)
    seeds = np.zeros(k, dtype=np.int64)
    found_sets = np.zeros((max_found, k, W), dtype=np.uint64)
    found = 0

    region = np.zeros((k, W), dtype=np.uint64)
    nreg = np.zeros((k, W), dtype=np.uint64)
    have = np.zeros(k, dtype=np.bool_)
    front = np.zeros(W, dtype=np.uint64)
    free = np.zeros(W, dtype=np.uint64)
    allowed = np.zeros(W, dtype=np.uint64)
    tmp = np.zeros(W, dtype=np.uint64)

    nodes = 0
    for x in range(k):
        for j in range(W):
            ALs[0, x, j] = fullw[j]

    # frame 0: seed position 0
    ftype[0] = SEED
    fidx[0] = 0
    for j in range(W):
        cand[0, j] = ALs[0, 0, j]
    pos[0] = 0
    d = 0
    while d >= 0:
        if ftype[d] == SEED:
            i = fidx[d]
            s = _first_bit_from(cand[d], pos[d])
            if s < 0:
                d -= 1
                continue
            pos[d] = s + 1
            nodes += 1
            if budget >= 0 and nodes > budget:
                return RESULT_BUDGET, nodes, found, found_sets
            c = d + 1
            Xs[c] = Xs[d]
            NXs[c] = NXs[d]
            ALs[c] = ALs[d]
            useds[c] = useds[d]
            _add(hm, Xs[c], NXs[c], ALs[c], nonadj, induced, i, s)
            # bar vertices <= s from set i
            swi = s >> 6
            for j in range(W):
                if j < swi:
                    ALs[c, i, j] = U0
                elif j == swi:
                    off = (s & 63) + 1
                    if off == 64:
                        ALs[c, i, j] = U0
                    else:
                        ALs[c, i, j] &= ALL << np.uint64(off)
            useds[c, swi] |= U1 << np.uint64(s & 63)
            _free(useds[c], fullw, free)
            ok = True
            for x in range(i + 1, k):
                if not _intersects(ALs[c, x], free):
                    ok = False
                    break
            if ok:
                for x in range(k):
                    have[x] = False
                for e in range(E):
                    u = pe_u[e]
                    v = pe_v[e]
                    if u > i or v > i:
                        continue
                    if _intersects(NXs[c, u], Xs[c, v]):
                        continue
                    if not have[u]:
                        for j in range(W):
                            allowed[j] = ALs[c, u, j] & free[j]
                        _reach(hm, Xs[c, u], NXs[c, u], allowed, region[u], nreg[u], front)
                        have[u] = True
                    if not have[v]:
                        for j in range(W):
                            allowed[j] = ALs[c, v, j] & free[j]
                        _reach(hm, Xs[c, v], NXs[c, v], allowed, region[v], nreg[v], front)
                        have[v] = True
                    if not _intersects(nreg[u], region[v]):
                        ok = False
                        break
            if not ok:
                continue
            seeds[i] = s
            if i + 1 < k:
                ftype[c] = SEED
                fidx[c] = i + 1
                tb = sym_before[i + 1]
                for j in range(W):
                    cand[c, j] = ALs[c, i + 1, j] & ~useds[c, j]
                if tb >= 0:
                    sb = seeds[tb]
                    bwi = sb >> 6
                    for j in range(W):
                        if j < bwi:
                            cand[c, j] = U0
                        elif j == bwi:
                            off = (sb & 63) + 1
                            if off == 64:
                                cand[c, j] = U0
                            else:
                                cand[c, j] &= ALL << np.uint64(off)
                pos[c] = 0
            else:
                ftype[c] = GROW
                phase[c] = -1
            d = c
        else:
            if phase[d] == -1:
                nodes += 1
                if budget >= 0 and nodes > budget:
                    return RESULT_BUDGET, nodes, found, found_sets
                _free(useds[d], fullw, free)
                for x in range(k):
                    have[x] = False
                best_e = -1
                best_count = 0
                dead = False
                for e in range(E):
                    u = pe_u[e]
                    v = pe_v[e]
                    if _intersects(NXs[d, u], Xs[d, v]):
                        continue
                    if not have[u]:
                        for j in range(W):
                            allowed[j] = ALs[d, u, j] & free[j]
                        _reach(hm, Xs[d, u], NXs[d, u], allowed, region[u], nreg[u], front)
                        have[u] = True
                    if not have[v]:
                        for j in range(W):
                            allowed[j] = ALs[d, v, j] & free[j]
                        _reach(hm, Xs[d, v], NXs[d, v], allowed, region[v], nreg[v], front)
                        have[v] = True
                    if not _intersects(nreg[u], region[v]):
                        dead = True
                        break
                    count = 0
                    for j in range(W):
                        count += _popcount(NXs[d, u, j] & ALs[d, u, j] & free[j])
                        count += _popcount(NXs[d, v, j] & ALs[d, v, j] & free[j])
                    if best_e < 0 or count < best_count:
                        best_e = e
                        best_count = count
                if dead:
                    d -= 1
                    continue
                if best_e < 0:
                    if found < max_found:
                        found_sets[found] = Xs[d]
                    found += 1
                    if not enumerate_all:
                        return RESULT_FOUND, nodes, found, found_sets
                    d -= 1
                    continue
                u = pe_u[best_e]
                v = pe_v[best_e]
                # candidate choice: u-frontier touching X_v, v-frontier touching X_u, any u, any v
                chosen_side = -1
                for attempt in range(4):
                    sd = u if attempt % 2 == 0 else v
                    ot = v if attempt % 2 == 0 else u
                    nz = False
                    for j in range(W):
                        tmp[j] = NXs[d, sd, j] & ALs[d, sd, j] & free[j]
                        if attempt < 2:
                            tmp[j] &= NXs[d, ot, j]
                        if tmp[j] != U0:
                            nz = True
                    if nz:
                        chosen_side = sd
                        break
                w = _first_bit_from(tmp, 0)
                side[d] = chosen_side
                wsel[d] = w
                phase[d] = 0
                c = d + 1
                Xs[c] = Xs[d]
                NXs[c] = NXs[d]
                ALs[c] = ALs[d]
                useds[c] = useds[d]
                _add(hm, Xs[c], NXs[c], ALs[c], nonadj, induced, chosen_side, w)
                useds[c, w >> 6] |= U1 << np.uint64(w & 63)
                ftype[c] = GROW
                phase[c] = -1
                d = c
            elif phase[d] == 0:
                phase[d] = 1
                c = d + 1
                Xs[c] = Xs[d]
                NXs[c] = NXs[d]
                ALs[c] = ALs[d]
                useds[c] = useds[d]
                w = wsel[d]
                ALs[c, side[d], w >> 6] &= ~(U1 << np.uint64(w & 63))
                ftype[c] = GROW
                phase[c] = -1
                d = c
            else:
                d -= 1
    return RESULT_ABSENT, nodes, found, found_sets
