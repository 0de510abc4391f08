"""Compiled inner loops for the Lavaurs pairing and the connection search.

Everything operates on flat integer arrays describing one ray period ``n``:
numerators ``j`` stand for ``j / (2**n - 1)``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MAX_CLASS_RAYS = 1024


@njit(cache=True)
def lavaurs_stack(kinds, vals, part):
    """Parenthesis pass over the circle.

    ``kinds`` is 0 for the first endpoint of an older chord, 1 for its second
    endpoint and 2 for a new angle; new angles pair consecutively inside the
    region between chords.
    """
    stack = np.empty(len(kinds) + 1, np.int64)
    top = 0
    stack[0] = -1
    for i in range(len(kinds)):
        t = kinds[i]
        v = vals[i]
        if t == 2:
            if stack[top] < 0:
                stack[top] = v
            else:
                a = stack[top]
                stack[top] = -1
                part[a] = v
                part[v] = a
        elif t == 0:
            top += 1
            stack[top] = -1
        else:
            top -= 1


@njit(cache=True)
def _before(lo, hi, r, deep):
    return lo[r] <= lo[deep] and hi[deep] <= hi[r]


@njit(cache=True)
def _pinch(lo, hi, orb_id, orb_ptr, orb_roots, deep, x):
    if deep < 0:
        return -1
    o = orb_id[x]
    for k in range(orb_ptr[o], orb_ptr[o + 1]):
        r = orb_roots[k]
        if _before(lo, hi, r, deep):
            return r
    return -1


@njit(cache=True)
def _point(n, d, lo, hi, m, r, x, out):
    """Write the angles at root ``r``'s point carrying ``x`` into ``out``; return the count."""
    if m[r] < n:
        step = np.int64(1) << m[r]
        y = x
        cnt = n // m[r]
        for t in range(cnt):
            out[t] = y
            y = y * step % d
        return cnt
    y = lo[r]
    z = hi[r]
    for _ in range(n):
        if y == x:
            out[0] = x
            out[1] = z
            return 2
        if z == x:
            out[0] = x
            out[1] = y
            return 2
        y = 2 * y % d
        z = 2 * z % d
    return 0


@njit(cache=True)
def _index(arr, cnt, v):
    for i in range(cnt):
        if arr[i] == v:
            return i
    return -1


@njit(cache=True)
def grow(n, d, lo, hi, m, orb_id, orb_ptr, orb_roots, a, b, rays, pkey, qkey, open_q, buf):
    """Class of root ``a``'s characteristic point with q̄-side root ``b`` (-1 for none).

    Returns ``(length, satellite, half_satellite, n_open)``; the rays whose
    q̄ side is unpinched while their P side is pinched go to ``open_q``.
    """
    nr = _point(n, d, lo, hi, m, a, lo[a], buf)
    for i in range(nr):
        rays[i] = buf[i]
    sat = m[a] < n
    half = 2 * m[a] == n
    i = 0
    n_open = 0
    while i < nr:
        x = rays[i]
        for side in range(2):
            deep = a if side == 0 else b
            r = _pinch(lo, hi, orb_id, orb_ptr, orb_roots, deep, x)
            if r < 0:
                key = -1 - x
            else:
                if m[r] < n:
                    sat = True
                if 2 * m[r] == n:
                    half = True
                c = _point(n, d, lo, hi, m, r, x, buf)
                key = buf[0]
                for t in range(c):
                    if buf[t] < key:
                        key = buf[t]
                    if _index(rays, nr, buf[t]) < 0:
                        if nr >= MAX_CLASS_RAYS:
                            raise RuntimeError("ray class exceeds MAX_CLASS_RAYS")
                        rays[nr] = buf[t]
                        nr += 1
            if side == 0:
                pkey[i] = key
            else:
                qkey[i] = key
        if qkey[i] < 0 and pkey[i] >= 0:
            open_q[n_open] = x
            n_open += 1
        i += 1
    # nodes: distinct P keys, then distinct Q keys; rays are the edges
    pn = np.empty(nr, np.int64)
    qn = np.empty(nr, np.int64)
    pu = np.empty(nr, np.int64)
    qu = np.empty(nr, np.int64)
    npn = 0
    nqn = 0
    for i in range(nr):
        k = _index(pu, npn, pkey[i])
        if k < 0:
            pu[npn] = pkey[i]
            k = npn
            npn += 1
        pn[i] = k
        k = _index(qu, nqn, qkey[i])
        if k < 0:
            qu[nqn] = qkey[i]
            k = nqn
            nqn += 1
        qn[i] = k
    nv = npn + nqn
    dist = np.empty(nv, np.int64)
    src = 0
    diam = 0
    for _ in range(2):
        dist[:] = -1
        dist[src] = 0
        changed = True
        while changed:
            changed = False
            for e in range(nr):
                u = pn[e]
                v = npn + qn[e]
                if dist[u] >= 0 and dist[v] < 0:
                    dist[v] = dist[u] + 1
                    changed = True
                elif dist[v] >= 0 and dist[u] < 0:
                    dist[u] = dist[v] + 1
                    changed = True
        far = 0
        for v in range(nv):
            if dist[v] > dist[far]:
                far = v
        diam = dist[far]
        src = far
    return diam, sat, half, n_open


@njit(cache=True)
def explore_range(n, d, lo, hi, m, limb, orb_id, orb_ptr, orb_roots, start, stop, min_len):
    """Run the q̄-side search for every P root in ``[start, stop)``.

    Returns parallel arrays ``(a, b, length, flags)`` for connections of
    length at least ``min_len``; flags bit 0 is satellite, bit 1 half-satellite.
    """
    nroots = len(lo)
    stamp = np.zeros(nroots, np.int32)
    rays = np.empty(MAX_CLASS_RAYS, np.int64)
    pkey = np.empty(MAX_CLASS_RAYS, np.int64)
    qkey = np.empty(MAX_CLASS_RAYS, np.int64)
    open_q = np.empty(MAX_CLASS_RAYS, np.int64)
    buf = np.empty(64, np.int64)
    out_a = []
    out_b = []
    out_l = []
    out_f = []
    stack = np.empty(1024, np.int64)
    for a in range(start, stop):
        tag = a - start + 1
        la = limb[a]
        top = 1
        stack[0] = -1
        while top > 0:
            top -= 1
            b = stack[top]
            L, sat, half, n_open = grow(n, d, lo, hi, m, orb_id, orb_ptr, orb_roots, a, b, rays, pkey, qkey, open_q, buf)
            if b >= 0 and L >= min_len:
                out_a.append(a)
                out_b.append(b)
                out_l.append(L)
                out_f.append((1 if sat else 0) | (2 if half else 0))
            for i in range(n_open):
                o = orb_id[open_q[i]]
                for k in range(orb_ptr[o], orb_ptr[o + 1]):
                    s = orb_roots[k]
                    if stamp[s] == tag or limb[s] == la:
                        continue
                    if b >= 0 and (s == b or not _before(lo, hi, b, s)):
                        continue
                    stamp[s] = tag
                    if top >= len(stack):
                        bigger = np.empty(2 * len(stack), np.int64)
                        bigger[: len(stack)] = stack
                        stack = bigger
                    stack[top] = s
                    top += 1
    k = len(out_a)
    ra = np.empty(k, np.int64)
    rb = np.empty(k, np.int64)
    rl = np.empty(k, np.int64)
    rf = np.empty(k, np.int64)
    for i in range(k):
        ra[i] = out_a[i]
        rb[i] = out_b[i]
        rl[i] = out_l[i]
        rf[i] = out_f[i]
    return ra, rb, rl, rf


@njit(cache=True)
def tally(lo, hi, conj, ra, rb, rl, rf, ptr, max_len):
    """Count maximal connections; ``ptr`` is the CSR index of results by P root.

    Returns two ``(max_len + 1, 2)`` arrays of doubled counts, for all
    connections and for those through a 1/2-satellite.
    """
    allc = np.zeros((max_len + 1, 2), np.int64)
    halfc = np.zeros((max_len + 1, 2), np.int64)
    for e in range(len(ra)):
        a = ra[e]
        b = rb[e]
        L = rl[e]
        ok = True
        for k in range(ptr[b], ptr[b + 1]):
            if rl[k] > L and rb[k] != a and _before(lo, hi, a, rb[k]):
                ok = False
                break
        if ok:
            for k in range(ptr[a], ptr[a + 1]):
                if rl[k] > L and rb[k] != b and _before(lo, hi, b, rb[k]):
                    ok = False
                    break
        if not ok:
            continue
        w = 2 if b == conj[a] else 1
        s = rf[e] & 1
        allc[L, s] += w
        if rf[e] & 2:
            halfc[L, s] += w
    return allc, halfc
