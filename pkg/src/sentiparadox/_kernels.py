"""Numba kernels over CSR adjacency (indptr/indices, sorted rows)."""

import numba as nb
import numpy as np

EPS = 1e-12


@nb.njit(cache=True, nogil=True)
def _forward_counts(indptr, indices, lo, hi):
    # triangles (u, v, w) with u < v < w, counted at u
    counts = np.zeros(hi - lo, dtype=np.int64)
    for u in range(lo, hi):
        c = 0
        a0, a1 = indptr[u], indptr[u + 1]
        for i in range(a0, a1):
            v = indices[i]
            if v <= u:
                continue
            # intersect adj(u) after v with adj(v) after v
            p, q = i + 1, indptr[v]
            q1 = indptr[v + 1]
            while q < q1 and indices[q] <= v:
                q += 1
            while p < a1 and q < q1:
                x, y = indices[p], indices[q]
                if x == y:
                    c += 1
                    p += 1
                    q += 1
                elif x < y:
                    p += 1
                else:
                    q += 1
        counts[u - lo] = c
    return counts


@nb.njit(cache=True, nogil=True)
def _forward_fill(indptr, indices, lo, hi, offsets, out):
    for u in range(lo, hi):
        k = offsets[u - lo]
        a0, a1 = indptr[u], indptr[u + 1]
        for i in range(a0, a1):
            v = indices[i]
            if v <= u:
                continue
            p, q = i + 1, indptr[v]
            q1 = indptr[v + 1]
            while q < q1 and indices[q] <= v:
                q += 1
            while p < a1 and q < q1:
                x, y = indices[p], indices[q]
                if x == y:
                    out[k, 0] = u
                    out[k, 1] = v
                    out[k, 2] = x
                    k += 1
                    p += 1
                    q += 1
                elif x < y:
                    p += 1
                else:
                    q += 1


def triangles(indptr, indices, lo=0, hi=None):
    """All triangles whose lowest vertex lies in ``[lo, hi)``, lexicographic."""
    n = len(indptr) - 1
    hi = n if hi is None else hi
    counts = _forward_counts(indptr, indices, lo, hi)
    offsets = np.zeros(len(counts) + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    out = np.empty((offsets[-1], 3), dtype=np.int64)
    _forward_fill(indptr, indices, lo, hi, offsets, out)
    return out


@nb.njit(cache=True, nogil=True)
def _pair_intersections_count(owner_ptr, owner_idx, key_ptr, key_idx):
    # for every (u, v) with v in row u of the first CSR, count |key(u) & key(v)|
    total = 0
    n = len(owner_ptr) - 1
    for u in range(n):
        for i in range(owner_ptr[u], owner_ptr[u + 1]):
            v = owner_idx[i]
            p, p1 = key_ptr[u], key_ptr[u + 1]
            q, q1 = key_ptr[v], key_ptr[v + 1]
            while p < p1 and q < q1:
                x, y = key_idx[p], key_idx[q]
                if x == y:
                    total += 1
                    p += 1
                    q += 1
                elif x < y:
                    p += 1
                else:
                    q += 1
    return total


@nb.njit(cache=True, nogil=True)
def _pair_intersections_fill(owner_ptr, owner_idx, key_ptr, key_idx, out):
    k = 0
    n = len(owner_ptr) - 1
    for u in range(n):
        for i in range(owner_ptr[u], owner_ptr[u + 1]):
            v = owner_idx[i]
            p, p1 = key_ptr[u], key_ptr[u + 1]
            q, q1 = key_ptr[v], key_ptr[v + 1]
            while p < p1 and q < q1:
                x, y = key_idx[p], key_idx[q]
                if x == y:
                    out[k, 0] = u
                    out[k, 1] = x
                    out[k, 2] = v
                    k += 1
                    p += 1
                    q += 1
                elif x < y:
                    p += 1
                else:
                    q += 1


def shared_keys(owner_ptr, owner_idx, key_ptr, key_idx):
    """Rows ``(u, key, v)`` for every connection ``v`` of ``u`` and shared key.

    Rows come out ordered by ``u``, then by ``v``'s position in row ``u``,
    then by key.
    """
    total = _pair_intersections_count(owner_ptr, owner_idx, key_ptr, key_idx)
    out = np.empty((total, 3), dtype=np.int64)
    _pair_intersections_fill(owner_ptr, owner_idx, key_ptr, key_idx, out)
    return out


@nb.njit(cache=True, nogil=True)
def _insertion_sort(buf, m):
    for i in range(1, m):
        x = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > x:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = x


@nb.njit(cache=True, nogil=True)
def segment_aggregate(values, members, indptr, median, out):
    """Mean (``median=False``) or median of ``values[members]`` per segment."""
    nseg = len(indptr) - 1
    buf = np.empty(64, dtype=np.float64)
    for s in range(nseg):
        a, b = indptr[s], indptr[s + 1]
        m = b - a
        if not median:
            acc = 0.0
            for i in range(a, b):
                acc += values[members[i]]
            out[s] = acc / m
            continue
        if m == 1:
            out[s] = values[members[a]]
            continue
        if m == 2:
            out[s] = 0.5 * (values[members[a]] + values[members[a + 1]])
            continue
        if m > len(buf):
            buf = np.empty(2 * m, dtype=np.float64)
        for i in range(m):
            buf[i] = values[members[a + i]]
        if m <= 48:
            _insertion_sort(buf, m)
            seg = buf
        else:
            seg = np.sort(buf[:m])
        h = m // 2
        if m % 2 == 1:
            out[s] = seg[h]
        else:
            out[s] = 0.5 * (seg[h - 1] + seg[h])
    return out


@nb.njit(cache=True, nogil=True)
def unit_status(values, owner, agg, eps, out):
    """+1 Holds (owner below aggregate), -1 DoesNotHold, 0 Unknown."""
    for i in range(len(owner)):
        d = values[owner[i]] - agg[i]
        if d < -eps:
            out[i] = 1
        elif d > eps:
            out[i] = -1
        else:
            out[i] = 0
    return out


@nb.njit(cache=True, nogil=True)
def group_status(unit_st, group, n_groups, out):
    """Strict-majority status per group from its unit statuses."""
    score = np.zeros(n_groups, dtype=np.int64)
    for i in range(len(group)):
        score[group[i]] += unit_st[i]
    for g in range(n_groups):
        s = score[g]
        out[g] = 1 if s > 0 else (-1 if s < 0 else 0)
    return out


@nb.njit(cache=True, nogil=True)
def evaluate_counts(values, owner, members, indptr, group, n_groups, present, median, eps):
    """(n_holds, n_not, n_unknown) over the present groups."""
    agg = np.empty(len(owner), dtype=np.float64)
    segment_aggregate(values, members, indptr, median, agg)
    st = np.empty(len(owner), dtype=np.int8)
    unit_status(values, owner, agg, eps, st)
    gs = np.empty(n_groups, dtype=np.int8)
    group_status(st, group, n_groups, gs)
    h = 0
    d = 0
    k = 0
    for g in range(n_groups):
        if not present[g]:
            continue
        if gs[g] > 0:
            h += 1
        elif gs[g] < 0:
            d += 1
        else:
            k += 1
    return h, d, k


@nb.njit(cache=True, nogil=True)
def null_block(base, slots, pool, perms, owner, members, indptr, group, n_groups, present, median, eps, out):
    """Evaluate one block of permuted assignments; ``perms[r]`` reorders ``pool``."""
    values = base.copy()
    for r in range(perms.shape[0]):
        perm = perms[r]
        for i in range(len(slots)):
            values[slots[i]] = pool[perm[i]]
        h, d, k = evaluate_counts(values, owner, members, indptr, group, n_groups, present, median, eps)
        out[r, 0] = h
        out[r, 1] = d
        out[r, 2] = k
    return out
