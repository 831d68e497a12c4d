# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; semantics match ``shiftaut._pykernels``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64

cdef enum:
    TOP = 0
    BOTTOM = 1


def lookup_rows(rows, nbr, table, int base):
    cdef const i32[:, ::1] r = np.ascontiguousarray(rows, dtype=np.int32)
    cdef const i32[:, ::1] nb = np.ascontiguousarray(nbr, dtype=np.int32)
    cdef const i32[::1] t = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n_rows = r.shape[0], n_out = nb.shape[0], width = nb.shape[1]
    out = np.empty((n_rows, n_out), dtype=np.int32)
    cdef i32[:, ::1] o = out
    cdef Py_ssize_t i, j, l
    cdef i64 code
    with nogil:
        for i in range(n_rows):
            for j in range(n_out):
                code = 0
                for l in range(width):
                    code = code * base + r[i, nb[j, l]]
                o[i, j] = t[code]
    return out


def match_placements(rows, cols, vals):
    cdef const i32[:, ::1] r = np.ascontiguousarray(rows, dtype=np.int32)
    cdef const i32[:, ::1] c = np.ascontiguousarray(cols, dtype=np.int32)
    cdef const i32[:, ::1] v = np.ascontiguousarray(vals, dtype=np.int32)
    cdef Py_ssize_t n_rows = r.shape[0], n_q = c.shape[0], width = c.shape[1]
    out = np.full(n_rows, -1, dtype=np.int32)
    cdef i32[::1] o = out
    cdef Py_ssize_t i, q, l, m
    cdef i32 diff
    # compact each placement's live columns once; padding (-1) always matches
    ccols = np.zeros((n_q, width), dtype=np.intp)
    cvals = np.zeros((n_q, width), dtype=np.int32)
    clen = np.zeros(n_q, dtype=np.intp)
    cdef Py_ssize_t[:, ::1] cc = ccols
    cdef i32[:, ::1] cv = cvals
    cdef Py_ssize_t[::1] cl = clen
    for q in range(n_q):
        m = 0
        for l in range(width):
            if c[q, l] >= 0:
                cc[q, m] = c[q, l]
                cv[q, m] = v[q, l]
                m += 1
        cl[q] = m
    with nogil:
        for i in range(n_rows):
            for q in range(n_q):
                # branch-free comparison: random windows make early exits unpredictable
                diff = 0
                for l in range(cl[q]):
                    diff = diff | (r[i, cc[q, l]] ^ cv[q, l])
                if diff == 0:
                    o[i] = <i32>q
                    break
    return out


def overlap_free(rows, pa, pb, ptr):
    cdef const i32[:, ::1] r = np.ascontiguousarray(rows, dtype=np.int32)
    cdef const i32[::1] a = np.ascontiguousarray(pa, dtype=np.int32)
    cdef const i32[::1] b = np.ascontiguousarray(pb, dtype=np.int32)
    cdef const i32[::1] p = np.ascontiguousarray(ptr, dtype=np.int32)
    cdef Py_ssize_t n_rows = r.shape[0], n_groups = p.shape[0] - 1
    out = np.ones(n_rows, dtype=np.uint8)
    cdef cnp.uint8_t[::1] o = out
    cdef Py_ssize_t i, g, k
    cdef bint differ
    with nogil:
        for i in range(n_rows):
            for g in range(n_groups):
                differ = False
                for k in range(p[g], p[g + 1]):
                    if r[i, a[k]] != r[i, b[k]]:
                        differ = True
                        break
                if not differ:
                    o[i] = 0
                    break
    return out


def belt_walk(codes, nbr, inv_s, back, fwd, pos, trk, int steps, bint forward):
    cdef const i32[:, ::1] cd = np.ascontiguousarray(codes, dtype=np.int32)
    cdef const i32[:, ::1] nb = np.ascontiguousarray(nbr, dtype=np.int32)
    cdef const i32[::1] inv = np.ascontiguousarray(inv_s, dtype=np.int32)
    cdef const i32[::1] bk = np.ascontiguousarray(back, dtype=np.int32)
    cdef const i32[::1] fw = np.ascontiguousarray(fwd, dtype=np.int32)
    pos_out = np.array(pos, dtype=np.int32)
    trk_out = np.array(trk, dtype=np.int32)
    cdef i32[::1] ps = pos_out
    cdef i32[::1] tk = trk_out
    cdef Py_ssize_t n_rows = cd.shape[0], i
    cdef int s, c, c2, ptr, tgt, recip
    cdef bint use_fwd
    with nogil:
        for i in range(n_rows):
            for s in range(steps):
                if ps[i] < 0:
                    break
                c = cd[i, ps[i]]
                if c == 0:
                    tk[i] = 1 - tk[i]
                    continue
                use_fwd = (tk[i] == TOP) if forward else (tk[i] == BOTTOM)
                ptr = fw[c] if use_fwd else bk[c]
                tgt = nb[ps[i], ptr]
                if tgt < 0:
                    ps[i] = -1
                    break
                c2 = cd[i, tgt]
                if c2 > 0:
                    recip = bk[c2] if use_fwd else fw[c2]
                    if recip == inv[ptr]:
                        ps[i] = tgt
                        continue
                tk[i] = 1 - tk[i]
    return pos_out, trk_out


def orbit_labels(nxt):
    cdef const i32[:, ::1] nx = np.ascontiguousarray(nxt, dtype=np.int32)
    cdef Py_ssize_t n_rows = nx.shape[0], n_states = nx.shape[1]
    labels = np.tile(np.arange(n_states, dtype=np.int32), (n_rows, 1))
    cdef i32[:, ::1] lab = labels
    parent = np.empty(n_states, dtype=np.int32)
    cdef i32[::1] par = parent
    cdef Py_ssize_t i, s
    cdef int a, b, t
    with nogil:
        for i in range(n_rows):
            for s in range(n_states):
                par[s] = <i32>s
            for s in range(n_states):
                if nx[i, s] < 0:
                    continue
                a = <int>s
                while par[a] != a:
                    a = par[a]
                b = nx[i, s]
                while par[b] != b:
                    b = par[b]
                if a < b:
                    par[b] = a
                elif b < a:
                    par[a] = b
            for s in range(n_states):
                t = <int>s
                while par[t] != t:
                    t = par[t]
                lab[i, s] = t
    return labels
