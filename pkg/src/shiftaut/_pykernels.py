"""Numpy implementations of the enumeration kernels.

Same signatures and results as the compiled ``_ckernels`` module. All index
and symbol arrays are ``int32``; ``-1`` marks "absent" throughout.
"""

import numpy as np

TOP, BOTTOM = 0, 1


def lookup_rows(rows, nbr, table, base):
    """``out[i, j] = table[code(rows[i, nbr[j, :]])]`` with big-endian base-``base`` codes."""
    rows = np.asarray(rows, dtype=np.int32)
    nbr = np.asarray(nbr, dtype=np.int32)
    table = np.asarray(table, dtype=np.int32)
    n_rows, n_out = rows.shape[0], nbr.shape[0]
    out = np.empty((n_rows, n_out), dtype=np.int32)
    for j in range(n_out):
        code = np.zeros(n_rows, dtype=np.int64)
        for col in nbr[j]:
            code = code * base + rows[:, col]
        out[:, j] = table[code]
    return out


def match_placements(rows, cols, vals):
    """Index of the first placement ``q`` with ``rows[i, cols[q]] == vals[q]``, else ``-1``.

    Entries of ``cols`` equal to ``-1`` are padding and always match.
    """
    rows = np.asarray(rows, dtype=np.int32)
    cols = np.asarray(cols, dtype=np.int32)
    vals = np.asarray(vals, dtype=np.int32)
    out = np.full(rows.shape[0], -1, dtype=np.int32)
    for q in range(cols.shape[0]):
        keep = cols[q] >= 0
        c = cols[q][keep]
        hit = np.all(rows[:, c] == vals[q][keep], axis=1)
        out[(out < 0) & hit] = q
    return out


def overlap_free(rows, pa, pb, ptr):
    """True where every pair group ``ptr[g]:ptr[g+1]`` has some column pair that differs."""
    rows = np.asarray(rows, dtype=np.int32)
    ok = np.ones(rows.shape[0], dtype=bool)
    for g in range(len(ptr) - 1):
        lo, hi = ptr[g], ptr[g + 1]
        if lo == hi:
            ok[:] = False
            break
        differ = np.any(rows[:, pa[lo:hi]] != rows[:, pb[lo:hi]], axis=1)
        ok &= differ
    return ok.astype(np.uint8)


def belt_walk(codes, nbr, inv_s, back, fwd, pos, trk, steps, forward):
    """Apply the toy belt permutation (or its inverse) ``steps`` times to each state.

    ``codes[i, p]`` is 0 for a non-belt cell, otherwise an index into the pointer
    tables ``back``/``fwd`` (entries are indices into the pointer set).
    ``nbr[p, s]`` is the cell reached from ``p`` by pointer ``s``, or -1 when it
    falls outside the window. States that touch the edge become ``pos = -1``.
    """
    codes = np.asarray(codes, dtype=np.int32)
    nbr = np.asarray(nbr, dtype=np.int32)
    inv_s = np.asarray(inv_s, dtype=np.int32)
    back = np.asarray(back, dtype=np.int32)
    fwd = np.asarray(fwd, dtype=np.int32)
    pos = np.array(pos, dtype=np.int32)
    trk = np.array(trk, dtype=np.int32)
    idx = np.arange(codes.shape[0])
    for _ in range(steps):
        live = pos >= 0
        p = np.where(live, pos, 0)
        c = codes[idx, p]
        belt = live & (c > 0)
        # forward map moves along fwd on TOP, along back on BOTTOM; the inverse swaps them
        use_fwd = (trk == TOP) if forward else (trk == BOTTOM)
        ptr = np.where(use_fwd, fwd[c], back[c])
        tgt = np.where(belt, nbr[p, ptr], 0)
        edge = belt & (tgt < 0)
        tgt_safe = np.where(tgt < 0, 0, tgt)
        c2 = codes[idx, tgt_safe]
        recip = np.where(use_fwd, back[c2], fwd[c2])
        ok = belt & ~edge & (c2 > 0) & (recip == inv_s[ptr])
        new_pos = np.where(ok, tgt_safe, p)
        new_trk = np.where(ok, trk, 1 - trk)
        pos = np.where(live & ~edge, new_pos, -1).astype(np.int32)
        trk = np.where(live & ~edge, new_trk, trk).astype(np.int32)
    return pos, trk


def orbit_labels(nxt):
    """Label each state by the smallest state index in its (possibly truncated) orbit."""
    nxt = np.asarray(nxt, dtype=np.int32)
    n_rows, n_states = nxt.shape
    labels = np.tile(np.arange(n_states, dtype=np.int32), (n_rows, 1))
    rows = np.repeat(np.arange(n_rows), n_states).reshape(n_rows, n_states)
    has = nxt >= 0
    tgt = np.where(has, nxt, 0)
    for _ in range(n_states):
        fwd = np.where(has, labels[rows, tgt], labels)
        new = np.minimum(labels, fwd)
        # push labels backwards along the same edges
        flat = new.copy()
        np.minimum.at(flat, (rows[has], tgt[has]), new[has])
        if np.array_equal(flat, labels):
            break
        labels = flat
    return labels
