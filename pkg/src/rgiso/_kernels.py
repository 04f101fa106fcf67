"""JIT-compiled search kernels on uint64 bitset matrices.

Everything here is deterministic: candidate vertices are scanned in ascending
index order, variable selection breaks ties by smallest index, and budgets are
node counts (an optional wall-clock deadline is polled every 64k nodes). The
kernels know nothing about Graph objects; wrappers in solver.py build the
word matrices and initial domains.

Population counts and bit scans go through LLVM intrinsics; software SWAR was
about 4x slower on the refutation benchmark.
"""

from __future__ import annotations

import time

import numpy as np
from llvmlite import ir
from numba import njit, objmode, types
from numba.extending import intrinsic

_U0 = np.uint64(0)
_U1 = np.uint64(1)

STATUS_EXHAUSTED = 0
STATUS_LIMIT = 1
STATUS_TIMEOUT = 2

_WALL_POLL_MASK = 0xFFFF  # poll the clock every 65536 nodes


@intrinsic
def _ctpop(typingctx, x):
    if x != types.uint64:
        return None
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        i64 = ir.IntType(64)
        fnty = ir.FunctionType(i64, [i64])
        fn = builder.module.declare_intrinsic("llvm.ctpop", [i64], fnty)
        return builder.call(fn, [args[0]])

    return sig, codegen


@intrinsic
def _cttz(typingctx, x):
    # undefined for x == 0; call sites guarantee x != 0
    if x != types.uint64:
        return None
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        i64 = ir.IntType(64)
        i1 = ir.IntType(1)
        fnty = ir.FunctionType(i64, [i64, i1])
        fn = builder.module.declare_intrinsic("llvm.cttz", [i64], fnty)
        return builder.call(fn, [args[0], ir.Constant(i1, 1)])

    return sig, codegen


@njit(cache=True, inline="always")
def _pc(x):
    return np.int64(_ctpop(x))


@njit(cache=True, inline="always")
def _tz(x):
    return np.int64(_cttz(x))


@njit(cache=True, inline="always")
def _row_pc(row, w):
    s = np.int64(0)
    for k in range(w):
        s += _pc(row[k])
    return s


@njit(cache=True)
def _cascade(padj, tw, nonadj, dom, assigned, csize, units_row, tcnt, pn, wt):
    """Apply forced assignments (domain size 1) until a fixed point.

    Mutates dom rows of unassigned vertices in place, appends assignments to
    units_row, and flags them in `assigned`. Returns (tcnt, ok); on ok=False
    the caller unwinds the first tcnt flags.
    """
    progress = True
    while progress:
        progress = False
        for y in range(pn):
            if assigned[y] == 1 or csize[y] != 1:
                continue
            # locate the single candidate
            x = -1
            for k in range(wt):
                word = dom[y, k]
                if word != _U0:
                    x = (k << 6) + _tz(word)
                    break
            assigned[y] = 1
            units_row[tcnt] = y
            tcnt += 1
            row_adj = tw[x]
            row_non = nonadj[x]
            for z in range(pn):
                if assigned[z] == 1:
                    continue
                mrow = row_adj if padj[y, z] == 1 else row_non
                s = np.int64(0)
                for k in range(wt):
                    word = dom[z, k] & mrow[k]
                    dom[z, k] = word
                    s += _pc(word)
                csize[z] = s
                if s == 0:
                    return tcnt, False
            progress = True
    return tcnt, True


@njit(cache=True)
def si_count(padj, pn, tw, tn, dom0, count_limit, max_nodes, deadline):
    """Count injective maps of the pattern into the target that preserve both
    edges and non-edges, stopping once count reaches count_limit.

    Forward checking with unit propagation; branching variable is the
    unassigned pattern vertex with the smallest domain (ties: smallest index),
    candidate images tried in ascending order. A node is one candidate
    assignment tried. Returns (status, nodes, count).
    """
    wt = tw.shape[1]
    nodes = np.int64(0)
    count = np.int64(0)

    # full-row mask and complement rows (non-neighbours, self excluded)
    full = np.zeros(wt, np.uint64)
    for v in range(tn):
        full[v >> 6] |= _U1 << np.uint64(v & 63)
    nonadj = np.empty((tn, wt), np.uint64)
    for u in range(tn):
        for k in range(wt):
            nonadj[u, k] = (~tw[u, k]) & full[k]
        nonadj[u, u >> 6] &= ~(_U1 << np.uint64(u & 63))

    assigned = np.zeros(pn, np.uint8)
    sel = np.zeros(pn + 1, np.int64)
    cand = np.zeros((pn + 1, wt), np.uint64)
    dom = np.zeros((pn + 1, pn, wt), np.uint64)
    units = np.zeros((pn + 1, pn + 1), np.int64)
    ucnt = np.zeros(pn + 1, np.int64)
    csize = np.zeros(pn, np.int64)

    for y in range(pn):
        for k in range(wt):
            dom[0, y, k] = dom0[y, k]
        s = _row_pc(dom[0, y], wt)
        csize[y] = s
        if s == 0:
            return STATUS_EXHAUSTED, nodes, count

    tcnt, ok = _cascade(padj, tw, nonadj, dom[0], assigned, csize, units[0], 0, pn, wt)
    ucnt[0] = tcnt
    if not ok:
        return STATUS_EXHAUSTED, nodes, count
    na = tcnt
    if na == pn:
        count = 1
        status = STATUS_LIMIT if count >= count_limit else STATUS_EXHAUSTED
        return status, nodes, count

    best = np.int64(1) << 62
    bw = -1
    for y in range(pn):
        if assigned[y] == 0 and csize[y] < best:
            best = csize[y]
            bw = y
    sel[0] = bw
    for k in range(wt):
        cand[0, k] = dom[0, bw, k]

    status = STATUS_EXHAUSTED
    d = 0
    while d >= 0:
        # next candidate at this level
        u = -1
        for k in range(wt):
            word = cand[d, k]
            if word != _U0:
                cand[d, k] = word & (word - _U1)
                u = (k << 6) + _tz(word)
                break
        if u < 0:
            for i in range(ucnt[d]):
                assigned[units[d, i]] = 0
            na -= ucnt[d]
            d -= 1
            continue
        nodes += 1
        if nodes > max_nodes:
            status = STATUS_TIMEOUT
            break
        if deadline > 0.0 and (nodes & _WALL_POLL_MASK) == 0:
            t = 0.0
            with objmode(t="f8"):
                t = time.monotonic()
            if t >= deadline:
                status = STATUS_TIMEOUT
                break
        v = sel[d]
        # branch: assign v -> u, filter domains into level d+1
        assigned[v] = 1
        units[d + 1, 0] = v
        tcnt = 1
        ok = True
        row_adj = tw[u]
        row_non = nonadj[u]
        for y in range(pn):
            if assigned[y] == 1:
                continue
            mrow = row_adj if padj[v, y] == 1 else row_non
            s = np.int64(0)
            for k in range(wt):
                word = dom[d, y, k] & mrow[k]
                dom[d + 1, y, k] = word
                s += _pc(word)
            csize[y] = s
            if s == 0:
                ok = False
                break
        if ok:
            tcnt, ok = _cascade(
                padj, tw, nonadj, dom[d + 1], assigned, csize, units[d + 1], tcnt, pn, wt
            )
        if not ok:
            for i in range(tcnt):
                assigned[units[d + 1, i]] = 0
            continue
        if na + tcnt == pn:
            count += 1
            for i in range(tcnt):
                assigned[units[d + 1, i]] = 0
            if count >= count_limit:
                status = STATUS_LIMIT
                break
            continue
        # descend
        ucnt[d + 1] = tcnt
        na += tcnt
        best = np.int64(1) << 62
        bw = -1
        for y in range(pn):
            if assigned[y] == 0 and csize[y] < best:
                best = csize[y]
                bw = y
        d += 1
        sel[d] = bw
        for k in range(wt):
            cand[d, k] = dom[d, bw, k]
    return status, nodes, count


@njit(cache=True)
def _select_class(cg, ch, ncls, sel_ci, sel_v, hcand, did_remove, d, w1, w2):
    """Pick the branching class at level d: smallest H side, ties by smallest G vertex."""
    bc = np.int64(1) << 62
    bv = np.int64(1) << 62
    bj = -1
    for j in range(ncls[d]):
        c = np.int64(0)
        for k in range(w2):
            c += _pc(ch[d, j, k])
        lv = np.int64(1) << 62
        for k in range(w1):
            word = cg[d, j, k]
            if word != _U0:
                lv = (k << 6) + _tz(word)
                break
        if c < bc or (c == bc and lv < bv):
            bc = c
            bv = lv
            bj = j
    sel_ci[d] = bj
    sel_v[d] = bv
    for k in range(w2):
        hcand[d, k] = ch[d, bj, k]
    did_remove[d] = 0


@njit(cache=True)
def mcis_search(gw, n1, hw, n2, max_nodes, deadline):
    """Maximum common induced subgraph via branch and bound on label classes.

    Unmatched vertices are partitioned into classes by their adjacency pattern
    to the matched pairs; the bound at a node is matched + sum of
    min(|class G side|, |class H side|). Branching picks the class whose H
    side (the candidate domain) is smallest, ties by smallest G vertex, and
    tries H candidates in ascending order, then the branch where the chosen G
    vertex is left unmatched. A node is one candidate pair tried.

    Returns (best, status, nodes, best_g, best_h) where the first `best`
    entries of best_g/best_h form a witness matching; status TIMEOUT means
    `best` is only a lower bound.
    """
    w1 = gw.shape[1]
    w2 = hw.shape[1]
    levels = 2 * n1 + 2
    maxc = n1 + 1

    cg = np.zeros((levels, maxc, w1), np.uint64)
    ch = np.zeros((levels, maxc, w2), np.uint64)
    ncls = np.zeros(levels, np.int64)
    fbound = np.zeros(levels, np.int64)
    matched = np.zeros(levels, np.int64)
    sel_ci = np.zeros(levels, np.int64)
    sel_v = np.zeros(levels, np.int64)
    hcand = np.zeros((levels, w2), np.uint64)
    did_remove = np.zeros(levels, np.uint8)
    path_g = np.zeros(n1 + 1, np.int64)
    path_h = np.zeros(n1 + 1, np.int64)
    best_g = np.zeros(n1 + 1, np.int64)
    best_h = np.zeros(n1 + 1, np.int64)

    nodes = np.int64(0)
    best = np.int64(0)
    status = STATUS_EXHAUSTED

    if n1 == 0 or n2 == 0:
        return best, status, nodes, best_g, best_h

    # root: a single class holding everything
    for v in range(n1):
        cg[0, 0, v >> 6] |= _U1 << np.uint64(v & 63)
    for v in range(n2):
        ch[0, 0, v >> 6] |= _U1 << np.uint64(v & 63)
    ncls[0] = 1
    matched[0] = 0
    fbound[0] = min(n1, n2)
    _select_class(cg, ch, ncls, sel_ci, sel_v, hcand, did_remove, 0, w1, w2)

    d = 0
    while d >= 0:
        if fbound[d] <= best:
            d -= 1
            continue
        # next H candidate for the selected G vertex
        w = -1
        for k in range(w2):
            word = hcand[d, k]
            if word != _U0:
                hcand[d, k] = word & (word - _U1)
                w = (k << 6) + _tz(word)
                break
        if w >= 0:
            nodes += 1
            if nodes > max_nodes:
                status = STATUS_TIMEOUT
                break
            if deadline > 0.0 and (nodes & _WALL_POLL_MASK) == 0:
                t = 0.0
                with objmode(t="f8"):
                    t = time.monotonic()
                if t >= deadline:
                    status = STATUS_TIMEOUT
                    break
            m = matched[d]
            v = sel_v[d]
            ci = sel_ci[d]
            path_g[m] = v
            path_h[m] = w
            if m + 1 > best:
                best = m + 1
                for i in range(m + 1):
                    best_g[i] = path_g[i]
                    best_h[i] = path_h[i]
            # refine classes into level d+1, splitting on adjacency to v / w
            nc = np.int64(0)
            bound = m + 1
            vw = v >> 6
            vb = _U1 << np.uint64(v & 63)
            ww = w >> 6
            wb = _U1 << np.uint64(w & 63)
            for j in range(ncls[d]):
                ga_cnt = np.int64(0)
                gb_cnt = np.int64(0)
                for k in range(w1):
                    gm = cg[d, j, k]
                    if j == ci and k == vw:
                        gm &= ~vb
                    ga = gm & gw[v, k]
                    gb = gm & ~gw[v, k]
                    cg[levels - 1, j, k] = ga  # scratch rows, never reached by d
                    cg[levels - 2, j, k] = gb
                    ga_cnt += _pc(ga)
                    gb_cnt += _pc(gb)
                ha_cnt = np.int64(0)
                hb_cnt = np.int64(0)
                for k in range(w2):
                    hm = ch[d, j, k]
                    if j == ci and k == ww:
                        hm &= ~wb
                    ha = hm & hw[w, k]
                    hb = hm & ~hw[w, k]
                    ch[levels - 1, j, k] = ha
                    ch[levels - 2, j, k] = hb
                    ha_cnt += _pc(ha)
                    hb_cnt += _pc(hb)
                if ga_cnt > 0 and ha_cnt > 0:
                    for k in range(w1):
                        cg[d + 1, nc, k] = cg[levels - 1, j, k]
                    for k in range(w2):
                        ch[d + 1, nc, k] = ch[levels - 1, j, k]
                    nc += 1
                    bound += ga_cnt if ga_cnt < ha_cnt else ha_cnt
                if gb_cnt > 0 and hb_cnt > 0:
                    for k in range(w1):
                        cg[d + 1, nc, k] = cg[levels - 2, j, k]
                    for k in range(w2):
                        ch[d + 1, nc, k] = ch[levels - 2, j, k]
                    nc += 1
                    bound += gb_cnt if gb_cnt < hb_cnt else hb_cnt
            if nc > 0 and bound > best:
                ncls[d + 1] = nc
                matched[d + 1] = m + 1
                fbound[d + 1] = bound
                _select_class(cg, ch, ncls, sel_ci, sel_v, hcand, did_remove, d + 1, w1, w2)
                d += 1
            continue
        if did_remove[d] == 0:
            # branch where the selected G vertex stays unmatched
            did_remove[d] = 1
            v = sel_v[d]
            ci = sel_ci[d]
            vw = v >> 6
            vb = _U1 << np.uint64(v & 63)
            nc = np.int64(0)
            bound = matched[d]
            for j in range(ncls[d]):
                g_cnt = np.int64(0)
                for k in range(w1):
                    gm = cg[d, j, k]
                    if j == ci and k == vw:
                        gm &= ~vb
                    cg[d + 1, nc, k] = gm
                    g_cnt += _pc(gm)
                if g_cnt == 0:
                    continue
                h_cnt = np.int64(0)
                for k in range(w2):
                    hm = ch[d, j, k]
                    ch[d + 1, nc, k] = hm
                    h_cnt += _pc(hm)
                nc += 1
                bound += g_cnt if g_cnt < h_cnt else h_cnt
            if nc > 0 and bound > best:
                ncls[d + 1] = nc
                matched[d + 1] = matched[d]
                fbound[d + 1] = bound
                _select_class(cg, ch, ncls, sel_ci, sel_v, hcand, did_remove, d + 1, w1, w2)
                d += 1
            continue
        d -= 1
    return best, status, nodes, best_g, best_h


@njit(cache=True)
def wl_colors(words, n, lmask):
    """Stable color refinement on the vertices in lmask.

    Colors start as degrees within lmask and are refined by multisets of
    neighbour colors until the partition stops splitting. Returns
    (colors, ncolors) with colors[v] = -1 outside lmask; the partition is
    automorphism-invariant, so ncolors == |L| certifies rigidity.
    """
    w = words.shape[1]
    colors = np.full(n, -1, np.int64)
    verts = np.empty(n, np.int64)
    nl = 0
    for v in range(n):
        if (lmask[v >> 6] >> np.uint64(v & 63)) & _U1 == _U1:
            verts[nl] = v
            nl += 1
    if nl == 0:
        return colors, 0
    for i in range(nl):
        v = verts[i]
        s = np.int64(0)
        for k in range(w):
            s += _pc(words[v, k] & lmask[k])
        colors[v] = s
    order = np.empty(nl, np.int64)
    for i in range(nl):
        order[i] = i
    sig = np.zeros((nl, nl + 1), np.int64)
    ncolors = _normalize(colors, verts, nl, order, sig, True)
    while ncolors < nl:
        for i in range(nl):
            for c in range(nl + 1):
                sig[i, c] = 0
        for i in range(nl):
            v = verts[i]
            for k in range(w):
                x = words[v, k] & lmask[k]
                while x != _U0:
                    u = (k << 6) + _tz(x)
                    x &= x - _U1
                    sig[i, colors[u]] += 1
        nxt = _normalize(colors, verts, nl, order, sig, False)
        if nxt == ncolors:
            break
        ncolors = nxt
    return colors, ncolors


@njit(cache=True)
def _normalize(colors, verts, nl, order, sig, initial):
    """Re-rank (color, signature-row) keys into dense ids; returns #classes."""
    for i in range(1, nl):
        j = i
        while j > 0 and _key_less(colors, verts, sig, order[j], order[j - 1], nl, initial):
            tmp = order[j]
            order[j] = order[j - 1]
            order[j - 1] = tmp
            j -= 1
    newc = np.empty(nl, np.int64)
    cid = 0
    newc[order[0]] = 0
    for i in range(1, nl):
        a = order[i - 1]
        b = order[i]
        if _key_less(colors, verts, sig, a, b, nl, initial):
            cid += 1
        newc[b] = cid
    for i in range(nl):
        colors[verts[i]] = newc[i]
    return cid + 1


@njit(cache=True, inline="always")
def _key_less(colors, verts, sig, a, b, nl, initial):
    ca = colors[verts[a]]
    cb = colors[verts[b]]
    if ca != cb:
        return ca < cb
    if initial:
        return False
    for c in range(nl + 1):
        if sig[a, c] != sig[b, c]:
            return sig[a, c] < sig[b, c]
    return False


@njit(cache=True)
def subset_scan(rows, n):
    """Walk all subsets in Gray-code order tracking per-size extreme edge counts.

    rows are single-word uint64 adjacency masks (n <= 63). Returns
    (min_e, max_e, min_mask, max_mask) indexed by subset size; size 0 is the
    empty subset with 0 edges.
    """
    big = np.int64(1) << 62
    min_e = np.full(n + 1, big, np.int64)
    max_e = np.full(n + 1, np.int64(-1), np.int64)
    min_mask = np.zeros(n + 1, np.uint64)
    max_mask = np.zeros(n + 1, np.uint64)
    min_e[0] = 0
    max_e[0] = 0
    cur = _U0
    e = np.int64(0)
    s = np.int64(0)
    total = np.int64(1) << n
    for i in range(np.int64(1), total):
        t = _tz(np.uint64(i))
        b = _U1 << np.uint64(t)
        if cur & b:
            cur ^= b
            e -= _pc(rows[t] & cur)
            s -= 1
        else:
            e += _pc(rows[t] & cur)
            cur ^= b
            s += 1
        if e < min_e[s]:
            min_e[s] = e
            min_mask[s] = cur
        if e > max_e[s]:
            max_e[s] = e
            max_mask[s] = cur
    return min_e, max_e, min_mask, max_mask


@njit(cache=True)
def canonical_code(padj, n):
    """Smallest upper-triangle adjacency code over all vertex orderings.

    The code packs pairs (i, j), i < j, row-major into one uint64, so n <= 10
    (45 bits). Permutations are enumerated lexicographically; the minimum is
    invariant under isomorphism.
    """
    perm = np.arange(n)
    best = ~_U0
    while True:
        code = _U0
        bit = 0
        for i in range(n):
            pi = perm[i]
            for j in range(i + 1, n):
                if padj[pi, perm[j]] == 1:
                    code |= _U1 << np.uint64(bit)
                bit += 1
        if code < best:
            best = code
        i = n - 2
        while i >= 0 and perm[i] >= perm[i + 1]:
            i -= 1
        if i < 0:
            break
        j = n - 1
        while perm[j] <= perm[i]:
            j -= 1
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
        lo = i + 1
        hi = n - 1
        while lo < hi:
            tmp = perm[lo]
            perm[lo] = perm[hi]
            perm[hi] = tmp
            lo += 1
            hi -= 1
    return best
