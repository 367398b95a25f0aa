"""Hot numeric kernels: bitmask subset searches and the tree-type DP.

Each kernel has a numba path and a fallback. Brute-force searches fall back to
vectorised numpy; the tree DP falls back to the same loop code interpreted by
CPython. Selection is global, see :mod:`idsolve._accel`.

All vertex/test sets are int64 bitmasks, so inputs are limited to 62 elements.
"""

from itertools import combinations

import numpy as np

from ._accel import USE_NUMBA, njit

INF = 1 << 40
MAX_BITS = 62

# ---------------------------------------------------------------------------
# combination helpers


@njit(cache=True)
def _next_combination(idx, n):
    size = idx.shape[0]
    j = size - 1
    while j >= 0 and idx[j] == n - size + j:
        j -= 1
    if j < 0:
        return False
    idx[j] += 1
    for t in range(j + 1, size):
        idx[t] = idx[t - 1] + 1
    return True


@njit(cache=True)
def _all_distinct(codes, count):
    buf = np.sort(codes[:count])
    for i in range(1, count):
        if buf[i] == buf[i - 1]:
            return False
    return True


def _combo_chunks(n, size, chunk=1 << 16):
    it = combinations(range(n), size)
    while True:
        block = list(_take(it, chunk))
        if not block:
            return
        yield np.asarray(block, dtype=np.int64).reshape(len(block), size)


def _take(it, k):
    for _ in range(k):
        try:
            yield next(it)
        except StopIteration:
            return


def _rows_distinct(codes):
    if codes.shape[1] < 2:
        return np.ones(codes.shape[0], dtype=bool)
    s = np.sort(codes, axis=1)
    return ~(np.diff(s, axis=1) == 0).any(axis=1)


# ---------------------------------------------------------------------------
# locating-dominating sets


@njit(cache=True)
def _first_lds_jit(closed, opened, n, size):
    full = (np.int64(1) << n) - 1
    idx = np.arange(size).astype(np.int64)
    codes = np.empty(max(n, 1), dtype=np.int64)
    while True:
        mask = np.int64(0)
        dom = np.int64(0)
        for j in range(size):
            mask |= np.int64(1) << idx[j]
            dom |= closed[idx[j]]
        if dom == full:
            cnt = 0
            for v in range(n):
                if not (mask >> v) & 1:
                    codes[cnt] = opened[v] & mask
                    cnt += 1
            if _all_distinct(codes, cnt):
                return True, idx
        if size == 0 or not _next_combination(idx, n):
            return False, idx


def _first_lds_np(closed, opened, n, size):
    full = (1 << n) - 1
    verts = np.arange(n, dtype=np.int64)
    for combos in _combo_chunks(n, size):
        bits = np.left_shift(np.int64(1), combos)
        mask = np.bitwise_or.reduce(bits, axis=1) if size else np.zeros(len(combos), np.int64)
        dom = (np.bitwise_or.reduce(closed[combos], axis=1) if size
               else np.zeros(len(combos), np.int64))
        inside = ((mask[:, None] >> verts[None, :]) & 1).astype(bool)
        codes = opened[None, :] & mask[:, None]
        # chosen vertices get unique negative codes so they never collide
        codes = np.where(inside, -(verts[None, :] + 1), codes)
        ok = (dom == full) & _rows_distinct(codes)
        hit = np.flatnonzero(ok)
        if hit.size:
            return combos[hit[0]]
    return None


def smallest_lds(closed, opened):
    """Lexicographically first minimum locating-dominating set.

    ``closed[v]``/``opened[v]`` are the closed/open neighbourhood bitmasks.
    Returns the sorted vertex array.
    """
    closed = np.asarray(closed, dtype=np.int64)
    opened = np.asarray(opened, dtype=np.int64)
    n = len(closed)
    if n > MAX_BITS:
        raise ValueError("bitmask kernels support at most 62 vertices")
    for size in range(n + 1):
        if USE_NUMBA:
            found, res = _first_lds_jit(closed, opened, n, size)
            if found:
                return res.copy()
        else:
            res = _first_lds_np(closed, opened, n, size)
            if res is not None:
                return res
    raise AssertionError("V(G) is always locating-dominating")


# ---------------------------------------------------------------------------
# test covers: items are separated iff their chosen-test signatures differ


@njit(cache=True)
def _first_separating_jit(item_tests, n_tests, size):
    n_items = item_tests.shape[0]
    idx = np.arange(size).astype(np.int64)
    codes = np.empty(max(n_items, 1), dtype=np.int64)
    while True:
        mask = np.int64(0)
        for j in range(size):
            mask |= np.int64(1) << idx[j]
        for i in range(n_items):
            codes[i] = item_tests[i] & mask
        if _all_distinct(codes, n_items):
            return True, idx
        if size == 0 or not _next_combination(idx, n_tests):
            return False, idx


def _first_separating_np(item_tests, n_tests, size):
    for combos in _combo_chunks(n_tests, size):
        if size:
            mask = np.bitwise_or.reduce(np.left_shift(np.int64(1), combos), axis=1)
        else:
            mask = np.zeros(len(combos), np.int64)
        codes = item_tests[None, :] & mask[:, None]
        hit = np.flatnonzero(_rows_distinct(codes))
        if hit.size:
            return combos[hit[0]]
    return None


def smallest_separating_family(item_tests, n_tests):
    """First minimum set of test positions separating every item pair.

    ``item_tests[i]`` is the bitmask of tests containing item ``i``. Returns
    ``None`` when even the whole family fails to separate.
    """
    item_tests = np.asarray(item_tests, dtype=np.int64)
    if n_tests > MAX_BITS:
        raise ValueError("bitmask kernels support at most 62 tests")
    if len(set(item_tests.tolist())) < len(item_tests):
        return None
    for size in range(n_tests + 1):
        if USE_NUMBA:
            found, res = _first_separating_jit(item_tests, n_tests, size)
            if found:
                return res.copy()
        else:
            res = _first_separating_np(item_tests, n_tests, size)
            if res is not None:
                return res
    return None


# ---------------------------------------------------------------------------
# red-blue domination


@njit(cache=True)
def _first_cover_jit(cover, n_blue, size):
    n_red = cover.shape[0]
    full = (np.int64(1) << n_blue) - 1
    idx = np.arange(size).astype(np.int64)
    while True:
        dom = np.int64(0)
        for j in range(size):
            dom |= cover[idx[j]]
        if dom == full:
            return True, idx
        if size == 0 or not _next_combination(idx, n_red):
            return False, idx


def _first_cover_np(cover, n_blue, size):
    full = (1 << n_blue) - 1
    n_red = len(cover)
    for combos in _combo_chunks(n_red, size):
        dom = (np.bitwise_or.reduce(cover[combos], axis=1) if size
               else np.zeros(len(combos), np.int64))
        hit = np.flatnonzero(dom == full)
        if hit.size:
            return combos[hit[0]]
    return None


def smallest_red_cover(cover, n_blue):
    """First minimum set of red positions whose masks cover all blue bits."""
    cover = np.asarray(cover, dtype=np.int64)
    full = (1 << n_blue) - 1
    if n_blue > MAX_BITS or len(cover) > MAX_BITS:
        raise ValueError("bitmask kernels support at most 62 elements")
    if n_blue == 0:
        return np.empty(0, dtype=np.int64)
    if len(cover) == 0 or int(np.bitwise_or.reduce(cover)) != full:
        return None
    for size in range(1, len(cover) + 1):
        if USE_NUMBA:
            found, res = _first_cover_jit(cover, n_blue, size)
            if found:
                return res.copy()
        else:
            res = _first_cover_np(cover, n_blue, size)
            if res is not None:
                return res
    return None


# ---------------------------------------------------------------------------
# tree type DP
#
# Per-vertex state after its subtree is merged (parent still undecided):
#   0..3  vertex outside L; 0: no L-child, 1: exactly one L-child c and the
#         vertex may end up with code {c}, 2: one L-child but code {c} would be
#         illegal, 3: two or more L-children
#   4..7  vertex in L; low two bits = location classes already used by its
#         private (code == {vertex}) children outside L


@njit(cache=True)
def _postorder(indptr, indices, n, root):
    order = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    top = 0
    stack[0] = root
    seen[root] = True
    pos = 0
    while top >= 0:
        u = stack[top]
        top -= 1
        order[pos] = u
        pos += 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                top += 1
                stack[top] = w
    return order[::-1].copy(), parent


@njit(cache=True)
def _tree_dp_min(indptr, indices, n, order, parent, domreq, locmask, forced, ban, bscope):
    val = np.full((n, 8), INF, dtype=np.int64)
    cur = np.empty(8, dtype=np.int64)
    nxt = np.empty(8, dtype=np.int64)
    for pos in range(n):
        u = order[pos]
        for s in range(8):
            cur[s] = INF
        if not forced[u]:
            cur[0] = 0
        cur[4] = 1
        for k in range(indptr[u], indptr[u + 1]):
            c = indices[k]
            if c == parent[u]:
                continue
            for s in range(8):
                nxt[s] = INF
            for su in range(8):
                vu = cur[su]
                if vu >= INF:
                    continue
                for sc in range(8):
                    vc = val[c, sc]
                    if vc >= INF:
                        continue
                    ns = -1
                    if su >= 4:
                        acc = su - 4
                        if sc == 0:
                            if (acc & locmask[c]) == 0 and (ban[u] & bscope[c]) == 0:
                                ns = 4 + (acc | locmask[c])
                        else:
                            ns = su
                    else:
                        if sc < 4:
                            if sc == 0:
                                if not domreq[c]:
                                    ns = su
                            elif sc != 2:
                                ns = su
                        else:
                            if su == 0:
                                cacc = sc - 4
                                if (cacc & locmask[u]) == 0 and (ban[c] & bscope[u]) == 0:
                                    ns = 1
                                else:
                                    ns = 2
                            else:
                                ns = 3
                    if ns >= 0 and vu + vc < nxt[ns]:
                        nxt[ns] = vu + vc
            for s in range(8):
                cur[s] = nxt[s]
        for s in range(8):
            val[u, s] = cur[s]
    root = order[n - 1]
    best = INF
    for s in range(8):
        v = val[root, s]
        if s == 0 and domreq[root]:
            continue
        if s == 2:
            continue
        if v < best:
            best = v
    return best


@njit(cache=True)
def _annotate(n, v1, v2, x, y, domreq, locmask, forced, ban, bscope):
    # levels: 0=A 1=B 2=C 3=D 4=E
    single = v2 < 0
    for w in range(n):
        domreq[w] = True
        forced[w] = False
        ban[w] = 0
        locmask[w] = 1 if single else 3
        b = 0
        if w != v2:
            b |= 1
        if not single and w != v1:
            b |= 2
        bscope[w] = b
    domreq[v1] = x >= 1
    locmask[v1] = 1 if x >= 2 else 0
    forced[v1] = x >= 3
    ban[v1] = 1 if x == 4 else 0
    if not single:
        domreq[v2] = y >= 1
        locmask[v2] = 2 if y >= 2 else 0
        forced[v2] = y >= 3
        ban[v2] = 2 if y == 4 else 0


@njit(cache=True)
def tree_type_table(indptr, indices, n, v1, v2):
    """Minimum type sizes; (5, 5) table, or (5, 1) when ``v2 < 0``."""
    order, parent = _postorder(indptr, indices, n, v1)
    domreq = np.empty(n, dtype=np.bool_)
    forced = np.empty(n, dtype=np.bool_)
    locmask = np.empty(n, dtype=np.int64)
    ban = np.empty(n, dtype=np.int64)
    bscope = np.empty(n, dtype=np.int64)
    ny = 1 if v2 < 0 else 5
    out = np.empty((5, ny), dtype=np.int64)
    for x in range(5):
        for y in range(ny):
            _annotate(n, v1, v2, x, y, domreq, locmask, forced, ban, bscope)
            out[x, y] = _tree_dp_min(indptr, indices, n, order, parent,
                                     domreq, locmask, forced, ban, bscope)
    return out


# ---------------------------------------------------------------------------
# tree type brute force (the oracle for the DP above)


@njit(cache=True)
def _side_ok(level, L, codes, n, v, other):
    # type (level, -) with respect to root v; `other` is ignored entirely
    if level >= 3 and not (L >> v) & 1:
        return False
    buf = np.empty(n, dtype=np.int64)
    cnt = 0
    for w in range(n):
        if w == other:
            continue
        inside = (L >> w) & 1
        if w == v and level == 0:
            continue
        if not inside and codes[w] == 0:
            return False
        if w == v and level == 1:
            continue
        if not inside:
            buf[cnt] = codes[w]
            cnt += 1
            if level == 4 and codes[w] == (np.int64(1) << v):
                return False
    return _all_distinct(buf, cnt)


@njit(cache=True)
def _brute_types_jit(adj, n, v1, v2):
    ny = 1 if v2 < 0 else 5
    out = np.full((5, ny), INF, dtype=np.int64)
    codes = np.empty(n, dtype=np.int64)
    okx = np.empty(5, dtype=np.bool_)
    oky = np.empty(5, dtype=np.bool_)
    for L in range(np.int64(1) << n):
        size = 0
        for w in range(n):
            codes[w] = adj[w] & L
            size += (L >> w) & 1
        for lv in range(5):
            okx[lv] = _side_ok(lv, L, codes, n, v1, v2)
            if v2 >= 0:
                oky[lv] = _side_ok(lv, L, codes, n, v2, v1)
        for x in range(5):
            if not okx[x]:
                continue
            for y in range(ny):
                if v2 >= 0 and not oky[y]:
                    continue
                if size < out[x, y]:
                    out[x, y] = size
    return out


def _brute_types_np(adj, n, v1, v2):
    Ls = np.arange(1 << n, dtype=np.int64)
    verts = np.arange(n, dtype=np.int64)
    inside = ((Ls[:, None] >> verts[None, :]) & 1).astype(bool)
    codes = adj[None, :] & Ls[:, None]
    sizes = inside.sum(axis=1)

    def side(level, v, other):
        keep = np.ones(n, dtype=bool)
        if other >= 0:
            keep[other] = False
        ok = np.ones(len(Ls), dtype=bool)
        if level >= 3:
            ok &= inside[:, v]
        dom_cols = keep.copy()
        if level == 0:
            dom_cols[v] = False
        ok &= (inside[:, dom_cols] | (codes[:, dom_cols] != 0)).all(axis=1)
        loc_cols = keep.copy()
        if level <= 1:
            loc_cols[v] = False
        sub_codes = codes[:, loc_cols]
        sub_in = inside[:, loc_cols]
        # members of L get unique negative sentinels
        sentinel = -(np.arange(sub_codes.shape[1], dtype=np.int64) + 1)
        masked = np.where(sub_in, sentinel[None, :], sub_codes)
        ok &= _rows_distinct(masked)
        if level == 4:
            bad = (~inside[:, keep]) & (codes[:, keep] == (1 << v))
            ok &= ~bad.any(axis=1)
        return ok

    ny = 1 if v2 < 0 else 5
    out = np.full((5, ny), INF, dtype=np.int64)
    for x in range(5):
        okx = side(x, v1, v2)
        for y in range(ny):
            ok = okx if v2 < 0 else okx & side(y, v2, v1)
            if ok.any():
                out[x, y] = sizes[ok].min()
    return out


def brute_type_table(adj, v1, v2=-1):
    """Type minima by enumerating every subset of a tree's vertices."""
    adj = np.asarray(adj, dtype=np.int64)
    n = len(adj)
    if n > 24:
        raise ValueError("brute-force type enumeration is capped at 24 vertices")
    if USE_NUMBA:
        return _brute_types_jit(adj, n, v1, v2)
    return _brute_types_np(adj, n, v1, v2)


__all__ = [
    "INF",
    "MAX_BITS",
    "brute_type_table",
    "smallest_lds",
    "smallest_red_cover",
    "smallest_separating_family",
    "tree_type_table",
]
