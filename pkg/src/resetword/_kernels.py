"""Hot loops: subset-lattice BFS and pair-graph distances.

Two interchangeable backends produce identical results. The numba backend
is used when numba imports and ``RESETWORD_NUMBA`` is not set to ``0``;
otherwise a level-synchronous pure-numpy backend runs. Both discover
states in the same order, so witnesses and tie-breaks agree bit for bit.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def numba_enabled():
    flag = os.environ.get("RESETWORD_NUMBA", "1").strip().lower()
    return HAVE_NUMBA and flag not in ("0", "false", "no", "off")


def backend_name():
    return "numba" if numba_enabled() else "numpy"


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------


def _images_np(delta, masks, letter):
    n = delta.shape[0]
    out = np.zeros_like(masks)
    for i in range(n):
        out |= ((masks >> i) & 1) << np.int64(delta[i, letter])
    return out


def subset_bfs_np(delta, start):
    """Shortest word taking ``start`` (a bitmask) to a singleton.

    Returns ``(found, word)``; ``word`` is an int array of letters.
    """
    n, k = delta.shape
    if start & (start - 1) == 0:
        return True, np.zeros(0, np.int64)
    size = 1 << n
    parent = np.full(size, -1, np.int64)
    via = np.zeros(size, np.int8)
    parent[start] = start
    frontier = np.array([start], np.int64)
    hit = -1
    while frontier.size and hit < 0:
        cand = np.empty((frontier.size, k), np.int64)
        for a in range(k):
            cand[:, a] = _images_np(delta, frontier, a)
        flat = cand.ravel()
        src = np.repeat(frontier, k)
        letters = np.tile(np.arange(k, dtype=np.int8), frontier.size)
        fresh = parent[flat] < 0
        flat, src, letters = flat[fresh], src[fresh], letters[fresh]
        _, first = np.unique(flat, return_index=True)
        first.sort()
        flat, src, letters = flat[first], src[first], letters[first]
        parent[flat] = src
        via[flat] = letters
        single = np.flatnonzero((flat & (flat - 1)) == 0)
        if single.size:
            hit = int(flat[single[0]])
        frontier = flat
    if hit < 0:
        return False, np.zeros(0, np.int64)
    word = []
    m = hit
    while m != start:
        word.append(int(via[m]))
        m = int(parent[m])
    return True, np.array(word[::-1], np.int64)


def pair_tables_np(delta):
    """Pair-graph distances to the diagonal and first letters of shortest words.

    ``dist[p, q]`` is the length of a shortest word merging ``p`` and ``q``
    (``-1`` if none) and ``nxt[p, q]`` the least letter starting one.
    """
    n, k = delta.shape
    dist = np.full((n, n), -1, np.int64)
    nxt = np.full((n, n), -1, np.int64)
    np.fill_diagonal(dist, 0)
    p_idx, q_idx = np.triu_indices(n, 1)
    level = 0
    while p_idx.size:
        level += 1
        d = dist[delta[p_idx, :], delta[q_idx, :]]
        hit = d == level - 1
        got = hit.any(axis=1)
        if not got.any():
            break
        letters = hit.argmax(axis=1)
        gp, gq, gl = p_idx[got], q_idx[got], letters[got]
        dist[gp, gq] = dist[gq, gp] = level
        nxt[gp, gq] = nxt[gq, gp] = gl
        p_idx, q_idx = p_idx[~got], q_idx[~got]
    return dist, nxt


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _subset_bfs_nb(delta, start):
        n, k = delta.shape
        if start & (start - 1) == 0:
            return True, np.zeros(0, np.int64)
        size = 1 << n
        parent = np.full(size, -1, np.int64)
        via = np.zeros(size, np.int8)
        queue = np.empty(size, np.int64)
        parent[start] = start
        queue[0] = start
        head = 0
        tail = 1
        hit = -1
        while head < tail and hit < 0:
            m = queue[head]
            head += 1
            for a in range(k):
                img = np.int64(0)
                for i in range(n):
                    if (m >> i) & 1:
                        img |= np.int64(1) << delta[i, a]
                if parent[img] < 0:
                    parent[img] = m
                    via[img] = a
                    queue[tail] = img
                    tail += 1
                    if img & (img - 1) == 0:
                        hit = img
                        break
        if hit < 0:
            return False, np.zeros(0, np.int64)
        length = 0
        m = hit
        while m != start:
            length += 1
            m = parent[m]
        word = np.empty(length, np.int64)
        m = hit
        for j in range(length - 1, -1, -1):
            word[j] = via[m]
            m = parent[m]
        return True, word

    @njit(cache=True)
    def _pair_tables_nb(delta):
        n, k = delta.shape
        dist = np.full((n, n), -1, np.int64)
        nxt = np.full((n, n), -1, np.int64)
        for i in range(n):
            dist[i, i] = 0
        remaining = n * (n - 1) // 2
        level = 0
        while remaining > 0:
            level += 1
            found = 0
            for p in range(n):
                for q in range(p + 1, n):
                    if dist[p, q] != -1:
                        continue
                    for a in range(k):
                        if dist[delta[p, a], delta[q, a]] == level - 1:
                            found += 1
                            dist[p, q] = level
                            dist[q, p] = level
                            nxt[p, q] = a
                            nxt[q, p] = a
                            break
            if found == 0:
                break
            remaining -= found
        return dist, nxt


def subset_bfs(delta, start):
    delta = np.ascontiguousarray(delta, dtype=np.int64)
    if int(start) & (int(start) - 1) == 0:
        return True, np.zeros(0, np.int64)
    if numba_enabled():
        return _subset_bfs_nb(delta, np.int64(start))
    return subset_bfs_np(delta, int(start))


def pair_tables(delta):
    delta = np.ascontiguousarray(delta, dtype=np.int64)
    if numba_enabled():
        return _pair_tables_nb(delta)
    return pair_tables_np(delta)
