"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package's kernels or linear algebra: sets are
Python frozensets and spans are computed with sympy.
"""

from __future__ import annotations

import itertools
from collections import deque

import sympy


def step(table, s, x):
    return frozenset(table[q][x] for q in s)


def shortest_reset(table, start=None):
    """Lexicographically least shortest word taking ``start`` to a singleton."""
    n, k = len(table), len(table[0])
    s0 = frozenset(range(n) if start is None else start)
    if len(s0) <= 1:
        return ()
    seen = {s0: ()}
    queue = deque([s0])
    while queue:
        s = queue.popleft()
        for x in range(k):
            t = step(table, s, x)
            if t not in seen:
                seen[t] = seen[s] + (x,)
                if len(t) == 1:
                    return seen[t]
                queue.append(t)
    return None


def pair_distance(table, p, q):
    """Length of the shortest word merging ``p`` and ``q`` (None if never)."""
    k = len(table[0])
    start = frozenset((p, q))
    if len(start) == 1:
        return 0
    seen = {start}
    frontier = [start]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for s in frontier:
            for x in range(k):
                t = step(table, s, x)
                if len(t) == 1:
                    return d
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return None


def synchronizing(table):
    n = len(table)
    return all(pair_distance(table, p, q) is not None for p in range(n) for q in range(p + 1, n))


def words(k, d):
    for length in range(d + 1):
        yield from itertools.product(range(k), repeat=length)


def act(table, w):
    t = list(range(len(table)))
    for x in w:
        t = [table[q][x] for q in t]
    return t


def matrix(table, w):
    n = len(table)
    t = act(table, w)
    return sympy.Matrix(n, n, lambda i, j: int(t[i] == j))


def vec_times(table, g, w):
    t = act(table, w)
    out = [sympy.Integer(0)] * len(table)
    for i, x in enumerate(g):
        out[t[i]] += sympy.Rational(x)
    return out


def span_rank(vectors):
    vectors = list(vectors)
    if not vectors:
        return 0
    return sympy.Matrix(vectors).rank()


def same_span(us, vs):
    r = span_rank(us)
    return r == span_rank(vs) == span_rank(list(us) + list(vs))


def stationary(m):
    """All stationary distributions of a rational row-stochastic matrix (basis)."""
    m = sympy.Matrix(m)
    n = m.shape[0]
    return (m.T - sympy.eye(n)).nullspace()


def strongly_connected(table):
    n = len(table)
    def reach(src, fwd=True):
        seen = {src}
        stack = [src]
        while stack:
            v = stack.pop()
            nbrs = table[v] if fwd else [u for u in range(n) if v in table[u]]
            for u in nbrs:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen
    return len(reach(0)) == n and len(reach(0, False)) == n
