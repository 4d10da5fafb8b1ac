"""Complete deterministic automata and word actions.

States are ``0..n-1`` and letters ``0..k-1``. Figures and examples in the
literature usually number states from 1; everything here is 0-indexed.
"""

from __future__ import annotations

import hashlib
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import InvalidWordError, NotSynchronizingError, ValidationError

MAX_STATES = 1 << 16

Word = tuple  # tuple[int, ...]


class Automaton:
    """Immutable complete DFA given by its transition table ``delta[q, a]``."""

    __slots__ = ("_delta", "_hash")

    def __init__(self, table):
        delta = np.array(table, dtype=np.int64)
        if delta.ndim != 2 or delta.shape[0] < 1 or delta.shape[1] < 1:
            raise ValidationError("transition table must be a non-empty n x k grid")
        n = delta.shape[0]
        if n > MAX_STATES:
            raise ValidationError(f"at most {MAX_STATES} states are supported")
        if delta.min() < 0 or delta.max() >= n:
            raise ValidationError("transition target out of range")
        delta.setflags(write=False)
        self._delta = delta
        self._hash = None

    @property
    def delta(self) -> np.ndarray:
        return self._delta

    @property
    def n(self) -> int:
        return self._delta.shape[0]

    @property
    def k(self) -> int:
        return self._delta.shape[1]

    @property
    def states(self) -> frozenset:
        return frozenset(range(self.n))

    def __call__(self, q: int, a: int) -> int:
        return int(self._delta[q, a])

    def __eq__(self, other):
        return isinstance(other, Automaton) and np.array_equal(self._delta, other._delta)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._delta.shape, self._delta.tobytes()))
        return self._hash

    def __repr__(self):
        return f"Automaton(n={self.n}, k={self.k})"

    def table(self) -> list[list[int]]:
        return self._delta.tolist()

    def digest(self) -> str:
        return hashlib.sha256(to_text(self).encode()).hexdigest()[:16]

    def check_word(self, w: Sequence[int]) -> Word:
        w = tuple(int(x) for x in w)
        for x in w:
            if not 0 <= x < self.k:
                raise InvalidWordError(f"letter {x} outside alphabet of size {self.k}")
        return w


def transformation(a: Automaton, w: Sequence[int]) -> np.ndarray:
    """Array ``t`` with ``t[q] = delta(q, w)``."""
    w = a.check_word(w)
    t = np.arange(a.n)
    for x in w:
        t = a.delta[t, x]
    return t


def apply_word(a: Automaton, s: Iterable[int], w: Sequence[int]) -> frozenset:
    s = np.fromiter(s, dtype=np.int64)
    t = transformation(a, w)
    return frozenset(t[s].tolist())


def preimage(a: Automaton, s: Iterable[int], w: Sequence[int]) -> frozenset:
    s = frozenset(s)
    t = transformation(a, w)
    return frozenset(q for q in range(a.n) if int(t[q]) in s)


def rank_of_word(a: Automaton, w: Sequence[int]) -> int:
    return len(np.unique(transformation(a, w)))


def is_reset_word(a: Automaton, w: Sequence[int]) -> bool:
    return rank_of_word(a, w) == 1


def pair_tables(a: Automaton):
    """Shortest pair-merging distances (``-1`` = never) and first letters."""
    return _kernels.pair_tables(a.delta)


def pair_word(a: Automaton, p: int, q: int, tables=None) -> Word:
    """Lexicographically least shortest word merging ``p`` and ``q``."""
    dist, nxt = tables if tables is not None else pair_tables(a)
    if dist[p, q] < 0:
        raise NotSynchronizingError(f"states {p} and {q} cannot be merged", pair=(p, q))
    word = []
    while p != q:
        x = int(nxt[p, q])
        word.append(x)
        p, q = a(p, x), a(q, x)
    return tuple(word)


def incompressible_pair(a: Automaton):
    if a.n == 1:
        return None
    dist, _ = pair_tables(a)
    bad = np.argwhere(dist < 0)
    if bad.size == 0:
        return None
    p, q = bad[0]
    return int(p), int(q)


def is_synchronizing(a: Automaton) -> bool:
    return incompressible_pair(a) is None


def _sccs(a: Automaton) -> list[list[int]]:
    # iterative Tarjan
    n = a.n
    succ = [sorted(set(a.delta[q].tolist())) for q in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack, comps = [], []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                u = succ[v][i]
                if index[u] < 0:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u]:
                    low[v] = min(low[v], index[u])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        u = stack.pop()
                        on_stack[u] = False
                        comp.append(u)
                        if u == v:
                            break
                    comps.append(sorted(comp))
    return comps


def sink_components(a: Automaton) -> list[frozenset]:
    """All strongly connected components with no outgoing transitions."""
    sinks = []
    for comp in _sccs(a):
        members = set(comp)
        if all(int(t) in members for q in comp for t in a.delta[q]):
            sinks.append(frozenset(comp))
    return sorted(sinks, key=min)


def sink_component(a: Automaton) -> tuple[frozenset, bool]:
    """The sink component with the least state, and whether it is unique."""
    sinks = sink_components(a)
    return sinks[0], len(sinks) == 1


def is_strongly_connected(a: Automaton) -> bool:
    return len(_sccs(a)) == 1


def distances_to(a: Automaton, targets: Iterable[int]) -> list[int]:
    """Shortest path length from every state into ``targets`` (-1 if none)."""
    pred = [[] for _ in range(a.n)]
    for q in range(a.n):
        for t in set(a.delta[q].tolist()):
            pred[t].append(q)
    dist = [-1] * a.n
    queue = deque()
    for t in targets:
        dist[t] = 0
        queue.append(t)
    while queue:
        v = queue.popleft()
        for u in pred[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def subautomaton(a: Automaton, states: Iterable[int]) -> tuple[Automaton, list[int]]:
    """Restriction to a closed set of states, relabelled in increasing order."""
    order = sorted(states)
    pos = {q: i for i, q in enumerate(order)}
    try:
        table = [[pos[int(t)] for t in a.delta[q]] for q in order]
    except KeyError:
        raise ValidationError("state set is not closed under the transitions") from None
    return Automaton(table), order


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def to_text(a: Automaton) -> str:
    lines = [f"{a.n} {a.k}"]
    lines += [" ".join(str(int(t)) for t in row) for row in a.delta]
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Automaton:
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise ValidationError("empty automaton file")
    try:
        head = [int(x) for x in rows[0]]
        body = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise ValidationError(f"malformed automaton file: {exc}") from None
    if len(head) != 2:
        raise ValidationError("first line must be 'n k'")
    n, k = head
    if len(body) != n or any(len(r) != k for r in body):
        raise ValidationError(f"expected {n} rows of {k} entries")
    return Automaton(body)


def to_dot(a: Automaton, letter_names: Sequence[str] | None = None) -> str:
    names = letter_names or [f"a{j}" for j in range(a.k)]
    edges: dict[tuple[int, int], list[str]] = {}
    for q in range(a.n):
        for x in range(a.k):
            edges.setdefault((q, int(a.delta[q, x])), []).append(names[x])
    out = ["digraph automaton {", "  rankdir=LR;", "  node [shape=circle];"]
    out += [f"  {q};" for q in range(a.n)]
    for (p, q), labels in sorted(edges.items()):
        out.append(f'  {p} -> {q} [label="{",".join(labels)}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def format_word(w: Sequence[int], pretty: bool = False) -> str:
    if pretty:
        return "".join(f"a{x}" for x in w) or "ε"
    return " ".join(str(x) for x in w)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text or text in ("ε", "-"):
        return ()
    if text.startswith("a"):
        return tuple(int(x) for x in text[1:].split("a"))
    return tuple(int(x) for x in text.split())
