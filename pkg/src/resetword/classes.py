"""Quasi-Eulerian and quasi-one-cluster automata: detection and synthesis."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt

from .core import Automaton, apply_word, distances_to, is_strongly_connected, sink_component, subautomaton
from .errors import ClassMismatchError, PreconditionError, SearchExhausted
from .induced import build_induced, induced_markov
from .linalg import markov_matrix, stationary_distribution
from .lp import maximize
from .synthesis import (
    ResetCertificate,
    certify,
    greedy_extension,
    reduce_alpha,
    reduce_general,
    suffix_expansion,
)

CANDIDATE_BUDGET = 10**5


# ---------------------------------------------------------------------------
# quasi-Eulerian
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuasiEulerianWitness:
    c: int
    e_set: frozenset
    s: int
    p: tuple  # letter probabilities
    alpha: tuple


def _column_counts(a: Automaton):
    """``counts[q][x]``: number of states sent to ``q`` by letter ``x``."""
    counts = [[0] * a.k for _ in range(a.n)]
    for p in range(a.n):
        for x in range(a.k):
            counts[int(a.delta[p, x])][x] += 1
    return counts


def _entry_states(a: Automaton, e: frozenset) -> set:
    """States of ``e`` with an incoming edge from outside ``e``."""
    return {int(a.delta[p, x]) for p in range(a.n) if p not in e for x in range(a.k)} & e


def _letter_lp(a: Automaton, counts, targets) -> tuple | None:
    """Positive letter distribution making every column in ``targets`` sum to 1."""
    k = a.k
    # variables: P(0..k-1), t
    c = [0] * k + [1]
    a_ub = []
    for x in range(k):
        row = [0] * (k + 1)
        row[x], row[k] = -1, 1  # t - P(x) <= 0
        a_ub.append(row)
    a_eq = [[1] * k + [0]]
    b_eq = [1]
    for q in targets:
        a_eq.append(list(counts[q]) + [0])
        b_eq.append(1)
    res = maximize(c, a_ub, [0] * k, a_eq, b_eq)
    if res.status != "optimal" or res.value <= 0:
        return None
    return tuple(res.x[:k])


def detect_quasi_eulerian(a: Automaton, c: int, budget: int = CANDIDATE_BUDGET) -> QuasiEulerianWitness | None:
    """First ``E_c`` (lexicographic) passing the entry-state and column-sum tests.

    The returned stationary vector is verified to be constant on ``E_c``.
    """
    if not 0 <= c < max(a.n, 1):
        raise PreconditionError(f"c must lie in [0, n-1] (got {c})")
    counts = _column_counts(a)
    tried = 0
    for e in combinations(range(a.n), a.n - c):
        tried += 1
        if tried > budget:
            raise SearchExhausted(f"candidate budget {budget} exhausted after {tried - 1} sets")
        e = frozenset(e)
        entries = _entry_states(a, e)
        if len(entries) > 1:
            continue
        for s in sorted(entries) if entries else sorted(e):
            p = _letter_lp(a, counts, sorted(e - {s}))
            if p is None:
                continue
            alpha = stationary_distribution(markov_matrix(a, p)).vector
            if len({alpha[q] for q in e}) == 1:
                return QuasiEulerianWitness(c, e, s, p, tuple(alpha))
    return None


def quasi_eulerian_bound(n: int, c: int, d: int) -> int:
    return 2**c * (n - c + 1) * d if c > 0 else 1 + (n - 2) * d


def quasi_eulerian_reset(a: Automaton, c: int) -> ResetCertificate:
    if a.n == 1:
        return certify(a, (), "quasi-eulerian", 0)
    if not is_strongly_connected(a):
        raise PreconditionError("quasi-Eulerian synthesis needs a strongly connected automaton")
    wit = detect_quasi_eulerian(a, c)
    if wit is None:
        raise ClassMismatchError(f"automaton is not quasi-Eulerian for c={c}")
    base = reduce_alpha(a, a.n - 1, wit.alpha)
    if len(base) < a.n:
        raise PreconditionError("Sigma^{<=n-1} is not complete; automaton is not synchronizing")
    d = base.max_length
    ws = suffix_expansion(base, a.k)
    cert = greedy_extension(a, [()], ws, wit.alpha, (), composite=ws)
    return certify(
        a, cert.word, "quasi-eulerian", quasi_eulerian_bound(a.n, c, d), cert.steps,
        c=c, d=d, e_set=tuple(sorted(wit.e_set)), p=wit.p, ds=cert.details["ds"],
        extension_bound=cert.bound_value,
    )


# ---------------------------------------------------------------------------
# quasi-one-cluster
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cluster:
    cycle: tuple  # starts at the least cycle state, follows the letter
    heights: dict  # state -> distance to the cycle

    @property
    def height(self) -> int:
        return max(self.heights.values())


@dataclass(frozen=True)
class ClusterStructure:
    letter: int
    clusters: tuple
    chosen: int  # index of the cluster with the largest cycle

    @property
    def largest_cycle(self) -> tuple:
        return self.clusters[self.chosen].cycle

    @property
    def h(self) -> int:
        return max(c.height for c in self.clusters)

    @property
    def other_cycle_states(self) -> int:
        return sum(len(c.cycle) for i, c in enumerate(self.clusters) if i != self.chosen)

    @property
    def cycle_states(self) -> frozenset:
        return frozenset(q for c in self.clusters for q in c.cycle)


def letter_clusters(a: Automaton, letter: int) -> ClusterStructure:
    f = [int(t) for t in a.delta[:, letter]]
    n = a.n
    on_cycle = [False] * n
    color = [0] * n  # 0 new, 1 on stack, 2 done
    for q in range(n):
        path = []
        p = q
        while color[p] == 0:
            color[p] = 1
            path.append(p)
            p = f[p]
        if color[p] == 1:
            for x in path[path.index(p):]:
                on_cycle[x] = True
        for x in path:
            color[x] = 2
    height = [0 if on_cycle[q] else -1 for q in range(n)]
    root = [q if on_cycle[q] else -1 for q in range(n)]
    for q in range(n):
        path = []
        p = q
        while height[p] < 0:
            path.append(p)
            p = f[p]
        for x in reversed(path):
            height[x] = height[f[x]] + 1
            root[x] = root[f[x]]
    # identify cycles by least member
    cycle_id = {}
    for q in range(n):
        if on_cycle[q] and q not in cycle_id:
            cyc = [q]
            p = f[q]
            while p != q:
                cyc.append(p)
                p = f[p]
            for x in cyc:
                cycle_id[x] = q
    members = {}
    for q in range(n):
        members.setdefault(cycle_id[root[q]], []).append(q)
    clusters = []
    for lead in sorted(members):
        cyc = [lead]
        p = f[lead]
        while p != lead:
            cyc.append(p)
            p = f[p]
        clusters.append(Cluster(tuple(cyc), {q: height[q] for q in members[lead]}))
    chosen = max(range(len(clusters)), key=lambda i: (len(clusters[i].cycle), -i))
    return ClusterStructure(letter, tuple(clusters), chosen)


def best_cluster_letter(a: Automaton) -> ClusterStructure:
    """The letter with the fewest cycle states outside its largest cluster."""
    return min((letter_clusters(a, x) for x in range(a.k)), key=lambda s: (s.other_cycle_states, s.letter))


def _is_prime(m: int) -> bool:
    return m >= 2 and all(m % p for p in range(2, isqrt(m) + 1))


def cycle_rank_bound(cycle_length: int) -> int:
    """Lower bound on the dimension of ``<W1 beta>``: exact for prime lengths, else 2."""
    return cycle_length if _is_prime(cycle_length) else 2


def quasi_one_cluster_bound(n: int, c: int, r: int) -> int:
    return 2**c * (2 * n - c) * (n - c + 1) if c > 0 else 1 + (2 * n - r) * (n - 2)


def _strongly_connected_cluster_word(a: Automaton, st: ClusterStructure):
    n, x = a.n, st.letter
    cyc = st.largest_cycle
    h = st.h
    c_eff = st.other_cycle_states
    w0 = (x,) * h
    if len(st.cycle_states) == 1:
        return w0, {"h": h, "cycle": len(cyc), "c": c_eff, "r": cycle_rank_bound(len(cyc))}
    w1 = [(x,) * (h + i) for i in range(len(cyc))]
    r = cycle_rank_bound(len(cyc))
    d2 = max(n - r + 1, 0) if c_eff == 0 else n - 1
    w2 = reduce_general(a, d2)
    b = build_induced(a, w1, w2)
    beta_r = stationary_distribution(induced_markov(b)).vector
    beta = [Fraction(0)] * n
    for q, v in zip(b.r_states, beta_r):
        beta[q] = v
    cert = greedy_extension(a, w1, w2, beta, w0)
    return cert.word, {
        "h": h, "cycle": len(cyc), "c": c_eff, "r": r, "d2": d2,
        "steps": cert.steps, "ds": cert.details["ds"], "extension_bound": cert.bound_value,
    }


def _into_set(a: Automaton, target) -> tuple:
    """A word mapping every state into the closed set ``target``."""
    target = frozenset(target)
    cur = frozenset(range(a.n))
    word = ()
    while not cur <= target:
        dist = distances_to(a, target)
        q = min(cur - target)
        path = ()
        p = q
        while p not in target:
            x = next(x for x in range(a.k) if dist[int(a.delta[p, x])] == dist[p] - 1)
            path += (x,)
            p = int(a.delta[p, x])
        word += path
        cur = apply_word(a, cur, path)
    return word


def quasi_one_cluster_reset(a: Automaton, c: int) -> ResetCertificate:
    """Reset word from the cluster structure of the best letter.

    Inputs that are not strongly connected are first mapped into the sink
    component, which is then handled on its own.
    """
    if c < 0:
        raise PreconditionError("c must be non-negative")
    if a.n == 1:
        return certify(a, (), "quasi-one-cluster", 0)
    st = best_cluster_letter(a)
    if st.other_cycle_states > c:
        raise ClassMismatchError(
            f"every letter has more than c={c} cycle states outside its largest cluster"
        )
    c_eff = st.other_cycle_states
    r = cycle_rank_bound(len(st.largest_cycle))
    bound = quasi_one_cluster_bound(a.n, c_eff, r)
    if is_strongly_connected(a):
        word, info = _strongly_connected_cluster_word(a, st)
        steps = info.pop("steps", ())
    else:
        sink, unique = sink_component(a)
        if not unique:
            raise PreconditionError("automaton is not synchronizing (several sink components)")
        sub, order = subautomaton(a, sink)
        prefix = _into_set(a, sink)
        inner, info = _strongly_connected_cluster_word(sub, best_cluster_letter(sub))
        steps = (prefix, inner)
        info.pop("steps", None)
        word = prefix + inner
        info["sink"] = len(sink)
    return certify(a, word, "quasi-one-cluster", bound, steps, **info, bound_c=c_eff, bound_r=r)
