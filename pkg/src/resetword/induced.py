"""Induced automata on composite letters and the completeness machinery."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import Automaton, is_strongly_connected, transformation
from .errors import CriterionViolated, PreconditionError, ValidationError
from .linalg import (
    SpanBasis,
    markov_matrix,
    push,
    stationary_distribution,
)


def word_key(w: Sequence[int]):
    return (len(w), tuple(w))


@dataclass(frozen=True)
class WordSet:
    """A non-empty finite set of words, optionally with a positive distribution.

    Iteration follows (length, lexicographic) order.
    """

    words: tuple
    dist: Mapping | None = field(default=None, compare=False)

    def __post_init__(self):
        words = tuple(sorted({tuple(int(x) for x in w) for w in self.words}, key=word_key))
        if not words:
            raise ValidationError("word set must be non-empty")
        object.__setattr__(self, "words", words)
        if self.dist is not None:
            dist = {tuple(w): Fraction(p) for w, p in self.dist.items()}
            if set(dist) != set(words):
                raise ValidationError("distribution must cover exactly the words")
            if any(p <= 0 for p in dist.values()) or sum(dist.values()) != 1:
                raise ValidationError("word distribution must be positive and sum to 1")
            object.__setattr__(self, "dist", dist)

    @classmethod
    def of(cls, words: Iterable) -> "WordSet":
        return words if isinstance(words, WordSet) else cls(tuple(words))

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)

    def __contains__(self, w):
        return tuple(w) in set(self.words)

    @property
    def max_length(self) -> int:
        return max(len(w) for w in self.words)

    def probability(self, w) -> Fraction:
        if self.dist is None:
            return Fraction(1, len(self.words))
        return self.dist[tuple(w)]


def image_of(a: Automaton, words: Iterable) -> frozenset:
    """``Q.W``: union of the images of all states under the words."""
    out = set()
    for w in words:
        out.update(transformation(a, w).tolist())
    return frozenset(out)


def composite_words(a: Automaton, w1: Iterable, w2: Iterable, r_states: Iterable[int] | None = None) -> list:
    """``W2 W1`` ordered by (|w2|, w2, |w1|, w1), deduplicated by action on R."""
    w1, w2 = WordSet.of(w1), WordSet.of(w2)
    r = sorted(image_of(a, w1) if r_states is None else r_states)
    seen, out = set(), []
    for u in w2:
        for v in w1:
            w = u + v
            act = tuple(transformation(a, w)[r].tolist())
            if act not in seen:
                seen.add(act)
                out.append(w)
    return out


@dataclass(frozen=True)
class InducedAutomaton:
    base: Automaton
    w1: WordSet
    w2: WordSet
    r_states: tuple
    letters: tuple
    table: tuple  # table[i][j]: index in r_states of r_states[i] under letters[j]

    @property
    def r(self) -> int:
        return len(self.r_states)

    def as_automaton(self) -> Automaton:
        return Automaton([list(row) for row in self.table])

    def expand(self, word: Sequence[int]) -> tuple:
        return tuple(x for j in word for x in self.letters[j])


def build_induced(a: Automaton, w1: Iterable, w2: Iterable) -> InducedAutomaton:
    w1, w2 = WordSet.of(w1), WordSet.of(w2)
    for w in list(w1) + list(w2):
        a.check_word(w)
    r = tuple(sorted(image_of(a, w1)))
    pos = {q: i for i, q in enumerate(r)}
    letters = composite_words(a, w1, w2, r)
    table = []
    for q in r:
        row = []
        for w in letters:
            t = int(transformation(a, w)[q])
            if t not in pos:
                raise ValidationError("composite letter leaves R")
            row.append(pos[t])
        table.append(tuple(row))
    return InducedAutomaton(a, w1, w2, r, tuple(letters), tuple(table))


def weighted_matrix(a: Automaton, ws: WordSet) -> np.ndarray:
    """``[P] = sum_w P(w) [w]`` as an object array of Fractions."""
    m = np.full((a.n, a.n), Fraction(0), dtype=object)
    for w in ws:
        t = transformation(a, w)
        p = ws.probability(w)
        for i in range(a.n):
            m[i, t[i]] += p
    return m


def induced_product(a: Automaton, w1: Iterable, w2: Iterable) -> tuple:
    """The full ``n x n`` matrix ``[P2][P1]``."""
    m = weighted_matrix(a, WordSet.of(w2)).dot(weighted_matrix(a, WordSet.of(w1)))
    return tuple(tuple(Fraction(x) for x in row) for row in m)


def induced_markov(b: InducedAutomaton, p1: Mapping | None = None, p2: Mapping | None = None) -> tuple:
    """Transition matrix of the chain on R for word distributions ``p1``, ``p2``."""
    w1 = WordSet(b.w1.words, p1) if p1 is not None else b.w1
    w2 = WordSet(b.w2.words, p2) if p2 is not None else b.w2
    full = induced_product(b.base, w1, w2)
    return tuple(tuple(full[i][j] for j in b.r_states) for i in b.r_states)


def is_complete(a: Automaton, ws: Iterable, alpha: Sequence, states: Iterable[int]) -> bool:
    """Whether ``<alpha [w] : w in ws>`` equals the coordinate subspace ``V_states``."""
    states = set(states)
    basis = SpanBasis(a.n)
    for w in WordSet.of(ws):
        v = push(a, alpha, w)
        if any(v[i] for i in range(a.n) if i not in states):
            return False
        basis.add(v)
        if len(basis) == len(states):
            return True
    return len(basis) == len(states)


def find_extension_word(a: Automaton, x: Sequence, alpha: Sequence, ws: Iterable, r_states: Iterable[int] | None = None):
    """First ``w`` in ``ws`` with ``(x, alpha [w]) > (x, alpha)``.

    ``x`` must lie in ``V_R`` outside the line through ``[R]``.
    """
    r = sorted(range(a.n) if r_states is None else r_states)
    x = [Fraction(v) for v in x]
    alpha = [Fraction(v) for v in alpha]
    base = sum((ai * xi for ai, xi in zip(alpha, x)), Fraction(0))
    if any(x[i] for i in range(a.n) if i not in set(r)):
        raise PreconditionError("x must be supported on R")
    if len({x[q] for q in r}) == 1:
        raise PreconditionError("x lies on the line through [R]; no extension exists")
    support = [i for i in range(a.n) if alpha[i]]
    for w in ws:
        t = transformation(a, w)
        val = sum((alpha[i] * x[int(t[i])] for i in support), Fraction(0))
        if val > base:
            return tuple(w)
    raise CriterionViolated("no word strictly increases (x, alpha)")


def criterion_synchronizing(a: Automaton, p=None) -> bool:
    """Synchronization via completeness of ``Sigma^{<=n-1}`` for the chain's alpha."""
    from .synthesis import reduce_alpha

    if not is_strongly_connected(a):
        raise PreconditionError("criterion requires a strongly connected automaton")
    if a.n == 1:
        return True
    alpha = stationary_distribution(markov_matrix(a, p)).vector
    w = reduce_alpha(a, a.n - 1, alpha)
    return is_complete(a, w, alpha, range(a.n))
