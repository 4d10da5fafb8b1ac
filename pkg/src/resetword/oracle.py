"""Brute-force ground truth: shortest reset words, pair thresholds, spans."""

from __future__ import annotations

import itertools
import os
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .core import Automaton, pair_tables, transformation
from .errors import CapExceeded
from .linalg import SpanBasis, push

MAX_ORACLE_STATES = 24
MAX_SPAN_WORDS = 10**6
# bytes per subset-lattice node used by the BFS (parent, letter, queue)
_BYTES_PER_NODE = 17


def memory_budget_mb() -> int:
    return int(os.environ.get("RESETWORD_MEMORY_MB", "2048"))


class Threshold(NamedTuple):
    length: float  # math.inf when no reset word exists
    word: tuple | None


def exact_reset_threshold(a: Automaton, start: Sequence[int] | None = None) -> Threshold:
    """Shortest word taking ``start`` (default: all states) to a singleton.

    The witness is the lexicographically least among the shortest words.
    """
    if a.n > MAX_ORACLE_STATES:
        raise CapExceeded(f"oracle limited to n <= {MAX_ORACLE_STATES} (got {a.n})")
    need = (_BYTES_PER_NODE << a.n) / 2**20
    if need > memory_budget_mb():
        raise CapExceeded(f"subset BFS needs about {need:.0f} MB, budget {memory_budget_mb()} MB")
    states = range(a.n) if start is None else start
    mask = 0
    for q in states:
        mask |= 1 << int(q)
    found, word = _kernels.subset_bfs(a.delta, mask)
    if not found:
        return Threshold(float("inf"), None)
    word = tuple(int(x) for x in word)
    return Threshold(len(word), word)


class PairThreshold(NamedTuple):
    length: float  # max over pairs; math.inf if some pair never merges
    dist: np.ndarray


def exact_pair_threshold(a: Automaton) -> PairThreshold:
    dist, _ = pair_tables(a)
    if a.n == 1:
        return PairThreshold(0, dist)
    if (dist < 0).any():
        return PairThreshold(float("inf"), dist)
    return PairThreshold(int(dist.max()), dist)


def all_words(k: int, d: int):
    """``Sigma^{<=d}`` in (length, lexicographic) order."""
    for length in range(d + 1):
        yield from itertools.product(range(k), repeat=length)


def _check_budget(k: int, d: int):
    total = sum(k**i for i in range(d + 1))
    if total > MAX_SPAN_WORDS:
        raise CapExceeded(f"{total} words exceed the brute-force budget of {MAX_SPAN_WORDS}")


def brute_span(a: Automaton, alpha: Sequence, d: int) -> list[tuple]:
    """Basis of ``<alpha [w] : |w| <= d>`` from every word."""
    _check_budget(a.k, d)
    basis = SpanBasis(a.n)
    for w in all_words(a.k, d):
        basis.add(push(a, alpha, w))
    return basis.vectors()


def flat_matrix(a: Automaton, w) -> tuple:
    t = transformation(a, w)
    v = [0] * (a.n * a.n)
    for i in range(a.n):
        v[i * a.n + int(t[i])] = 1
    return tuple(v)


def brute_matrix_span(a: Automaton, d: int, words=None) -> list[tuple]:
    """Basis of the span of flattened ``[w]`` over ``Sigma^{<=d}`` (or ``words``)."""
    if words is None:
        _check_budget(a.k, d)
        words = all_words(a.k, d)
    basis = SpanBasis(a.n * a.n)
    for w in words:
        basis.add(flat_matrix(a, w))
    return basis.vectors()
