"""Prefix codes, their decoders, decoder reset words and automaton generators."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from fractions import Fraction

import numpy as np

from .core import Automaton, is_synchronizing, rank_of_word
from .errors import NotSynchronizingError, ValidationError
from .synthesis import ResetCertificate, certify, small_rank_pipeline


# ---------------------------------------------------------------------------
# prefix codes and decoders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefixCode:
    """A maximal prefix code over ``{0, ..., k-1}``; words are kept in lex order."""

    k: int
    words: tuple

    def __post_init__(self):
        if self.k < 2:
            raise ValidationError("alphabet size must be at least 2")
        words = tuple(sorted({tuple(int(x) for x in w) for w in self.words}))
        if not words:
            raise ValidationError("code must be non-empty")
        for w in words:
            if not w:
                raise ValidationError("codewords must be non-empty")
            if any(not 0 <= x < self.k for x in w):
                raise ValidationError(f"codeword {_digits(w)} uses a letter outside 0..{self.k - 1}")
        # in lex order a prefix sorts immediately before some extension of it
        for u, v in zip(words, words[1:]):
            if v[: len(u)] == u:
                raise ValidationError(f"{_digits(u)} is a prefix of {_digits(v)}")
        kraft = sum(Fraction(1, self.k ** len(w)) for w in words)
        if kraft != 1:
            raise ValidationError(f"code is not maximal (Kraft sum {kraft})")
        object.__setattr__(self, "words", words)

    @property
    def size(self) -> int:
        return len(self.words)

    def to_text(self) -> str:
        if self.k > 10:
            raise ValidationError("the text format uses single digits (k <= 10)")
        return f"{self.k}\n" + "".join(_digits(w) + "\n" for w in self.words)

    @classmethod
    def from_text(cls, text: str) -> "PrefixCode":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValidationError("empty code file")
        try:
            k = int(lines[0])
            words = [tuple(int(ch) for ch in ln) for ln in lines[1:]]
        except ValueError as exc:
            raise ValidationError(f"malformed code file: {exc}") from None
        return cls(k, tuple(words))


def _digits(w) -> str:
    return "".join(str(x) for x in w)


@dataclass(frozen=True)
class Decoder:
    automaton: Automaton
    labels: tuple  # proper prefix of each state
    root: int = 0

    @property
    def n(self) -> int:
        return self.automaton.n

    @property
    def k(self) -> int:
        return self.automaton.k

    @property
    def height(self) -> int:
        return max(len(v) for v in self.labels)

    def code(self) -> PrefixCode:
        words = []
        for q, v in enumerate(self.labels):
            for x in range(self.k):
                if int(self.automaton.delta[q, x]) == self.root:
                    words.append(v + (x,))
        return PrefixCode(self.k, tuple(words))

    def labels_text(self) -> str:
        """Label sidecar: one ``state prefix`` line per state; the root's prefix is ``-``."""
        return "".join(f"{q} {_digits(v) or '-'}\n" for q, v in enumerate(self.labels))


def decoder_from_code(t: PrefixCode) -> Decoder:
    """States are the proper prefixes in (length, lex) order; the root is state 0."""
    prefixes = {w[:i] for w in t.words for i in range(len(w))}
    labels = tuple(sorted(prefixes, key=lambda v: (len(v), v)))
    index = {v: i for i, v in enumerate(labels)}
    table = [[index.get(v + (x,), 0) for x in range(t.k)] for v in labels]
    return Decoder(Automaton(table), labels, 0)


def as_decoder(a: Automaton) -> Decoder | None:
    """Recognise a decoder: edges avoiding some root form a spanning tree at it."""
    if a.k < 2:
        return None
    for r in range(a.n):
        parent = [-1] * a.n
        ok = True
        for p in range(a.n):
            for x in range(a.k):
                t = int(a.delta[p, x])
                if t == r:
                    continue
                if parent[t] != -1:
                    ok = False
                    break
                parent[t] = (p, x)
            if not ok:
                break
        if not ok:
            continue
        labels = [None] * a.n
        labels[r] = ()
        stack = [r]
        while stack:
            p = stack.pop()
            for x in range(a.k):
                t = int(a.delta[p, x])
                if t != r and labels[t] is None:
                    labels[t] = labels[p] + (x,)
                    stack.append(t)
        if all(v is not None for v in labels):
            return Decoder(a, tuple(labels), r)
    return None


def log_rank(n: int, k: int) -> int:
    """Least ``r`` with ``k**r >= n``."""
    r = 0
    while k**r < n:
        r += 1
    return r


def _misses_root(d: Decoder, w) -> bool:
    """Whether some state never passes through the root while reading ``w``."""
    delta = d.automaton.delta
    for q in range(d.n):
        p = q
        for x in w:
            p = int(delta[p, x])
            if p == d.root:
                break
        else:
            return True
    return False


def small_rank_word(d: Decoder) -> tuple:
    """First word, by length then lex, along which every state visits the root."""
    if d.n == 1:
        return ()
    for length in range(1, log_rank(d.n, d.k) + 1):
        for w in product(range(d.k), repeat=length):
            if not _misses_root(d, w):
                return w
    raise AssertionError("no short word of small rank; input is not a decoder")


def decoder_bound(n: int, k: int) -> int:
    r = log_rank(n, k)
    if r >= 4:
        return 2 + (r + n - 1) * ((r**3 - r) // 6 - 1)
    return 2 + (r + n - 1) * (r - 1) ** 2


def decoder_pair_bound(n: int, k: int) -> int:
    r = log_rank(n, k)
    return r + (r + n - 1) * (r * r - r) // 2


def decoder_reset(d: Decoder) -> ResetCertificate:
    a = d.automaton
    if d.n == 1:
        return certify(a, (), "decoder", decoder_bound(1, d.k))
    if not is_synchronizing(a):
        raise NotSynchronizingError("decoder is not synchronizing")
    w = small_rank_word(d)
    cert = small_rank_pipeline(a, w, refine=True)
    return certify(
        a, cert.word, "decoder", decoder_bound(d.n, d.k), cert.steps,
        r=log_rank(d.n, d.k), rank=rank_of_word(a, w), w=w, d=cert.details.get("d", 0),
        pair_bound=decoder_pair_bound(d.n, d.k),
    )


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def gen_cerny(n: int) -> Automaton:
    """Letter 0 rotates the states; letter 1 moves only the last state, onto 0."""
    if n < 2:
        raise ValidationError("the Cerny automaton needs n >= 2")
    return Automaton([[(i + 1) % n, i if i < n - 1 else 0] for i in range(n)])


def _xnk_check(n: int, k: int):
    if k < 3 or n < k + 2:
        raise ValidationError("X_{n,k} needs k >= 3 and n >= k + 2")


def gen_xnk(n: int, k: int) -> Automaton:
    """The long-threshold k-ary decoder: a_1-spine with a fan of k letters every other level.

    State ``(k+1)i`` fans out to ``(k+1)i + j`` by ``a_j``; the spine continues
    from ``(k+1)i + 1`` and then runs ``(k+1)l -> ... -> n-1``. Letter ``a_j``
    is index ``j - 1``.
    """
    _xnk_check(n, k)
    ell = -(-n // (k + 1)) - 1
    table = [[0] * k for _ in range(n)]
    for i in range(ell):
        base = (k + 1) * i
        for j in range(1, k + 1):
            table[base][j - 1] = base + j
        table[base + 1][0] = (k + 1) * (i + 1)
    for i in range((k + 1) * ell, n - 1):
        table[i][0] = i + 1
    return Automaton(table)


def gen_xnk_literal(n: int, k: int) -> Automaton:
    """Variant with the fan rooted at ``(k+1)i + 1`` instead of ``(k+1)i``."""
    _xnk_check(n, k)
    ell = -(-n // (k + 1)) - 1
    table = [[0] * k for _ in range(n)]
    for i in range(ell):
        for j in range(1, k + 1):
            if (k + 1) * i + j <= n - 1:
                table[(k + 1) * i + 1][j - 1] = (k + 1) * i + j
    for i in range((k + 1) * ell, n - 1):
        table[i][0] = i + 1
    return Automaton(table)


def xnk_reset_word(n: int, k: int) -> tuple:
    ell = -(-n // (k + 1)) - 1
    return (k - 1,) + (0,) * (2 * ell) + (k - 1,)


def _rng(seed):
    # anything exposing ``integers`` (a Generator or a scripted stand-in) is used as is
    return seed if hasattr(seed, "integers") else np.random.default_rng(seed)


def gen_random_dfa(n: int, k: int, seed=None) -> Automaton:
    if n < 1 or k < 1:
        raise ValidationError("n and k must be positive")
    return Automaton(_rng(seed).integers(0, n, size=(n, k)))


def random_code_tree(n: int, seed=None) -> list:
    """Leaf paths of a uniformly random full binary tree with ``n`` internal nodes.

    Uses Remy's growth: pick a uniform node and a side, splice a new internal
    node above it with a fresh leaf on that side.
    """
    if n < 1:
        raise ValidationError("need at least one internal node")
    rng = _rng(seed)
    left, right, parent = [-1], [-1], [-1]
    root = 0
    for _ in range(n):
        node = int(rng.integers(len(left)))
        side = int(rng.integers(2))
        inner, leaf = len(left), len(left) + 1
        left += [-1, -1]
        right += [-1, -1]
        parent += [-1, inner]
        up = parent[node]
        if side == 0:
            left[inner], right[inner] = leaf, node
        else:
            left[inner], right[inner] = node, leaf
        parent[node] = inner
        parent[inner] = up
        if up == -1:
            root = inner
        elif left[up] == node:
            left[up] = inner
        else:
            right[up] = inner
    words = []
    stack = [(root, ())]
    while stack:
        v, path = stack.pop()
        if left[v] == -1:
            words.append(path)
        else:
            stack.append((left[v], path + (0,)))
            stack.append((right[v], path + (1,)))
    return sorted(words)


def gen_random_decoder(n: int, seed=None) -> Decoder:
    """Decoder of a uniformly random binary code tree with ``n`` internal nodes (``n`` states)."""
    return decoder_from_code(PrefixCode(2, tuple(random_code_tree(n, seed))))


def gen_eulerian(n: int, k: int, seed=None) -> Automaton:
    """Random automaton in which every state has in-degree exactly ``k``."""
    if n < 1 or k < 1:
        raise ValidationError("n and k must be positive")
    targets = np.repeat(np.arange(n), k)
    _rng(seed).shuffle(targets)
    return Automaton(targets.reshape(n, k))


def is_eulerian(a: Automaton) -> bool:
    return bool((np.bincount(a.delta.ravel(), minlength=a.n) == a.k).all())
