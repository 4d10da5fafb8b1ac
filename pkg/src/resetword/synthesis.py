"""Reset-word synthesis with per-run length certificates.

Every certificate is re-verified against the automaton before it is
returned: the word must have rank 1 and respect the claimed bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

from .core import (
    Automaton,
    apply_word,
    distances_to,
    is_strongly_connected,
    is_synchronizing,
    pair_tables,
    pair_word,
    preimage,
    rank_of_word,
    sink_component,
    subautomaton,
    transformation,
)
from .errors import (
    CapExceeded,
    CertificateError,
    CriterionViolated,
    NotPrimitiveError,
    NotSynchronizingError,
    PreconditionError,
    SearchExhausted,
    ValidationError,
)
from .induced import (
    InducedAutomaton,
    WordSet,
    build_induced,
    composite_words,
    image_of,
    induced_product,
    word_key,
)
from .linalg import (
    SpanBasis,
    determinant,
    ds_count,
    is_primitive,
    markov_matrix,
    push,
    stationary_distribution,
)
from .oracle import MAX_ORACLE_STATES, exact_reset_threshold, flat_matrix


@dataclass(frozen=True)
class ResetCertificate:
    word: tuple
    bound_name: str
    bound_value: int
    steps: tuple = ()
    details: Mapping = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.word)

    def to_record(self, a: Automaton) -> dict:
        return {
            "automaton": a.digest(),
            "word": list(self.word),
            "length": len(self.word),
            "bound": self.bound_name,
            "bound_value": self.bound_value,
            "steps": [list(s) for s in self.steps],
        }


def certify(a: Automaton, word, bound_name: str, bound_value: int, steps=(), **details) -> ResetCertificate:
    word = a.check_word(word)
    if rank_of_word(a, word) != 1:
        raise CertificateError(f"{bound_name}: synthesized word is not a reset word")
    if len(word) > bound_value:
        raise CertificateError(f"{bound_name}: length {len(word)} exceeds certified bound {bound_value}")
    return ResetCertificate(word, bound_name, int(bound_value), tuple(tuple(s) for s in steps), dict(details))


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------


def _reduce(a: Automaton, d: int, vector, width: int, allowed=None) -> list:
    basis = SpanBasis(width)
    basis.add(vector(()))
    words = [()]
    frontier = [()]
    for _ in range(d):
        added = []
        for u in frontier:
            for x in range(a.k):
                ua = u + (x,)
                if allowed is not None and ua not in allowed:
                    continue
                if basis.add(vector(ua)):
                    added.append(ua)
        if not added:
            break
        words += added
        frontier = added
    return words


def reduce_general(a: Automaton, d: int) -> WordSet:
    """Words of length <= d whose matrices span those of all of ``Sigma^{<=d}``."""
    if d < 0:
        raise ValidationError("d must be non-negative")
    return WordSet(tuple(_reduce(a, d, lambda w: flat_matrix(a, w), a.n * a.n)))


def reduce_alpha(a: Automaton, d: int, alpha: Sequence) -> WordSet:
    """Words of length <= d with ``<alpha W> = <alpha Sigma^{<=d}>``; at most n words."""
    if d < 0:
        raise ValidationError("d must be non-negative")
    if len(alpha) != a.n:
        raise ValidationError("alpha has the wrong length")
    return WordSet(tuple(_reduce(a, d, lambda w: push(a, alpha, w), a.n)))


def is_factor_closed(words: Iterable) -> bool:
    ws = {tuple(w) for w in words}
    for w in ws:
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                if w[:i] + w[j:] not in ws:
                    return False
    return True


def reduce_factor_closed(a: Automaton, words: Iterable, mode: str = "general", alpha: Sequence | None = None) -> WordSet:
    """Span-preserving reduction of an arbitrary factor-closed word set.

    After the stagnation stop, a sweep over the whole input appends any word
    still independent of the reduced span, so the output span always equals
    the input span.
    """
    ws = {tuple(int(x) for x in w) for w in words}
    if not ws:
        raise ValidationError("word set must be non-empty")
    if not is_factor_closed(ws):
        raise PreconditionError("word set is not factor-closed")
    if mode == "general":
        vector, width = (lambda w: flat_matrix(a, w)), a.n * a.n
    elif mode == "alpha":
        if alpha is None:
            raise ValidationError("alpha mode needs a vector")
        vector, width = (lambda w: push(a, alpha, w)), a.n
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    d = max(len(w) for w in ws)
    out = _reduce(a, d, vector, width, allowed=ws)
    basis = SpanBasis(width)
    for w in out:
        basis.add(vector(w))
    for w in sorted(ws, key=word_key):
        if basis.add(vector(w)):
            out.append(w)
    return WordSet(tuple(out))


def reduce_primitive(a: Automaton, w1: Iterable, d: int) -> WordSet:
    """Words ``W`` of length <= d with ``W W1`` primitive on ``R = Q.W1``."""
    w1 = WordSet.of(w1)
    r = sorted(image_of(a, w1))
    pos = {q: i for i, q in enumerate(r)}
    acts = [transformation(a, v) for v in w1]
    pattern = [[0] * len(r) for _ in r]

    def entries(w):
        t = transformation(a, w)
        return {(pos[q], pos[int(s[int(t[q])])]) for q in r for s in acts}

    for i, j in entries(()):
        pattern[i][j] = 1
    words, frontier = [()], [()]
    if is_primitive(pattern):
        return WordSet(tuple(words))
    for _ in range(d):
        added = []
        for u in frontier:
            for x in range(a.k):
                ua = u + (x,)
                new = [(i, j) for i, j in entries(ua) if not pattern[i][j]]
                if new:
                    for i, j in new:
                        pattern[i][j] = 1
                    added.append(ua)
                    words.append(ua)
                    if is_primitive(pattern):
                        return WordSet(tuple(words))
        if not added:
            break
        frontier = added
    raise NotPrimitiveError("no primitive word set within the length limit")


# ---------------------------------------------------------------------------
# greedy extension
# ---------------------------------------------------------------------------


def suffix_expansion(words: Iterable, k: int) -> list:
    """``{x u : u a proper suffix of a word in U, x a letter}`` in (length, lex) order."""
    suffixes = set()
    for w in words:
        w = tuple(w)
        for i in range(1, len(w) + 1):
            suffixes.add(w[i:])
    out = {(x,) + u for u in suffixes for x in range(k)}
    return sorted(out, key=word_key)


def _integer_weights(alpha):
    den = lcm(*(Fraction(x).denominator for x in alpha))
    return [int(Fraction(x) * den) for x in alpha]


def greedy_extension(
    a: Automaton,
    w1: Iterable,
    w2: Iterable,
    alpha: Sequence,
    w0: Sequence[int] | None = None,
    *,
    composite: list | None = None,
    start_letter: bool = True,
) -> ResetCertificate:
    """Grow a preimage from one state to all of R with words from ``W2 W1``.

    Each step picks the first composite word (in (|w2|, w2, |w1|, w1) order)
    that strictly increases the alpha-mass of the current preimage, so the
    number of steps is at most ``DS(alpha) - 1``.
    """
    w1, w2 = WordSet.of(w1), WordSet.of(w2)
    r = sorted(image_of(a, w1))
    rset = frozenset(r)
    if w0 is None:
        if len(r) == a.n:
            w0 = ()
        else:
            w0 = next((w for w in w1 if frozenset(transformation(a, w).tolist()) == rset), None)
            if w0 is None:
                raise PreconditionError("no word w0 with Q.w0 = R supplied")
    w0 = a.check_word(w0)
    if frozenset(transformation(a, w0).tolist()) != rset:
        raise PreconditionError("Q.w0 differs from R = Q.W1")
    alpha = tuple(Fraction(x) for x in alpha)
    if len(alpha) != a.n or any(x < 0 for x in alpha) or sum(alpha) != 1:
        raise PreconditionError("alpha must be a stochastic vector of length n")
    if any(alpha[i] for i in range(a.n) if i not in rset) or not all(alpha[q] for q in r):
        raise PreconditionError("alpha must be positive exactly on R")
    d1, d2 = w1.max_length, w2.max_length
    try:
        ds = ds_count(alpha)
    except CapExceeded as exc:
        ds = exc.bound
    if len(r) == 1:
        return certify(a, w0, "extension", len(w0), (), ds=ds, d1=d1, d2=d2, start_letter=False)
    if composite is None:
        composite = composite_words(a, w1, w2, r)
    weights = _integer_weights(alpha)
    acts = [(u, [int(t) for t in transformation(a, u)[r]]) for u in composite]

    steps = []
    use_letter = False
    if start_letter and len(r) == a.n:
        for q in range(a.n):
            x = next((x for x in range(a.k) if len(preimage(a, {q}, (x,))) > 1), None)
            if x is not None:
                use_letter = True
                steps.append((x,))
                s = set(preimage(a, {q}, (x,)))
                break
    if not use_letter:
        s = {r[0]}
    masses = [sum(weights[i] for i in s)]
    while s != rset:
        if len(steps) > ds:
            raise CertificateError("greedy extension exceeded DS(alpha) - 1 steps")
        cur = masses[-1]
        for u, act in acts:
            pre = {q for q, t in zip(r, act) if t in s}
            m = sum(weights[i] for i in pre)
            if m > cur:
                break
        else:
            raise CriterionViolated("no composite word extends the current set")
        steps.append(u)
        s = pre
        masses.append(m)
    word = w0 + tuple(x for u in reversed(steps) for x in u)
    if len(steps) > ds - 1:
        raise CertificateError(f"{len(steps)} extension steps exceed DS(alpha) - 1 = {ds - 1}")
    if use_letter:
        bound = len(w0) + 1 + (ds - 2) * (d1 + d2)
    else:
        bound = len(w0) + (ds - 1) * (d1 + d2)
    return certify(
        a, word, "extension", bound, steps, ds=ds, d1=d1, d2=d2, masses=tuple(masses), r=len(r),
        start_letter=use_letter,
    )


def extension_reset(a: Automaton, p=None) -> ResetCertificate:
    """Reset word for a strongly connected automaton from the letter chain's alpha."""
    if not is_strongly_connected(a):
        raise PreconditionError("extension synthesis needs a strongly connected automaton")
    if a.n == 1:
        return certify(a, (), "extension", 0)
    alpha = stationary_distribution(markov_matrix(a, p)).vector
    base = reduce_alpha(a, a.n - 1, alpha)
    if len(base) < a.n:
        raise NotSynchronizingError("Sigma^{<=n-1} is not complete for alpha", pair=None)
    ws = suffix_expansion(base, a.k)
    cert = greedy_extension(a, [()], ws, alpha, (), composite=ws)
    d = base.max_length
    return certify(a, cert.word, "extension", cert.bound_value, cert.steps, **cert.details, d=d)


# ---------------------------------------------------------------------------
# greedy compression
# ---------------------------------------------------------------------------


def frankl_sum(n: int, size: int) -> int:
    """Sum of per-step lengths for greedy compression from ``size`` states down to 1."""
    return sum(comb(n - m + 2, 2) for m in range(2, size + 1))


def _compress(a: Automaton, s, tables=None) -> list:
    """Shortest-pair compression steps taking the set ``s`` to a singleton."""
    s = frozenset(s)
    steps = []
    if len(s) > 1 and tables is None:
        tables = pair_tables(a)
    while len(s) > 1:
        v = _shortest_compressing(a, s, tables)
        if len(v) > comb(a.n - len(s) + 2, 2):
            raise CertificateError("compressing word longer than the per-step bound")
        steps.append(v)
        s = apply_word(a, s, v)
    return steps


def greedy_compression(a: Automaton, w0: Sequence[int] = ()) -> ResetCertificate:
    """Repeatedly append a shortest word compressing the current image."""
    w0 = a.check_word(w0)
    s = apply_word(a, range(a.n), w0)
    steps = _compress(a, s)
    word = w0 + tuple(x for v in steps for x in v)
    bound = len(w0) + frankl_sum(a.n, len(s))
    return certify(a, word, "pairwise-greedy", bound, steps)


# ---------------------------------------------------------------------------
# words of small rank
# ---------------------------------------------------------------------------


def small_rank_bound(length: int, d: int, r: int) -> int:
    if r >= 4:
        return (length + d) * (r**3 - r) // 6 - d
    return length + (length + d) * (r - 1) ** 2


def pair_compression_bound(length: int, d: int, r: int) -> int:
    return length + (length + d) * (r * r - r) // 2


def _small_rank_d(a: Automaton, w, sink) -> tuple[int, int, int]:
    sub, _ = subautomaton(a, sink)
    stagnation = reduce_general(sub, max(len(sink) - 1, 0)).max_length
    complete_d = min(stagnation, len(sink) - 1)
    target = set(sink) & set(apply_word(a, range(a.n), w))
    reach = max(distances_to(a, target))
    return max(1, complete_d, reach), complete_d, reach


def _shortest_compressing(a: Automaton, s, tables):
    dist = tables[0]
    members = sorted(s)
    best = None
    for i, p in enumerate(members):
        for q in members[i + 1:]:
            dv = int(dist[p, q])
            if dv >= 0 and (best is None or dv < best[0]):
                best = (dv, p, q)
    if best is None:
        raise NotSynchronizingError("image cannot be compressed", pair=(members[0], members[1]))
    return pair_word(a, best[1], best[2], tables)


def _reset_induced(b: InducedAutomaton, start_idx, steps_bound: int):
    """Reset word of ``b`` (in its own letters) from ``start_idx``; greedy, exact fallback."""
    auto = b.as_automaton()
    word = tuple(x for v in _compress(auto, start_idx) for x in v)
    if len(word) > steps_bound and auto.n <= MAX_ORACLE_STATES:
        exact = exact_reset_threshold(auto, start_idx)
        if exact.word is not None and len(exact.word) < len(word):
            word = exact.word
    return word


def small_rank_pipeline(a: Automaton, w: Sequence[int], *, refine: bool = False) -> ResetCertificate:
    """Reset word built from a short word ``w`` of small rank.

    The induced automaton on ``Q.w`` with letters ``Sigma^{<=d} w`` is
    synchronized greedily and the result expanded back. With ``refine``, the
    prefix becomes ``w v`` (followed by ``w`` again while the rank exceeds 1),
    where ``v`` is a shortest word compressing ``Q.w``.
    """
    w = a.check_word(w)
    r = rank_of_word(a, w)
    if r == 1:
        return certify(a, w, "small-rank", len(w), (w,), r=1, d=0)
    if not is_synchronizing(a):
        raise NotSynchronizingError("automaton is not synchronizing")
    sink, _ = sink_component(a)
    d, complete_d, reach = _small_rank_d(a, w, sink)
    words = reduce_general(a, d)
    b = build_induced(a, [w], words)
    pos = {q: i for i, q in enumerate(b.r_states)}
    bound = small_rank_bound(len(w), d, r)
    letters_budget = (bound - len(w)) // (len(w) + d)
    prefix = w
    steps = [w]
    if refine:
        tables = pair_tables(a)
        v = _shortest_compressing(a, apply_word(a, range(a.n), w), tables)
        prefix = w + v
        steps.append(v)
        if rank_of_word(a, prefix) > 1:
            prefix += w
            steps.append(w)
    if rank_of_word(a, prefix) == 1:
        word = prefix
    else:
        start = sorted(pos[q] for q in apply_word(a, range(a.n), prefix))
        bword = _reset_induced(b, start, letters_budget)
        word = prefix + b.expand(bword)
        steps += [b.letters[j] for j in bword]
    return certify(
        a, word, "small-rank", bound, steps,
        r=r, d=d, complete_d=complete_d, reach=reach,
        pair_bound=pair_compression_bound(len(w), d, r),
    )


# ---------------------------------------------------------------------------
# completeness + primitivity
# ---------------------------------------------------------------------------


class Combination(NamedTuple):
    induced: InducedAutomaton
    delta: Fraction
    beta: tuple
    synchronizing: bool


def _mix(a, w1, w2, w, delta):
    """``((1-delta)[P2] + delta/|W| sum_W [w]) [P1]`` as a full matrix."""
    from .induced import weighted_matrix

    p2 = weighted_matrix(a, w2)
    pw = weighted_matrix(a, WordSet(w.words))
    p1 = weighted_matrix(a, w1)
    mixed = (p2 * (1 - delta) + pw * delta).dot(p1)
    return tuple(tuple(Fraction(x) for x in row) for row in mixed)


def combine_complete_primitive(a: Automaton, w1: Iterable, w2: Iterable, w: Iterable, *, max_halvings: int = 64) -> Combination:
    """Automaton ``A_c(W1, W u W2)`` with a mixing weight keeping ``W`` complete."""
    w1, w2, w = WordSet.of(w1), WordSet.of(w2), WordSet.of(w)
    if not is_strongly_connected(a):
        raise PreconditionError("automaton must be strongly connected")
    b = build_induced(a, w1, w2)
    full = induced_product(a, w1, w2)
    if not is_primitive(full, b.r_states):
        raise NotPrimitiveError("underlying digraph of A_c(W1, W2) is not primitive")
    alpha = stationary_distribution(full).vector
    basis, chosen = SpanBasis(a.n), []
    for u in w:
        if basis.add(push(a, alpha, u)):
            chosen.append(u)
    if len(chosen) < a.n:
        raise PreconditionError("W is not complete for R^n with respect to alpha")
    c = build_induced(a, w1, WordSet(tuple(w) + tuple(w2)))
    delta = Fraction(1, 2)
    for _ in range(max_halvings):
        beta = stationary_distribution(_mix(a, w1, w2, w, delta)).vector
        if determinant([push(a, beta, u) for u in chosen]) != 0:
            return Combination(c, delta, beta, True)
        delta /= 2
    raise SearchExhausted(f"no mixing weight found after {max_halvings} halvings")
