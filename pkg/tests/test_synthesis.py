import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import reference as ref
from strategies import automata
from resetword.codes import gen_cerny, gen_eulerian
from resetword.core import Automaton, is_strongly_connected, is_synchronizing, rank_of_word, sink_component
from resetword.errors import (
    CertificateError,
    NotPrimitiveError,
    NotSynchronizingError,
    PreconditionError,
)
from resetword.induced import WordSet, build_induced, induced_product, is_complete
from resetword.linalg import ds_count, is_primitive, markov_matrix, push, span_rank, stationary_distribution
from resetword.oracle import all_words, brute_matrix_span, brute_span, exact_reset_threshold, flat_matrix
from resetword.synthesis import (
    certify,
    combine_complete_primitive,
    extension_reset,
    frankl_sum,
    greedy_compression,
    greedy_extension,
    is_factor_closed,
    pair_compression_bound,
    reduce_alpha,
    reduce_factor_closed,
    reduce_general,
    reduce_primitive,
    small_rank_bound,
    small_rank_pipeline,
    suffix_expansion,
)

C4 = gen_cerny(4)


def _alpha(a):
    return stationary_distribution(markov_matrix(a)).vector


# --- reductions ------------------------------------------------------------


def test_reduce_trivial_depth():
    assert reduce_general(C4, 0).words == ((),)
    assert reduce_alpha(C4, 0, _alpha(C4)).words == ((),)


def test_reduce_general_c4():
    ws = reduce_general(C4, 3)
    brute = brute_matrix_span(C4, 3)
    mine = [flat_matrix(C4, w) for w in ws]
    assert ref.same_span(mine, brute)
    assert len(ws) <= 16 and ws.max_length <= 3


def test_reduce_general_cyclic_letter():
    n = 5
    a = Automaton([[(i + 1) % n] for i in range(n)])
    assert reduce_general(a, n - 1).words == tuple((0,) * i for i in range(n))
    assert reduce_general(a, 10).words == tuple((0,) * i for i in range(n))


def test_reduce_general_can_stabilise_late():
    # matrix spans keep growing past level n-1 on Cerny automata
    for n in range(3, 7):
        assert reduce_general(gen_cerny(n), 4 * n).max_length == 2 * n - 3


@given(automata(max_n=6, max_k=3), st.integers(0, 4))
def test_reductions_match_brute_force(a, d):
    d = min(d, 2) if a.k == 3 and a.n > 4 else d
    g = tuple(Fraction(i + 1, a.n * (a.n + 1) // 2) for i in range(a.n))
    wa = reduce_alpha(a, d, g)
    assert ref.same_span([push(a, g, w) for w in wa], brute_span(a, g, d))
    assert len(wa) <= a.n and wa.max_length <= min(d, a.n - 1)
    wg = reduce_general(a, d)
    assert ref.same_span([flat_matrix(a, w) for w in wg], brute_matrix_span(a, d))
    assert len(wg) <= a.n**2 and wg.max_length <= d


def test_reduce_alpha_c4_complete():
    assert span_rank([push(C4, _alpha(C4), w) for w in reduce_alpha(C4, 3, _alpha(C4))]) == 4


def test_reduce_alpha_permutation_never_completes():
    perm = Automaton([[1, 0], [2, 2], [0, 1]])
    alpha = _alpha(perm)
    for d in range(6):
        assert len(reduce_alpha(perm, d, alpha)) < 3


def test_reduce_primitive():
    ws = reduce_primitive(C4, [()], 3)
    summed = [[0] * 4 for _ in range(4)]
    for w in ws:
        for q, t in enumerate(ref.act(C4.table(), w)):
            summed[q][t] += 1
    assert is_primitive(summed)
    assert len(ws) - 1 <= (4 - 1) ** 2 + 1
    assert reduce_primitive(C4, [(1, 0, 0, 0, 1, 0, 0, 0, 1)], 3).words == ((),)
    with pytest.raises(NotPrimitiveError):
        reduce_primitive(Automaton([[0, 0], [1, 1]]), [()], 4)


def test_reduce_primitive_addition_count():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(2, 6)
        a = Automaton([[rng.randrange(n) for _ in range(2)] for _ in range(n)])
        if not (is_strongly_connected(a) and is_synchronizing(a)):
            continue
        ws = reduce_primitive(a, [()], n)
        assert len(ws) - 1 <= (n - 1) ** 2 + 1


def test_reduce_factor_closed():
    full = list(all_words(2, 3))
    assert reduce_factor_closed(C4, full).words == reduce_general(C4, 3).words
    ws = {(), (0,), (1,), (0, 1), (1, 0)}
    assert is_factor_closed(ws)
    red = reduce_factor_closed(C4, ws)
    assert ref.same_span([flat_matrix(C4, w) for w in red], [flat_matrix(C4, w) for w in ws])
    alpha = _alpha(C4)
    red = reduce_factor_closed(C4, ws, mode="alpha", alpha=alpha)
    assert ref.same_span([push(C4, alpha, w) for w in red], [push(C4, alpha, w) for w in ws])
    with pytest.raises(PreconditionError):
        reduce_factor_closed(C4, [(0, 1)])


def test_factor_closed_sweep_keeps_span():
    # closure under deleting infixes is closure under subsequences
    rng = random.Random(9)
    for _ in range(100):
        n = rng.randint(2, 5)
        a = Automaton([[rng.randrange(n) for _ in range(2)] for _ in range(n)])
        base = [w for w in all_words(2, 3) if rng.random() < 0.6]
        closed = {tuple(w[i] for i in idx) for w in base for r in range(len(w) + 1)
                  for idx in itertools.combinations(range(len(w)), r)} | {()}
        red = reduce_factor_closed(a, closed)
        assert set(red.words) <= closed
        assert ref.same_span([flat_matrix(a, w) for w in red], [flat_matrix(a, w) for w in closed])


# --- greedy extension ------------------------------------------------------


def test_greedy_extension_c4():
    alpha = _alpha(C4)
    w2 = reduce_alpha(C4, 3, alpha)
    ws = suffix_expansion(w2, 2)
    cert = greedy_extension(C4, [()], ws, alpha, (), composite=ws)
    ds = ds_count(alpha)
    d = max(len(w) for w in ws)
    assert rank_of_word(C4, cert.word) == 1
    assert len(cert.steps) - 1 <= ds - 2
    assert len(cert.word) <= 1 + (ds - 2) * d == cert.bound_value
    masses = cert.details["masses"]
    assert all(x < y for x, y in zip(masses, masses[1:]))


def test_greedy_extension_single_state():
    a = Automaton([[0, 0]])
    assert greedy_extension(a, [()], [()], [1], ()).word == ()


def test_greedy_extension_preconditions():
    alpha = _alpha(C4)
    with pytest.raises(PreconditionError):
        greedy_extension(C4, [()], [(0,)], [Fraction(1, 2), Fraction(1, 2), 0, 0], ())
    with pytest.raises(PreconditionError):
        greedy_extension(C4, [(1,)], [(0,)], alpha, ())


def test_suffix_expansion():
    assert suffix_expansion([(0, 1)], 2) == [(0,), (1,), (0, 1), (1, 1)]


def test_extension_reset_eulerian():
    found = 0
    for seed in range(60):
        a = gen_eulerian(7, 2, seed)
        if not (is_strongly_connected(a) and is_synchronizing(a)):
            continue
        found += 1
        cert = extension_reset(a)
        assert len(cert.word) <= 1 + (7 - 2) * (7 - 1)
        assert len(cert.word) >= exact_reset_threshold(a).length
    assert found > 10


def test_extension_reset_needs_strong_connectivity():
    with pytest.raises(PreconditionError):
        extension_reset(Automaton([[1, 1], [1, 1]]))


# --- greedy compression ----------------------------------------------------


def test_greedy_compression_c4():
    cert = greedy_compression(C4)
    assert rank_of_word(C4, cert.word) == 1
    assert len(cert.word) <= cert.bound_value == frankl_sum(4, 4) == (4**3 - 4) // 6
    assert len(cert.word) >= 9


def test_greedy_compression_after_reset_prefix():
    w = (1, 0, 0, 0, 1, 0, 0, 0, 1)
    cert = greedy_compression(C4, w)
    assert cert.word == w and cert.steps == ()


def test_greedy_compression_cerny_family():
    for n in range(5, 9):
        a = gen_cerny(n)
        cert = greedy_compression(a)
        assert rank_of_word(a, cert.word) == 1
        assert len(cert.word) <= (n**3 - n) // 6
        assert len(cert.word) >= (n - 1) ** 2


def test_greedy_compression_not_synchronizing():
    with pytest.raises(NotSynchronizingError):
        greedy_compression(Automaton([[1], [0]]))


# --- small-rank pipeline ---------------------------------------------------


def test_small_rank_c4_ba():
    w = (1, 0)
    assert rank_of_word(C4, w) == 3
    cert = small_rank_pipeline(C4, w)
    d = cert.details["d"]
    assert 1 <= d <= 3
    assert cert.bound_value == small_rank_bound(2, d, 3) == 2 + (2 + d) * 4
    assert 9 <= len(cert.word) <= cert.bound_value


def test_small_rank_reset_input():
    w = (1, 0, 0, 0, 1, 0, 0, 0, 1)
    cert = small_rank_pipeline(C4, w)
    assert cert.word == w


def test_small_rank_not_synchronizing():
    with pytest.raises(NotSynchronizingError):
        small_rank_pipeline(Automaton([[1, 0], [0, 1]]), (0,))


def test_small_rank_random_instances():
    rng = random.Random(2)
    checked = 0
    for _ in range(300):
        n = rng.randint(2, 8)
        a = Automaton([[rng.randrange(n) for _ in range(2)] for _ in range(n)])
        if not is_synchronizing(a):
            continue
        w = min([(0,), (1,), (0, 1), (1, 0)], key=lambda u: (rank_of_word(a, u), len(u)))
        for refine in (False, True):
            cert = small_rank_pipeline(a, w, refine=refine)
            assert len(cert.word) >= exact_reset_threshold(a).length
            assert cert.details["d"] <= n - 1
            r = rank_of_word(a, w)
            if r > 1:
                assert cert.details["pair_bound"] == pair_compression_bound(len(w), cert.details["d"], r)
        checked += 1
    assert checked > 100


def test_pipeline_non_strongly_connected():
    a = Automaton([[1, 2], [2, 3], [3, 2], [2, 2]])
    assert not is_strongly_connected(a)
    sink, _ = sink_component(a)
    cert = small_rank_pipeline(a, (0,))
    assert rank_of_word(a, cert.word) == 1


# --- completeness + primitivity -------------------------------------------


def test_combine_c4():
    w1, w2 = [()], [(0,), (1,)]
    alpha = stationary_distribution(induced_product(C4, w1, w2)).vector
    w = reduce_alpha(C4, 3, alpha)
    res = combine_complete_primitive(C4, w1, w2, w)
    assert 0 < res.delta < 1
    assert res.induced.r_states == (0, 1, 2, 3)
    assert sum(res.beta) == 1
    assert is_synchronizing(res.induced.as_automaton())


def test_combine_preconditions():
    with pytest.raises(PreconditionError):
        combine_complete_primitive(C4, [()], [(0,), (1,)], [()])
    perm = Automaton([[1], [2], [0]])
    with pytest.raises(NotPrimitiveError):
        combine_complete_primitive(perm, [()], [(0,)], [()])
    one = Automaton([[0]])
    res = combine_complete_primitive(one, [()], [(0,)], [()])
    assert res.delta == Fraction(1, 2)


def test_certify_rejects_bad_words():
    with pytest.raises(CertificateError):
        certify(C4, (0,), "x", 10)
    with pytest.raises(CertificateError):
        certify(C4, (1, 0, 0, 0, 1, 0, 0, 0, 1), "x", 5)
    rec = certify(C4, (1, 0, 0, 0, 1, 0, 0, 0, 1), "x", 9, [(1,)]).to_record(C4)
    assert rec["automaton"] == C4.digest() and rec["length"] == 9 and rec["steps"] == [[1]]
