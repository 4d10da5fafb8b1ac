import itertools
from fractions import Fraction

import pytest
from hypothesis import given

import reference as ref
from strategies import automata, tables
from resetword.codes import gen_cerny
from resetword.core import Automaton, is_strongly_connected, is_synchronizing, transformation
from resetword.errors import CriterionViolated, PreconditionError, ValidationError
from resetword.induced import (
    WordSet,
    build_induced,
    composite_words,
    criterion_synchronizing,
    find_extension_word,
    image_of,
    induced_markov,
    induced_product,
    is_complete,
)
from resetword.linalg import characteristic_vec, is_row_stochastic, markov_matrix, stationary_distribution
from resetword.oracle import all_words

C4 = gen_cerny(4)


def test_wordset_order_and_dedup():
    ws = WordSet(((1, 0), (0,), (), (0,)))
    assert ws.words == ((), (0,), (1, 0))
    assert ws.max_length == 2 and len(ws) == 3 and (1, 0) in ws
    assert ws.probability(()) == Fraction(1, 3)
    with pytest.raises(ValidationError):
        WordSet(())
    with pytest.raises(ValidationError):
        WordSet(((0,), (1,)), {(0,): Fraction(1, 2), (1,): Fraction(1, 3)})
    ws = WordSet(((0,), (1,)), {(0,): Fraction(1, 4), (1,): Fraction(3, 4)})
    assert ws.probability((1,)) == Fraction(3, 4)


def test_composite_order_and_dedup():
    # W2 = {eps, a, b}, W1 = {eps}: eps and b act differently, so all three survive
    assert composite_words(C4, [()], [(), (0,), (1,)]) == [(), (0,), (1,)]
    # on R = Q.b = {0,1,2} the words b and bb act the same; bb is dropped
    words = composite_words(C4, [(1,)], [(), (1,)])
    assert words == [(1,)]


def test_induced_with_trivial_w1_is_the_automaton():
    b = build_induced(C4, [()], [(0,), (1,)])
    assert b.r_states == (0, 1, 2, 3)
    assert b.as_automaton() == C4
    assert b.expand((1, 0)) == (1, 0)


@given(automata(max_n=5, max_k=2))
def test_induced_letters_act_on_r(a):
    w1 = [(0,), (0, 0)]
    w2 = list(all_words(a.k, 2))
    b = build_induced(a, w1, w2)
    r = set(b.r_states)
    assert r == image_of(a, w1)
    for j, letter in enumerate(b.letters):
        t = transformation(a, letter)
        for i, q in enumerate(b.r_states):
            assert b.r_states[b.table[i][j]] == t[q]
    m = induced_markov(b)
    assert is_row_stochastic(m)
    full = induced_product(a, w1, w2)
    assert is_row_stochastic(full)


def test_is_complete_examples():
    alpha = stationary_distribution(markov_matrix(C4)).vector
    assert is_complete(C4, all_words(2, 3), alpha, range(4))
    assert not is_complete(C4, all_words(2, 1), alpha, range(4))


def test_find_extension_word():
    alpha = stationary_distribution(markov_matrix(C4)).vector
    x = characteristic_vec(4, {0})
    w = find_extension_word(C4, x, alpha, all_words(2, 3))
    # the first word in (length, lex) order that enlarges the preimage of state 0
    assert w == (1,)
    with pytest.raises(PreconditionError):
        find_extension_word(C4, characteristic_vec(4, range(4)), alpha, all_words(2, 3))
    with pytest.raises(PreconditionError):
        find_extension_word(C4, x, alpha, all_words(2, 3), r_states=[1, 2])
    perm = Automaton([[1], [0]])
    with pytest.raises(CriterionViolated):
        find_extension_word(perm, characteristic_vec(2, {0}), [Fraction(1, 2)] * 2, all_words(1, 3))


def _strongly_connected_binary(n):
    for flat in itertools.product(range(n), repeat=2 * n):
        table = [list(flat[2 * i: 2 * i + 2]) for i in range(n)]
        if ref.strongly_connected(table):
            yield table


def test_criterion_exhaustive_small():
    for n in (1, 2, 3):
        for table in _strongly_connected_binary(n):
            a = Automaton(table)
            assert criterion_synchronizing(a) == ref.synchronizing(table)


@given(tables(max_n=7, max_k=3))
def test_criterion_random(table):
    a = Automaton(table)
    if not is_strongly_connected(a):
        with pytest.raises(PreconditionError):
            criterion_synchronizing(a)
        return
    assert criterion_synchronizing(a) == is_synchronizing(a)
    assert criterion_synchronizing(a, [Fraction(1, 3)] + [Fraction(2, 3 * (a.k - 1))] * (a.k - 1) if a.k > 1 else None) == is_synchronizing(a)
