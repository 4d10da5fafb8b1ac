from hypothesis import strategies as st

from resetword.core import Automaton


@st.composite
def tables(draw, min_n=1, max_n=6, min_k=1, max_k=3):
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(min_k, max_k))
    return [[draw(st.integers(0, n - 1)) for _ in range(k)] for _ in range(n)]


@st.composite
def automata(draw, **kw):
    return Automaton(draw(tables(**kw)))
