"""Exact rational linear algebra over :class:`fractions.Fraction`.

Vectors are tuples of ``Fraction`` and matrices tuples of row tuples. Rank,
span membership, determinants and linear solves go through fraction-free
(Bareiss) elimination on integer rows; pivots are the lowest-index row with
a non-zero entry in the current column.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .core import Automaton, _sccs, transformation
from .errors import CapExceeded, CertificateError, ValidationError

DS_CAP = 1 << 20

RatVec = tuple  # tuple[Fraction, ...]
RatMat = tuple  # tuple[RatVec, ...]


def fmt_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Iterable) -> str:
    return " ".join(fmt_rat(x) for x in v)


def characteristic_vec(n: int, s: Iterable[int]) -> RatVec:
    s = set(s)
    return tuple(Fraction(int(i in s)) for i in range(n))


def identity(n: int) -> RatMat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def word_matrix(a: Automaton, w: Sequence[int]) -> RatMat:
    t = transformation(a, w)
    return tuple(tuple(Fraction(int(t[i] == j)) for j in range(a.n)) for i in range(a.n))


def letter_distribution(k: int, p: Mapping[int, object] | Sequence | None = None) -> dict:
    """Validated letter -> Fraction map; ``None`` gives the uniform one."""
    if p is None:
        return {x: Fraction(1, k) for x in range(k)}
    if not isinstance(p, Mapping):
        p = dict(enumerate(p))
    dist = {int(x): Fraction(v) for x, v in p.items()}
    if sorted(dist) != list(range(k)):
        raise ValidationError(f"distribution must cover letters 0..{k - 1}")
    if any(v <= 0 for v in dist.values()):
        raise ValidationError("letter probabilities must be positive")
    if sum(dist.values()) != 1:
        raise ValidationError("letter probabilities must sum to 1")
    return dist


def markov_matrix(a: Automaton, p=None) -> RatMat:
    p = letter_distribution(a.k, p)
    rows = [[Fraction(0)] * a.n for _ in range(a.n)]
    for q in range(a.n):
        for x in range(a.k):
            rows[q][int(a.delta[q, x])] += p[x]
    return tuple(tuple(r) for r in rows)


def mat_mul(x: RatMat, y: RatMat) -> RatMat:
    cols = list(zip(*y))
    return tuple(tuple(sum((u * v for u, v in zip(row, col)), Fraction(0)) for col in cols) for row in x)


def vec_mat(v: RatVec, m: RatMat) -> RatVec:
    return tuple(sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(len(m[0])))


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def push(a: Automaton, g: Sequence, w: Sequence[int]) -> RatVec:
    """The row vector ``g [w]``: mass of ``g`` carried along ``w``."""
    t = transformation(a, w)
    out = [Fraction(0)] * a.n
    for i, x in enumerate(g):
        if x:
            out[int(t[i])] += x
    return tuple(out)


def pull(a: Automaton, x: Sequence, w: Sequence[int]) -> RatVec:
    """The row vector ``x [w]^T``; for ``x = [S]`` this is ``[S.w^-1]``."""
    t = transformation(a, w)
    return tuple(Fraction(x[int(t[i])]) for i in range(a.n))


# ---------------------------------------------------------------------------
# fraction-free elimination
# ---------------------------------------------------------------------------


def _int_row(v: Sequence) -> list[int]:
    """Scale a rational row to a primitive integer row with the same span."""
    fr = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    row = [int(x * den) for x in fr]
    g = gcd(*row) if row else 0
    if g > 1:
        row = [x // g for x in row]
    return row


def bareiss(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row echelon form of an integer matrix.

    Returns ``(echelon, pivot_columns, swaps)``.
    """
    m = [list(r) for r in rows]
    if not m:
        return m, [], 0
    nrows, ncols = len(m), len(m[0])
    prev, r, swaps, pivots = 1, 0, 0, []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            swaps += 1
        pr = m[r]
        for i in range(r + 1, nrows):
            mi = m[i]
            f = mi[c]
            for j in range(c + 1, ncols):
                mi[j] = (pr[c] * mi[j] - f * pr[j]) // prev
            mi[c] = 0
        prev = pr[c]
        pivots.append(c)
        r += 1
    return m, pivots, swaps


def span_rank(vs: Sequence[Sequence]) -> int:
    vs = list(vs)
    if not vs:
        return 0
    width = len(vs[0])
    if any(len(v) != width for v in vs):
        raise ValidationError("vectors must have equal length")
    _, pivots, _ = bareiss([_int_row(v) for v in vs])
    return len(pivots)


def in_span(v: Sequence, vs: Sequence[Sequence]) -> bool:
    vs = list(vs)
    if any(len(u) != len(v) for u in vs):
        raise ValidationError("vectors must have equal length")
    return span_rank(vs + [v]) == span_rank(vs)


def spans_equal(us: Sequence[Sequence], vs: Sequence[Sequence]) -> bool:
    r = span_rank(list(us) + list(vs))
    return r == span_rank(us) == span_rank(vs)


def determinant(m: Sequence[Sequence]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise ValidationError("determinant needs a square matrix")
    dens = [lcm(*(Fraction(x).denominator for x in r)) for r in m]
    rows = [[int(Fraction(x) * d) for x in r] for r, d in zip(m, dens)]
    ech, pivots, swaps = bareiss(rows)
    if len(pivots) < n:
        return Fraction(0)
    det = Fraction(ech[n - 1][n - 1])
    for d in dens:
        det /= d
    return -det if swaps % 2 else det


class SpanBasis:
    """Incrementally grown echelon basis of a subspace of Q^width."""

    def __init__(self, width: int):
        self.width = width
        self._rows: list[tuple[int, list[int]]] = []  # (pivot, primitive int row)

    def __len__(self):
        return len(self._rows)

    def _reduce(self, v: Sequence) -> list[int]:
        if len(v) != self.width:
            raise ValidationError("vector length mismatch")
        x = _int_row(v)
        for piv, row in self._rows:
            if x[piv]:
                f, p = x[piv], row[piv]
                x = [p * xi - f * ri for xi, ri in zip(x, row)]
                g = gcd(*x)
                if g > 1:
                    x = [xi // g for xi in x]
        return x

    def __contains__(self, v) -> bool:
        return not any(self._reduce(v))

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; return whether it was independent."""
        x = self._reduce(v)
        piv = next((i for i, xi in enumerate(x) if xi), None)
        if piv is None:
            return False
        self._rows.append((piv, x))
        self._rows.sort(key=lambda t: t[0])
        return True

    def vectors(self) -> list[RatVec]:
        return [tuple(Fraction(x) for x in row) for _, row in self._rows]


def solve(a_rows: Sequence[Sequence], b: Sequence) -> tuple[RatVec, int] | None:
    """One solution of ``A x = b`` (free variables set to 0) and rank of A.

    Returns ``None`` when the system is inconsistent.
    """
    aug = [list(r) + [y] for r, y in zip(a_rows, b)]
    rows = [_int_row(r) for r in aug]
    ncols = len(aug[0]) - 1
    ech, pivots, _ = bareiss(rows)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = ech[r]
        acc = Fraction(row[ncols]) - sum((row[j] * x[j] for j in range(c + 1, ncols)), Fraction(0))
        x[c] = acc / row[c]
    return tuple(x), len(pivots)


# ---------------------------------------------------------------------------
# Markov chains
# ---------------------------------------------------------------------------


class Stationary(NamedTuple):
    vector: RatVec
    unique: bool


def is_row_stochastic(m: RatMat) -> bool:
    return all(all(x >= 0 for x in row) and sum(row) == 1 for row in m)


def _stationary_system(m: RatMat):
    n = len(m)
    rows = [[Fraction(1)] * n]
    rows += [[m[i][j] - (1 if i == j else 0) for i in range(n)] for j in range(n)]
    rhs = [Fraction(1)] + [Fraction(0)] * n
    return rows, rhs


def stationary_distribution(m: RatMat) -> Stationary:
    """Stochastic ``alpha >= 0`` with ``alpha m = alpha``.

    The all-ones normalisation row is placed first, so for a chain with a
    single closed class the solve is exact and unique. When several closed
    classes exist, ``unique`` is False and the vector returned is the
    free-variables-zero solution if that is non-negative, else the
    stationary distribution of the closed class holding the least state.
    """
    m = tuple(tuple(Fraction(x) for x in row) for row in m)
    n = len(m)
    if not is_row_stochastic(m):
        raise ValidationError("matrix is not row stochastic")
    rows, rhs = _stationary_system(m)
    res = solve(rows, rhs)
    if res is None:
        raise CertificateError("stationary system inconsistent")
    x, rank = res
    unique = rank == n
    if any(v < 0 for v in x):
        x = _closed_class_stationary(m)
    if sum(x) != 1 or vec_mat(x, m) != x or any(v < 0 for v in x):
        raise CertificateError("stationary distribution check failed")
    return Stationary(x, unique)


def _closed_class_stationary(m: RatMat) -> RatVec:
    n = len(m)
    table = [[j for j in range(n) if m[i][j]] for i in range(n)]
    # pad rows to equal width so the SCC helper can consume them
    width = max(len(r) for r in table)
    pattern = Automaton([r + [r[-1]] * (width - len(r)) for r in table])
    closed = []
    for comp in _sccs(pattern):
        members = set(comp)
        if all(j in members for i in comp for j in table[i]):
            closed.append(sorted(comp))
    comp = min(closed, key=min)
    sub = tuple(tuple(m[i][j] for j in comp) for i in comp)
    rows, rhs = _stationary_system(sub)
    y, _ = solve(rows, rhs)
    out = [Fraction(0)] * n
    for i, v in zip(comp, y):
        out[i] = v
    return tuple(out)


def is_primitive(m: Sequence[Sequence], states: Sequence[int] | None = None) -> bool:
    """Whether the pattern of ``m`` restricted to ``states`` is primitive.

    Uses the exponent bound: an r x r primitive matrix has a positive power
    of order ``(r-1)^2 + 1``.
    """
    idx = list(range(len(m))) if states is None else sorted(states)
    r = len(idx)
    if r == 0:
        return False
    pat = np.array([[bool(m[i][j]) for j in idx] for i in idx], dtype=np.int64)
    e = (r - 1) ** 2 + 1
    result = np.eye(r, dtype=np.int64)
    base = pat
    while e:
        if e & 1:
            result = (result @ base > 0).astype(np.int64)
        base = (base @ base > 0).astype(np.int64)
        e >>= 1
    return bool(result.all())


def ds_count(g: Sequence, cap: int = DS_CAP) -> int:
    """Number of distinct positive sums of entries of a non-negative ``g``."""
    g = [Fraction(x) for x in g]
    if any(x < 0 for x in g):
        raise ValidationError("ds_count needs a non-negative vector")
    pos = [x for x in g if x]
    if not pos:
        return 0
    den = lcm(*(x.denominator for x in pos))
    sums = {0}
    for x in pos:
        v = int(x * den)
        sums |= {s + v for s in sums}
        if len(sums) > cap:
            raise CapExceeded(f"more than {cap} distinct subset sums", bound=2 ** len(pos) - 1)
    return len(sums) - 1
