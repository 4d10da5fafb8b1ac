"""Two-phase dense-tableau simplex in exact rational arithmetic.

Bland's rule (least entering index, least leaving basis index on ties)
rules out cycling. Problems are small: a handful of letter variables and
at most ``n`` equality rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: tuple = ()
    value: Fraction | None = None


def _pivot(tab, basis, row, col):
    pr = tab[row]
    pv = pr[col]
    tab[row] = pr = [v / pv for v in pr]
    for i, r in enumerate(tab):
        if i != row and r[col]:
            f = r[col]
            tab[i] = [a - f * b for a, b in zip(r, pr)]
    basis[row] = col


def _run(tab, basis, ncols, allowed):
    # last row is the objective (reduced costs, minimisation form)
    m = len(tab) - 1
    while True:
        obj = tab[-1]
        col = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], col)


def maximize(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximise ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    nv = len(c)
    rows, rhs, slack_sign = [], [], []
    for r, b in zip(a_ub, b_ub):
        rows.append([Fraction(v) for v in r])
        rhs.append(Fraction(b))
        slack_sign.append(1)
    for r, b in zip(a_eq, b_eq):
        rows.append([Fraction(v) for v in r])
        rhs.append(Fraction(b))
        slack_sign.append(0)
    m = len(rows)
    ns = sum(1 for s in slack_sign if s)
    ncols = nv + ns + m  # structural, slack, artificial
    tab = []
    si = 0
    for i in range(m):
        line = rows[i] + [Fraction(0)] * (ns + m) + [rhs[i]]
        if slack_sign[i]:
            line[nv + si] = Fraction(1)
            si += 1
        if line[-1] < 0:
            line = [-v for v in line]
        line[nv + ns + i] = Fraction(1)
        tab.append(line)
    basis = [nv + ns + i for i in range(m)]

    # phase 1: minimise the sum of artificials
    obj = [Fraction(0)] * (ncols + 1)
    for line in tab:
        for j in range(nv + ns):
            obj[j] -= line[j]
        obj[-1] -= line[-1]
    tab.append(obj)
    _run(tab, basis, ncols, [True] * (nv + ns) + [False] * m)
    if tab[-1][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= nv + ns:
            col = next((j for j in range(nv + ns) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)

    # phase 2
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(nv):
        obj[j] = -Fraction(c[j])
    for i in range(m):
        b = basis[i]
        if b < nv and obj[b]:
            f = obj[b]
            obj = [a - f * v for a, v in zip(obj, tab[i])]
    tab[-1] = obj
    status = _run(tab, basis, ncols, [True] * (nv + ns) + [False] * m)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * nv
    for i in range(m):
        if basis[i] < nv:
            x[basis[i]] = tab[i][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", tuple(x), value)
