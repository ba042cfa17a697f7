"""Exact rational linear algebra and a two-phase simplex with Bland's rule."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Row = list[Fraction]


def rref(rows: Sequence[Sequence], rhs: Sequence) -> tuple[list[Row], list[Fraction], list[int], bool]:
    """Reduced row echelon form of [A | b].

    Returns (rows, rhs, pivot columns, consistent).  Zero rows are dropped.
    """
    A = [[Fraction(v) for v in r] for r in rows]
    b = [Fraction(v) for v in rhs]
    m = len(A)
    n = len(A[0]) if A else 0
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        b[r], b[piv] = b[piv], b[r]
        p = A[r][col]
        if p != 1:
            A[r] = [v / p for v in A[r]]
            b[r] /= p
        for i in range(m):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                b[i] -= f * b[r]
        pivots.append(col)
        r += 1
        if r == m:
            break
    consistent = all(b[i] == 0 for i in range(r, m))
    return A[:r], b[:r], pivots, consistent


def solve_square(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None if singular."""
    rows, rhs, piv, ok = rref(A, b)
    if not ok or len(piv) != len(A):
        return None
    x = [Fraction(0)] * len(A)
    for r, c in enumerate(piv):
        x[c] = rhs[r]
    return x


@dataclass(frozen=True)
class LPResult:
    status: str                      # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _pivot(T: list[Row], basis: list[int], r: int, c: int) -> None:
    p = T[r][c]
    if p != 1:
        T[r] = [v / p for v in T[r]]
    pr = T[r]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [x - f * y for x, y in zip(row, pr)]
    basis[r] = c


def _run(T: list[Row], basis: list[int], allowed: int) -> bool:
    """Maximize the objective in the last row (stored as reduced costs
    z_j - c_j) over columns < ``allowed``.  Returns False if unbounded."""
    m = len(T) - 1
    while True:
        enter = next((j for j in range(allowed) if T[-1][j] < 0), None)   # Bland: lowest index
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], enter)


def maximize(c: Sequence, G: Sequence[Sequence], h: Sequence) -> LPResult:
    """max c·y  subject to  G y ≤ h,  y ≥ 0, in exact arithmetic.

    Two-phase tableau simplex; Bland's rule guarantees termination.
    """
    c = [Fraction(v) for v in c]
    G = [[Fraction(v) for v in r] for r in G]
    h = [Fraction(v) for v in h]
    m, n = len(G), len(c)
    if m == 0:
        if any(v > 0 for v in c):
            return LPResult("unbounded")
        return LPResult("optimal", Fraction(0), tuple(Fraction(0) for _ in range(n)))
    neg = [i for i in range(m) if h[i] < 0]
    k = len(neg)
    width = n + m + k + 1
    T: list[Row] = []
    basis: list[int] = []
    art_of = {i: n + m + j for j, i in enumerate(neg)}
    for i in range(m):
        sign = -1 if i in art_of else 1
        row = [sign * v for v in G[i]] + [Fraction(0)] * (m + k) + [sign * h[i]]
        row[n + i] = Fraction(sign)
        if i in art_of:
            row[art_of[i]] = Fraction(1)
            basis.append(art_of[i])
        else:
            basis.append(n + i)
        T.append(row)

    if k:
        # phase 1: maximize -(sum of artificials)
        obj = [Fraction(0)] * width
        for i in neg:
            obj = [o - v for o, v in zip(obj, T[i])]
        for j in art_of.values():
            obj[j] = Fraction(0)
        T.append(obj)
        _run(T, basis, n + m)
        if T[-1][-1] != 0:
            return LPResult("infeasible")
        T.pop()
        # drive remaining zero-valued artificials out of the basis
        for r, bv in enumerate(basis):
            if bv >= n + m:
                col = next((j for j in range(n + m) if T[r][j] != 0), None)
                if col is not None:
                    _pivot(T, basis, r, col)
        keep = [r for r, bv in enumerate(basis) if bv < n + m]
        T = [T[r] for r in keep]
        basis = [basis[r] for r in keep]
        T = [row[:n + m] + [row[-1]] for row in T]

    obj = [-v for v in c] + [Fraction(0)] * m + [Fraction(0)]
    for r, bv in enumerate(basis):
        if obj[bv] != 0:
            f = obj[bv]
            obj = [o - f * v for o, v in zip(obj, T[r])]
    T.append(obj)
    if not _run(T, basis, n + m):
        return LPResult("unbounded")
    y = [Fraction(0)] * n
    for r, bv in enumerate(basis):
        if bv < n:
            y[bv] = T[r][-1]
    return LPResult("optimal", T[-1][-1], tuple(y))
