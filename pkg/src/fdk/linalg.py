"""Small dense exact linear algebra over Q (row reduction, kernels, solves)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[Fraction]]


def rref(rows: Sequence[Sequence[object]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; pivots are chosen left to right."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence[object]]) -> int:
    return len(rref(rows)[1])


def kernel(rows: Sequence[Sequence[object]], ncols: Optional[int] = None) -> Matrix:
    """Basis of the right kernel, one vector per free column (in column order)."""
    if not rows:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    red, pivots = rref(rows)
    n = len(rows[0])
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[object]], rhs: Sequence[object]) -> Optional[List[Fraction]]:
    """One solution of rows * x = rhs (free variables set to zero), or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    n = len(rows[0]) if rows else 0
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return x
