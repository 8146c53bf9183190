"""Dense exact linear algebra on lists of Fractions.

Matrices are lists of rows.  Everything here is tiny (dimension < 20), so
plain Gaussian elimination is the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

Matrix = List[List[Fraction]]
Vector = List[Fraction]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Sequence[Sequence]) -> Matrix:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise ValueError(f"shape mismatch {shape(a)} x {shape(b)}")
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if not aik:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    oi[j] += aik * bk[j]
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    if a and len(a[0]) != len(v):
        raise ValueError(f"shape mismatch {shape(a)} x {len(v)}")
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def add(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a: Sequence[Sequence]) -> Matrix:
    return [[c * x for x in row] for row in a]


def is_zero(a: Sequence[Sequence]) -> bool:
    return all(not x for row in a for x in row)


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    a = [list(map(Fraction, row)) for row in m]
    rows, cols = shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def det(m: Sequence[Sequence]) -> Fraction:
    n, cols = shape(m)
    if n != cols:
        raise ValueError("determinant of a non-square matrix")
    a = [list(map(Fraction, row)) for row in m]
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def inverse(m: Sequence[Sequence]) -> Matrix:
    n, cols = shape(m)
    if n != cols:
        raise ValueError("inverse of a non-square matrix")
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def solve(m: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve ``m x = b`` for square invertible ``m``."""
    n, cols = shape(m)
    if n != cols:
        raise ValueError("solve needs a square matrix")
    aug = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(m, b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n] for row in red]


def nullity(m: Sequence[Sequence], cols: int | None = None) -> int:
    if cols is None:
        cols = shape(m)[1]
    return cols - rank(m) if m else cols


def span_dim(vectors: Sequence[Sequence]) -> int:
    vecs = [v for v in vectors if any(v)]
    return rank(vecs) if vecs else 0
