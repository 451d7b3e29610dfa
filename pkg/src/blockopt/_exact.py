"""Exact integer/rational linear algebra used by the counting and network modules."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            for r in range(c + 1, n):
                if a[r][c] != 0:
                    a[c], a[r] = a[r], a[c]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[c][c]
        row_c = a[c]
        for r in range(c + 1, n):
            row_r = a[r]
            f = row_r[c]
            for j in range(c + 1, n):
                row_r[j] = (pivot * row_r[j] - f * row_c[j]) // prev
            row_r[c] = 0
        prev = pivot
    return sign * a[-1][-1]


def _solve_integer(matrix, rhs) -> list[Fraction]:
    # Bareiss forward pass keeps entries integral; one division per unknown at the end
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    prev = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
        row_c = a[c]
        pivot = row_c[c]
        for r in range(c + 1, n):
            row_r = a[r]
            f = row_r[c]
            for j in range(c + 1, n + 1):
                row_r[j] = (pivot * row_r[j] - f * row_c[j]) // prev
            row_r[c] = 0
        prev = pivot
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        row = a[r]
        acc = Fraction(row[n])
        for j in range(r + 1, n):
            if row[j]:
                acc -= row[j] * x[j]
        x[r] = acc / row[r]
    return x


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` exactly; raises ``ZeroDivisionError`` if singular."""
    n = len(matrix)
    if all(type(x) is int for row in matrix for x in row) and all(type(x) is int for x in rhs):
        return _solve_integer(matrix, rhs)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
        row_c = a[c]
        inv = 1 / row_c[c]
        for j in range(c, n + 1):
            row_c[j] *= inv
        for r in range(n):
            if r == c:
                continue
            f = a[r][c]
            if f:
                row_r = a[r]
                for j in range(c, n + 1):
                    row_r[j] -= f * row_c[j]
    return [a[i][n] for i in range(n)]


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse of a non-singular square matrix."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
        row_c = a[c]
        inv = 1 / row_c[c]
        for j in range(c, 2 * n):
            row_c[j] *= inv
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                row_r = a[r]
                for j in range(c, 2 * n):
                    row_r[j] -= f * row_c[j]
    return [row[n:] for row in a]


def rank(matrix: Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    a = [[Fraction(x) for x in row] for row in matrix]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                for j in range(c, cols):
                    a[i][j] -= f * a[r][j]
        r += 1
        if r == rows:
            break
    return r
