"""Small exact integer-matrix helpers.

Matrices are immutable tuples of row tuples of Python ints; nothing here
ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

IntMatrix = tuple


def mat(rows: Iterable[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> IntMatrix:
    return tuple((0,) * n for _ in range(m))


def transpose(a: IntMatrix) -> IntMatrix:
    return tuple(tuple(row) for row in zip(*a))


def neg(a: IntMatrix) -> IntMatrix:
    return tuple(tuple(-x for x in row) for row in a)


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_eq(a: IntMatrix, b: IntMatrix) -> bool:
    return a == b


def diag(entries: Sequence[int]) -> IntMatrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def det(a: IntMatrix) -> int:
    """Determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a: IntMatrix) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(a)
    d = det(a)
    if d not in (1, -1):
        return inverse_rational(a)
    return adjugate_over_det(a, d)


def adjugate_over_det(a: IntMatrix, d: int) -> IntMatrix:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(tuple(a[r][c] for c in range(n) if c != i)
                          for r in range(n) if r != j)
            cof = det(minor) * (-1 if (i + j) % 2 else 1)
            row.append(cof // d if d in (1, -1) else cof / d)
        out.append(tuple(row))
    return tuple(out)


def inverse_rational(a: IntMatrix) -> tuple:
    """Inverse with Fraction entries (raises on singular input)."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def is_permutation(a: IntMatrix) -> bool:
    n = len(a)
    if any(len(row) != n for row in a):
        return False
    for row in a:
        if sorted(row) != [0] * (n - 1) + [1]:
            return False
    for col in zip(*a):
        if sorted(col) != [0] * (n - 1) + [1]:
            return False
    return True


def column(a: IntMatrix, j: int) -> tuple:
    return tuple(row[j] for row in a)


def column_sign(col: Sequence[int]):
    """+1 / -1 if all entries are >=0 / <=0 (and not all zero), else None."""
    has_pos = any(x > 0 for x in col)
    has_neg = any(x < 0 for x in col)
    if has_pos and has_neg:
        return None
    if has_pos:
        return 1
    if has_neg:
        return -1
    return None
