"""Exact linear algebra over Q with Fraction entries.

Matrices are lists of rows.  Subspaces are returned as lists of basis
vectors in reduced row echelon form, so equal subspaces compare equal.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def vec_mat(v: Vector, a: Matrix) -> Vector:
    return mat_vec(transpose(a), v)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    m = mat(rows)
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[0])


def span(vectors: Sequence[Sequence], dim: int) -> Matrix:
    """Canonical basis (RREF rows) of the span of the given vectors."""
    vectors = [v for v in vectors]
    if not vectors:
        return []
    basis, _ = rref(vectors)
    assert all(len(v) == dim for v in basis)
    return basis


def nullspace(a: Matrix) -> Matrix:
    """Basis of {x : a x = 0}."""
    ncols = len(a[0])
    red, pivots = rref(a) if a else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        out.append(v)
    return span(out, ncols) if out else []


def det(a: Matrix) -> Fraction:
    m = mat(a)
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(mat(a), identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def same_subspace(u: Sequence[Sequence], v: Sequence[Sequence], dim: int) -> bool:
    return span(list(u), dim) == span(list(v), dim)


def contains(basis: Sequence[Sequence], vector: Sequence, dim: int) -> bool:
    return rank(list(basis) + [list(vector)]) == rank(list(basis)) if basis else all(x == 0 for x in vector)
