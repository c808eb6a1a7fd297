"""Small dense linear algebra over algebraic numbers (3x3 and friends)."""

from __future__ import annotations

from typing import Sequence

from .arith import AlgebraicNumber, as_number, join

Matrix = list[list[AlgebraicNumber]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    cells = [[as_number(c) for c in row] for row in rows]
    t = join(*(c.tower for row in cells for c in row))
    return [[c.lift(t) for c in row] for row in cells]


def identity(n: int = 3, tower=None) -> Matrix:
    return to_matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)]) if tower is None \
        else [[tower.number(1 if i == j else 0) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    a, b = to_matrix(a), to_matrix(b)
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), a[0][0] * 0)
             for j in range(len(b[0]))] for i in range(len(a))]


def matvec(a: Sequence[Sequence], v: Sequence) -> list[AlgebraicNumber]:
    a = to_matrix(a)
    v = [as_number(c) for c in v]
    return [sum((a[i][k] * v[k] for k in range(len(v))), a[0][0] * 0) for i in range(len(a))]


def vecmat(v: Sequence, a: Sequence[Sequence]) -> list[AlgebraicNumber]:
    a = to_matrix(a)
    v = [as_number(c) for c in v]
    return [sum((v[k] * a[k][j] for k in range(len(v))), a[0][0] * 0) for j in range(len(a[0]))]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*to_matrix(a))]


def det3(m: Sequence[Sequence]) -> AlgebraicNumber:
    m = to_matrix(m)
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def inverse3(m: Sequence[Sequence]) -> Matrix:
    m = to_matrix(m)
    d = det3(m)
    if d.is_zero():
        raise ZeroDivisionError("singular matrix")
    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [k for k in range(3) if k != i]
            c = [k for k in range(3) if k != j]
            minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            cof[i][j] = minor if (i + j) % 2 == 0 else -minor
    return [[cof[j][i] / d for j in range(3)] for i in range(3)]


def row_echelon(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in to_matrix(rows)]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence]) -> list[list[AlgebraicNumber]]:
    """Basis of ``{v : M v = 0}``, one vector per free column."""
    m, pivots = row_echelon(rows)
    ncols = len(m[0])
    zero = m[0][0] * 0
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = [zero] * ncols
        v[free] = zero + 1
        for r, c in enumerate(pivots):
            v[c] = -m[r][free]
        basis.append(v)
    return basis


def cross(u: Sequence, v: Sequence) -> list[AlgebraicNumber]:
    u = [as_number(c) for c in u]
    v = [as_number(c) for c in v]
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def is_zero_vector(v: Sequence) -> bool:
    return all(as_number(c).is_zero() for c in v)
