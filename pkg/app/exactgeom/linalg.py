"""Exact Gaussian elimination over Fractions and integer-vector helpers."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import NamedTuple, Sequence

Vector = tuple[Fraction, ...]


def rref(rows: Sequence[Sequence[Fraction]], width: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """
    Reduced row echelon form.

    Args:
        rows: Matrix rows (any rationals).
        width: Number of columns to pivot on; defaults to the full row length. Columns
            past `width` are carried along (augmented part).

    Returns:
        The nonzero rows of the reduced matrix and their pivot columns.
    """
    matrix = [[Fraction(v) for v in row] for row in rows]
    if not matrix:
        return [], []
    n = width if width is not None else len(matrix[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot_row = next((i for i in range(r, len(matrix)) if matrix[i][c] != 0), None)
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        p = matrix[r][c]
        if p != 1:
            matrix[r] = [v / p for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    return matrix[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def null_space(rows: Sequence[Sequence[Fraction]], n: int) -> list[Vector]:
    """Basis of {x in Q^n : row . x = 0 for every row}, one vector per free column."""
    reduced, pivots = rref(rows, n) if rows else ([], [])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


def primitive(vector: Sequence[Fraction | int]) -> tuple[int, ...]:
    """Scale a rational vector to the integer vector with gcd 1 pointing the same way."""
    fractions = [Fraction(v) for v in vector]
    denominator = reduce(lcm, (f.denominator for f in fractions), 1)
    integers = [int(f * denominator) for f in fractions]
    g = reduce(gcd, integers, 0)
    if g == 0:
        return tuple(integers)
    return tuple(v // g for v in integers)


def independent_rows(rows: Sequence[Sequence[int]], n: int) -> list[int]:
    """Indices of a greedy maximal set of linearly independent rows."""
    chosen: list[int] = []
    basis: list[tuple[int, list[Fraction]]] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for pivot, b in basis:
            if v[pivot]:
                f = v[pivot]
                v = [x - f * y for x, y in zip(v, b)]
        pivot = next((c for c in range(n) if v[c]), None)
        if pivot is None:
            continue
        p = v[pivot]
        v = [x / p for x in v]
        basis = [(q, [x - b[pivot] * y for x, y in zip(b, v)]) for q, b in basis]
        basis.append((pivot, v))
        chosen.append(idx)
        if len(chosen) == n:
            break
    return chosen


def inverse(matrix: Sequence[Sequence[Fraction | int]]) -> list[list[Fraction]]:
    """Inverse of a square nonsingular matrix."""
    n = len(matrix)
    augmented = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    reduced, pivots = rref(augmented, n)
    if pivots != list(range(n)):
        raise ValueError("Matrix is singular")
    return [row[n:] for row in reduced]


class AffineHull(NamedTuple):
    """
    Affine hull of a finite point set.

    Attributes:
        base: The first point.
        coordinates: Columns J on which the hull projects injectively (|J| = rank).
        equalities: Pairs (e, value) with e . x = value on the hull; they span its
            orthogonal complement.
        rank: Affine dimension.
    """
    base: Vector
    coordinates: tuple[int, ...]
    equalities: tuple[tuple[Vector, Fraction], ...]
    rank: int


def affine_hull(points: Sequence[Sequence[Fraction]]) -> AffineHull:
    if not points:
        raise ValueError("Affine hull of an empty point set")
    base = tuple(Fraction(v) for v in points[0])
    n = len(base)
    differences = [[Fraction(v) - b for v, b in zip(p, base)] for p in points[1:]]
    differences = [d for d in differences if any(d)]
    reduced, pivots = rref(differences, n) if differences else ([], [])
    equalities = tuple(
        (e, dot(e, base)) for e in null_space(reduced, n)
    )
    return AffineHull(base, tuple(pivots), equalities, len(pivots))


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull of a nonempty point set."""
    return affine_hull(points).rank
