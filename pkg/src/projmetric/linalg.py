"""Exact linear algebra over the rationals and over polynomial rings.

Rank and kernels use Bareiss fraction-free elimination on integer rows
(rational input is cleared of denominators row by row first).  Polynomial
determinants use Laplace expansion with memoised minors, which for the 6x6
matrices met here is cheaper than elimination with exact division.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Sequence

from .algebra import Poly, poly_sum


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def echelon(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int], list[int]]:
    """Fraction-free row echelon form.

    Returns ``(reduced_rows, pivot_columns, pivot_row_origin)`` where the last
    list gives, for each pivot row, the index of the input row it came from.
    """
    m = _integer_rows(rows)
    origin = list(range(len(m)))
    if not m:
        return [], [], []
    ncols = len(m[0])
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        origin[r], origin[piv] = origin[piv], origin[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            a = m[i][c]
            row_i, row_r = m[i], m[r]
            m[i] = [(p * row_i[j] - a * row_r[j]) // prev if j > c else 0
                    for j in range(ncols)]
        prev = p
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots, origin[:r]


def rank(rows: Sequence[Sequence]) -> int:
    return len(echelon(rows)[1])


def independent_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset of ``rows``.

    Greedy in input order, so earlier rows are preferred.
    """
    chosen: list[int] = []
    basis: list[list[int]] = []
    for i, row in enumerate(rows):
        if rank(basis + [list(row)]) > len(basis):
            basis.append(list(row))
            chosen.append(i)
    return chosen


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : rows @ x = 0}`` with rational entries.

    Each basis vector has a 1 in one free column and zeros in the others.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, pivots, _ = echelon(rows) if rows else ([], [], [])
    # back-substitute to reduced form over Fractions
    R = [[Fraction(x) for x in row] for row in red]
    for k in range(len(R) - 1, -1, -1):
        c = pivots[k]
        pv = R[k][c]
        R[k] = [x / pv for x in R[k]]
        for i in range(k):
            f = R[i][c]
            if f:
                R[i] = [a - f * b for a, b in zip(R[i], R[k])]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -R[k][fc]
        basis.append(v)
    return basis


def det(matrix: Sequence[Sequence]) -> Poly | Fraction:
    """Determinant by Laplace expansion along rows with memoised minors.

    Works for any entries supporting ``+`` and ``*`` (Polys, Fractions, ints).
    """
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    # minors[cols] = det of rows (n-k..n-1) x cols, for |cols| = k
    minors: dict[tuple[int, ...], object] = {(): 1}
    for k in range(1, n + 1):
        row = matrix[n - k]
        new = {}
        for cols in combinations(range(n), k):
            terms = []
            for pos, c in enumerate(cols):
                entry = row[c]
                if isinstance(entry, Poly):
                    if not entry.terms:
                        continue
                elif not entry:
                    continue
                sub = minors[cols[:pos] + cols[pos + 1:]]
                if isinstance(sub, Poly):
                    if not sub.terms:
                        continue
                elif not sub:
                    continue
                t = entry * sub
                terms.append(-t if pos % 2 else t)
            if any(isinstance(t, Poly) for t in terms):
                new[cols] = poly_sum(terms)
            else:
                new[cols] = sum(terms, Fraction(0))
        minors = new
    return minors[tuple(range(n))]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            terms = [a[i][k] * b[k][j] for k in range(m)]
            if any(isinstance(t, Poly) for t in terms):
                row.append(poly_sum(terms))
            else:
                row.append(sum(terms, Fraction(0)))
        out.append(row)
    return out


def trace(a: Sequence[Sequence]):
    terms = [a[i][i] for i in range(len(a))]
    if any(isinstance(t, Poly) for t in terms):
        return poly_sum(terms)
    return sum(terms, Fraction(0))
