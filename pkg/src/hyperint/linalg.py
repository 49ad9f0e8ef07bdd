"""Exact linear algebra: fraction-free (Bareiss) elimination for determinants
and inverses over the rationals, plus determinant/inverse helpers for
rational-function matrices via denominator clearing.

Matrices are plain lists of lists.  Nothing here is approximate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .field import FieldError, Poly, RatFunc


class SingularMatrixError(ValueError):
    """Raised when an inverse of a singular matrix is requested."""


def det_bareiss(matrix: Sequence[Sequence], one, div) -> object:
    """Fraction-free Bareiss determinant.

    ``one`` is the multiplicative identity of the entry ring and ``div`` an
    exact-division callback; every division performed is exact by the Bareiss
    identity.  Works over Fraction (div = /) and Poly (div = div_exact).
    """
    n = len(matrix)
    if n == 0:
        return one
    m = [list(row) for row in matrix]
    sign = 1
    prev = one
    for i in range(n - 1):
        if _is_zero(m[i][i]):
            for r in range(i + 1, n):
                if not _is_zero(m[r][i]):
                    m[i], m[r] = m[r], m[i]
                    sign = -sign
                    break
            else:
                return _zero_like(one)
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                num = m[i][i] * m[r][c] - m[r][i] * m[i][c]
                m[r][c] = div(num, prev)
            m[r][i] = _zero_like(one)
        prev = m[i][i]
    result = m[n - 1][n - 1]
    if sign < 0:
        result = -result
    return result


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, (Poly, RatFunc)) else x == 0


def _zero_like(one):
    if isinstance(one, Poly):
        return Poly.const(one.ctx, 0)
    return Fraction(0)


def det_fraction(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    return det_bareiss(matrix, Fraction(1), lambda a, b: a / b)


def det_poly(matrix: Sequence[Sequence[Poly]], ctx) -> Poly:
    return det_bareiss(matrix, Poly.one(ctx), lambda a, b: a.div_exact(b))


def inverse_fraction(matrix: Sequence[Sequence[Fraction]]
                     ) -> List[List[Fraction]]:
    """Exact inverse of a rational matrix by Gauss-Jordan elimination."""
    n = len(matrix)
    aug = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if aug[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def matmul_fraction(a, b) -> List[List[Fraction]]:
    if len(a[0]) != len(b):
        raise ValueError("shape mismatch")
    return [
        [sum((x * y for x, y in zip(row, col)), Fraction(0))
         for col in zip(*b)]
        for row in a
    ]


def det_ratfunc(matrix: Sequence[Sequence[RatFunc]]) -> RatFunc:
    """Determinant of a rational-function matrix.

    Each row is cleared to polynomials by its denominator product, the
    polynomial determinant is computed fraction-free, and the row factors are
    divided back out.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    ctx = matrix[0][0].ctx
    cleared: List[List[Poly]] = []
    row_factor = Poly.one(ctx)
    for row in matrix:
        factor = Poly.one(ctx)
        for entry in row:
            factor = factor * entry.denom
        cleared.append([
            entry.numer * factor.div_exact(entry.denom) for entry in row
        ])
        row_factor = row_factor * factor
    return RatFunc(det_poly(cleared, ctx), row_factor)


def inverse_ratfunc(matrix: Sequence[Sequence[RatFunc]]
                    ) -> List[List[RatFunc]]:
    """Adjugate-based inverse; intended for the small symbolic cross-checks."""
    n = len(matrix)
    det = det_ratfunc(matrix)
    if det.is_zero():
        raise SingularMatrixError("matrix is singular")
    if n == 1:
        return [[matrix[0][0].ctx.one() / det]]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [
                [matrix[r][c] for c in range(n) if c != i]
                for r in range(n) if r != j
            ]
            cof = det_ratfunc(minor)
            if (i + j) % 2:
                cof = -cof
            row.append(cof / det)
        out.append(row)
    return out


def eval_matrix(matrix: Sequence[Sequence[RatFunc]], values
                ) -> List[List[Fraction]]:
    return [[entry.eval(values) for entry in row] for row in matrix]
