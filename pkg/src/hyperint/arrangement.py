"""Coefficient matrices of hyperplane arrangements and their combinatorics.

A coefficient matrix is (k+1) x (k+n+2) over exact rationals, with the 0-th
column pinned to (1, 0, ..., 0): column j cuts out the linear form

    L_j(t) = z_{0j} t_0 + z_{1j} t_1 + ... + z_{kj} t_k ,

with t_0 = 1 in the affine chart and L_0 = t_0 the hyperplane at infinity.

Index tuples are ordered (k+1)-tuples of distinct column indices; order is
significant (it fixes the sign of the corresponding minor), and replacement
is always positional, never re-sorting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .linalg import det_fraction

IndexTuple = Tuple[int, ...]


class ArrangementError(ValueError):
    pass


class CoeffMatrix:
    """Exact (k+1) x (k+n+2) coefficient matrix with fixed 0-th column."""

    def __init__(self, k: int, n: int, entries: Sequence[Sequence]):
        self.k = k
        self.n = n
        rows = [tuple(Fraction(x) for x in row) for row in entries]
        if len(rows) != k + 1 or any(len(r) != k + n + 2 for r in rows):
            raise ArrangementError(
                f"expected {(k + 1)}x{(k + n + 2)} entries for k={k}, n={n}"
            )
        col0 = tuple(r[0] for r in rows)
        if col0 != (Fraction(1),) + (Fraction(0),) * k:
            raise ArrangementError("column 0 must be (1, 0, ..., 0)")
        self.rows: Tuple[Tuple[Fraction, ...], ...] = tuple(rows)

    @property
    def ncols(self) -> int:
        return self.k + self.n + 2

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def is_real(self) -> bool:
        return True  # entries are Fractions by construction

    def with_column(self, j: int, col: Sequence[Fraction]) -> "CoeffMatrix":
        rows = [list(r) for r in self.rows]
        for i, v in enumerate(col):
            rows[i][j] = Fraction(v)
        return CoeffMatrix(self.k, self.n, rows)

    def linear_form(self, j: int) -> Tuple[Fraction, Tuple[Fraction, ...]]:
        """L_j in the affine chart: (constant, coefficients of t_1..t_k)."""
        col = self.column(j)
        return col[0], col[1:]

    def __eq__(self, other):
        return isinstance(other, CoeffMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"CoeffMatrix(k={self.k}, n={self.n})"


@dataclass(frozen=True)
class Classification:
    variant: str  # "Generic" | "OneDegenerate" | "Other"
    jvan: Optional[IndexTuple] = None
    vanishing: Tuple[IndexTuple, ...] = ()


def all_tuples(k: int, n: int) -> List[IndexTuple]:
    """All ascending (k+1)-tuples of column indices, in lexicographic order."""
    return [tuple(c) for c in itertools.combinations(range(k + n + 2), k + 1)]


def minor(z: CoeffMatrix, j_tuple: Sequence[int]) -> Fraction:
    """Determinant of the columns of z selected by the tuple, in tuple order."""
    J = tuple(j_tuple)
    if len(J) != z.k + 1 or len(set(J)) != len(J):
        raise ArrangementError(f"bad index tuple {J}")
    if any(not 0 <= j < z.ncols for j in J):
        raise ArrangementError(f"index out of range in {J}")
    sub = [[z.rows[i][j] for j in J] for i in range(z.k + 1)]
    return det_fraction(sub)


def classify(z: CoeffMatrix) -> Classification:
    vanishing = tuple(J for J in all_tuples(z.k, z.n) if minor(z, J) == 0)
    if not vanishing:
        return Classification("Generic")
    if len(vanishing) == 1:
        return Classification("OneDegenerate", jvan=vanishing[0],
                              vanishing=vanishing)
    return Classification("Other", vanishing=vanishing)


def replace(j_tuple: IndexTuple, old: int, new: int) -> IndexTuple:
    """Positional replacement of one entry, preserving the slot order."""
    if old not in j_tuple:
        raise ArrangementError(f"{old} not in {j_tuple}")
    if new in j_tuple:
        raise ArrangementError(f"{new} already in {j_tuple}")
    return tuple(new if j == old else j for j in j_tuple)


def index_family(
    k: int,
    n: int,
    include: Optional[int] = None,
    exclude: Optional[int] = None,
    remove: Iterable[Sequence[int]] = (),
) -> List[IndexTuple]:
    """Ascending enumeration of tuples with membership constraints.

    ``include``/``exclude`` pin one index inside/outside every member;
    ``remove`` drops specific tuples (compared as sets).
    """
    if include is not None and include == exclude:
        raise ArrangementError("inconsistent constraints: include == exclude")
    removed = [frozenset(t) for t in remove]
    out = []
    for J in all_tuples(k, n):
        if include is not None and include not in J:
            continue
        if exclude is not None and exclude in J:
            continue
        if frozenset(J) in removed:
            continue
        out.append(J)
    return out


def linear_form_sign(z: CoeffMatrix, j: int, point: Sequence) -> int:
    """Sign of L_j at an affine point (t_1, ..., t_k)."""
    t = [Fraction(x) for x in point]
    if len(t) != z.k:
        raise ArrangementError(f"expected {z.k} affine coordinates")
    const, coeffs = z.linear_form(j)
    value = const + sum(c * x for c, x in zip(coeffs, t))
    return (value > 0) - (value < 0)


def vertex_point(z: CoeffMatrix, lines: Sequence[int]) -> Optional[Tuple[Fraction, ...]]:
    """Affine intersection point of k hyperplanes, or None when not unique.

    Solves the k x k system given by the linear parts; the block-inverse
    expression of the point reduces to exactly this system.
    """
    L = list(lines)
    if len(L) != z.k:
        raise ArrangementError(f"expected {z.k} hyperplane indices")
    a = []
    b = []
    for j in L:
        const, coeffs = z.linear_form(j)
        a.append(list(coeffs))
        b.append(-const)
    det = det_fraction(a)
    if det == 0:
        return None
    # Cramer's rule
    point = []
    for col in range(z.k):
        m = [row[:col] + [b[i]] + row[col + 1:] for i, row in enumerate(a)]
        point.append(det_fraction(m) / det)
    return tuple(point)


def _vertex_sign_table(z: CoeffMatrix):
    """Sign vector of every arrangement vertex P(l_1..l_k), keyed by line set."""
    table = {}
    for lines in itertools.combinations(range(1, z.ncols), z.k):
        p = vertex_point(z, lines)
        if p is None:
            continue
        signs = tuple(linear_form_sign(z, j, p) for j in range(1, z.ncols))
        table[lines] = signs
    return table


def perturb(z0: CoeffMatrix, jvan: Sequence[int], max_steps: int = 60
            ) -> CoeffMatrix:
    """Resolve the degenerate point by nudging the last column of the tuple.

    The j_k-th column gains (eps, eps^2, ..., eps^{k+1}) with eps = 2^-m; m is
    grown until the result is Generic and every vertex sign vector is stable
    under two further halvings of eps.
    """
    cls = classify(z0)
    if cls.variant != "OneDegenerate" or frozenset(cls.jvan) != frozenset(jvan):
        raise ArrangementError("perturb requires a OneDegenerate matrix "
                               "with the given vanishing tuple")
    jk = tuple(jvan)[-1]
    if jk == 0:
        raise ArrangementError("cannot perturb the pinned 0-th column")

    def candidate(m: int) -> CoeffMatrix:
        eps = Fraction(1, 2 ** m)
        col = z0.column(jk)
        new_col = [col[i] + eps ** (i + 1) for i in range(z0.k + 1)]
        return z0.with_column(jk, new_col)

    for m in range(2, max_steps):
        z = candidate(m)
        if classify(z).variant != "Generic":
            continue
        z1, z2 = candidate(m + 1), candidate(m + 2)
        if classify(z1).variant != "Generic" or classify(z2).variant != "Generic":
            continue
        t0, t1, t2 = (_vertex_sign_table(w) for w in (z, z1, z2))
        if set(t0) == set(t1) == set(t2) and all(
            t0[key] == t1[key] == t2[key] for key in t0
        ):
            return z
    raise ArrangementError("no stable perturbation found (ill-conditioned input)")


def coeff_matrix_from_json(obj) -> CoeffMatrix:
    try:
        return CoeffMatrix(int(obj["k"]), int(obj["n"]),
                           [[Fraction(v) for v in row] for row in obj["entries"]])
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise ArrangementError(f"bad matrix JSON: {exc}") from exc


def coeff_matrix_from_csv(text: str) -> CoeffMatrix:
    """Rows of comma-separated 'p/q' entries; k and n are inferred."""
    rows = [
        [Fraction(cell.strip()) for cell in line.split(",")]
        for line in text.strip().splitlines() if line.strip()
    ]
    if not rows:
        raise ArrangementError("empty CSV matrix")
    k = len(rows) - 1
    n = len(rows[0]) - k - 2
    if n < 1:
        raise ArrangementError("matrix too narrow for its height")
    return CoeffMatrix(k, n, rows)


def coeff_matrix_to_json(z: CoeffMatrix):
    return {
        "k": z.k,
        "n": z.n,
        "entries": [[str(v) for v in row] for row in z.rows],
    }


def classification_to_json(cls: Classification):
    out = {"variant": cls.variant}
    if cls.jvan is not None:
        out["jvan"] = list(cls.jvan)
    if cls.variant == "Other":
        out["vanishing"] = [list(t) for t in cls.vanishing]
    return out


class SpecialMatrix:
    """The structured coefficient matrix built from a k x n parameter block x.

    Layout: an identity block on columns 0..k, the x block on columns
    k+1..k+n with an all-ones top row, and an all-ones last column.
    """

    def __init__(self, x: Sequence[Sequence]):
        self.x = tuple(tuple(Fraction(v) for v in row) for row in x)
        self.k = len(self.x)
        if self.k == 0 or len(set(len(r) for r in self.x)) != 1:
            raise ArrangementError("x must be a nonempty rectangular matrix")
        self.n = len(self.x[0])

    @property
    def coeff_matrix(self) -> CoeffMatrix:
        k, n = self.k, self.n
        rows = []
        top = [Fraction(1)] + [Fraction(0)] * k + [Fraction(1)] * (n + 1)
        rows.append(top)
        for i in range(1, k + 1):
            row = [Fraction(0)] * (k + 1)
            row[i] = Fraction(1)
            row += [self.x[i - 1][j] for j in range(n)]
            row.append(Fraction(1))
            rows.append(row)
        return CoeffMatrix(k, n, rows)

    def vanishing_tuple(self, i: int, j: int) -> IndexTuple:
        """The tuple whose minor equals x[i-1][j-1]: the cell's own handle."""
        if not (1 <= i <= self.k and 1 <= j <= self.n):
            raise ArrangementError("cell indices are 1-based within the block")
        out = list(range(self.k + 1))
        out[i] = self.k + j
        return tuple(out)
