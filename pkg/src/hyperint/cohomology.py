"""Intersection numbers of logarithmic cohomology classes, handled purely
through index combinatorics.

Every pairing value carries an implicit scalar (2*pi*i)^k that is never
materialized; Gram matrices record its exponent in ``weight`` so that
downstream products can assert that the scalars cancel.

Conventions: an index tuple is an ordered (k+1)-tuple of distinct column
indices.  Pairings are covariant under reordering (transpositions flip the
sign), which the position-based sign rule encodes; families derived from one
another always use positional replacement so that minor ratios and pairing
signs stay coherent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .arrangement import IndexTuple, index_family, replace
from .field import ParamContext, RatFunc
from .linalg import det_ratfunc, eval_matrix

Family = Tuple[IndexTuple, ...]


class CohomologyError(ValueError):
    pass


def _perm_sign(src: Sequence[int], dst: Sequence[int]) -> int:
    """Sign of the permutation carrying src onto dst (equal as sets)."""
    order = [dst.index(x) for x in src]
    sign = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign = -sign
    return sign


def pairing_generic(I: Sequence[int], J: Sequence[int],
                    ctx: ParamContext) -> RatFunc:
    """Intersection number of two logarithmic classes in the generic case.

    Modulo (2*pi*i)^k: the shared-set case gives sum/product of the tuple's
    parameters, an overlap of size k gives (-1)^(p+q) over the product of the
    shared parameters (p, q the slots of the odd elements), anything smaller
    pairs to zero.
    """
    I = tuple(I)
    J = tuple(J)
    si, sj = set(I), set(J)
    if si == sj:
        value = ctx.sum_vars(I) / ctx.prod_vars(I)
        sign = _perm_sign(I, J)
        return value if sign > 0 else -value
    common = si & sj
    if len(common) == len(I) - 1:
        # the slot rule presumes the shared block in matching order, so
        # canonicalize both tuples to ascending and track the two signs
        Ia, Ja = tuple(sorted(I)), tuple(sorted(J))
        sign = _perm_sign(I, Ia) * _perm_sign(J, Ja)
        p = Ia.index(next(x for x in Ia if x not in sj))
        q = Ja.index(next(x for x in Ja if x not in si))
        if (p + q) % 2:
            sign = -sign
        value = ctx.one() / ctx.prod_vars(common)
        return value if sign > 0 else -value
    return ctx.zero()


def pairing_degenerate(I: Sequence[int], J: Sequence[int],
                       jvan: Sequence[int], ctx: ParamContext) -> RatFunc:
    """Intersection number on the one-point-degenerate space.

    Evaluated entirely from generic pairings through the orthogonal
    projection along the vanishing class.  Pairing against the vanishing
    class itself is a misuse (it is the zero class downstream) and raises.
    """
    if set(I) == set(jvan) or set(J) == set(jvan):
        raise CohomologyError("pairing with the vanishing tuple is undefined "
                              "on the degenerate space")
    v = tuple(jvan)
    base = pairing_generic(I, J, ctx)
    left = pairing_generic(I, v, ctx)
    if left.is_zero():
        return base
    right = pairing_generic(v, J, ctx)
    if right.is_zero():
        return base
    return base - left * right / pairing_generic(v, v, ctx)


@dataclass(frozen=True)
class CohomClass:
    """A class as coordinates over a declared family of index tuples."""

    family: Family
    coords: Tuple[RatFunc, ...]
    side: str = "+"

    def __post_init__(self):
        if len(self.family) != len(self.coords):
            raise CohomologyError("coordinate/family length mismatch")
        if self.side not in ("+", "-"):
            raise CohomologyError("side must be '+' or '-'")

    @classmethod
    def basis_vector(cls, family: Sequence[IndexTuple], J: Sequence[int],
                     ctx: ParamContext, side: str = "+") -> "CohomClass":
        fam = tuple(tuple(t) for t in family)
        coords = [ctx.one() if t == tuple(J) else ctx.zero() for t in fam]
        if tuple(J) not in fam:
            raise CohomologyError(f"{tuple(J)} not in the declared family")
        return cls(fam, tuple(coords), side)

    def pair_with_tuple(self, J: Sequence[int], ctx: ParamContext) -> RatFunc:
        total = ctx.zero()
        for t, c in zip(self.family, self.coords):
            if c.is_zero():
                continue
            total = total + c * pairing_generic(t, J, ctx)
        return total

    def pair(self, other: "CohomClass", ctx: ParamContext) -> RatFunc:
        total = ctx.zero()
        for t, c in zip(self.family, self.coords):
            if c.is_zero():
                continue
            for u, d in zip(other.family, other.coords):
                if d.is_zero():
                    continue
                total = total + c * d * pairing_generic(t, u, ctx)
        return total

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)


def project_vanishing(v: CohomClass, jvan: Sequence[int],
                      ctx: ParamContext) -> CohomClass:
    """Project off the vanishing-class component.

    Returns v - (I(v, van) / I(van, van)) * van, expressed over a family that
    contains the vanishing tuple; the result pairs to zero against it.
    """
    jv = tuple(jvan)
    fam = list(v.family)
    coords = list(v.coords)
    if not any(set(t) == set(jv) for t in fam):
        fam.append(jv)
        coords.append(ctx.zero())
    coeff = v.pair_with_tuple(jv, ctx) / pairing_generic(jv, jv, ctx)
    out = []
    for t, c in zip(fam, coords):
        if set(t) == set(jv):
            sign = _perm_sign(jv, t)
            adj = coeff if sign > 0 else -coeff
            out.append(c - adj)
        else:
            out.append(c)
    return CohomClass(tuple(fam), tuple(out), v.side)


@dataclass(frozen=True)
class GramMatrix:
    """Matrix of pairing values between two aligned tuple families.

    ``weight`` is the exponent of the implicit (2*pi*i)^k scalar carried by
    every entry; products add weights, inverses negate them.
    """

    row_family: Family
    col_family: Family
    entries: Tuple[Tuple[RatFunc, ...], ...]
    weight: int

    def __post_init__(self):
        if len(self.entries) != len(self.row_family) or any(
            len(r) != len(self.col_family) for r in self.entries
        ):
            raise CohomologyError("entry shape does not match families")

    @property
    def size(self) -> Tuple[int, int]:
        return len(self.row_family), len(self.col_family)

    def entry(self, i: int, j: int) -> RatFunc:
        return self.entries[i][j]

    def matmul(self, other: "GramMatrix") -> "GramMatrix":
        if self.col_family != other.row_family:
            raise CohomologyError(
                "family misalignment in matrix product: "
                f"{self.col_family} vs {other.row_family}"
            )
        rows = []
        for i in range(len(self.row_family)):
            row = []
            for j in range(len(other.col_family)):
                acc = None
                for t in range(len(self.col_family)):
                    term = self.entries[i][t] * other.entries[t][j]
                    acc = term if acc is None else acc + term
                row.append(acc)
            rows.append(tuple(row))
        return GramMatrix(self.row_family, other.col_family, tuple(rows),
                          self.weight + other.weight)

    def transpose(self) -> "GramMatrix":
        return GramMatrix(
            self.col_family,
            self.row_family,
            tuple(zip(*self.entries)),
            self.weight,
        )

    def shift(self, deltas) -> "GramMatrix":
        return GramMatrix(
            self.row_family,
            self.col_family,
            tuple(tuple(e.shift(deltas) for e in row) for row in self.entries),
            self.weight,
        )

    def evaluate(self, values) -> "EvaluatedGram":
        return EvaluatedGram(self.row_family, self.col_family,
                             eval_matrix(self.entries, values), self.weight)

    def det(self) -> RatFunc:
        if len(self.row_family) != len(self.col_family):
            raise CohomologyError("determinant of a non-square Gram matrix")
        return det_ratfunc(self.entries)

    def is_identity(self) -> bool:
        n, m = self.size
        if n != m:
            return False
        ctx = self.entries[0][0].ctx
        one, zero = ctx.one(), ctx.zero()
        return all(
            self.entries[i][j] == (one if i == j else zero)
            for i in range(n) for j in range(n)
        )


@dataclass(frozen=True)
class EvaluatedGram:
    """A Gram matrix evaluated at an exact rational parameter assignment."""

    row_family: Family
    col_family: Family
    entries: List[List]
    weight: int


def gram_generic(rows: Sequence[IndexTuple], cols: Sequence[IndexTuple],
                 ctx: ParamContext) -> GramMatrix:
    return GramMatrix(
        tuple(rows), tuple(cols),
        tuple(
            tuple(pairing_generic(I, J, ctx) for J in cols) for I in rows
        ),
        weight=ctx.k,
    )


def gram_degenerate(rows: Sequence[IndexTuple], cols: Sequence[IndexTuple],
                    jvan: Sequence[int], ctx: ParamContext) -> GramMatrix:
    return GramMatrix(
        tuple(rows), tuple(cols),
        tuple(
            tuple(pairing_degenerate(I, J, jvan, ctx) for J in cols)
            for I in rows
        ),
        weight=ctx.k,
    )


@dataclass(frozen=True)
class BasisFamily:
    """A degenerate-space basis family plus its dual-side partner.

    For the three replacement-derived kinds the partner coincides with the
    family itself; for the paired kind the partner is aligned member by
    member through the value replacement l -> l'.
    """

    tuples: Family
    partner: Family


def basis_degenerate(kind: int, k: int, n: int, jvan: Sequence[int],
                     p: Optional[int] = None, q: Optional[int] = None,
                     slot: Optional[int] = None,
                     l: Optional[int] = None,
                     lp: Optional[int] = None) -> BasisFamily:
    """Basis families of the degenerate twisted cohomology, by kind.

    kind 1: drop the slot-th member j_l of the vanishing tuple, pin p outside
            it     -> { J : j_l not in J, p in J } minus the replaced tuple.
    kind 2: pin p in and q out (both outside the vanishing tuple)
            -> { J : q not in J, p in J } minus the replaced tuple.
    kind 3: pin q out, j_l in -> { J : q not in J, j_l in J } minus the
            vanishing tuple itself.
    kind 4: two members l != l' of the vanishing tuple and p outside; the
            family pins l in and l' out, its partner swaps them, aligned by
            the positional replacement.
    """
    jv = tuple(jvan)
    if kind == 1:
        if slot is None or p is None:
            raise CohomologyError("kind 1 needs slot and p")
        if not 0 <= slot <= k:
            raise CohomologyError("slot out of range")
        if p in jv:
            raise CohomologyError("p must lie outside the vanishing tuple")
        jl = jv[slot]
        removed = replace(jv, jl, p)
        fam = tuple(index_family(k, n, include=p, exclude=jl, remove=[removed]))
        return BasisFamily(fam, fam)
    if kind == 2:
        if slot is None or p is None or q is None:
            raise CohomologyError("kind 2 needs slot, p and q")
        if p in jv or q in jv or p == q:
            raise CohomologyError("p, q must be distinct and outside the "
                                  "vanishing tuple")
        jl = jv[slot]
        removed = replace(jv, jl, p)
        fam = tuple(index_family(k, n, include=p, exclude=q, remove=[removed]))
        return BasisFamily(fam, fam)
    if kind == 3:
        if slot is None or q is None:
            raise CohomologyError("kind 3 needs slot and q")
        if q in jv:
            raise CohomologyError("q must lie outside the vanishing tuple")
        jl = jv[slot]
        fam = tuple(index_family(k, n, include=jl, exclude=q, remove=[jv]))
        return BasisFamily(fam, fam)
    if kind == 4:
        if p is None or l is None or lp is None:
            raise CohomologyError("kind 4 needs p, l and l'")
        if p in jv:
            raise CohomologyError("p must lie outside the vanishing tuple")
        if l == lp or l not in jv or lp not in jv:
            raise CohomologyError("l, l' must be distinct members of the "
                                  "vanishing tuple")
        removed = replace(jv, lp, p)
        fam = tuple(index_family(k, n, include=l, exclude=lp,
                                 remove=[removed]))
        partner = tuple(
            replace(J, l, lp) if l in J else J for J in fam
        )
        return BasisFamily(fam, partner)
    raise CohomologyError(f"unknown basis kind {kind}")


def det_identity_check(k: int, n: int, jvan: Sequence[int], p: int,
                       l: int, lp: int, ctx: ParamContext,
                       values=None):
    """The two determinant evaluations certifying the paired basis.

    Returns (|C|, I(van,van)*|C0|, c2*|C1|, c2, -a_p/prod(van)); the first
    three must agree and the last two must agree.  With ``values`` the
    determinants are taken at that exact assignment instead of symbolically.
    """
    jv = tuple(jvan)
    if p in jv:
        raise CohomologyError("p must lie outside the vanishing tuple")
    if l == lp or l not in jv or lp not in jv:
        raise CohomologyError("l, l' must be distinct members of the "
                              "vanishing tuple")
    fam = basis_degenerate(4, k, n, jv, p=p, l=l, lp=lp)
    rows = (jv,) + fam.tuples
    cols = (jv,) + fam.partner
    big = gram_generic(rows, cols, ctx)
    c0 = gram_degenerate(fam.tuples, fam.partner, jv, ctx)
    # C1 is the diagonal of generic pairings along the alignment
    diag = [pairing_generic(J, Jp, ctx)
            for J, Jp in zip(fam.tuples, fam.partner)]
    ivv = pairing_generic(jv, jv, ctx)
    c2 = ivv
    for J, Jp, d in zip(fam.tuples, fam.partner, diag):
        num = pairing_generic(jv, Jp, ctx) * pairing_generic(J, jv, ctx)
        if num.is_zero():
            continue
        c2 = c2 - num / d
    c2_expected = -ctx.var(p) / ctx.prod_vars(jv)

    if values is None:
        det_big = big.det()
        det_c0 = c0.det()
        det_c1 = ctx.one()
        for d in diag:
            det_c1 = det_c1 * d
        return det_big, ivv * det_c0, c2 * det_c1, c2, c2_expected

    from .linalg import det_fraction

    det_big = det_fraction([[e.eval(values) for e in row] for row in big.entries])
    det_c0 = det_fraction([[e.eval(values) for e in row] for row in c0.entries])
    det_c1 = 1
    for d in diag:
        det_c1 = det_c1 * d.eval(values)
    return (
        det_big,
        ivv.eval(values) * det_c0,
        c2.eval(values) * det_c1,
        c2.eval(values),
        c2_expected.eval(values),
    )


def all_index_tuples(k: int, n: int) -> List[IndexTuple]:
    return [tuple(c) for c in
            itertools.combinations(range(k + n + 2), k + 1)]
