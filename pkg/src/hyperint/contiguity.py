"""Contiguity representation matrices for the one-point-degenerate case.

The matrix expressing the parameter shift a -> a + e_l - e_{j0} on the
hypergeometric integral vector factors as

    conti_l = C(a^(l)) P_l(a^(l))^-1 D_l(z0) Q_l(a) C(a)^-1

with C, P_l, Q_l Gram matrices of degenerate pairings over the base family
and its two replacement families, and D_l a diagonal matrix of exact minor
ratios.  Two computation paths are provided: fraction-free elimination of
the evaluated Gram matrices (the oracle), and the closed-form inverses built
from R_l^-1 (the product).  Family order is aligned through the replacement
correspondence everywhere and asserted at every matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import CoeffMatrix, classify, index_family, minor, replace
from .cohomology import (
    CohomologyError,
    Family,
    GramMatrix,
    gram_degenerate,
    pairing_generic,
)
from .field import ParamContext, RatFunc
from .linalg import inverse_fraction, matmul_fraction


class ContiguityError(ValueError):
    pass


@dataclass(frozen=True)
class ShiftedParams:
    """The shift a -> a + e_l - e_{j0}; the zero-sum constraint is preserved."""

    l: int
    j0: int

    def deltas(self, ctx: ParamContext) -> Dict[int, int]:
        out: Dict[int, int] = {}
        if self.l < ctx.nfree:
            out[self.l] = out.get(self.l, 0) + 1
        if self.j0 < ctx.nfree:
            out[self.j0] = out.get(self.j0, 0) - 1
        return {i: d for i, d in out.items() if d}

    def apply(self, ctx: ParamContext, values: Sequence[Fraction]
              ) -> Tuple[Fraction, ...]:
        vals = list(values)
        for i, d in self.deltas(ctx).items():
            vals[i] += d
        full = ctx.full_assignment(vals)
        if ctx.kind == "alpha" and sum(full) != 0:
            raise ContiguityError("shift broke the zero-sum constraint")
        return tuple(vals)


class ContiguityContext:
    """Fixed data for one degenerate matrix: j0 inside the vanishing tuple,
    q outside it, and the base family of index tuples."""

    def __init__(self, z0: CoeffMatrix, j0: int, q: int):
        cls = classify(z0)
        if cls.variant != "OneDegenerate":
            raise ContiguityError("contiguity needs a OneDegenerate matrix")
        self.z0 = z0
        self.jvan: Tuple[int, ...] = cls.jvan
        if j0 not in self.jvan:
            raise ContiguityError("j0 must lie in the vanishing tuple")
        if q in self.jvan:
            raise ContiguityError("q must lie outside the vanishing tuple")
        self.j0 = j0
        self.q = q
        self.ctx = ParamContext(z0.k, z0.n, kind="alpha")
        self.family: Family = tuple(
            index_family(z0.k, z0.n, include=j0, exclude=q,
                         remove=[self.jvan])
        )

    @property
    def size(self) -> int:
        return len(self.family)

    def check_shift(self, l: int) -> None:
        if l == self.j0:
            raise ContiguityError("the shift index must differ from j0")
        if not 0 <= l <= self.z0.k + self.z0.n + 1:
            raise ContiguityError(f"shift index {l} out of range")

    def shift_families(self, l: int) -> Tuple[Family, Family]:
        """The two replacement families, aligned member-for-member with the
        base family: first swap l out for q, then swap j0 out for l."""
        self.check_shift(l)
        fam_l = tuple(
            replace(J, l, self.q) if l in J else J for J in self.family
        )
        fam_j0l = tuple(replace(J, self.j0, l) for J in fam_l)
        return fam_l, fam_j0l

    def gram(self, rows: Family, cols: Family) -> GramMatrix:
        return gram_degenerate(rows, cols, self.jvan, self.ctx)

    def gram_C(self) -> GramMatrix:
        return self.gram(self.family, self.family)

    def gram_P(self, l: int) -> GramMatrix:
        _, fam_j0l = self.shift_families(l)
        return self.gram(fam_j0l, self.family)

    def gram_Q(self, l: int) -> GramMatrix:
        fam_l, _ = self.shift_families(l)
        return self.gram(fam_l, self.family)

    def gram_R(self, l: int) -> GramMatrix:
        fam_l, fam_j0l = self.shift_families(l)
        return self.gram(fam_j0l, fam_l)

    def minor_ratio_diag(self, l: int) -> GramMatrix:
        """D_l: diagonal of |z0<j0 J l>| / |z0<J>| over the aligned families."""
        self.check_shift(l)
        fam_l, fam_j0l = self.shift_families(l)
        zero = self.ctx.zero()
        rows = []
        for i, (J, I) in enumerate(zip(fam_l, fam_j0l)):
            den = minor(self.z0, J)
            if den == 0:
                raise ContiguityError(f"unexpected vanishing minor at {J}")
            ratio = self.ctx.const(minor(self.z0, I) / den)
            rows.append(tuple(
                ratio if j == i else zero for j in range(len(fam_l))
            ))
        return GramMatrix(fam_j0l, fam_l, tuple(rows), weight=0)


def r_inverse_closed(cc: ContiguityContext, l: int) -> GramMatrix:
    """Closed form of R_l^-1: no elimination is performed.

    For a shift index outside the vanishing tuple this is the plain diagonal
    of parameter products over J - {j0}.  Inside the tuple, R_l is that
    diagonal minus a rank-one correction along the vanishing class, so its
    inverse gains the correction block

        N[a][b] = I(I_a, van) I(van, J_b) / (c2 d_a d_b) ,

    with c2 pinned to its closed value -a_q / prod(van); the generic pairing
    rule supplies the orientation signs of the family's tuples.
    """
    cc.check_shift(l)
    ctx = cc.ctx
    fam_l, fam_j0l = cc.shift_families(l)
    npos = len(fam_l)
    from .cohomology import pairing_generic

    diag = [pairing_generic(I, J, ctx) for I, J in zip(fam_j0l, fam_l)]
    entries = [[ctx.zero() for _ in range(npos)] for _ in range(npos)]
    for i in range(npos):
        entries[i][i] = ctx.one() / diag[i]
    if l in cc.jvan:
        c2 = -(ctx.var(cc.q) / ctx.prod_vars(cc.jvan))
        u = [pairing_generic(I, cc.jvan, ctx) for I in fam_j0l]
        w = [pairing_generic(cc.jvan, J, ctx) for J in fam_l]
        for a in range(npos):
            if u[a].is_zero():
                continue
            left = u[a] / (c2 * diag[a])
            for b in range(npos):
                if w[b].is_zero():
                    continue
                entries[a][b] = entries[a][b] + left * w[b] / diag[b]
    return GramMatrix(fam_l, fam_j0l,
                      tuple(tuple(row) for row in entries), weight=-cc.ctx.k)


def inverse_factorizations(cc: ContiguityContext, l: int
                           ) -> Dict[str, GramMatrix]:
    """Closed-form inverses of C, P_l and Q_l, using only R-type inverses.

    The sandwich pattern is  M[A,E]^-1 = M[U,E]^-1 M[U,V] M[A,V]^-1  for
    basis families U, V; picking U = V = the q-replacement family yields
    C^-1, and mixing in the l-families yields P_l^-1 and Q_l^-1.
    """
    cc.check_shift(l)
    _, fam_j0q = cc.shift_families(cc.q)
    fam_l, fam_j0l = cc.shift_families(l)
    rq_inv = r_inverse_closed(cc, cc.q)
    rl_inv = r_inverse_closed(cc, l)
    c_inv = rq_inv.matmul(cc.gram(fam_j0q, fam_j0q)).matmul(
        rq_inv.transpose())
    p_inv = rq_inv.matmul(cc.gram(fam_j0q, fam_l)).matmul(rl_inv)
    q_inv = rq_inv.matmul(cc.gram(fam_j0q, fam_j0l)).matmul(
        rl_inv.transpose())
    return {"C": c_inv, "P": p_inv, "Q": q_inv}


def conti_symbolic(cc: ContiguityContext, l: int,
                   max_size: int = 6) -> GramMatrix:
    """Contiguity matrix as exact rational functions (closed-form inverses).

    Symbolic assembly is limited to small matrices; beyond that, evaluate at
    exact parameter values instead.
    """
    cc.check_shift(l)
    if cc.size > max_size:
        raise ContiguityError(
            f"symbolic contiguity limited to size <= {max_size}; "
            "use the evaluated mode"
        )
    deltas = ShiftedParams(l, cc.j0).deltas(cc.ctx)
    inverses = inverse_factorizations(cc, l)
    c_shift = cc.gram_C().shift(deltas)
    p_inv_shift = inverses["P"].shift(deltas)
    d = cc.minor_ratio_diag(l)
    q = cc.gram_Q(l)
    c_inv = inverses["C"]
    out = c_shift.matmul(p_inv_shift).matmul(d).matmul(q).matmul(c_inv)
    if out.weight != 0:
        raise ContiguityError("scalar weights failed to cancel")
    return out


def conti_evaluated(cc: ContiguityContext, l: int,
                    values: Sequence[Fraction]) -> List[List[Fraction]]:
    """Contiguity matrix at an exact parameter assignment.

    Inverses are taken by exact elimination; a singular Gram matrix signals
    a violated genericity condition on the assignment and surfaces as a
    SingularMatrixError.
    """
    cc.check_shift(l)
    shifted = ShiftedParams(l, cc.j0).apply(cc.ctx, values)
    c_sh = cc.gram_C().evaluate(shifted).entries
    p_sh = cc.gram_P(l).evaluate(shifted).entries
    d = cc.minor_ratio_diag(l).evaluate(values).entries
    q = cc.gram_Q(l).evaluate(values).entries
    c = cc.gram_C().evaluate(values).entries
    out = matmul_fraction(c_sh, inverse_fraction(p_sh))
    out = matmul_fraction(out, d)
    out = matmul_fraction(out, q)
    out = matmul_fraction(out, inverse_fraction(c))
    return out
