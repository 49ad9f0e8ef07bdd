import random
from fractions import Fraction

import pytest

from hyperint import fixtures
from hyperint.arrangement import (
    SpecialMatrix,
    classify,
    coeff_matrix_from_json,
    minor,
    replace,
)
from hyperint.cohomology import gram_degenerate, pairing_generic
from hyperint.contiguity import (
    ContiguityContext,
    ContiguityError,
    ShiftedParams,
    conti_evaluated,
    conti_symbolic,
    inverse_factorizations,
    r_inverse_closed,
)
from hyperint.field import ParamContext
from hyperint.linalg import inverse_fraction, matmul_fraction


def special_22():
    x = [[Fraction(0), Fraction(1, 40)],
         [Fraction(-1, 32), Fraction(7, 200)]]
    sm = SpecialMatrix(x)
    assert classify(sm.coeff_matrix).variant == "OneDegenerate"
    return sm.coeff_matrix


def context_22():
    return ContiguityContext(special_22(), j0=0, q=5)


def context_11():
    z = SpecialMatrix([[Fraction(0)]]).coeff_matrix
    assert classify(z).variant == "OneDegenerate"
    return ContiguityContext(z, j0=0, q=3)


def test_context_families():
    cc = context_22()
    assert cc.jvan == (0, 2, 3)
    assert cc.family == ((0, 1, 2), (0, 1, 3), (0, 1, 4), (0, 2, 4), (0, 3, 4))
    # shifting by q leaves the base family untouched
    fam_q, _ = cc.shift_families(cc.q)
    assert fam_q == cc.family


def test_shift_family_alignment():
    cc = context_22()
    fam_l, fam_j0l = cc.shift_families(2)
    for base, fl, fj in zip(cc.family, fam_l, fam_j0l):
        expected = replace(base, 2, cc.q) if 2 in base else base
        assert fl == expected
        assert fj == replace(fl, cc.j0, 2)


def test_shift_rejects_j0():
    cc = context_22()
    with pytest.raises(ContiguityError):
        cc.shift_families(cc.j0)


def test_minor_ratio_diag_values():
    cc = context_22()
    for l in (1, 2, 4):
        fam_l, fam_j0l = cc.shift_families(l)
        d = cc.minor_ratio_diag(l)
        for i, (J, I) in enumerate(zip(fam_l, fam_j0l)):
            expected = cc.ctx.const(minor(cc.z0, I) / minor(cc.z0, J))
            assert d.entries[i][i] == expected
            for j in range(len(fam_l)):
                if j != i:
                    assert d.entries[i][j].is_zero()


def test_diag_proof_identity_at_random_point():
    # phi<j0 J l> = (L_j0 / L_l) * (|z<j0 J l>| / |z<J>|) * phi<J> pointwise
    cc = context_22()
    rng = random.Random(7)
    z = cc.z0

    def lform(j, t):
        const, coeffs = z.linear_form(j)
        return const + sum(c * x for c, x in zip(coeffs, t))

    def phi(J, t):
        prod = Fraction(1)
        for j in J:
            prod *= lform(j, t)
        return minor(z, J) / prod

    for l in (1, 2, 4):
        fam_l, fam_j0l = cc.shift_families(l)
        for J, I in zip(fam_l, fam_j0l):
            while True:
                t = (Fraction(rng.randrange(-50, 50), 7),
                     Fraction(rng.randrange(-50, 50), 7))
                if all(lform(j, t) != 0 for j in range(6)):
                    break
            ratio = minor(z, I) / minor(z, J)
            lhs = phi(I, t)
            rhs = lform(cc.j0, t) / lform(l, t) * ratio * phi(J, t)
            assert lhs == rhs


@pytest.mark.parametrize("l", [1, 2, 4, 5])
def test_r_inverse_closed_exact(l):
    cc = context_22()
    r = cc.gram_R(l)
    r_inv = r_inverse_closed(cc, l)
    product = r.matmul(r_inv)
    assert product.weight == 0
    assert product.is_identity()


def test_r_inverse_diagonal_when_l_outside():
    cc = context_22()
    r_inv = r_inverse_closed(cc, 1)  # 1 is outside jvan = (0, 2, 3)
    n = cc.size
    for i in range(n):
        for j in range(n):
            if i != j:
                assert r_inv.entries[i][j].is_zero()


def test_r_inverse_has_correction_when_l_inside():
    cc = context_22()
    r_inv = r_inverse_closed(cc, 2)
    off = [
        (i, j)
        for i in range(cc.size)
        for j in range(cc.size)
        if i != j and not r_inv.entries[i][j].is_zero()
    ]
    assert off  # the correction block is present


def test_schur_scalar_matches_closed_form():
    # c2 = I(van,van) - sum_J I(<j0 J l>, van) I(van, J) / I(<j0 J l>, J)
    # collapses to -a_q / prod(van) exactly
    cc = context_22()
    ctx = cc.ctx
    for l in (2, 3):
        fam_l, fam_j0l = cc.shift_families(l)
        c2 = pairing_generic(cc.jvan, cc.jvan, ctx)
        for J, I in zip(fam_l, fam_j0l):
            num = pairing_generic(I, cc.jvan, ctx) * pairing_generic(
                cc.jvan, J, ctx)
            if num.is_zero():
                continue
            c2 = c2 - num / pairing_generic(I, J, ctx)
        expected = -(ctx.var(cc.q) / ctx.prod_vars(cc.jvan))
        assert c2 == expected


@pytest.mark.parametrize("l", [1, 2, 5])
def test_inverse_factorizations_symbolic(l):
    cc = context_22()
    inv = inverse_factorizations(cc, l)
    assert cc.gram_C().matmul(inv["C"]).is_identity()
    assert inv["P"].matmul(cc.gram_P(l)).is_identity()
    assert inv["Q"].matmul(cc.gram_Q(l)).is_identity()
    assert inv["C"].weight == -2
    assert inv["P"].weight == -2
    assert inv["Q"].weight == -2


@pytest.mark.parametrize("l", [2, 4])
def test_inverse_factorizations_match_elimination(l):
    cc = context_22()
    inv = inverse_factorizations(cc, l)
    for seed in range(5):
        values = cc.ctx.random_assignment(800 + seed, jvan=cc.jvan)
        for closed, gram in (
            (inv["C"], cc.gram_C()),
            (inv["P"], cc.gram_P(l)),
            (inv["Q"], cc.gram_Q(l)),
        ):
            direct = inverse_fraction(gram.evaluate(values).entries)
            got = closed.evaluate(values).entries
            assert got == direct


def test_conti_paths_agree_small():
    cc = context_11()
    assert cc.size == 1
    for l in (1, 2, 3):
        sym = conti_symbolic(cc, l)
        for seed in range(3):
            values = cc.ctx.random_assignment(40 + seed, jvan=cc.jvan)
            ev = conti_evaluated(cc, l, values)
            assert sym.entries[0][0].eval(values) == ev[0][0]


@pytest.mark.parametrize("l", [1, 2, 3, 4, 5])
def test_conti_paths_agree_22(l):
    cc = context_22()
    sym = conti_symbolic(cc, l)
    values = cc.ctx.random_assignment(123 + l, jvan=cc.jvan)
    ev = conti_evaluated(cc, l, values)
    for i in range(cc.size):
        for j in range(cc.size):
            assert sym.entries[i][j].eval(values) == ev[i][j]


def test_shifted_params_preserve_zero_sum():
    ctx = ParamContext(2, 2, kind="alpha")
    values = ctx.random_assignment(9)
    for l in (1, 2, 3, 4, 5):
        shifted = ShiftedParams(l, 0).apply(ctx, values)
        assert sum(ctx.full_assignment(shifted)) == 0


def test_symbolic_size_guard():
    z0 = coeff_matrix_from_json(fixtures.load("figure1_right.json"))
    cc = ContiguityContext(z0, j0=1, q=0)
    with pytest.raises(ContiguityError):
        conti_symbolic(cc, 2, max_size=4)


def test_figure_fixture_context():
    # the 6-line fixture also supports contiguity data (jvan = (1,2,3))
    z0 = coeff_matrix_from_json(fixtures.load("figure1_right.json"))
    cc = ContiguityContext(z0, j0=1, q=5)
    assert cc.size == 5
    ev = conti_evaluated(cc, 2, cc.ctx.random_assignment(77, jvan=cc.jvan))
    assert len(ev) == 5 and len(ev[0]) == 5
