import random
from fractions import Fraction
from math import comb

import pytest

from hyperint import fixtures
from hyperint.arrangement import (
    CoeffMatrix,
    classify,
    coeff_matrix_from_json,
    minor,
    perturb,
    vertex_point,
)
from hyperint.field import ParamContext, parse_ratfunc
from hyperint.homology import (
    Chamber,
    HomologyError,
    LoadedCycle,
    OracleGap,
    PairingOracle,
    chamber_closure_touches,
    closures_disjoint,
    enumerate_chambers,
    fm_feasible,
    limit_chamber,
    orth_complement,
    pairing_degenerate_h,
    vanishing_chamber,
)

LCTX = ParamContext(2, 2, kind="lambda")


def fig_left():
    return coeff_matrix_from_json(fixtures.load("figure1_left.json"))


def fig_right():
    return coeff_matrix_from_json(fixtures.load("figure1_right.json"))


def bounded(chambers):
    return [c for c in chambers if c.bounded]


def test_fm_basic():
    # x > 0, x < 1 feasible; x > 0, x < 0 not
    assert fm_feasible([((Fraction(1),), Fraction(0), True),
                        ((Fraction(-1),), Fraction(1), True)], 1)
    assert not fm_feasible([((Fraction(1),), Fraction(0), True),
                            ((Fraction(-1),), Fraction(0), True)], 1)
    # boundary point allowed only when closed
    assert fm_feasible([((Fraction(1),), Fraction(0), False),
                        ((Fraction(-1),), Fraction(0), False)], 1)


def test_chamber_counts_fixtures():
    left = enumerate_chambers(fig_left())
    right = enumerate_chambers(fig_right())
    assert len(bounded(left)) == comb(4, 2)
    assert len(bounded(right)) == comb(4, 2) - 1


def test_three_points_on_a_line():
    z = CoeffMatrix(1, 1, [[1, -1, -3, -7], [0, 1, 1, 1]])
    chambers = enumerate_chambers(z)
    assert len(bounded(chambers)) == 2
    assert len(chambers) == 4


def _random_generic(rng, k, n):
    while True:
        rows = [[Fraction(1)] + [Fraction(0)] * (k + n + 1)]
        for i in range(k):
            rows.append([Fraction(0)] * (k + n + 2))
        for j in range(1, k + n + 2):
            for i in range(k + 1):
                if j == 0:
                    continue
                rows[i][j] = Fraction(rng.randrange(-12, 13))
        try:
            z = CoeffMatrix(k, n, rows)
        except Exception:
            continue
        if classify(z).variant == "Generic":
            return z


def _random_one_degenerate(rng, k, n, infinity: bool):
    """Force exactly one vanishing minor, through or away from infinity.

    The last-row entry of one column of the chosen tuple is solved for so
    that the tuple's minor vanishes (the determinant is affine in it).
    """
    from hyperint.linalg import det_fraction

    while True:
        z = _random_generic(rng, k, n)
        cols = list(range(1, k + n + 2))
        if infinity:
            jv = (0,) + tuple(sorted(rng.sample(cols, k)))
        else:
            jv = tuple(sorted(rng.sample(cols, k + 1)))
        target = jv[-1]
        sub = [[z.rows[i][j] for j in jv] for i in range(k + 1)]
        c = jv.index(target)
        r = k
        minor_rc = det_fraction([
            [sub[i][cc] for cc in range(k + 1) if cc != c]
            for i in range(k + 1) if i != r
        ])
        cofactor = minor_rc if (r + c) % 2 == 0 else -minor_rc
        if cofactor == 0:
            continue
        full = det_fraction(sub)
        new_col = list(z.column(target))
        new_col[r] = new_col[r] - full / cofactor
        z2 = z.with_column(target, new_col)
        if minor(z2, jv) != 0:
            continue
        cls = classify(z2)
        if cls.variant == "OneDegenerate" and set(cls.jvan) == set(jv):
            return z2, jv


def test_random_chamber_counts():
    rng = random.Random(99)
    done_generic = 0
    done_degenerate = 0
    for n in (1, 2, 3):
        for rep in range(4 if n != 3 else 2):
            z = _random_generic(rng, 2, n)
            assert len(bounded(enumerate_chambers(z))) == comb(2 + n, 2)
            done_generic += 1
            z0, jv = _random_one_degenerate(rng, 2, n, infinity=bool(rep % 2))
            assert len(bounded(enumerate_chambers(z0))) == comb(2 + n, 2) - 1
            done_degenerate += 1
    assert done_generic == 10
    assert done_degenerate == 10


def test_vanishing_chamber_fixture():
    z = fig_left()
    van = vanishing_chamber(z, (1, 2, 3))
    assert van.id == "+-+++"
    assert van.bounded


def test_vanishing_chamber_shrinks():
    z0 = fig_right()
    diams = []
    for m in (6, 7, 8):
        eps = Fraction(1, 2 ** m)
        col = z0.column(3)
        z = z0.with_column(3, [col[i] + eps ** (i + 1) for i in range(3)])
        assert classify(z).variant == "Generic"
        pts = [vertex_point(z, pair) for pair in ((1, 2), (1, 3), (2, 3))]
        d2 = max(
            sum((a - b) ** 2 for a, b in zip(p, q))
            for p in pts for q in pts
        )
        diams.append(d2)
    assert diams[0] > diams[1] > diams[2]
    # roughly quarters (squared distances) per halving of the step
    assert diams[2] < diams[0] * Fraction(2, 5)


def test_vanishing_chamber_unbounded_at_infinity():
    rng = random.Random(5)
    z0, jv = _random_one_degenerate(rng, 2, 2, infinity=True)
    z = perturb(z0, jv)
    van = vanishing_chamber(z, jv)
    assert not van.bounded


def test_orth_complement_infinity_case():
    rng = random.Random(13)
    for seed in range(3):
        z0, jv = _random_one_degenerate(rng, 2, 2, infinity=True)
        z = perturb(z0, jv)
        chambers = enumerate_chambers(z)
        van = vanishing_chamber(z, jv)
        perp, dprime = orth_complement(z, chambers, van, jv)
        assert len(perp) == comb(4, 2) - 1
        assert dprime is not None
        assert dprime.bounded
        assert dprime.signs not in {c.signs for c in perp}
        # the exceptional chamber touches the far vertex of the wedge
        far = vertex_point(z, tuple(j for j in jv if j != 0))
        assert far is not None
        # and the limit map is injective onto the bounded chambers below
        limits = {}
        for c in perp:
            lc = limit_chamber(c, z0)
            assert lc is not None
            assert lc.bounded
            limits[c.signs] = lc
        assert len({c.signs for c in limits.values()}) == len(perp)
        assert {c.signs for c in limits.values()} == {
            c.signs for c in bounded(enumerate_chambers(z0))
        }


def test_limit_chamber_fixture():
    z, z0 = fig_left(), fig_right()
    van = vanishing_chamber(z, (1, 2, 3))
    assert limit_chamber(van, z0) is None
    sigma = Chamber(Chamber.parse_id("+--++"), bounded=True)
    tau = Chamber(Chamber.parse_id("++-++"), bounded=True)
    for c in (sigma, tau):
        assert any(ch.signs == c.signs and ch.bounded
                   for ch in enumerate_chambers(z))
        lim = limit_chamber(c, z0)
        assert lim is not None and lim.bounded
    # every bounded chamber except the vanishing one survives
    survivors = 0
    for c in bounded(enumerate_chambers(z)):
        if limit_chamber(c, z0) is not None:
            survivors += 1
        else:
            assert c.signs == van.signs
    assert survivors == comb(4, 2) - 1


def test_fixture_adjacency_matches_oracle_support():
    # sigma' shares a wall with the vanishing triangle, tau' only a vertex,
    # the three far chambers are disjoint from it: the zero pattern of the
    # oracle table reflects exactly that
    z = fig_left()
    van = vanishing_chamber(z, (1, 2, 3))
    data = fixtures.load("homology_oracle.json")
    ids = {c.id: c for c in enumerate_chambers(z)}
    sigma = ids[data["cycles"]["sigma"]]
    tau = ids[data["cycles"]["tau"]]
    assert not closures_disjoint(z, sigma, van)
    assert not closures_disjoint(z, tau, van)
    for row in data["pairs"]:
        if row["value"] == "0":
            other = row["plus"] if row["minus"] == van.id else row["minus"]
            assert closures_disjoint(z, ids[other], van)


def test_degenerate_pairing_reproduces_final_displays():
    data = fixtures.load("homology_oracle.json")
    oracle = PairingOracle.from_json(data)
    van_id = data["vanishing"]
    sigma_p = LoadedCycle(data["cycles"]["sigma"], "+")
    sigma_m = LoadedCycle(data["cycles"]["sigma"], "-")
    tau_m = LoadedCycle(data["cycles"]["tau"], "-")

    got_ss = pairing_degenerate_h(sigma_p, sigma_m, van_id, oracle)
    got_st = pairing_degenerate_h(sigma_p, tau_m, van_id, oracle)
    assert got_ss == parse_ratfunc(data["expected"]["sigma_sigma"], LCTX)
    assert got_st == parse_ratfunc(data["expected"]["sigma_tau"], LCTX)


def test_degenerate_pairing_trivial_when_orthogonal():
    data = fixtures.load("homology_oracle.json")
    oracle = PairingOracle.from_json(data)
    van_id = data["vanishing"]
    far = LoadedCycle("+---+", "+")
    vanm = LoadedCycle(van_id, "-")
    # a pair whose cross terms vanish passes through unchanged
    oracle.table[("+---+", "++--+")] = LCTX.one()
    got = pairing_degenerate_h(far, LoadedCycle("++--+", "-"), van_id, oracle)
    assert got == LCTX.one()


def test_oracle_gap_raises():
    data = fixtures.load("homology_oracle.json")
    oracle = PairingOracle.from_json(data)
    with pytest.raises(OracleGap):
        pairing_degenerate_h(LoadedCycle("++-++", "+"),
                             LoadedCycle("+--++", "-"),
                             data["vanishing"], oracle)


def test_block_structure_zero_against_vanishing():
    data = fixtures.load("homology_oracle.json")
    oracle = PairingOracle.from_json(data)
    van_id = data["vanishing"]
    z = fig_left()
    chambers = {c.id: c for c in enumerate_chambers(z)}
    van = chambers[van_id]
    for (plus_id, minus_id), value in oracle.table.items():
        if van_id in (plus_id, minus_id) and plus_id != minus_id:
            other = chambers[minus_id if plus_id == van_id else plus_id]
            if closures_disjoint(z, other, van):
                assert value.is_zero()


def test_vanishing_self_pairing_closed_form():
    # (1 - l1 l2 l3)/((1-l1)(1-l2)(1-l3)) equals the fixture's table entry
    data = fixtures.load("homology_oracle.json")
    oracle = PairingOracle.from_json(data)
    van_id = data["vanishing"]
    got = oracle.pairing(LoadedCycle(van_id, "+"), LoadedCycle(van_id, "-"))
    l1, l2, l3 = LCTX.var(1), LCTX.var(2), LCTX.var(3)
    one = LCTX.one()
    expected = (one - l1 * l2 * l3) / ((one - l1) * (one - l2) * (one - l3))
    assert got == expected
