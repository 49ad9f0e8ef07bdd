"""Chambers of real arrangements and the degenerate homology pairing.

A chamber is encoded by its sign vector over the hyperplanes 1..k+n+1 (the
hyperplane at infinity is never crossed in the affine chart).  Feasibility
and boundedness questions are decided by exact Fourier-Motzkin elimination
on systems of strict/closed linear inequalities; nothing is floating point.

The generic pairing of loaded chambers is an oracle interface: evaluation
rules for it live outside this artifact, so values enter through a declared
table keyed by canonical sign-vector strings ('+'/'-' per hyperplane) and
the branch side.  What is computed here is the degenerate pairing obtained
from the oracle through the vanishing-cycle projection.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import CoeffMatrix, classify, vertex_point
from .field import ParamContext, RatFunc, parse_ratfunc

SignVector = Tuple[int, ...]


class HomologyError(ValueError):
    pass


class OracleGap(HomologyError):
    """The pairing oracle has no entry for a requested pair."""


# ---------------------------------------------------------------------------
# exact Fourier-Motzkin
# ---------------------------------------------------------------------------

# A constraint is (coeffs, const, strict): coeffs . t + const > 0 (or >= 0).
Constraint = Tuple[Tuple[Fraction, ...], Fraction, bool]


def fm_feasible(constraints: Sequence[Constraint], nvars: int) -> bool:
    """Exact feasibility of a system of linear inequalities over the rationals."""
    system = [(tuple(Fraction(c) for c in coeffs), Fraction(const), strict)
              for coeffs, const, strict in constraints]
    for var in range(nvars - 1, -1, -1):
        lowers = []   # coeff > 0: t_var > -rest/coeff
        uppers = []   # coeff < 0
        keep = []
        for coeffs, const, strict in system:
            c = coeffs[var]
            rest = coeffs[:var]
            if c == 0:
                keep.append((rest, const, strict))
            elif c > 0:
                lowers.append((tuple(x / c for x in rest), const / c, strict))
            else:
                uppers.append((tuple(x / -c for x in rest), const / -c, strict))
        for (lc, lk, ls) in lowers:
            for (uc, uk, us) in uppers:
                # lower: t > -(lc.t' + lk); upper: t < (uc.t' + uk)
                coeffs = tuple(a + b for a, b in zip(lc, uc))
                keep.append((coeffs, lk + uk, ls or us))
        system = keep
    for _, const, strict in system:
        if strict and const <= 0:
            return False
        if not strict and const < 0:
            return False
    return True


@dataclass(frozen=True)
class Chamber:
    signs: SignVector  # one entry of +1/-1 per hyperplane 1..k+n+1
    bounded: bool

    @property
    def id(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    @classmethod
    def parse_id(cls, text: str) -> SignVector:
        if any(ch not in "+-" for ch in text):
            raise HomologyError(f"bad chamber id {text!r}")
        return tuple(1 if ch == "+" else -1 for ch in text)


def _chamber_system(z: CoeffMatrix, signs: SignVector, strict: bool
                    ) -> List[Constraint]:
    out = []
    for j, s in zip(range(1, z.ncols), signs):
        const, coeffs = z.linear_form(j)
        out.append((tuple(s * c for c in coeffs), s * const, strict))
    return out


def _recession_unbounded(z: CoeffMatrix, signs: SignVector) -> bool:
    """Whether the recession cone of the chamber contains a nonzero ray."""
    base = []
    for j, s in zip(range(1, z.ncols), signs):
        _, coeffs = z.linear_form(j)
        base.append((tuple(s * c for c in coeffs), Fraction(0), False))
    for i in range(z.k):
        for direction in (1, -1):
            unit = [Fraction(0)] * z.k
            unit[i] = Fraction(direction)
            extra = [
                (tuple(unit), Fraction(-1), False),
                (tuple(-u for u in unit), Fraction(1), False),
            ]
            if fm_feasible(base + extra, z.k):
                return True
    return False


def enumerate_chambers(z: CoeffMatrix, threads: Optional[int] = None
                       ) -> List[Chamber]:
    """All realizable sign vectors with boundedness flags.

    Candidate sign vectors are checked independently; the worker count can
    be raised through the HYPERINT_THREADS environment variable.
    """
    if classify(z).variant not in ("Generic", "OneDegenerate"):
        raise HomologyError("chamber enumeration needs a Generic or "
                            "OneDegenerate matrix")
    m = z.ncols - 1
    candidates = list(itertools.product((1, -1), repeat=m))

    def check(signs):
        if not fm_feasible(_chamber_system(z, signs, strict=True), z.k):
            return None
        return Chamber(signs, bounded=not _recession_unbounded(z, signs))

    if threads is None:
        threads = int(os.environ.get("HYPERINT_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(check, candidates))
    else:
        results = [check(s) for s in candidates]
    return [c for c in results if c is not None]


def chamber_closure_touches(z: CoeffMatrix, chamber: Chamber, j: int) -> bool:
    """Whether the chamber's closure meets the hyperplane (L_j = 0)."""
    const, coeffs = z.linear_form(j)
    system = _chamber_system(z, chamber.signs, strict=False)
    system.append((tuple(coeffs), const, False))
    system.append((tuple(-c for c in coeffs), -const, False))
    return fm_feasible(system, z.k)


def closures_disjoint(z: CoeffMatrix, a: Chamber, b: Chamber) -> bool:
    joint = (_chamber_system(z, a.signs, strict=False)
             + _chamber_system(z, b.signs, strict=False))
    return not fm_feasible(joint, z.k)


def closure_contains_point(z: CoeffMatrix, chamber: Chamber,
                           point: Sequence[Fraction]) -> bool:
    for j, s in zip(range(1, z.ncols), chamber.signs):
        const, coeffs = z.linear_form(j)
        value = const + sum(c * Fraction(x) for c, x in zip(coeffs, point))
        if s * value < 0:
            return False
    return True


def vanishing_chamber(z: CoeffMatrix, jvan: Sequence[int]) -> Chamber:
    """The chamber that collapses when the perturbation is undone.

    It is the unique chamber whose closure meets exactly the hyperplanes of
    the vanishing tuple and no others; it is bounded precisely when the
    hyperplane at infinity is not part of the tuple.
    """
    jv = set(jvan)
    walls = sorted(jv - {0})
    others = [j for j in range(1, z.ncols) if j not in jv]
    want_bounded = 0 not in jv
    matches = []
    for chamber in enumerate_chambers(z):
        if chamber.bounded != want_bounded:
            continue
        if any(chamber_closure_touches(z, chamber, j) for j in others):
            continue
        if not all(chamber_closure_touches(z, chamber, j) for j in walls):
            continue
        matches.append(chamber)
    if len(matches) != 1:
        raise HomologyError(
            f"vanishing chamber not isolated (found {len(matches)}); "
            "the perturbation may be too coarse"
        )
    return matches[0]


def orth_complement(z: CoeffMatrix, chambers: Sequence[Chamber],
                    van: Chamber, jvan: Sequence[int]
                    ) -> Tuple[List[Chamber], Optional[Chamber]]:
    """Bounded chambers with closure disjoint from the vanishing chamber.

    When the vanishing tuple contains the hyperplane at infinity the
    complement misses exactly one bounded chamber: the opposite cone at the
    far vertex, returned as the exceptional chamber.  For a bounded
    vanishing chamber that uniqueness has no analogue in this chart and the
    exceptional slot is None.
    """
    perp = [
        c for c in chambers
        if c.bounded and c.signs != van.signs and closures_disjoint(z, c, van)
    ]
    dprime = None
    jv = tuple(jvan)
    if 0 in jv:
        far = vertex_point(z, tuple(j for j in jv if j != 0))
        if far is not None:
            hits = [
                c for c in chambers
                if c.bounded and c.signs != van.signs
                and closure_contains_point(z, c, far)
            ]
            if len(hits) == 1:
                dprime = hits[0]
    return perp, dprime


def limit_chamber(chamber: Chamber, z0: CoeffMatrix) -> Optional[Chamber]:
    """Reinterpret the sign vector over the degenerate matrix.

    Returns None exactly when the system becomes infeasible (the vanishing
    chamber's limit is the zero cycle, a distinguished value rather than an
    error).
    """
    if not fm_feasible(_chamber_system(z0, chamber.signs, strict=True), z0.k):
        return None
    return Chamber(chamber.signs,
                   bounded=not _recession_unbounded(z0, chamber.signs))


# ---------------------------------------------------------------------------
# loaded cycles and the pairing oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LoadedCycle:
    chamber_id: str
    side: str  # '+' loads u, '-' loads 1/u

    def __post_init__(self):
        if self.side not in ("+", "-"):
            raise HomologyError("side must be '+' or '-'")


class PairingOracle:
    """Declared table of generic loaded-chamber pairings, valued in lambda.

    Keys are (plus-side chamber id, minus-side chamber id); values are
    rational functions of the multiplicative parameters.
    """

    def __init__(self, ctx: ParamContext,
                 table: Dict[Tuple[str, str], RatFunc]):
        self.ctx = ctx
        self.table = dict(table)

    @classmethod
    def from_json(cls, obj) -> "PairingOracle":
        ctx = ParamContext(int(obj["k"]), int(obj["n"]), kind="lambda")
        table = {}
        for row in obj["pairs"]:
            key = (row["plus"], row["minus"])
            table[key] = parse_ratfunc(row["value"], ctx)
        return cls(ctx, table)

    def pairing(self, plus: LoadedCycle, minus: LoadedCycle) -> RatFunc:
        if plus.side != "+" or minus.side != "-":
            raise HomologyError("oracle pairings take a (+, -) pair")
        key = (plus.chamber_id, minus.chamber_id)
        if key not in self.table:
            raise OracleGap(f"oracle has no entry for {key}")
        return self.table[key]


def pairing_degenerate_h(sigma: LoadedCycle, tau: LoadedCycle,
                         van_id: str, oracle: PairingOracle) -> RatFunc:
    """Degenerate homology pairing via the vanishing-cycle projection."""
    van_plus = LoadedCycle(van_id, "+")
    van_minus = LoadedCycle(van_id, "-")
    base = oracle.pairing(sigma, tau)
    left = oracle.pairing(sigma, van_minus)
    right = oracle.pairing(van_plus, tau)
    if left.is_zero() or right.is_zero():
        return base
    return base - left * right / oracle.pairing(van_plus, van_minus)
