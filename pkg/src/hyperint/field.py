"""Exact arithmetic over the rational function fields in the exponent parameters.

Two parameter kinds are supported:

  * ``alpha``: additive exponents a0, ..., a_{k+n+1} with sum zero.  The last
    variable a_{k+n+1} is eliminated at construction as -(a0 + ... + a_{k+n}).
  * ``lambda``: multiplicative parameters l0, ..., l_{k+n+1} with product one.
    The last variable is eliminated as the inverse of the product of the rest.

A polynomial is a dict mapping exponent tuples (one slot per *free* variable)
to nonzero Fraction coefficients; the zero polynomial is the empty dict.
Rational functions are raw fractions of two polynomials.  There is no
multivariate GCD: equality is decided by cross-multiplication, and only a
light normalization (rational content and common monomial factors) is applied
to keep printed values readable.

All values are immutable after construction.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

Rat = Fraction

Exponent = Tuple[int, ...]

# Fixed prime modulus for random evaluation points a_j / RANDOM_EVAL_PRIME.
RANDOM_EVAL_PRIME = 1000003


class FieldError(ValueError):
    """Raised on invalid field operations (zero division, bad assignments)."""


class DenominatorVanished(FieldError):
    """A random assignment zeroed a denominator; retry with a new seed."""


class ParamContext:
    """Variable bookkeeping for one parameter family.

    ``nfree`` variables with indices 0..k+n are kept; index k+n+1 is always
    eliminated through the sum (alpha) or product (lambda) constraint.
    """

    def __init__(self, k: int, n: int, kind: str = "alpha"):
        if kind not in ("alpha", "lambda"):
            raise FieldError(f"unknown parameter kind {kind!r}")
        if k < 1 or n < 1:
            raise FieldError("need k >= 1 and n >= 1")
        self.k = k
        self.n = n
        self.kind = kind
        self.nparams = k + n + 2
        self.nfree = k + n + 1

    def __eq__(self, other):
        return (
            isinstance(other, ParamContext)
            and (self.k, self.n, self.kind) == (other.k, other.n, other.kind)
        )

    def __repr__(self):
        return f"ParamContext(k={self.k}, n={self.n}, kind={self.kind!r})"

    def var_name(self, j: int) -> str:
        prefix = "a" if self.kind == "alpha" else "l"
        return f"{prefix}{j}"

    def var(self, j: int) -> "RatFunc":
        """The j-th parameter as a rational function, honoring elimination."""
        if not 0 <= j <= self.nparams - 1:
            raise FieldError(f"parameter index {j} out of range")
        if j < self.nfree:
            exps = [0] * self.nfree
            exps[j] = 1
            mono = Poly(self, {tuple(exps): Fraction(1)})
            return RatFunc(mono, Poly.one(self))
        # eliminated last variable
        if self.kind == "alpha":
            terms = {}
            for i in range(self.nfree):
                exps = [0] * self.nfree
                exps[i] = 1
                terms[tuple(exps)] = Fraction(-1)
            return RatFunc(Poly(self, terms), Poly.one(self))
        prod_exps = tuple([1] * self.nfree)
        return RatFunc(Poly.one(self), Poly(self, {prod_exps: Fraction(1)}))

    def const(self, value) -> "RatFunc":
        return RatFunc(Poly.const(self, Fraction(value)), Poly.one(self))

    def zero(self) -> "RatFunc":
        return self.const(0)

    def one(self) -> "RatFunc":
        return self.const(1)

    def sum_vars(self, indices: Iterable[int]) -> "RatFunc":
        total = self.zero()
        for j in indices:
            total = total + self.var(j)
        return total

    def prod_vars(self, indices: Iterable[int]) -> "RatFunc":
        total = self.one()
        for j in indices:
            total = total * self.var(j)
        return total

    def full_assignment(self, free_values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        """Extend values of the free variables by the eliminated last one."""
        vals = [Fraction(v) for v in free_values]
        if len(vals) != self.nfree:
            raise FieldError(f"expected {self.nfree} values, got {len(vals)}")
        if self.kind == "alpha":
            vals.append(-sum(vals))
        else:
            prod = Fraction(1)
            for v in vals:
                if v == 0:
                    raise FieldError("lambda values must be nonzero")
                prod *= v
            vals.append(1 / prod)
        return tuple(vals)

    def random_assignment(self, seed, jvan: Sequence[int] | None = None
                          ) -> Tuple[Fraction, ...]:
        """Draw free-variable values a_j/Q, Q prime, honoring the exponent conditions.

        Rejects draws whose eliminated value (alpha: the balancing sum) lands
        in the integers, and, when ``jvan`` is given, draws violating the
        non-integrality (alpha) or non-unity (lambda) of the J-van aggregate.
        """
        rng = random.Random(seed)
        q = RANDOM_EVAL_PRIME
        for _ in range(1000):
            vals = [Fraction(rng.randrange(1, q), q) for _ in range(self.nfree)]
            full = self.full_assignment(vals)
            if self.kind == "alpha":
                if any(v.denominator == 1 for v in full):
                    continue
                if jvan is not None:
                    s = sum(full[j] for j in jvan)
                    if s.denominator == 1:
                        continue
            else:
                if any(v == 1 for v in full):
                    continue
                if jvan is not None:
                    p = Fraction(1)
                    for j in jvan:
                        p *= full[j]
                    if p == 1:
                        continue
            return tuple(vals)
        raise FieldError("could not draw an admissible assignment")


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: ParamContext, terms: Mapping[Exponent, Fraction]):
        self.ctx = ctx
        self.terms: Dict[Exponent, Fraction] = {
            e: c for e, c in terms.items() if c != 0
        }

    @classmethod
    def const(cls, ctx: ParamContext, value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return cls(ctx, {})
        return cls(ctx, {(0,) * ctx.nfree: c})

    @classmethod
    def one(cls, ctx: ParamContext) -> "Poly":
        return cls.const(ctx, 1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Poly(self.ctx, out)

    def __neg__(self) -> "Poly":
        return Poly(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Poly(self.ctx, out)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if c == 0:
            return Poly(self.ctx, {})
        return Poly(self.ctx, {e: cf * c for e, cf in self.terms.items()})

    def eval(self, values: Sequence[Fraction]) -> Fraction:
        if len(values) != self.ctx.nfree:
            raise FieldError("assignment arity mismatch")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, p in zip(values, e):
                if p:
                    term *= Fraction(v) ** p
            total += term
        return total

    def shift(self, deltas: Mapping[int, int]) -> "Poly":
        """Substitute var_i -> var_i + deltas[i] (integer shifts only)."""
        out = Poly.const(self.ctx, 0)
        for e, c in self.terms.items():
            term = Poly.const(self.ctx, c)
            for i, p in enumerate(e):
                if p == 0:
                    continue
                base_exps = [0] * self.ctx.nfree
                base_exps[i] = 1
                base = Poly(self.ctx, {tuple(base_exps): Fraction(1)})
                d = deltas.get(i, 0)
                if d:
                    base = base + Poly.const(self.ctx, d)
                for _ in range(p):
                    term = term * base
            out = out + term
        return out

    def max_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.ctx.nfree
        return tuple(
            max(e[i] for e in self.terms) for i in range(self.ctx.nfree)
        )

    def min_exponents(self) -> Exponent:
        if not self.terms:
            return (0,) * self.ctx.nfree
        return tuple(
            min(e[i] for e in self.terms) for i in range(self.ctx.nfree)
        )

    def reverse_vars(self) -> "Poly":
        """Substitute var_i -> 1/var_i and clear the resulting monomial."""
        m = self.max_exponents()
        out = {tuple(a - b for a, b in zip(m, e)): c for e, c in self.terms.items()}
        return Poly(self.ctx, out)

    def leading(self) -> Tuple[Exponent, Fraction]:
        """Leading term under lexicographic order (largest exponent tuple)."""
        if not self.terms:
            raise FieldError("zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    def div_exact(self, divisor: "Poly") -> "Poly":
        """Exact polynomial division; raises if the division leaves a remainder.

        Used by fraction-free elimination, where divisibility is guaranteed.
        """
        if divisor.is_zero():
            raise FieldError("division by the zero polynomial")
        rem = dict(self.terms)
        de, dc = divisor.leading()
        quot: Dict[Exponent, Fraction] = {}
        while rem:
            e = max(rem)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, de))
            if any(x < 0 for x in qe):
                raise FieldError("inexact polynomial division")
            qc = c / dc
            quot[qe] = quot.get(qe, Fraction(0)) + qc
            for te, tc in divisor.terms.items():
                ne = tuple(a + b for a, b in zip(qe, te))
                s = rem.get(ne, Fraction(0)) - qc * tc
                if s == 0:
                    rem.pop(ne, None)
                else:
                    rem[ne] = s
        return Poly(self.ctx, quot)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def _sorted_terms(p: Poly):
    # graded lexicographic, highest first, for a stable printed form
    return sorted(p.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in _sorted_terms(p):
        mono = "*".join(
            f"{p.ctx.var_name(i)}^{x}" if x > 1 else p.ctx.var_name(i)
            for i, x in enumerate(e) if x
        )
        coeff = abs(c)
        if mono and coeff == 1:
            body = mono
        elif mono:
            body = f"{coeff}*{mono}"
        else:
            body = str(coeff)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class RatFunc:
    """Rational function numer/denom; kept as a raw fraction (no GCD)."""

    __slots__ = ("numer", "denom")

    def __init__(self, numer: Poly, denom: Poly, normalize: bool = True):
        if denom.is_zero():
            raise FieldError("zero denominator")
        if numer.ctx != denom.ctx:
            raise FieldError("mixed parameter contexts")
        if normalize:
            numer, denom = _light_normalize(numer, denom)
        self.numer = numer
        self.denom = denom

    @property
    def ctx(self) -> ParamContext:
        return self.numer.ctx

    def is_zero(self) -> bool:
        return self.numer.is_zero()

    def __add__(self, other: "RatFunc") -> "RatFunc":
        # merge through the monomial x residual split of the denominators:
        # repeated residual factors (the typical shared pole) then appear
        # once instead of compounding multiplicatively
        m1, r1 = _split_monomial(self.denom)
        m2, r2 = _split_monomial(other.denom)
        lcm = tuple(max(a, b) for a, b in zip(m1, m2))
        f1 = _monomial(self.ctx, tuple(a - b for a, b in zip(lcm, m1)))
        f2 = _monomial(self.ctx, tuple(a - b for a, b in zip(lcm, m2)))
        if r1 == r2:
            return RatFunc(self.numer * f1 + other.numer * f2,
                           _monomial(self.ctx, lcm) * r1)
        s = _try_div(r2, r1)
        if s is not None:
            return RatFunc(self.numer * f1 * s + other.numer * f2,
                           _monomial(self.ctx, lcm) * r2)
        s = _try_div(r1, r2)
        if s is not None:
            return RatFunc(self.numer * f1 + other.numer * f2 * s,
                           _monomial(self.ctx, lcm) * r1)
        return RatFunc(self.numer * f1 * r2 + other.numer * f2 * r1,
                       _monomial(self.ctx, lcm) * r1 * r2)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.numer, self.denom, normalize=False)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.numer * other.numer, self.denom * other.denom)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise FieldError("division by the zero rational function")
        return RatFunc(self.numer * other.denom, self.denom * other.numer)

    def __eq__(self, other):
        """Exact equality via cross-multiplication."""
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.numer * other.denom) == (other.numer * self.denom)

    def eval(self, values: Sequence[Fraction]) -> Fraction:
        den = self.denom.eval(values)
        if den == 0:
            raise DenominatorVanished("assignment zeroes the denominator")
        return self.numer.eval(values) / den

    def shift(self, deltas: Mapping[int, int]) -> "RatFunc":
        return RatFunc(self.numer.shift(deltas), self.denom.shift(deltas))

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)})"


def _split_monomial(p: Poly) -> Tuple[Exponent, Poly]:
    """Factor a polynomial as monomial * residual (residual has min degree 0)."""
    m = p.min_exponents()
    if not any(m):
        return m, p
    residual = Poly(p.ctx, {
        tuple(a - b for a, b in zip(e, m)): c for e, c in p.terms.items()
    })
    return m, residual


def _monomial(ctx: ParamContext, exps: Exponent) -> Poly:
    return Poly(ctx, {tuple(exps): Fraction(1)})


def _try_div(a: Poly, b: Poly, max_terms: int = 64) -> Optional[Poly]:
    """a / b when the division is exact and both operands are small."""
    if len(a.terms) > max_terms or len(b.terms) > max_terms:
        return None
    if len(b.terms) > len(a.terms):
        return None
    try:
        return a.div_exact(b)
    except FieldError:
        return None


def _light_normalize(numer: Poly, denom: Poly) -> Tuple[Poly, Poly]:
    """Divide out rational content, common monomial factors, and (bounded)
    a shared residual factor; no full multivariate GCD is attempted."""
    if numer.is_zero():
        return numer, Poly.one(denom.ctx)
    # common monomial factor
    nmin = numer.min_exponents()
    dmin = denom.min_exponents()
    common = tuple(min(a, b) for a, b in zip(nmin, dmin))
    if any(common):
        numer = Poly(numer.ctx, {
            tuple(a - b for a, b in zip(e, common)): c
            for e, c in numer.terms.items()
        })
        denom = Poly(denom.ctx, {
            tuple(a - b for a, b in zip(e, common)): c
            for e, c in denom.terms.items()
        })
    # cancel the denominator's residual when it divides the numerator whole
    dm, dres = _split_monomial(denom)
    if len(dres.terms) > 1:
        quotient = _try_div(numer, dres)
        if quotient is not None:
            numer = quotient
            denom = _monomial(denom.ctx, dm)
    # rational content of the denominator, sign fixed by its leading term
    _, lead = denom.leading()
    scale = 1 / lead
    num_coeffs = list(numer.terms.values())
    g = num_coeffs[0]
    for c in num_coeffs[1:]:
        g = Fraction(
            _gcd(g.numerator * c.denominator, c.numerator * g.denominator),
            g.denominator * c.denominator,
        )
    den_coeffs = list(denom.terms.values())
    for c in den_coeffs:
        g = Fraction(
            _gcd(g.numerator * c.denominator, c.numerator * g.denominator),
            g.denominator * c.denominator,
        )
    if g != 0:
        scale = 1 / (g * (1 if lead > 0 else -1))
    return numer.scale(scale), denom.scale(scale)


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def format_ratfunc(f: RatFunc) -> str:
    num = format_poly(f.numer)
    if f.denom == Poly.one(f.ctx):
        return num
    return f"({num})/({format_poly(f.denom)})"


def dualize(f: RatFunc) -> RatFunc:
    """The duality involution: negate every alpha, or invert every lambda."""
    ctx = f.ctx
    if ctx.kind == "alpha":
        def flip(p: Poly) -> Poly:
            return Poly(ctx, {
                e: (c if sum(e) % 2 == 0 else -c) for e, c in p.terms.items()
            })
        return RatFunc(flip(f.numer), flip(f.denom))
    # lambda kind: substitute l -> 1/l and clear monomials from both sides
    nrev = f.numer.reverse_vars()
    drev = f.denom.reverse_vars()
    nmax = f.numer.max_exponents()
    dmax = f.denom.max_exponents()
    # numer/l^nmax over denom/l^dmax  ==  numer * l^dmax / (denom * l^nmax)
    nres = nrev * Poly(ctx, {dmax: Fraction(1)})
    dres = drev * Poly(ctx, {nmax: Fraction(1)})
    return RatFunc(nres, dres)


def eval_random(f: RatFunc, seed, jvan: Sequence[int] | None = None) -> Fraction:
    """Evaluate at a pseudorandom admissible point; exact rational result.

    Raises DenominatorVanished when the drawn point zeroes the denominator;
    callers retry with a fresh seed.
    """
    values = f.ctx.random_assignment(seed, jvan=jvan)
    return f.eval(values)


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------

class _Parser:
    """Recursive-descent parser for the canonical rational-function text."""

    def __init__(self, text: str, ctx: ParamContext):
        self.text = text
        self.pos = 0
        self.ctx = ctx

    def parse(self) -> RatFunc:
        value = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise FieldError(f"trailing input at {self.pos}: {self.text!r}")
        return value

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expr(self) -> RatFunc:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.text[self.pos] == "-":
                sign = -sign
            self.pos += 1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.power()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.power()
            value = value * rhs if op == "*" else value / rhs
        return value

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            exp = self.integer()
            out = self.ctx.one()
            inv = exp < 0
            for _ in range(abs(exp)):
                out = out * base
            return self.ctx.one() / out if inv else out
        return base

    def atom(self) -> RatFunc:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise FieldError("unbalanced parenthesis")
            self.pos += 1
            return value
        if ch == "-":
            self.pos += 1
            return -self.atom()
        if ch.isdigit():
            return self.ctx.const(self.integer())
        if ch.isalpha():
            start = self.pos
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            name = self.text[start:self.pos]
            expected_prefix = "a" if self.ctx.kind == "alpha" else "l"
            if not name.startswith(expected_prefix) or len(name) < 2:
                raise FieldError(f"unknown variable {name!r}")
            return self.ctx.var(int(name[1:]))
        raise FieldError(f"unexpected character {ch!r} at {self.pos}")

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise FieldError("expected an integer")
        return int(self.text[start:self.pos])


def parse_ratfunc(text: str, ctx: ParamContext) -> RatFunc:
    return _Parser(text, ctx).parse()
