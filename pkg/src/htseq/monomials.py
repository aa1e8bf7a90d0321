"""Rewrite an expression as a sum of hypergeometric monomials.

A monomial is coef(n) * prod_k ((k n)!)^e_k * base^n where coef lies in
Q(zeta)(n).  Trig atoms with affine arguments become geometric atoms via
Euler's formulas; periodic subterms that are not monomials (tan, chi, nested
trig, division by a periodic sum) are evaluated over one period and expanded
in roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm

from .cyclo import CycloNumber, I_UNIT, exp_i_pi
from .errors import UnsupportedStructureError
from .expr import (
    Add, Binomial, Chi, Div, Expr, Factorial, Mul, Neg, Num, Pow, Sub, Trig, Var,
    affine, contains, eval_at, is_periodic, pi_multiple, rational_power, to_string,
)
from .poly import Poly, RatFunc

ONE_RF = RatFunc.const(1)


# -- coefficients: dict {monic RatFunc over Q: CycloNumber} ----------------------------

def _key(r: RatFunc):
    """Split r into (monic-numerator RatFunc, leading constant)."""
    lc = r.num.lc()
    if lc == 1:
        return r, Fraction(1)
    return RatFunc(r.num * (1 / lc), r.den, _normalized=True), Fraction(lc)


def coef_const(c) -> dict:
    c = CycloNumber.coerce(c)
    return {} if c.is_zero() else {ONE_RF: c}


def coef_ratfunc(r: RatFunc, c=1) -> dict:
    if r.is_zero():
        return {}
    k, lc = _key(r)
    return {k: CycloNumber.coerce(c) * lc}


def coef_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        s = v if s is None else s + v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def coef_scale(a: dict, c) -> dict:
    c = CycloNumber.coerce(c)
    if c.is_zero():
        return {}
    return {k: v * c for k, v in a.items()}


def coef_mul(a: dict, b: dict) -> dict:
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            out = coef_add(out, coef_ratfunc(ka * kb, va * vb))
    return out


def coef_shift(a: dict, s: int) -> dict:
    out = {}
    for k, v in a.items():
        out = coef_add(out, coef_ratfunc(k.shift(s), v))
    return out


def coef_collapse(a: dict):
    """(RatFunc r, constant c) with a == c*r when all values are proportional."""
    items = list(a.items())
    if not items:
        return None
    c0 = items[0][1]
    r = RatFunc.const(0)
    for k, v in items:
        q = (v / c0).to_fraction()
        if q is None:
            return None
        r = r + k * q
    return r, c0


def coef_coordinates(a: dict, order: int, dim: int) -> list[RatFunc]:
    """Rational coordinates in the power basis of Q(zeta_order)."""
    out = [RatFunc.const(0) for _ in range(dim)]
    for k, v in a.items():
        if v.is_rational():
            cs = v.coords[:1]
        else:
            cs = v.embed(order).coords if v.order != order else v.coords
        for i, c in enumerate(cs):
            if c != 0:
                out[i] = out[i] + k * c
    return out


# -- monomials --------------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    """prod_k ((k n)!)^e_k * base^n"""

    facts: tuple = ()
    base: CycloNumber = CycloNumber.rational(1)

    def __mul__(self, other):
        d = dict(self.facts)
        for k, e in other.facts:
            d[k] = d.get(k, 0) + e
        facts = tuple(sorted((k, e) for k, e in d.items() if e != 0))
        return Signature(facts, self.base * other.base)

    def inverse(self):
        return Signature(tuple((k, -e) for k, e in self.facts), self.base.inverse())

    def shift_ratio(self, s: int):
        """atom(n+s)/atom(n) as (RatFunc over Q, constant)."""
        r = RatFunc.const(1)
        for k, e in self.facts:
            p = Poly.const(1)
            if s >= 0:
                for i in range(1, k * s + 1):
                    p = p * Poly.linear(k, i)
                r = r * RatFunc(p) ** e
            else:
                for i in range(k * s + 1, 1):
                    p = p * Poly.linear(k, i)
                r = r * RatFunc(p) ** (-e)
        return r, self.base**s

    def value(self, n: int) -> CycloNumber:
        v = self.base**n
        for k, e in self.facts:
            f = Fraction(factorial(k * n))
            v = v * (f**e)
        return v

    def __str__(self):
        parts = [f"({k}*n)!^{e}" if k != 1 else f"n!^{e}" for k, e in self.facts]
        if self.base != 1:
            parts.append(f"({self.base})^n")
        return "*".join(parts) or "1"


ONE_SIG = Signature()


class MonomialSum:
    """{Signature: coefficient dict}; zero coefficients are never stored."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c):
        return cls({ONE_SIG: coef_const(c)})

    def __add__(self, other):
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = coef_add(out.get(s, {}), c)
        return MonomialSum(out)

    def __neg__(self):
        return MonomialSum({s: coef_scale(c, -1) for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                s = s1 * s2
                out[s] = coef_add(out.get(s, {}), coef_mul(c1, c2))
        return MonomialSum(out)

    def is_zero(self):
        return not self.terms

    def single(self):
        """(signature, coef) when self is a single monomial with one coefficient key."""
        if len(self.terms) == 1:
            (s, c), = self.terms.items()
            col = coef_collapse(c)
            if col is not None and not col[0].is_zero():
                return s, coef_ratfunc(*col)
        return None

    def inverse(self):
        one = self.single()
        if one is None:
            raise UnsupportedStructureError("cannot invert a sum of monomials")
        s, c = one
        (k, v), = c.items()
        return MonomialSum({s.inverse(): coef_ratfunc(k.inverse(), v.inverse())})

    def field_order(self) -> int:
        n = 1
        for s, c in self.terms.items():
            for v in [s.base, *c.values()]:
                if not v.is_rational():
                    n = lcm(n, v.order)
        return n

    def value(self, n: int) -> CycloNumber:
        total = CycloNumber.rational(0)
        for s, c in self.terms.items():
            cv = CycloNumber.rational(0)
            for k, v in c.items():
                cv = cv + v * k(Fraction(n))
            total = total + cv * s.value(n)
        return total

    def __str__(self):
        parts = []
        for s, c in self.terms.items():
            cs = " + ".join(f"({v})*({k})" for k, v in c.items())
            parts.append(f"[{cs}]*{s}")
        return " + ".join(parts) or "0"


# -- periodic expansion -----------------------------------------------------------


def period_bound(e: Expr) -> int:
    if isinstance(e, Chi):
        return max(e.m, 1)
    if isinstance(e, Trig):
        x = pi_multiple(e)
        a = affine(x)
        if a is not None:
            return (a[0] / 2).denominator
        return period_bound(x)
    if isinstance(e, Pow):
        return period_bound(e.base)
    if isinstance(e, (Num,)):
        return 1
    out = 1
    for c in (getattr(e, "left", None), getattr(e, "right", None), getattr(e, "arg", None)):
        if isinstance(c, Expr):
            out = lcm(out, period_bound(c))
    return out


def periodic_values(e: Expr, bound: int | None = None) -> list[CycloNumber]:
    """Values over one minimal period."""
    p = bound or period_bound(e)
    vals = [eval_at(e, n) for n in range(p)]
    for d in range(1, p + 1):
        if p % d == 0 and all(vals[i] == vals[i % d] for i in range(p)):
            return vals[:d]
    return vals


def dft_monomials(values: list[CycloNumber]) -> MonomialSum:
    p = len(values)
    out = {}
    for l in range(p):
        c = CycloNumber.rational(0)
        for j, v in enumerate(values):
            c = c + v * CycloNumber.zeta(p, -l * j)
        c = c / p
        if not c.is_zero():
            base = CycloNumber.zeta(p, l) if l else CycloNumber.rational(1)
            out[Signature((), base)] = coef_const(c)
    return MonomialSum(out)


def periodic_monomials(e: Expr) -> MonomialSum:
    return dft_monomials(periodic_values(e))


# -- conversion ---------------------------------------------------------------------


def _unsupported(e, why):
    return UnsupportedStructureError(f"{why}: {to_string(e)}")


def _geometric(e: Pow) -> MonomialSum:
    """c^(a*n + b) for a constant c."""
    ab = affine(e.exp)
    if ab is None:
        raise _unsupported(e, "exponent is not affine in n")
    if contains(e.base, Var):
        raise _unsupported(e, "base of a variable power depends on n")
    a, b = ab
    c = eval_at(e.base, 0)
    q = c.to_fraction()
    if q is not None:
        base, const = rational_power(q, a), rational_power(q, b)
    elif a.denominator == 1 and b.denominator == 1:
        base, const = c ** int(a), c ** int(b)
    else:
        raise _unsupported(e, "fractional power of an irrational base")
    return MonomialSum({Signature((), base): coef_const(const)})


def _factorial(k: int, b: int) -> MonomialSum:
    """(k n + b)! as (k n)! times a rational function."""
    if k == 0:
        if b < 0:
            raise UnsupportedStructureError(f"factorial of the negative constant {b}")
        return MonomialSum.const(factorial(b))
    p = Poly.const(1)
    if b >= 0:
        for i in range(1, b + 1):
            p = p * Poly.linear(k, i)
        r = RatFunc(p)
    else:
        for i in range(b + 1, 1):
            p = p * Poly.linear(k, i)
        r = RatFunc(Poly.const(1), p)
    return MonomialSum({Signature(((k, 1),)): coef_ratfunc(r)})


def _int_affine(e: Expr, what: str):
    ab = affine(e)
    if ab is None or ab[0].denominator != 1 or ab[1].denominator != 1 or ab[0] < 0:
        raise _unsupported(e, f"{what} argument must be k*n+b with integers k >= 0, b")
    return int(ab[0]), int(ab[1])


def _trig(e: Trig) -> MonomialSum:
    x = pi_multiple(e)
    ab = affine(x)
    if ab is None or e.kind == "tan":
        return periodic_monomials(e)
    a, b = ab
    zp, zm = exp_i_pi(a), exp_i_pi(-a)
    cp, cm = exp_i_pi(b), exp_i_pi(-b)
    if e.kind == "cos":
        terms = [(zp, cp / 2), (zm, cm / 2)]
    else:
        two_i = 2 * I_UNIT
        terms = [(zp, cp / two_i), (zm, -cm / two_i)]
    out = MonomialSum()
    for base, c in terms:
        out = out + MonomialSum({Signature((), base): coef_const(c)})
    return out


def to_monomials(e: Expr) -> MonomialSum:
    if isinstance(e, Num):
        return MonomialSum.const(e.value)
    if isinstance(e, Var):
        return MonomialSum({ONE_SIG: coef_ratfunc(RatFunc(Poly.x()))})
    if isinstance(e, Neg):
        return -to_monomials(e.arg)
    if isinstance(e, Add):
        return to_monomials(e.left) + to_monomials(e.right)
    if isinstance(e, Sub):
        return to_monomials(e.left) - to_monomials(e.right)
    if isinstance(e, Mul):
        return to_monomials(e.left) * to_monomials(e.right)
    if isinstance(e, Div):
        num = to_monomials(e.left)
        den = to_monomials(e.right)
        if den.single() is not None:
            return num * den.inverse()
        if is_periodic(e.right):
            return num * periodic_monomials(Div(Num(Fraction(1)), e.right))
        raise _unsupported(e.right, "cannot divide by a non-monomial, non-periodic term")
    if isinstance(e, Pow):
        if contains(e.exp, Var):
            return _geometric(e)
        k = eval_at(e.exp, 0).to_fraction()
        if k is None or k.denominator != 1:
            if not contains(e.base, Var):
                return MonomialSum.const(eval_at(e, 0))
            raise _unsupported(e, "non-integer constant exponent")
        k = int(k)
        b = to_monomials(e.base)
        if k < 0:
            if b.single() is None:
                if is_periodic(e.base):
                    return periodic_monomials(e)
                raise _unsupported(e, "negative power of a sum")
            b, k = b.inverse(), -k
        out = MonomialSum.const(1)
        for _ in range(k):
            out = out * b
        return out
    if isinstance(e, Factorial):
        k, b = _int_affine(e.arg, "factorial")
        return _factorial(k, b)
    if isinstance(e, Binomial):
        a, b = _int_affine(e.top, "binomial")
        c, d = _int_affine(e.bottom, "binomial")
        if c > a:
            raise _unsupported(e, "binomial with bottom slope above top slope")
        return _factorial(a, b) * _factorial(c, d).inverse() * _factorial(a - c, b - d).inverse()
    if isinstance(e, Trig):
        return _trig(e)
    if isinstance(e, Chi):
        return periodic_monomials(e)
    raise _unsupported(e, "unsupported node")
