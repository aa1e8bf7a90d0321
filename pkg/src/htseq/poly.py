"""Dense univariate polynomials and rational functions.

Coefficients are :class:`fractions.Fraction` in practice; the arithmetic only
needs field operations, so cyclotomic coefficients also work for everything
except factorization and root finding, which are defined over Q only.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import sympy

DEGREE_CAP = 32


def _zero_like(c):
    return c * 0


def _int_vector(cs):
    den = 1
    for c in cs:
        if c.denominator != 1:
            den = lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in cs], den


def _mul_rational(a, b):
    """Product of Fraction coefficient lists via integer convolution."""
    if not all(type(c) is Fraction for c in a) or not all(type(c) is Fraction for c in b):
        a = [Fraction(c) for c in a]
        b = [Fraction(c) for c in b]
    ia, da = _int_vector(a)
    ib, db = _int_vector(b)
    out = [0] * (len(ia) + len(ib) - 1)
    for i, x in enumerate(ia):
        if x:
            for j, y in enumerate(ib):
                out[i + j] += x * y
    den = da * db
    if den == 1:
        return [Fraction(v) for v in out]
    return [Fraction(v, den) for v in out]


class Poly:
    """Polynomial with coefficients lowest degree first; zero is ``()``."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "n"):
        cs = [c if not isinstance(c, int) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def const(cls, c, var="n"):
        return cls([c], var)

    @classmethod
    def x(cls, var="n"):
        return cls([0, 1], var)

    @classmethod
    def linear(cls, a, b, var="n"):
        """a*var + b"""
        return cls([b, a], var)

    # basic queries -------------------------------------------------------
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def tc(self):
        """Lowest nonzero coefficient."""
        return next((c for c in self.coeffs if c != 0), Fraction(0))

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            return other
        return Poly([other], self.var)

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if other == 0:
                return Poly((), self.var)
            return Poly([c * other for c in self.coeffs], self.var)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly((), self.var)
        if type(a[0]) is Fraction and type(b[0]) is Fraction:
            return Poly(_mul_rational(a, b), self.var)
        out = [_zero_like(a[0])] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x != 0:
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Poly.const(1, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.deg()
        if len(r) <= db:
            return Poly((), self.var), self
        q = [Fraction(0)] * (len(r) - db)
        inv = 1 / other.lc()
        for i in range(len(r) - db - 1, -1, -1):
            c = r[i + db] * inv
            q[i] = c
            if c != 0:
                for k, bk in enumerate(other.coeffs):
                    r[i + k] = r[i + k] - c * bk
        return Poly(q, self.var), Poly(r[:db], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return RatFunc(self, other)
        return Poly([c / other for c in self.coeffs], self.var)

    def __call__(self, x):
        acc = _zero_like(x) if not isinstance(x, int) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.deg(), tuple(self.coeffs))

    # transformations -----------------------------------------------------
    def compose_affine(self, a, b):
        """p(a*x + b)."""
        lin = Poly([b, a], self.var)
        acc = Poly((), self.var)
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def shift(self, k):
        """p(x + k)."""
        if k == 0:
            return self
        return self.compose_affine(1, k)

    def monic(self):
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        if self.is_zero():
            return Fraction(1)
        den = lcm(*(Fraction(c).denominator for c in self.coeffs))
        num = 0
        for c in self.coeffs:
            num = gcd(num, int(c * den))
        return Fraction(num, den)

    def primitive(self):
        return self * (1 / self.content())

    def with_var(self, var):
        return Poly(self.coeffs, var)

    # printing ------------------------------------------------------------
    def __str__(self):
        return poly_str(self)

    def __repr__(self):
        return f"Poly({poly_str(self)!r})"


def _coef_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return f"({c})"


def poly_str(p: Poly, var: str | None = None) -> str:
    var = var or p.var
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.deg(), -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if isinstance(c, Fraction):
            neg = c < 0
            mag = -c if neg else c
            if mono and mag == 1:
                body = mono
            else:
                body = _coef_str(mag) + ("*" + mono if mono else "")
            parts.append(("-" if neg else "+", body))
        else:
            parts.append(("+", _coef_str(c) + ("*" + mono if mono else "")))
    out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(a, 0) = monic(a)."""
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly((), a.var)
    return (a * b).exact_div(poly_gcd(a, b)).monic()


# -- factorization over Q -------------------------------------------------------

_N = sympy.Symbol("x")


def _to_sympy(p: Poly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.coeffs])), _N, domain="QQ")


def _from_sympy(sp, var) -> Poly:
    return Poly([Fraction(int(c.p), int(c.q)) for c in reversed(sp.all_coeffs())], var)


def factor_over_q(p: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Return (content, [(monic irreducible, multiplicity), ...]).

    Ordering is by degree, then lexicographically on coefficients.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if p.deg() > DEGREE_CAP:
        raise ValueError(f"factorization degree cap {DEGREE_CAP} exceeded")
    if p.deg() == 0:
        return Fraction(p.lc()), []
    lead, facs = sympy.factor_list(_to_sympy(p))
    out = []
    for f, e in facs:
        fp = _from_sympy(f, p.var)
        out.append((fp.monic(), e))
    out.sort(key=lambda fe: (fe[0].sort_key(), fe[1]))
    return Fraction(p.lc()), out


def rational_roots(p: Poly) -> list[Fraction]:
    if p.is_zero():
        raise ValueError("zero polynomial has every root")
    if p.deg() < 1:
        return []
    if p.deg() == 1:
        return [-p.coeffs[0] / p.coeffs[1]]
    _, facs = factor_over_q(p)
    return sorted(-f.coeffs[0] for f, _ in facs if f.deg() == 1)


def integer_roots(p: Poly) -> list[int]:
    return [int(r) for r in rational_roots(p) if r.denominator == 1]


def poly_dilate(p: Poly, m: int, j: int) -> tuple[Poly, int]:
    """p((x - j)/m) cleared by m^deg; returns (poly, clearing factor)."""
    q = p.compose_affine(Fraction(1, m), Fraction(-j, m))
    factor = m ** max(p.deg(), 0)
    return q * factor, factor


# -- rational functions -----------------------------------------------------------


class RatFunc:
    """num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if den is None:
            den = Poly.const(1, num.var)
        elif not isinstance(den, Poly):
            den = Poly.const(den, num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            if num.is_zero():
                den = Poly.const(1, num.var)
            elif den.deg() > 0:
                g = poly_gcd(num, den)
                if g.deg() > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc()
            if lc != 1:
                num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, c, var="n"):
        return cls(Poly.const(c, var), Poly.const(1, var), _normalized=True)

    @property
    def var(self):
        return self.num.var

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.deg() == 0

    def is_const(self):
        return self.den.deg() == 0 and self.num.deg() <= 0

    def const_value(self):
        return self.num[0]

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, Poly.const(1, other.var), _normalized=True)
        return RatFunc.const(other, self.var)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.den.deg() == 0:
            return RatFunc(self.num * o.den + o.num, o.den, _normalized=True) if o.den.deg() > 0 else RatFunc(self.num + o.num)
        if o.den.deg() == 0:
            return RatFunc(self.num + o.num * self.den, self.den, _normalized=True)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc.const(0, self.var)
            return RatFunc(self.num * other, self.den, _normalized=True)
        o = self._lift(other)
        if self.den.deg() == 0 and o.den.deg() == 0:
            return RatFunc(self.num * o.num, Poly.const(1, self.var), _normalized=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num**k, self.den**k, _normalized=True)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole of rational function at {x}")
        return self.num(x) / d

    def shift(self, k):
        if k == 0:
            return self
        return RatFunc(self.num.shift(k), self.den.shift(k), _normalized=True).renormalize()

    def compose_affine(self, a, b):
        return RatFunc(self.num.compose_affine(a, b), self.den.compose_affine(a, b))

    def renormalize(self):
        lc = self.den.lc()
        if lc == 1:
            return self
        return RatFunc(self.num * (1 / lc), self.den * (1 / lc), _normalized=True)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = self._lift(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def sort_key(self):
        return (self.num.sort_key(), self.den.sort_key())

    def __str__(self):
        if self.den.deg() == 0:
            return poly_str(self.num)
        n = _wrap(poly_str(self.num))
        return f"{n}/{_wrap(poly_str(self.den))}"

    def __repr__(self):
        return f"RatFunc({self})"


def _wrap(s: str) -> str:
    return f"({s})" if ("+" in s or "-" in s[1:]) else s


def normalize_ratfunc(r: RatFunc) -> RatFunc:
    return RatFunc(r.num, r.den)
