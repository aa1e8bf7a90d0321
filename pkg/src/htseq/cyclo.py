"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q[z]/(Phi_N(z)) with :class:`fractions.Fraction` coordinates.  Rationals are
the elements of order 1.  Mixed-order arithmetic promotes both operands to
Q(zeta_L) with L = lcm of the orders.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import CapacityError, MalformedInputError, PoleError

MAX_DEGREE = 64


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n)[:-1]:
        num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        for k, dk in enumerate(den):
            num[i + k] -= c * dk
    return q


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def _check_capacity(n: int) -> None:
    if euler_phi(n) > MAX_DEGREE:
        raise CapacityError(f"cyclotomic field of order {n} has degree {euler_phi(n)} > {MAX_DEGREE}")


def _reduce(coeffs: list, n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            for k in range(deg):
                c[i - deg + k] -= t * phi[k]
        c[i] = Fraction(0)
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(c)


# -- small dense polynomial helpers over Q used for inversion ------------------

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(_trim(a)) >= len(b):
        c = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = c
        for k, bk in enumerate(b):
            a[s + k] -= c * bk
        a.pop()
    return q, a


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


class CycloNumber:
    """An element of Q(zeta_order); immutable."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords=()):
        _check_capacity(order)
        self.order = order
        self.coords = _reduce(list(coords), order)

    # construction ---------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "CycloNumber":
        return cls(1, [Fraction(q)])

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycloNumber":
        k %= n
        return cls(n, [0] * k + [1])

    @classmethod
    def coerce(cls, x) -> "CycloNumber":
        if isinstance(x, CycloNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycloNumber")

    # embeddings -----------------------------------------------------------
    def embed(self, big: int) -> "CycloNumber":
        if big % self.order:
            raise ValueError(f"Q(zeta_{self.order}) does not embed in Q(zeta_{big})")
        if big == self.order:
            return self
        step = big // self.order
        coeffs = [Fraction(0)] * (step * (len(self.coords) - 1) + 1)
        for i, c in enumerate(self.coords):
            coeffs[i * step] = c
        return CycloNumber(big, coeffs)

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_fraction(self) -> Fraction | None:
        return self.coords[0] if self.is_rational() else None

    # arithmetic -----------------------------------------------------------
    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.rational(other)
        elif not isinstance(other, CycloNumber):
            return None, None
        a, b = cyclo_promote(self, other)
        return a, b

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycloNumber(a.order, [x + y for x, y in zip(a.coords, b.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.order, [-x for x in self.coords])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycloNumber(a.order, [x - y for x, y in zip(a.coords, b.coords)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloNumber(self.order, [x * other for x in self.coords])
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        if b.is_rational():
            return CycloNumber(a.order, [x * b.coords[0] for x in a.coords])
        if a.is_rational():
            return CycloNumber(b.order, [x * a.coords[0] for x in b.coords])
        return CycloNumber(a.order, _pmul(list(a.coords), list(b.coords)))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return CycloNumber.rational(1 / self.coords[0])
        # extended Euclid: s*a + t*Phi = g (constant)
        r0 = [Fraction(c) for c in cyclotomic_poly(self.order)]
        r1 = _trim(list(self.coords))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        g = r1[0]
        return CycloNumber(self.order, [c / g for c in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycloNumber(self.order, [x / other for x in self.coords])
        if not isinstance(other, CycloNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloNumber.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = CycloNumber.rational(1)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, a: int = -1) -> "CycloNumber":
        """Galois action zeta -> zeta^a (complex conjugation by default)."""
        n = self.order
        coeffs = [Fraction(0)] * n
        for i, c in enumerate(self.coords):
            coeffs[(i * a) % n] += c
        return CycloNumber(n, coeffs)

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = cyclo_promote(self, other)
        return a.coords == b.coords

    def __hash__(self):
        # normalized trace is invariant under field embeddings
        return hash(self.normalized_trace())

    def normalized_trace(self) -> Fraction:
        n = self.order
        total = Fraction(0)
        for k, c in enumerate(self.coords):
            if c:
                g = gcd(n, k) if k else n
                total += c * mobius(n // g) * Fraction(euler_phi(n), euler_phi(n // g))
        return total / euler_phi(n)

    def __bool__(self):
        return not self.is_zero()

    def __complex__(self):
        import cmath

        z = cmath.exp(2j * cmath.pi / self.order)
        return complex(sum(float(c) * z**i for i, c in enumerate(self.coords)))

    def __repr__(self):
        return f"CycloNumber({cyclo_string(self)!r})"

    def __str__(self):
        return cyclo_pretty(self)


def cyclo_promote(a: CycloNumber, b: CycloNumber) -> tuple[CycloNumber, CycloNumber]:
    """Embed both operands in Q(zeta_L), L = lcm(a.order, b.order)."""
    if a.order == b.order:
        return a, b
    if a.is_rational() and a.order != b.order:
        return CycloNumber(b.order, [a.coords[0]]), b
    if b.is_rational():
        return a, CycloNumber(a.order, [b.coords[0]])
    big = _lcm(a.order, b.order)
    _check_capacity(big)
    return a.embed(big), b.embed(big)


def to_cyclo(x) -> CycloNumber:
    return CycloNumber.coerce(x)


def common_order(values) -> int:
    n = 1
    for v in values:
        if isinstance(v, CycloNumber) and not v.is_rational():
            n = _lcm(n, v.order)
    _check_capacity(n)
    return n


# -- trigonometric values ------------------------------------------------------

def exp_i_pi(angle) -> CycloNumber:
    """exp(i*pi*angle) for rational ``angle``."""
    angle = Fraction(angle)
    q, p = angle.denominator, angle.numerator
    return CycloNumber.zeta(2 * q, p % (2 * q))


I_UNIT = CycloNumber.zeta(4)


def trig_value(kind: str, angle) -> CycloNumber:
    """Exact sin/cos/tan of ``angle * pi``."""
    z = exp_i_pi(angle)
    zi = z.inverse()
    if kind == "sin":
        return (z - zi) / (2 * I_UNIT)
    if kind == "cos":
        return (z + zi) / 2
    if kind == "tan":
        c = (z + zi) / 2
        if c.is_zero():
            raise PoleError(f"tan is undefined at {Fraction(angle)}*pi")
        return (z - zi) / (2 * I_UNIT) / c
    raise ValueError(f"unknown trigonometric function {kind!r}")


# -- printing ------------------------------------------------------------------

SURD_RADICANDS = (-1, 2, -2, 3, -3, 5)


@lru_cache(maxsize=None)
def sqrt_element(d: int) -> CycloNumber:
    """sqrt(d) as a cyclotomic element for the radicands we recognise."""
    z = CycloNumber.zeta
    table = {
        -1: lambda: z(4),
        2: lambda: z(8) - z(8, 3),
        -2: lambda: z(8) + z(8, 3),
        3: lambda: z(12) + z(12, 11),
        -3: lambda: z(3) - z(3, 2),
        5: lambda: 2 * (z(5) + z(5, 4)) + 1,
    }
    return table[d]()


def cyclo_is_rational(a: CycloNumber) -> Fraction | None:
    return a.to_fraction()


def as_surd(a: CycloNumber, radicands=SURD_RADICANDS):
    """Return (x, y, d) with a == x + y*sqrt(d), or None."""
    if a.is_rational():
        return a.coords[0], Fraction(0), 1
    for d in radicands:
        s = sqrt_element(d)
        big = _lcm(a.order, s.order)
        if euler_phi(big) > MAX_DEGREE:
            continue
        av, sv = a.embed(big).coords, s.embed(big).coords
        # a = x + y*s coordinatewise; s has a nonzero non-constant coordinate
        k = next(i for i in range(1, len(sv)) if sv[i])
        y = av[k] / sv[k]
        x = av[0] - y * sv[0]
        if all(av[i] == y * sv[i] + (x if i == 0 else 0) for i in range(len(av))):
            return x, y, d
    return None


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cyclo_string(a) -> str:
    """ASCII form used in JSON: 'p/q', 'x+y*sqrt(d)' or 'cyclo(N; c0, c1, ...)'."""
    if not isinstance(a, CycloNumber):
        return _frac_str(Fraction(a))
    surd = as_surd(a)
    if surd is not None:
        x, y, d = surd
        if y == 0:
            return _frac_str(x)
        root = "I" if d == -1 else f"sqrt({d})"
        ystr = root if y == 1 else f"-{root}" if y == -1 else f"{_frac_str(y)}*{root}"
        if x == 0:
            return ystr
        return f"{_frac_str(x)}{'' if ystr.startswith('-') else '+'}{ystr}"
    return f"cyclo({a.order}; {', '.join(_frac_str(c) for c in a.coords)})"


def cyclo_pretty(a) -> str:
    """Human form: rationals plainly, recognised surds with the root sign."""
    s = cyclo_string(a)
    s = re.sub(r"sqrt\((-?\d+)\)", lambda m: "√" + (m.group(1) if not m.group(1).startswith("-") else f"({m.group(1)})"), s)
    return s.replace("*√", "·√")


_SURD_RE = re.compile(
    r"^(?:(?P<x>-?\d+(?:/\d+)?)(?=[+-]))?(?P<y>[+-]?(?:\d+(?:/\d+)?\*)?)(?P<root>sqrt\((?P<d>-?\d+)\)|I)$"
)


def parse_cyclo_string(s: str) -> CycloNumber:
    """Inverse of :func:`cyclo_string`."""
    s = s.strip().replace(" ", "")
    if s.startswith("cyclo("):
        m = re.fullmatch(r"cyclo\((\d+);(.*)\)", s)
        if not m:
            raise MalformedInputError(f"bad cyclotomic literal {s!r}")
        return CycloNumber(int(m.group(1)), [Fraction(c) for c in m.group(2).split(",")])
    if re.fullmatch(r"-?\d+(/\d+)?", s):
        return CycloNumber.rational(Fraction(s))
    m = _SURD_RE.match(s)
    if not m:
        raise MalformedInputError(f"bad cyclotomic literal {s!r}")
    x = Fraction(m.group("x")) if m.group("x") else Fraction(0)
    ytxt = m.group("y").rstrip("*")
    if ytxt in ("", "+"):
        y = Fraction(1)
    elif ytxt == "-":
        y = Fraction(-1)
    else:
        y = Fraction(ytxt)
    d = -1 if m.group("root") == "I" else int(m.group("d"))
    if d not in SURD_RADICANDS:
        raise MalformedInputError(f"unsupported radicand {d}")
    return x + y * sqrt_element(d)
