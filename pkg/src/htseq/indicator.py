"""m-fold indicator sequences chi(n mod m = j)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import ZeroModulusError
from .poly import Poly, RatFunc


@dataclass(frozen=True, order=True)
class IndicatorTerm:
    m: int
    j: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("modulus must be non-negative")
        if self.m == 0 and self.j != 0:
            raise ValueError("the zero indicator is (0, 0)")
        if self.m >= 1 and not 0 <= self.j < self.m:
            raise ValueError(f"remainder {self.j} out of range for modulus {self.m}")

    @classmethod
    def normalized(cls, m: int, j: int) -> "IndicatorTerm":
        return cls(0, 0) if m == 0 else cls(m, j % m)

    @property
    def is_zero(self) -> bool:
        return self.m == 0

    @property
    def is_one(self) -> bool:
        return self.m == 1

    def __call__(self, n: int) -> int:
        return indicator_eval(self, n)

    def __mul__(self, other):
        return indicator_product(self, other)

    def __str__(self):
        return f"chi(n mod {self.m} = {self.j})"

    def to_json(self):
        return {"m": self.m, "j": self.j}

    @classmethod
    def from_json(cls, d):
        return cls(int(d["m"]), int(d["j"]))

    def latex(self):
        return rf"\chi_{{\{{\mathit{{modp}}(n,{self.m})={self.j}\}}}}"


ZERO = IndicatorTerm(0, 0)
ONE = IndicatorTerm(1, 0)


def indicator_eval(t: IndicatorTerm, n: int) -> int:
    if t.m == 0:
        return 0
    return 1 if n % t.m == t.j else 0


def indicator_product(a: IndicatorTerm, b: IndicatorTerm) -> IndicatorTerm:
    if a.is_zero or b.is_zero:
        return ZERO
    if a.is_one:
        return b
    if b.is_one:
        return a
    mu = lcm(a.m, b.m)
    hits = [j for j in range(mu) if j % a.m == a.j and j % b.m == b.j]
    if not hits:
        return ZERO
    return IndicatorTerm(mu, hits[0])


def indicator_gf(t: IndicatorTerm) -> RatFunc:
    """Generating function z^j / (1 - z^m) in the variable z."""
    if t.m == 0:
        raise ZeroModulusError("the zero indicator has no m-fold generating function")
    num = Poly([0] * t.j + [1], "z")
    den = Poly([1] + [0] * (t.m - 1) + [-1], "z")
    return RatFunc(num, den)


def series_coefficients(r: RatFunc, count: int) -> list[Fraction]:
    """First coefficients of the power series of r around 0."""
    num, den = r.num.coeffs, r.den.coeffs
    if not den or den[0] == 0:
        raise ZeroDivisionError("denominator vanishes at 0")
    out = []
    for k in range(count):
        s = num[k] if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            s -= den[i] * out[k - i]
        out.append(s / den[0])
    return out
