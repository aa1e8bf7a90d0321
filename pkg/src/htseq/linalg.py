"""Exact linear algebra over any field whose elements support + - * / and ==.

Used with Fraction, CycloNumber and RatFunc entries alike.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .poly import Poly, RatFunc, poly_gcd, poly_lcm


def is_zero(x) -> bool:
    f = getattr(x, "is_zero", None)
    return f() if f is not None else x == 0


def _weight(x):
    """Pivot preference: smaller is simpler."""
    if isinstance(x, RatFunc):
        return x.num.deg() + x.den.deg()
    return 0


def rref(rows, ncols=None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        best = None
        for i in range(r, len(m)):
            if not is_zero(m[i][c]):
                w = _weight(m[i][c])
                if best is None or w < best[0]:
                    best = (w, i)
                    if w == 0:
                        break
        if best is None:
            continue
        i = best[1]
        m[r], m[i] = m[i], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and not is_zero(m[k][c]):
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows, ncols, one=Fraction(1), zero=Fraction(0)):
    """Basis of {x : rows * x = 0}."""
    if not rows:
        return [[one if i == k else zero for i in range(ncols)] for k in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows, rhs, ncols, zero=Fraction(0)):
    """One solution of rows * x = rhs with free variables zero, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [zero] * ncols
    for row, p in zip(red, piv):
        x[p] = row[ncols]
    return x


def rank(rows, ncols=None) -> int:
    return len(rref(rows, ncols)[1])


class DependencyFinder:
    """Feed vectors one at a time; reports the first linear dependency.

    ``add`` returns None while the vectors stay independent, otherwise the
    coefficient list c with sum c_i v_i = 0 and c_last = 1.
    """

    def __init__(self, one=Fraction(1), zero=Fraction(0)):
        self.basis = []  # (pivot, vector, combination)
        self.count = 0
        self.one = one
        self.zero = zero

    def add(self, v):
        w = list(v)
        combo = [self.zero] * self.count + [self.one]
        for p, b, c in self.basis:
            f = w[p]
            if not is_zero(f):
                w = [x - f * y for x, y in zip(w, b)]
                for i, ci in enumerate(c):
                    if not is_zero(ci):
                        combo[i] = combo[i] - f * ci
        self.count += 1
        nz = [i for i, x in enumerate(w) if not is_zero(x)]
        if not nz:
            return combo
        p = min(nz, key=lambda i: _weight(w[i]))
        inv = 1 / w[p]
        self.basis.append((p, [x * inv for x in w], [x * inv for x in combo]))
        return None


def clear_ratfunc_vector(vec) -> list[Poly]:
    """Scale a Q(n) vector to a primitive integer polynomial vector.

    Entries are made polynomial, their common polynomial gcd removed, the
    integer content removed, and the sign fixed so the last nonzero entry has
    positive leading coefficient.
    """
    rs = [x if isinstance(x, RatFunc) else RatFunc.const(x) for x in vec]
    den = Poly.const(1)
    for r in rs:
        if not r.is_zero():
            den = poly_lcm(den, r.den)
    polys = [(r.num * den).exact_div(r.den) if not r.is_zero() else Poly(()) for r in rs]
    g = Poly(())
    for p in polys:
        g = poly_gcd(g, p) if not g.is_zero() else p.monic()
    if not g.is_zero() and g.deg() > 0:
        polys = [p.exact_div(g) for p in polys]
    return primitive_vector(polys)


def primitive_vector(polys: list[Poly]) -> list[Poly]:
    dens = 1
    nums = 0
    for p in polys:
        for c in p.coeffs:
            dens = lcm(dens, Fraction(c).denominator)
    for p in polys:
        for c in p.coeffs:
            nums = gcd(nums, int(c * dens))
    if nums == 0:
        return polys
    scale = Fraction(dens, nums)
    last = next(p for p in reversed(polys) if not p.is_zero())
    if last.lc() < 0:
        scale = -scale
    return [p * scale for p in polys]
