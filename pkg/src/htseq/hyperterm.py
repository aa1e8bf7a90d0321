"""m-fold hypergeometric terms and hypergeometric-type sums with indicators."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .cyclo import CycloNumber, cyclo_pretty, cyclo_string, parse_cyclo_string
from .errors import MalformedInputError, OutOfDomainError
from .indicator import IndicatorTerm, indicator_product
from .poly import Poly, RatFunc, factor_over_q, integer_roots, poly_gcd, poly_str

ONE = Poly.const(1)


def choose_anchor(A: Poly, B: Poly) -> int:
    """Smallest k0 >= 0 past every nonnegative integer root of A and B."""
    roots = [r for p in (A, B) if p.deg() > 0 for r in integer_roots(p) if r >= 0]
    return max(roots) + 1 if roots else 0


@dataclass(frozen=True)
class HyperTerm:
    """h(k) = C(k) * z^k * prod_{i=k0}^{k-1} A(i)/B(i), read at n = m*k + j.

    A and B are monic; C is monic. Values for k < k0 are obtained backwards
    through the ratio where it is defined.
    """

    m: int = 1
    j: int = 0
    z: Fraction = Fraction(1)
    A: Poly = ONE
    B: Poly = ONE
    C: Poly = ONE
    k0: int = 0
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def ratio(self) -> RatFunc:
        """h(k+1)/h(k) in the section variable k."""
        return RatFunc(self.A * self.C.shift(1) * self.z, self.B * self.C)

    @property
    def indicator(self) -> IndicatorTerm:
        return IndicatorTerm(self.m, self.j)

    def sort_key(self):
        return (self.m, self.j, self.z, self.A.sort_key(), self.B.sort_key(), self.C.sort_key(), self.k0)

    def _prod(self, k: int) -> Fraction:
        """prod_{i=k0}^{k-1} A(i)/B(i), extended backwards for k < k0."""
        c = self._cache
        if k in c:
            return c[k]
        if k >= self.k0:
            top = max((i for i in c if i <= k), default=None)
            if top is None or top < self.k0:
                top, acc = self.k0, Fraction(1)
                c[top] = acc
            acc = c[top]
            for i in range(top, k):
                acc = acc * self.A(Fraction(i)) / self.B(Fraction(i))
                c[i + 1] = acc
            return acc
        acc = Fraction(1)
        for i in range(k, self.k0):
            a, b = self.A(Fraction(i)), self.B(Fraction(i))
            if a == 0 or b == 0:
                raise OutOfDomainError(f"term {self} is not defined at section index {k}")
            acc = acc * b / a
        c[k] = acc
        return acc

    def at_section(self, k: int) -> Fraction:
        return self.C(Fraction(k)) * self.z**k * self._prod(k)

    def __call__(self, n: int) -> Fraction:
        if n % self.m != self.j:
            raise OutOfDomainError(f"index {n} is not in the class {self.j} mod {self.m}")
        return self.at_section((n - self.j) // self.m)

    def with_anchor(self, k1: int):
        """(factor, term anchored at k1) with factor*term' == self."""
        if k1 == self.k0:
            return Fraction(1), self
        f = self._prod(k1)
        return f, HyperTerm(self.m, self.j, self.z, self.A, self.B, self.C, k1)

    def __str__(self):
        return hyperterm_text(self)


def make_term(m, j, z, A: Poly, B: Poly, C: Poly, k0=None):
    """Normalize to monic A, B, C; returns (constant factor, HyperTerm)."""
    z = Fraction(z)
    g = poly_gcd(A, B)
    if g.deg() > 0:
        A, B = A.exact_div(g), B.exact_div(g)
    la, lb, lcc = A.lc(), B.lc(), C.lc()
    A, B, C = A.monic(), B.monic(), C.monic()
    z = z * la / lb
    factor = Fraction(lcc)
    canon = choose_anchor(A, B)
    if k0 is None:
        k0 = canon
    t = HyperTerm(m, j, z, A, B, C, k0)
    # prod with non-monic A, B from k0 differs by (la/lb)^(k-k0); fold (la/lb)^-k0 in
    factor = factor * (Fraction(lb, 1) / la) ** k0 if k0 else factor
    if k0 != canon:
        f, t = t.with_anchor(canon)
        factor = factor * f
    return factor, t


def reanchor(h: HyperTerm, M: int, J: int):
    """Express h((n - j)/m) on the finer class J mod M: returns (factor, term)."""
    if M % h.m or J % h.m != h.j:
        raise ValueError("target class is not contained in the term's class")
    a, b = M // h.m, (J - h.j) // h.m
    if a == 1 and b == 0:
        return Fraction(1), h
    A = Poly.const(1)
    B = Poly.const(1)
    for t in range(a):
        A = A * h.A.compose_affine(a, b + t)
        B = B * h.B.compose_affine(a, b + t)
    C = h.C.compose_affine(a, b)
    k1 = 0
    while a * k1 + b < h.k0:
        k1 += 1
    # h(ak+b) = C'(k) z^b z^(ak) P0 prod_{k1}^{k-1} A'/B'  with P0 = prod_{k0}^{a k1 + b - 1} A/B
    p0 = h._prod(a * k1 + b)
    factor, t = make_term(M, J, h.z**a, A, B, C, k1)
    # make_term accounts for monic normalisation relative to anchor k1
    return factor * h.z**b * p0, t


def term_product(h1: HyperTerm, h2: HyperTerm):
    """(factor, term) for the pointwise product of two terms on the same class."""
    assert (h1.m, h1.j) == (h2.m, h2.j)
    K = max(h1.k0, h2.k0)
    f1, h1 = h1.with_anchor(K)
    f2, h2 = h2.with_anchor(K)
    f, t = make_term(h1.m, h1.j, h1.z * h2.z, h1.A * h2.A, h1.B * h2.B, h1.C * h2.C, K)
    return f1 * f2 * f, t


# -- display -------------------------------------------------------------------------

def sigma_text(m: int, j: int) -> str:
    if m == 1 and j == 0:
        return "n"
    if j == 0:
        return f"n/{m}"
    return f"(n-{j})/{m}"


def _paren(s: str) -> str:
    return s if s.isalnum() else f"({s})"


def _frac_text(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def closed_form_parts(h: HyperTerm):
    """(constant, [factor strings in n]) describing h((n-j)/m)."""
    const = Fraction(1)
    parts = []
    sig = sigma_text(h.m, h.j)
    if h.C.deg() > 0:
        Cn = h.C.compose_affine(Fraction(1, h.m), Fraction(-h.j, h.m))
        c = Cn.content() if Cn.lc() > 0 else -Cn.content()
        const *= c
        parts.append(_paren(poly_str(Cn * (1 / c))))
    z = h.z
    blocks = []
    for poly, sign in ((h.A, 1), (h.B, -1)):
        if poly.deg() <= 0:
            continue
        _, facs = factor_over_q(poly)
        roots = {}
        others = []
        for f, e in facs:
            if f.deg() == 1:
                roots[f.coeffs[0]] = roots.get(f.coeffs[0], 0) + e
            else:
                others.append((f, e))
        # prod_{i=k0}^{k-1} prod_{t=1}^{m} (i + (j+s+t)/m) = (n+s)!/(m*k0+j+s)! * m^(-m*(k-k0))
        for c in sorted(roots):
            while roots.get(c, 0) > 0:
                s = int(h.m * c) - h.j - 1 if (h.m * c).denominator == 1 else None
                cs = [Fraction(h.j + s + t, h.m) for t in range(1, h.m + 1)] if s is not None else []
                if not cs or any(roots.get(x, 0) == 0 for x in cs) or h.m * h.k0 + h.j + s < 0:
                    break
                for x in cs:
                    roots[x] -= 1
                const *= (Fraction(factorial(h.m * h.k0 + h.j + s)) * Fraction(h.m) ** (-h.m * h.k0)) ** (-sign)
                z *= Fraction(h.m) ** (-h.m * sign)
                arg = "n" if s == 0 else f"n{'+' if s > 0 else '-'}{abs(s)}"
                blocks.append((f"{_paren(arg)}!", sign))
        for c, e in sorted(roots.items()):
            if e:
                others.append((Poly.linear(1, c), e))
        for f, e in others:
            fs = f"prod({poly_str(f.with_var('i'))}, i={h.k0}..{sig}-1)"
            blocks.append((fs if e == 1 else f"{fs}^{e}", sign))
    if z != 1:
        parts.append(f"({_frac_text(z)})^{_paren(sig)}")
    for fs, sign in blocks:
        parts.append(fs if sign > 0 else f"1/{fs}" if not parts else f"/{fs}")
    return const, parts


def hyperterm_text(h: HyperTerm) -> str:
    """'h(mk+j): h(k+1)/h(k) = r(k), h(k0) = v'"""
    idx = "k" if h.m == 1 else f"{h.m}k"
    if h.j:
        idx += f"+{h.j}"
    r = h.ratio
    rs = str(RatFunc(r.num.with_var("k"), r.den.with_var("k")))
    return f"h({idx}): h(k+1)/h(k) = {rs}, h({h.k0}) = {_frac_text(h.at_section(h.k0))}"


# -- hypergeometric-type sums -------------------------------------------------------------


def _c(x) -> CycloNumber:
    return CycloNumber.coerce(x)


def _merge_polynomial_parts(terms):
    """Combine terms differing only in C when their constants are rational."""
    groups: dict = {}
    for c, h in terms:
        groups.setdefault((h.z, h.A, h.B, h.k0), []).append((c, h))
    out = []
    for grp in groups.values():
        if len(grp) == 1 or not all(c.is_rational() for c, _ in grp):
            out.extend(grp)
            continue
        S = Poly(())
        for c, h in grp:
            S = S + h.C * c.to_fraction()
        if S.is_zero():
            continue
        h = grp[0][1]
        out.append((_c(S.lc()), HyperTerm(h.m, h.j, h.z, h.A, h.B, S.monic(), h.k0)))
    return out


@dataclass(frozen=True)
class HTSTerm:
    """sum over components of (sum const * h((n-j)/m)) * chi(n mod m = j)."""

    components: tuple = ()

    @classmethod
    def from_terms(cls, pairs) -> "HTSTerm":
        """Build from (const, HyperTerm) pairs, merging equal terms."""
        acc: dict = {}
        for c, h in pairs:
            key = (h.m, h.j)
            slot = acc.setdefault(key, {})
            slot[h] = slot.get(h, _c(0)) + _c(c)
        comps = []
        for (m, j) in sorted(acc):
            terms = _merge_polynomial_parts([(c, h) for h, c in acc[(m, j)].items() if not c.is_zero()])
            if terms:
                terms.sort(key=lambda ch: ch[1].sort_key())
                comps.append((IndicatorTerm(m, j), tuple(terms)))
        return cls(tuple(comps))

    @classmethod
    def constant(cls, c) -> "HTSTerm":
        return cls.from_terms([(c, HyperTerm())])

    @classmethod
    def zero(cls) -> "HTSTerm":
        return cls(())

    def pairs(self):
        for _, terms in self.components:
            yield from terms

    def is_zero(self):
        return not self.components

    def __call__(self, n: int) -> CycloNumber:
        total = _c(0)
        for chi, terms in self.components:
            if n % chi.m == chi.j:
                for c, h in terms:
                    total = total + c * h(n)
        return total

    def values(self, count: int, start: int = 0):
        return [self(k) for k in range(start, start + count)]

    def __add__(self, other: "HTSTerm") -> "HTSTerm":
        return HTSTerm.from_terms(list(self.pairs()) + list(other.pairs()))

    def scale(self, c) -> "HTSTerm":
        return HTSTerm.from_terms([(_c(c) * k, h) for k, h in self.pairs()])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "HTSTerm") -> "HTSTerm":
        out = []
        for chi1, t1 in self.components:
            for chi2, t2 in other.components:
                chi = indicator_product(chi1, chi2)
                if chi.is_zero:
                    continue
                for c1, h1 in t1:
                    f1, g1 = reanchor(h1, chi.m, chi.j)
                    for c2, h2 in t2:
                        f2, g2 = reanchor(h2, chi.m, chi.j)
                        f, g = term_product(g1, g2)
                        out.append((c1 * c2 * (f1 * f2 * f), g))
        return HTSTerm.from_terms(out)

    @property
    def order_bound(self) -> int:
        return sum(chi.m * len(terms) for chi, terms in self.components)

    # serialisation ---------------------------------------------------------------
    def to_json(self):
        comps = []
        for chi, terms in self.components:
            ts = []
            for c, h in terms:
                r = h.ratio
                ts.append({
                    "const": cyclo_string(c), "m": h.m, "j": h.j,
                    "ratio": str(RatFunc(r.num.with_var("k"), r.den.with_var("k"))),
                    "anchor_k": h.k0, "anchor_v": _frac_text(h.at_section(h.k0)),
                    "z": _frac_text(h.z), "A": poly_str(h.A, "k"), "B": poly_str(h.B, "k"),
                    "C": poly_str(h.C, "k"),
                })
            comps.append({"chi": chi.to_json(), "terms": ts})
        return {"components": comps}

    @classmethod
    def from_json(cls, d) -> "HTSTerm":
        from .expr import parse
        from .holonomic import poly_from_expr

        def kpoly(s):
            return poly_from_expr(parse(s.replace("k", "n")))

        pairs = []
        try:
            for comp in d["components"]:
                chi = IndicatorTerm.from_json(comp["chi"])
                for t in comp["terms"]:
                    m, j = int(t["m"]), int(t["j"])
                    if (m, j) != (chi.m, chi.j):
                        raise MalformedInputError("term class differs from its indicator")
                    c = parse_cyclo_string(t["const"])
                    if "z" in t:
                        f, h = make_term(m, j, Fraction(t["z"]), kpoly(t["A"]), kpoly(t["B"]), kpoly(t["C"]),
                                         int(t.get("anchor_k", 0)))
                    else:
                        rr = kpoly_ratio(t["ratio"], kpoly)
                        f, h = make_term(m, j, Fraction(1), rr.num, rr.den, ONE, int(t.get("anchor_k", 0)))
                        want = Fraction(t.get("anchor_v", "1"))
                        f = want / h.at_section(int(t.get("anchor_k", 0)))
                    pairs.append((c * f, h))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedInputError(f"bad normal-form JSON: {exc}") from None
        return cls.from_terms(pairs)

    def text(self, pretty: bool = True) -> str:
        return hts_text(self, pretty)

    def latex(self) -> str:
        return hts_latex(self)

    def __str__(self):
        return hts_text(self)


def kpoly_ratio(s: str, kpoly) -> RatFunc:
    from .expr import Div, parse
    e = parse(s.replace("k", "n"))
    if isinstance(e, Div):
        from .holonomic import poly_from_expr
        return RatFunc(poly_from_expr(e.left), poly_from_expr(e.right))
    return RatFunc(kpoly(s))


def _coef_text(c: CycloNumber, pretty: bool) -> str:
    return cyclo_pretty(c) if pretty else cyclo_string(c)


def _summands(t: HTSTerm, pretty=True, latex=False):
    for chi, terms in t.components:
        for c, h in terms:
            k, parts = closed_form_parts(h)
            c = c * k
            neg = False
            q = c.to_fraction()
            if q is not None and q < 0:
                c, neg = -c, True
            cs = _coef_text(c, pretty)
            body = []
            if cs != "1" or not parts:
                body.append(cs if q is not None or cs.replace("·", "").replace("√", "").isalnum() else f"({cs})")
            body.extend(parts)
            if not chi.is_one:
                body.append(chi.latex() if latex else str(chi))
            sep = " " if latex else "*"
            s = sep.join(body).replace("*/", "/")
            yield neg, s


def hts_text(t: HTSTerm, pretty=True) -> str:
    out = ""
    for neg, s in _summands(t, pretty):
        if not out:
            out = ("-" if neg else "") + s
        else:
            out += (" - " if neg else " + ") + s
    return out or "0"


def hts_latex(t: HTSTerm) -> str:
    out = ""
    for neg, s in _summands(t, pretty=False, latex=True):
        s = re.sub(r"sqrt\((-?\d+)\)", r"\\sqrt{\1}", s).replace("*", " ")
        if not out:
            out = ("-" if neg else "") + s
        else:
            out += (" - " if neg else " + ") + s
    return out or "0"
