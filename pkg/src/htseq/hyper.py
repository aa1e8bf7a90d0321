"""Hypergeometric and m-fold hypergeometric solutions of recurrences over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, lcm

from .holonomic import Recurrence, m_section
from .hyperterm import HyperTerm, make_term
from .linalg import nullspace
from .poly import Poly, RatFunc, factor_over_q, rational_roots

FOLD_CAP = 24


@dataclass(frozen=True)
class HyperFamily:
    """Solutions z^n * prod A/B * C(n) for every C in the listed basis."""

    z: Fraction
    A: Poly
    B: Poly
    Cs: tuple

    def ratios(self):
        for C in self.Cs:
            yield RatFunc(self.A * C.shift(1) * self.z, self.B * C)


@dataclass(frozen=True, eq=False, slots=True)
class _Divisor:
    """A monic divisor given by exponents on the irreducible factors; built on demand."""

    exps: tuple
    mask: int
    sub: Fraction  # coefficient below the leading one
    factors: tuple

    def poly(self) -> Poly:
        d = Poly.const(1)
        for f, k in zip(self.factors, self.exps):
            if k:
                d = d * f**k
        return d


def _divisors(p: Poly):
    """Irreducible factors of p and {degree: [_Divisor]} in a deterministic order."""
    _, facs = factor_over_q(p)
    fs = tuple(f for f, _ in facs)
    subs = [f[f.deg() - 1] for f in fs]
    out: dict = {}
    for exps in product(*[range(e + 1) for _, e in facs]):
        deg, mask, sub = 0, 0, Fraction(0)
        for t, k in enumerate(exps):
            if k:
                deg += k * fs[t].deg()
                mask |= 1 << t
                sub += k * subs[t]
        out.setdefault(deg, []).append(_Divisor(exps, mask, sub, fs))
    return list(fs), out


def monic_divisors(p: Poly) -> dict:
    """{degree: [monic divisors of that degree]} in a deterministic order."""
    return {deg: sorted((dv.poly() for dv in v), key=Poly.sort_key) for deg, v in _divisors(p)[1].items()}


def _shift_distance(f: Poly, g: Poly):
    """The h with f(n) = g(n+h) for monic irreducible f, g, else None."""
    k = f.deg()
    if k != g.deg() or k <= 0:
        return None
    h = (f[k - 1] - g[k - 1]) / k
    return h if g.shift(h) == f else None


def _clashes(fa: list, fb: list) -> list:
    """For each factor of A, the bitmask of B-factors g with gcd(f(n), g(n+h)) != 1 for some h >= 0."""
    out = []
    for f in fa:
        mask = 0
        for t, g in enumerate(fb):
            h = _shift_distance(f, g)
            if h is not None and h.denominator == 1 and h >= 0:
                mask |= 1 << t
        out.append(mask)
    return out


def polynomial_solutions(R: list) -> list:
    """Basis of polynomial C with sum_i R_i(n) C(n+i) = 0."""
    d = len(R) - 1
    S = []
    for k in range(d + 1):
        s = Poly(())
        for i in range(k, d + 1):
            if not R[i].is_zero():
                s = s + R[i] * comb(i, k)
        S.append(s)
    live = [(k, s) for k, s in enumerate(S) if not s.is_zero()]
    if not live:
        return []
    b = max(s.deg() - k for k, s in live)
    # indicial polynomial in c: sum lc(S_k) * c(c-1)...(c-k+1)
    ind = Poly(())
    for k, s in live:
        if s.deg() - k == b:
            ff = Poly.const(1)
            for t in range(k):
                ff = ff * Poly.linear(1, -t)
            ind = ind + ff * s.lc()
    roots = [r for r in rational_roots(ind) if r.denominator == 1 and r >= 0]
    if not roots:
        return []
    bound = int(max(roots))
    images = []
    for t in range(bound + 1):
        mono = Poly([0] * t + [1])
        img = Poly(())
        for i, Ri in enumerate(R):
            if not Ri.is_zero():
                img = img + Ri * mono.shift(i)
        images.append(img)
    rows = max((im.deg() for im in images), default=-1) + 1
    matrix = [[im[r] for im in images] for r in range(rows)]
    basis = nullspace(matrix, bound + 1)
    out = []
    for v in basis:
        C = Poly(v)
        if not C.is_zero():
            out.append(C.monic())
    out.sort(key=Poly.sort_key)
    return out


def hyper(r: Recurrence) -> list:
    """All hypergeometric solutions over Q, grouped as HyperFamily objects."""
    r = r.to_dense()
    P = list(r.coeffs)
    d = r.order
    fa, Adiv = _divisors(P[0])
    fb, Bdiv = _divisors(P[d].shift(1 - d))
    # A and B can be taken with gcd(A(n), B(n+h)) = 1 for all h >= 0
    clash = _clashes(fa, fb)
    live = [i for i in range(d + 1) if not P[i].is_zero()]
    families = []
    seen = set()

    def prefixes(A):
        out = [Poly.const(1)]
        for j in range(d):
            out.append(out[-1] * A.shift(j))
        return out

    def suffixes(B):
        out = [Poly.const(1)]
        for j in range(d - 1, -1, -1):
            out.append(out[-1] * B.shift(j))
        return out[::-1]

    pre_cache: dict = {}
    suf_cache: dict = {}
    poly_cache: dict = {}
    for da in sorted(Adiv):
        for db in sorted(Bdiv):
            degs = {i: P[i].deg() + i * da + (d - i) * db for i in live}
            D = max(degs.values())
            zc = [Fraction(0)] * (d + 1)
            for i in live:
                if degs[i] == D:
                    zc[i] = P[i].lc()
            zpoly = Poly(zc)
            zs = sorted({z for z in rational_roots(zpoly) if z != 0}) if zpoly.deg() > 0 else []
            if not zs:
                continue
            # indicial root of the polynomial equation for C, when it is linear: c0[z] + beta - alpha
            top = [i for i in live if degs[i] == D]
            below = [i for i in live if degs[i] == D - 1]
            c0 = {z: _indicial_offset(z, P, d, da, db, top, below) for z in zs}
            for dA in Adiv[da]:
                forbidden = 0
                for t in range(len(fa)):
                    if dA.mask >> t & 1:
                        forbidden |= clash[t]
                A = None
                for dB in Bdiv[db]:
                    if dB.mask & forbidden:
                        continue
                    zs_ok = [z for z in zs if c0[z] is None or _nonneg_int(c0[z] + dB.sub - dA.sub)]
                    if not zs_ok:
                        continue
                    if A is None:
                        A = poly_cache.get(dA) or poly_cache.setdefault(dA, dA.poly())
                    B = poly_cache.get(dB) or poly_cache.setdefault(dB, dB.poly())
                    pa = pre_cache.get(A)
                    if pa is None:
                        pa = pre_cache[A] = [P[i] * q for i, q in enumerate(prefixes(A))]
                    sb = suf_cache.get(B) or suf_cache.setdefault(B, suffixes(B))
                    Q = [pa[i] * sb[i] if not P[i].is_zero() else Poly(()) for i in range(d + 1)]
                    for z in zs_ok:
                        R = [q * z**i for i, q in enumerate(Q)]
                        Cs = polynomial_solutions(R)
                        fresh = []
                        for C in Cs:
                            key = RatFunc(A * C.shift(1) * z, B * C)
                            if key not in seen:
                                seen.add(key)
                                fresh.append(C)
                        if fresh:
                            families.append(HyperFamily(z, A, B, tuple(fresh)))
    return families


def _indicial_offset(z, P, d, da, db, top, below):
    """c0 with indicial root c0 + beta - alpha for every A, B of degrees da, db.

    Q_i = P_i * prod_{j<i} A(n+j) * prod_{i<=j<d} B(n+j) has degree D for i in
    top and D - 1 for i in below. When s1 = sum_{top} i z^i lc(P_i) is nonzero
    the indicial polynomial of the equation for C is linear in c; the alpha
    and beta (subleading coefficients of A and B) parts of its constant term
    collapse to s1 * (alpha - beta) because sum_{top} z^i lc(P_i) = 0.
    Returns None when s1 = 0 (no cheap test).
    """
    s1 = sum(i * z**i * P[i].lc() for i in top)
    if s1 == 0:
        return None
    e = sum(z**i * (P[i][P[i].deg() - 1] + P[i].lc() * Fraction(
        da * i * (i - 1) + db * (d * (d - 1) - i * (i - 1)), 2)) for i in top)
    e += sum(z**i * P[i].lc() for i in below)
    return -e / s1


def _nonneg_int(c: Fraction) -> bool:
    return c.denominator == 1 and c >= 0


def hyper_ratios(r: Recurrence) -> list:
    out = []
    for fam in hyper(r):
        out.extend(fam.ratios())
    return out


# -- folds ------------------------------------------------------------------------------


def _upper_hull(points):
    hull = []
    for p in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _root_power_order(f: Poly, cap: int):
    """Least e <= cap with x^e constant modulo f, else None."""
    if f.deg() == 1:
        return 1 if f.coeffs[0] != 0 else None
    x = Poly.x()
    acc = Poly.const(1)
    for e in range(1, cap + 1):
        acc = (acc * x) % f
        if acc.deg() <= 0:
            return e
    return None


def newton_folds(r: Recurrence, cap: int = FOLD_CAP) -> list:
    """Fold sizes m for which m-fold hypergeometric solutions can exist."""
    r = r.to_dense()
    pts = [(i, p.deg()) for i, p in enumerate(r.coeffs) if not p.is_zero()]
    hull = _upper_hull(pts)
    folds = {1}
    for (i0, d0), (i1, d1) in zip(hull, hull[1:]):
        s = Fraction(d1 - d0, i1 - i0)
        coeffs = [Fraction(0)] * (i1 - i0 + 1)
        for i, dg in pts:
            if i0 <= i <= i1 and dg - d0 == s * (i - i0):
                coeffs[i - i0] = r.coeffs[i].lc()
        g = Poly(coeffs)
        _, facs = factor_over_q(g)
        for f, _ in facs:
            if f == Poly.x():
                continue
            e = _root_power_order(f, cap)
            if e is None:
                continue
            m = lcm(s.denominator, e)
            if m <= cap:
                folds.add(m)
    return sorted(folds)


def candidate_folds(r: Recurrence, max_m: int | None = None) -> list:
    if max_m is not None:
        return list(range(1, max_m + 1))
    return newton_folds(r)


# -- m-fold solutions ----------------------------------------------------------------------


def section_terms(r: Recurrence, m: int) -> list:
    """HyperTerms h((n-j)/m) (for every j) whose sections solve the j-th m-section of r."""
    out = []
    for j in range(m):
        sec = m_section(r, m, j) if m > 1 else r.to_dense()
        for fam in hyper(sec):
            for C in fam.Cs:
                _, h = make_term(m, j, fam.z, fam.A, fam.B, C)
                out.append(h)
    return out


def sparse_sections(r: Recurrence):
    """(g, [section recurrences]) when all shifts are multiples of g > 1, else None."""
    d = r.to_dense()
    g = d.sparse_gcd()
    if g <= 1:
        return None
    secs = []
    for j in range(g):
        cs = tuple(d.coeffs[g * i].compose_affine(g, j) for i in range(d.order // g + 1))
        secs.append(Recurrence(cs).normalized())
    return g, secs


def solution_terms(r: Recurrence, max_m: int | None = None) -> list:
    """Candidate m-fold terms for an ansatz, ordered by (m, j, discovery)."""
    sp = sparse_sections(r)
    if sp is not None:
        g, secs = sp
        out = []
        for j, sec in enumerate(secs):
            for h in solution_terms(sec, None if max_m is None else max(1, max_m // g)):
                out.append(HyperTerm(g * h.m, g * h.j + j, h.z, h.A, h.B, h.C, h.k0))
        out.sort(key=lambda h: (h.m, h.j))
        return out
    out = []
    for m in candidate_folds(r, max_m):
        out.extend(section_terms(r, m))
    out.sort(key=lambda h: (h.m, h.j))
    return out


def _composed_ratio(rho: RatFunc, q: int, s: int) -> RatFunc:
    """Ratio of the fold-(q*m') sections of a fold-m' ratio rho, residue s < q."""
    out = RatFunc.const(1)
    for i in range(q):
        out = out * rho.compose_affine(q, s + i)
    return out


@dataclass(frozen=True)
class SolutionBasis:
    entries: tuple  # ((m, (RatFunc, ...)), ...)

    def to_json(self):
        return [{"m": m, "ratios": [str(RatFunc(r.num.with_var("k"), r.den.with_var("k"))) for r in rs]}
                for m, rs in self.entries]


def mfold_hyper(r: Recurrence, max_m: int | None = None) -> SolutionBasis:
    """Ratios of m-fold hypergeometric solutions, smaller folds first, subsumed ones dropped."""
    if max_m is None:
        max_m = r.to_dense().order
    folds = candidate_folds(r, max_m)
    found: dict = {}
    for m in folds:
        ratios = []
        for j in range(m):
            sec = m_section(r, m, j) if m > 1 else r.to_dense()
            for rho in hyper_ratios(sec):
                if rho not in ratios:
                    ratios.append(rho)
        kept = []
        for rho in ratios:
            subsumed = False
            for mp, rs in found.items():
                if m % mp:
                    continue
                q = m // mp
                if any(_composed_ratio(r0, q, s) == rho for r0 in rs for s in range(q)):
                    subsumed = True
                    break
            if not subsumed:
                kept.append(rho)
        if kept:
            kept.sort(key=RatFunc.sort_key)
            found[m] = kept
    return SolutionBasis(tuple((m, tuple(rs)) for m, rs in sorted(found.items())))
