"""Linear recurrences with polynomial coefficients and their closure operations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Callable

from .cyclo import CycloNumber, euler_phi
from .errors import DegenerateSectionError, InsufficientValuesError, MalformedInputError, ParseError, UndefinedValueError
from .expr import Add, Div, Expr, Mul, Neg, Num, Pow, Shifted, Sub, Var, affine, parse, parse_with_shifts
from .linalg import DependencyFinder, clear_ratfunc_vector, is_zero, primitive_vector
from .monomials import MonomialSum, coef_coordinates, coef_scale, coef_shift, coef_add, to_monomials
from .poly import Poly, RatFunc, integer_roots, poly_str


@dataclass(frozen=True)
class Recurrence:
    """sum_i P_i(n) a(n + i*step) = 0, i = 0..order."""

    coeffs: tuple
    step: int = 1

    def __post_init__(self):
        cs = tuple(c if isinstance(c, Poly) else Poly.const(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if len(cs) < 2 or cs[0].is_zero() or cs[-1].is_zero():
            raise ValueError("recurrence needs order >= 1 and nonzero P_0, P_d")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def span(self) -> int:
        return self.order * self.step

    def normalized(self) -> "Recurrence":
        return Recurrence(tuple(primitive_vector(list(self.coeffs))), self.step)

    def to_dense(self) -> "Recurrence":
        if self.step == 1:
            return self
        cs = [Poly(())] * (self.span + 1)
        for i, p in enumerate(self.coeffs):
            cs[i * self.step] = p
        return Recurrence(tuple(cs), 1)

    def sparse_gcd(self) -> int:
        """gcd of the shifts carrying nonzero coefficients (dense form)."""
        g = 0
        for i, p in enumerate(self.to_dense().coeffs):
            if not p.is_zero():
                g = gcd(g, i)
        return g

    def shifted(self, k: int) -> "Recurrence":
        """The same relation written at n + k."""
        return Recurrence(tuple(p.shift(k) for p in self.coeffs), self.step)

    def residual(self, value: Callable[[int], object], n: int):
        total = CycloNumber.rational(0)
        for i, p in enumerate(self.coeffs):
            if not p.is_zero():
                total = total + value(n + i * self.step) * p(Fraction(n))
        return total

    @cached_property
    def singular_indices(self) -> tuple:
        """Nonnegative integer n with P_d(n - span) = 0 (values not forced by the relation)."""
        return tuple(r + self.span for r in integer_roots(self.coeffs[-1]) if r + self.span >= 0)

    @cached_property
    def trailing_roots(self) -> tuple:
        return tuple(r for r in integer_roots(self.coeffs[0]) if r >= 0)

    def __str__(self):
        return recurrence_text(self)

    def to_json(self):
        return {"var": "n", "order": self.order, "step": self.step, "coeffs": [poly_str(p) for p in self.coeffs]}

    @classmethod
    def from_json(cls, d):
        try:
            cs = tuple(poly_from_string(c) for c in d["coeffs"])
            r = cls(cs, int(d.get("step", 1)))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInputError(f"bad recurrence JSON: {exc}") from None
        if "order" in d and int(d["order"]) != r.order:
            raise MalformedInputError("recurrence JSON order does not match its coefficients")
        return r


def _shift_label(k: int) -> str:
    return "a(n)" if k == 0 else f"a(n+{k})" if k > 0 else f"a(n{k})"


def recurrence_text(r: Recurrence) -> str:
    parts = []
    for i, p in enumerate(r.coeffs):
        if p.is_zero():
            continue
        s = poly_str(p)
        label = _shift_label(i * r.step)
        if s == "1":
            term = label
        elif s == "-1":
            term = "-" + label
        elif len(p.coeffs) == 1 and "/" not in s:
            term = f"{s}*{label}"
        else:
            term = f"({s})*{label}"
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out + " = 0"


# -- parsing -------------------------------------------------------------------------

def poly_from_expr(e: Expr) -> Poly:
    if isinstance(e, Num):
        return Poly.const(e.value)
    if isinstance(e, Var):
        return Poly.x()
    if isinstance(e, Neg):
        return -poly_from_expr(e.arg)
    if isinstance(e, Add):
        return poly_from_expr(e.left) + poly_from_expr(e.right)
    if isinstance(e, Sub):
        return poly_from_expr(e.left) - poly_from_expr(e.right)
    if isinstance(e, Mul):
        return poly_from_expr(e.left) * poly_from_expr(e.right)
    if isinstance(e, Div):
        d = poly_from_expr(e.right)
        if d.deg() != 0:
            raise MalformedInputError("polynomial coefficient divided by a non-constant")
        return poly_from_expr(e.left) * (1 / d.lc())
    if isinstance(e, Pow):
        k = poly_from_expr(e.exp)
        if k.deg() > 0 or k.lc().denominator != 1 or k.lc() < 0:
            raise MalformedInputError("polynomial powers must be non-negative integers")
        return poly_from_expr(e.base) ** int(k.lc())
    raise MalformedInputError(f"not a polynomial in n: {e}")


def poly_from_string(s: str) -> Poly:
    return poly_from_expr(parse(s))


def _linear_form(e: Expr) -> dict:
    """{shift k or None: Poly}; None collects the inhomogeneous part."""
    if isinstance(e, Shifted):
        ab = affine(e.offset)
        if ab is None or ab[0] != 1 or ab[1].denominator != 1:
            raise MalformedInputError(f"sequence argument must be n+k with integer k: {e}")
        return {int(ab[1]): Poly.const(1)}
    if isinstance(e, (Add, Sub)):
        l, r = _linear_form(e.left), _linear_form(e.right)
        s = 1 if isinstance(e, Add) else -1
        out = dict(l)
        for k, p in r.items():
            out[k] = out.get(k, Poly(())) + p * s
        return out
    if isinstance(e, Neg):
        return {k: -p for k, p in _linear_form(e.arg).items()}
    if isinstance(e, Mul):
        l, r = _linear_form(e.left), _linear_form(e.right)
        if set(l) == {None}:
            return {k: p * l[None] for k, p in r.items()}
        if set(r) == {None}:
            return {k: p * r[None] for k, p in l.items()}
        raise MalformedInputError("recurrence is not linear in the sequence")
    if isinstance(e, Div):
        l, r = _linear_form(e.left), _linear_form(e.right)
        if set(r) != {None} or r[None].deg() != 0:
            raise MalformedInputError("recurrence terms may only be divided by constants")
        return {k: p * (1 / r[None].lc()) for k, p in l.items()}
    return {None: poly_from_expr(e)}


def parse_recurrence(text: str) -> Recurrence:
    """Parse 'P0(n)*a(n) + ... = 0' (any sequence name, any shifts) or JSON."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return Recurrence.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"bad recurrence JSON: {exc}") from None
    if text.count("=") != 1:
        raise ParseError("recurrence text must contain exactly one '='")
    lhs, rhs = text.split("=")
    form = _linear_form(parse_with_shifts(lhs))
    for k, p in _linear_form(parse_with_shifts(rhs)).items():
        form[k] = form.get(k, Poly(())) - p
    inhom = form.pop(None, Poly(()))
    if not inhom.is_zero():
        raise MalformedInputError("recurrence must be homogeneous")
    form = {k: p for k, p in form.items() if not p.is_zero()}
    if len(form) < 2:
        raise MalformedInputError("recurrence needs at least two nonzero terms")
    lo, hi = min(form), max(form)
    cs = tuple(form.get(k, Poly(())).shift(-lo) for k in range(lo, hi + 1))
    return Recurrence(cs).normalized()


# -- initial values ----------------------------------------------------------------------


@dataclass
class InitialSegment:
    """Known values a(index); ``provider`` supplies any other index on demand."""

    values: dict = field(default_factory=dict)
    provider: Callable[[int], CycloNumber] | None = None

    def __post_init__(self):
        self.values = {int(k): CycloNumber.coerce(v) for k, v in dict(self.values).items()}

    @classmethod
    def from_list(cls, values, start: int = 0):
        return cls({start + i: v for i, v in enumerate(values)})

    def __call__(self, n: int) -> CycloNumber:
        v = self.values.get(n)
        if v is None:
            if self.provider is None:
                raise InsufficientValuesError(f"no value known at index {n}", needed=[n])
            v = CycloNumber.coerce(self.provider(n))
            self.values[n] = v
        return v

    def first(self, count: int) -> list:
        return [(k, self(k)) for k in range(count)]


def extend_by_recurrence(seg: InitialSegment, r: Recurrence) -> InitialSegment:
    """Provider that fills unknown indices forward using r."""
    d = r.to_dense()
    span = d.order
    known = seg.values

    def provider(n: int):
        if n in known:
            return known[n]
        base = n - span
        if base < 0 or all(k not in known for k in range(max(0, base), n)) and not known:
            raise InsufficientValuesError(f"value at index {n} cannot be derived", needed=[n])
        lead = d.coeffs[-1](Fraction(base))
        if lead == 0:
            raise UndefinedValueError(
                f"index {n} is singular for the recurrence (leading coefficient vanishes at n = {base})", index=n)
        acc = CycloNumber.rational(0)
        for i in range(span):
            p = d.coeffs[i]
            if not p.is_zero():
                acc = acc + out(base + i) * p(Fraction(base))
        v = -acc / lead
        known[n] = v
        return v

    out = InitialSegment(known, provider)

    def fill(n: int):
        for k in range(min(known) if known else 0, n):
            if k not in known:
                provider(k)
        return provider(n)

    out.provider = fill
    return out


def check_initial_values(seg: InitialSegment, r: Recurrence):
    d = r.to_dense().order
    if seg.provider is None:
        missing = [k for k in range(d) if k not in seg.values]
        if missing:
            raise InsufficientValuesError(
                f"need initial values at indices {missing} for a recurrence of order {d}", needed=missing)


# -- shift reduction, sections, closure ----------------------------------------------------


class ShiftReducer:
    """a(n+N) = sum_i v_i(n) a(n+i) for a dense recurrence, cached in N."""

    def __init__(self, r: Recurrence):
        self.r = r.to_dense()
        d = self.r.order
        lead = RatFunc(self.r.coeffs[-1])
        self.tail = [-(RatFunc(p) / lead) for p in self.r.coeffs[:-1]]
        self.rows = [[RatFunc.const(1 if i == k else 0) for i in range(d)] for k in range(d)]

    def __call__(self, N: int) -> list:
        d = self.r.order
        while len(self.rows) <= N:
            prev = self.rows[-1]
            sh = [v.shift(1) for v in prev]
            top = sh[-1]
            row = [RatFunc.const(0)] + sh[:-1]
            if not top.is_zero():
                row = [a + top * t for a, t in zip(row, self.tail)]
            self.rows.append(row)
        return self.rows[N]


def shift_reduce(r: Recurrence, N: int) -> list:
    return ShiftReducer(r)(N)


def _relation_from_combo(combo, step: int = 1) -> Recurrence:
    polys = clear_ratfunc_vector(combo)
    lead_zeros = 0
    while polys[lead_zeros].is_zero():
        lead_zeros += 1
    polys = [p.shift(-lead_zeros * step) for p in polys[lead_zeros:]]
    return Recurrence(tuple(polys), step).normalized()


def m_section(r: Recurrence, m: int, j: int) -> Recurrence:
    """Recurrence in k for b(k) = a(m k + j)."""
    r = r.to_dense()
    if m == 1 and j == 0:
        return r.normalized()
    red = ShiftReducer(r)
    finder = DependencyFinder(RatFunc.const(1), RatFunc.const(0))
    for i in range(r.order + 1):
        row = [v.compose_affine(m, j) for v in red(m * i)]
        combo = finder.add(row)
        if combo is not None:
            return _relation_from_combo(combo)
    raise DegenerateSectionError(f"no relation of order <= {r.order} found for the ({m}, {j}) section")


def sum_closure(r1: Recurrence, r2: Recurrence) -> Recurrence:
    """A recurrence satisfied by every sum of solutions of r1 and r2."""
    r1, r2 = r1.to_dense(), r2.to_dense()
    if r1.normalized() == r2.normalized():
        return r1.normalized()
    a, b = ShiftReducer(r1), ShiftReducer(r2)
    finder = DependencyFinder(RatFunc.const(1), RatFunc.const(0))
    for k in range(r1.order + r2.order + 1):
        combo = finder.add(a(k) + b(k))
        if combo is not None:
            return _relation_from_combo(combo)
    raise AssertionError("sum closure must close by order d1 + d2")


def dilate(r: Recurrence, m: int, j: int) -> Recurrence:
    """From a relation for b(k) = a(mk+j) to one in n that also holds off the class j mod m."""
    r = r.to_dense()
    cs = []
    for p in r.coeffs:
        cs.append(p.compose_affine(Fraction(1, m), Fraction(-j, m)))
    return Recurrence(tuple(cs), m).normalized()


# -- recurrence discovery -------------------------------------------------------------------


class NotFound(Exception):
    """No recurrence up to the requested order."""


# rational points used to specialise n; a dependency over Q(n) survives at every point
_PROBE_POINTS = [Fraction(7919, 13), Fraction(-6007, 29), Fraction(104729, 71)]


class _GenericProbe:
    """Incremental rank test of Q(n)-vectors specialised at a rational point.

    Independence at the point implies independence over Q(n), so the costly
    symbolic elimination is only needed once this reports a dependency.
    """

    def __init__(self):
        self.point = 0
        self.finder = DependencyFinder()
        self.fed = 0

    def dependent(self, vecs) -> bool:
        while True:
            try:
                while self.fed < len(vecs):
                    found = self.finder.add([_at(x, _PROBE_POINTS[self.point]) for x in vecs[self.fed]])
                    self.fed += 1
                    if found is not None:
                        return True
                return False
            except ZeroDivisionError:
                if self.point + 1 == len(_PROBE_POINTS):
                    return True
                self.point += 1
                self.finder = DependencyFinder()
                self.fed = 0


def _at(x, n0):
    return x(n0) if isinstance(x, (RatFunc, Poly)) else Fraction(x)


def find_recurrence(e, max_order: int = 10, shift_step: int = 1) -> Recurrence:
    """Minimal-order relation between e(n), e(n+t), ..., e(n+Nt) over Q(n)."""
    if isinstance(e, str):
        e = parse(e)
    M = e if isinstance(e, MonomialSum) else to_monomials(e)
    if M.is_zero():
        return Recurrence((Poly.const(-1), Poly.const(1)), shift_step)
    order = M.field_order()
    dim = euler_phi(order)
    sigs = list(M.terms)
    vecs = []
    probe = _GenericProbe()
    for N in range(max_order + 1):
        s = N * shift_step
        vec = []
        for sig in sigs:
            ratio, base_pow = sig.shift_ratio(s)
            c = coef_shift(M.terms[sig], s)
            c = coef_scale({k * ratio: v for k, v in c.items()}, base_pow)
            vec.extend(coef_coordinates(c, order, dim))
        vecs.append(vec)
        if not probe.dependent(vecs):
            continue
        finder = DependencyFinder(RatFunc.const(1), RatFunc.const(0))
        for v in vecs:
            combo = finder.add(v)
        if combo is not None:
            return _relation_from_combo(combo, shift_step)
    raise NotFound(f"no recurrence of order <= {max_order} with shift step {shift_step}")


# -- recurrences of normal forms -------------------------------------------------------------


def term_recurrence(h) -> Recurrence:
    """B(k)C(k) h(k+1) - z A(k) C(k+1) h(k) = 0 in the section variable k."""
    return Recurrence((-(h.A * h.C.shift(1)) * h.z, h.B * h.C)).normalized()


def _closure_all(recs) -> Recurrence:
    uniq = []
    for r in recs:
        r = r.to_dense().normalized()
        if r not in uniq:
            uniq.append(r)
    acc = uniq[0]
    for r in uniq[1:]:
        acc = sum_closure(acc, r)
    return acc


def re_from_normal_form(t) -> Recurrence:
    """A recurrence in n annihilating the hypergeometric-type sum t."""
    if t.is_zero():
        return Recurrence((Poly.const(-1), Poly.const(1)))
    per_component = []
    for chi, terms in t.components:
        rk = _closure_all([term_recurrence(h) for _, h in terms])
        per_component.append(dilate(rk, chi.m, chi.j) if chi.m > 1 else rk)
    return _closure_all(per_component)
