"""Sequence expressions in n: parsing, printing and exact evaluation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .cyclo import CycloNumber, PoleError, exp_i_pi, trig_value
from .errors import DomainError, NonCyclotomicError, ParseError, UndefinedValueError
from .indicator import IndicatorTerm, indicator_eval


class Expr:
    """Base node. Subclasses are frozen dataclasses, so == is structural."""

    def __str__(self):
        return to_string(self)

    def __add__(self, other):
        return Add(self, _wrap(other))

    def __sub__(self, other):
        return Sub(self, _wrap(other))

    def __mul__(self, other):
        return Mul(self, _wrap(other))

    def __truediv__(self, other):
        return Div(self, _wrap(other))


def _wrap(x):
    return x if isinstance(x, Expr) else Num(Fraction(x))


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class PiConst(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: Expr


@dataclass(frozen=True)
class Factorial(Expr):
    arg: Expr


@dataclass(frozen=True)
class Binomial(Expr):
    top: Expr
    bottom: Expr


@dataclass(frozen=True)
class Trig(Expr):
    kind: str
    arg: Expr


@dataclass(frozen=True)
class Chi(Expr):
    m: int
    j: int

    @property
    def term(self) -> IndicatorTerm:
        return IndicatorTerm.normalized(self.m, self.j)


@dataclass(frozen=True)
class Shifted(Expr):
    """a(n + k) inside recurrence text; never evaluated."""

    name: str
    offset: Expr


BINARY = (Add, Sub, Mul, Div)
TRIG_KINDS = ("sin", "cos", "tan")


def children(e: Expr):
    if isinstance(e, BINARY):
        return (e.left, e.right)
    if isinstance(e, (Neg, Factorial)):
        return (e.arg,)
    if isinstance(e, Trig):
        return (e.arg,)
    if isinstance(e, Pow):
        return (e.base, e.exp)
    if isinstance(e, Binomial):
        return (e.top, e.bottom)
    if isinstance(e, Shifted):
        return (e.offset,)
    return ()


def contains(e: Expr, cls) -> bool:
    return isinstance(e, cls) or any(contains(c, cls) for c in children(e))


# -- tokenizer -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^!(),=]))")


def _tokens(src: str):
    pos = 0
    out = []
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, allow_shifts: bool = False):
        self.src = src
        self.toks = _tokens(src)
        self.i = 0
        self.allow_shifts = allow_shifts

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.take()
        if t[1] != value:
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {value!r}, got {got}", t[2])
        return t

    def at(self, value):
        return self.peek()[0] != "end" and self.peek()[1] == value

    def parse(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.at("+") or self.at("-"):
            op = self.take()[1]
            r = self.term()
            e = Add(e, r) if op == "+" else Sub(e, r)
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.at("*") or self.at("/"):
            op = self.take()[1]
            r = self.factor()
            if op == "*":
                e = Mul(e, r)
            elif isinstance(e, Num) and isinstance(r, Num) and e.value.denominator == 1 and r.value > 0 and r.value.denominator == 1:
                e = Num(e.value / r.value)
            else:
                e = Div(e, r)
        return e

    def factor(self) -> Expr:
        if self.at("-"):
            self.take()
            arg = self.factor()
            return Num(-arg.value) if isinstance(arg, Num) else Neg(arg)
        if self.at("+"):
            self.take()
            return self.factor()
        b = self.base()
        if self.at("^"):
            self.take()
            b = Pow(b, self.exponent())
        return b

    def exponent(self) -> Expr:
        t = self.peek()
        if self.at("-"):
            self.take()
            n = self.take()
            if n[0] != "num":
                raise ParseError("expected an integer exponent", n[2])
            return Num(-Fraction(int(n[1])))
        if t[0] == "num":
            self.take()
            return Num(Fraction(int(t[1])))
        if self.at("("):
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if t[0] == "name" and t[1] == "n":
            self.take()
            return Var()
        raise ParseError("exponent must be an integer or a parenthesised affine expression", t[2])

    def base(self) -> Expr:
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            e = Num(Fraction(int(val)))
        elif kind == "name":
            if val == "n":
                e = Var()
            elif val in ("Pi", "pi"):
                e = PiConst()
            elif val in TRIG_KINDS:
                (arg,) = self.args(1, val, pos)
                check_trig_argument(arg, val, pos)
                e = Trig(val, arg)
            elif val == "binomial":
                top, bottom = self.args(2, val, pos)
                e = Binomial(top, bottom)
            elif val == "chi":
                m, j = self.args(2, val, pos)
                if not (isinstance(m, Num) and isinstance(j, Num) and m.value.denominator == 1 and j.value.denominator == 1 and m.value >= 0):
                    raise ParseError("chi expects two integer literals chi(m, j)", pos)
                e = Chi(int(m.value), int(j.value))
            elif self.allow_shifts and self.at("("):
                (off,) = self.args(1, val, pos)
                e = Shifted(val, off)
            else:
                raise ParseError(f"unknown name {val!r}", pos)
        elif val == "(":
            e = self.expr()
            self.expect(")")
        else:
            got = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"unexpected {got}", pos)
        while self.at("!"):
            self.take()
            e = Factorial(e)
        return e

    def args(self, count, name, pos):
        self.expect("(")
        out = [self.expr()]
        while self.at(","):
            self.take()
            out.append(self.expr())
        self.expect(")")
        if len(out) != count:
            raise ParseError(f"{name} takes {count} argument(s), got {len(out)}", pos)
        return out


def parse(src: str) -> Expr:
    return _Parser(src).parse()


def parse_with_shifts(src: str) -> Expr:
    return _Parser(src, allow_shifts=True).parse()


# -- printing --------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2}


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _prec(e: Expr) -> int:
    if isinstance(e, Num):
        if e.value < 0:
            return 0
        return 2 if e.value.denominator != 1 else 9
    if isinstance(e, Neg):
        return 0
    if isinstance(e, Pow):
        return 3
    return _PREC.get(type(e), 9)


def to_string(e: Expr) -> str:
    if isinstance(e, Num):
        return _frac(e.value)
    if isinstance(e, Var):
        return "n"
    if isinstance(e, PiConst):
        return "Pi"
    if isinstance(e, Neg):
        a = to_string(e.arg)
        return f"-({a})" if _prec(e.arg) < 9 or isinstance(e.arg, Neg) else f"-{a}"
    if isinstance(e, BINARY):
        p = _PREC[type(e)]
        op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
        lhs, rhs = to_string(e.left), to_string(e.right)
        if _prec(e.left) < p:
            lhs = f"({lhs})"
        if _prec(e.right) <= p:
            rhs = f"({rhs})"
        return f"{lhs}{op}{rhs}"
    if isinstance(e, Pow):
        b = to_string(e.base)
        if _prec(e.base) < 9 or isinstance(e.base, (Pow, Factorial)):
            b = f"({b})"
        x = e.exp
        if isinstance(x, Num) and x.value.denominator == 1 and x.value >= 0:
            xs = _frac(x.value)
        elif isinstance(x, Var):
            xs = "n"
        else:
            xs = f"({to_string(x)})"
        return f"{b}^{xs}"
    if isinstance(e, Factorial):
        a = to_string(e.arg)
        if _prec(e.arg) < 9 or isinstance(e.arg, Pow):
            a = f"({a})"
        return f"{a}!"
    if isinstance(e, Binomial):
        return f"binomial({to_string(e.top)}, {to_string(e.bottom)})"
    if isinstance(e, Trig):
        return f"{e.kind}({to_string(e.arg)})"
    if isinstance(e, Chi):
        return f"chi({e.m}, {e.j})"
    if isinstance(e, Shifted):
        return f"{e.name}({to_string(e.offset)})"
    raise TypeError(f"cannot print {e!r}")


# -- structural helpers ----------------------------------------------------------------

def affine(e: Expr):
    """(a, b) with e == a*n + b for rational a, b, or None."""
    if isinstance(e, Num):
        return Fraction(0), e.value
    if isinstance(e, Var):
        return Fraction(1), Fraction(0)
    if isinstance(e, Neg):
        r = affine(e.arg)
        return None if r is None else (-r[0], -r[1])
    if isinstance(e, (Add, Sub)):
        l, r = affine(e.left), affine(e.right)
        if l is None or r is None:
            return None
        s = 1 if isinstance(e, Add) else -1
        return l[0] + s * r[0], l[1] + s * r[1]
    if isinstance(e, Mul):
        l, r = affine(e.left), affine(e.right)
        if l is None or r is None:
            return None
        if l[0] != 0 and r[0] != 0:
            return None
        return l[0] * r[1] + r[0] * l[1], l[1] * r[1]
    if isinstance(e, Div):
        l, r = affine(e.left), affine(e.right)
        if l is None or r is None or r[0] != 0 or r[1] == 0:
            return None
        return l[0] / r[1], l[1] / r[1]
    return None


def _has_pi(e: Expr) -> bool:
    if isinstance(e, PiConst):
        return True
    if isinstance(e, Trig):
        return False
    return any(_has_pi(c) for c in children(e))


def split_pi(e: Expr):
    """X with e == X*Pi, or None. X is returned as an expression."""
    if isinstance(e, PiConst):
        return Num(Fraction(1))
    if not _has_pi(e):
        return Num(Fraction(0)) if isinstance(e, Num) and e.value == 0 else None
    if isinstance(e, Neg):
        x = split_pi(e.arg)
        return None if x is None else Neg(x)
    if isinstance(e, (Add, Sub)):
        l, r = split_pi(e.left), split_pi(e.right)
        if l is None or r is None:
            return None
        return type(e)(l, r)
    if isinstance(e, Mul):
        lp, rp = _has_pi(e.left), _has_pi(e.right)
        if lp and rp:
            return None
        if lp:
            x = split_pi(e.left)
            return None if x is None else Mul(x, e.right)
        x = split_pi(e.right)
        return None if x is None else Mul(e.left, x)
    if isinstance(e, Div):
        if _has_pi(e.right):
            return None
        x = split_pi(e.left)
        return None if x is None else Div(x, e.right)
    return None


def is_periodic(e: Expr) -> bool:
    """True when every occurrence of n sits inside a trig or chi atom."""
    if isinstance(e, (Trig, Chi, Num)):
        return True
    if isinstance(e, Var):
        return False
    if isinstance(e, PiConst):
        return False
    if isinstance(e, Pow):
        return is_periodic(e.base) and not contains(e.exp, Var) and not contains(e.exp, PiConst)
    if isinstance(e, (Factorial, Binomial, Shifted)):
        return not contains(e, Var)
    return all(is_periodic(c) for c in children(e))


def check_trig_argument(arg: Expr, kind: str = "sin", pos=None):
    x = split_pi(arg)
    if x is None:
        raise DomainError(f"{kind} argument must be a rational multiple of Pi: {to_string(arg)}"
                          + (f" (at offset {pos})" if pos is not None else ""))
    if affine(x) is None and not is_periodic(x):
        raise DomainError(f"{kind} argument must be (a*n+b)*Pi or a periodic expression times Pi: {to_string(arg)}"
                          + (f" (at offset {pos})" if pos is not None else ""))
    return x


def pi_multiple(t: Trig) -> Expr:
    return check_trig_argument(t.arg, t.kind)


# -- exact evaluation ------------------------------------------------------------------

def rational_power(c: Fraction, e: Fraction) -> CycloNumber:
    """c**e as a cyclotomic number (rational e), when that is possible."""
    c, e = Fraction(c), Fraction(e)
    if e.denominator == 1:
        if c == 0 and e < 0:
            raise ZeroDivisionError("zero to a negative power")
        return CycloNumber.rational(c ** int(e))
    if c == 0:
        if e < 0:
            raise ZeroDivisionError("zero to a negative power")
        return CycloNumber.rational(0)
    q = e.denominator
    sign = exp_i_pi(e) if c < 0 else CycloNumber.rational(1)
    a = abs(c)
    num, den = _int_root(a.numerator, q), _int_root(a.denominator, q)
    if num is None or den is None:
        raise NonCyclotomicError(f"{_frac(c)}^({_frac(e)}) is not a cyclotomic number")
    return sign * CycloNumber.rational(Fraction(num, den) ** e.numerator)


def _int_root(x: int, q: int):
    r = round(x ** (1.0 / q))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**q == x:
            return cand
    return None


def _undefined(n, e, why):
    return UndefinedValueError(f"undefined value at n = {n}: {to_string(e)} {why}", index=n)


def _as_rational(v: CycloNumber, what: str) -> Fraction:
    q = v.to_fraction()
    if q is None:
        raise NonCyclotomicError(f"{what} must be rational, got {v}")
    return q


def eval_at(e: Expr, n: int) -> CycloNumber:
    """Exact value of e at the integer index n."""
    if isinstance(e, Num):
        return CycloNumber.rational(e.value)
    if isinstance(e, Var):
        return CycloNumber.rational(n)
    if isinstance(e, PiConst):
        raise NonCyclotomicError("Pi may only appear inside a trigonometric argument")
    if isinstance(e, Neg):
        return -eval_at(e.arg, n)
    if isinstance(e, Add):
        return eval_at(e.left, n) + eval_at(e.right, n)
    if isinstance(e, Sub):
        return eval_at(e.left, n) - eval_at(e.right, n)
    if isinstance(e, Mul):
        return eval_at(e.left, n) * eval_at(e.right, n)
    if isinstance(e, Div):
        d = eval_at(e.right, n)
        if d.is_zero():
            raise _undefined(n, e.right, "is zero in a denominator")
        return eval_at(e.left, n) / d
    if isinstance(e, Pow):
        b = eval_at(e.base, n)
        x = _as_rational(eval_at(e.exp, n), "an exponent")
        if x.denominator == 1:
            if b.is_zero() and x < 0:
                raise _undefined(n, e, "divides by zero")
            return b ** int(x)
        q = b.to_fraction()
        if q is None:
            raise NonCyclotomicError(f"fractional power of the irrational value {b}")
        try:
            return rational_power(q, x)
        except ZeroDivisionError:
            raise _undefined(n, e, "divides by zero") from None
    if isinstance(e, Factorial):
        v = _as_rational(eval_at(e.arg, n), "a factorial argument")
        if v.denominator != 1 or v < 0:
            raise _undefined(n, e, "has a negative or non-integer argument")
        return CycloNumber.rational(factorial(int(v)))
    if isinstance(e, Binomial):
        a = _as_rational(eval_at(e.top, n), "a binomial argument")
        b = _as_rational(eval_at(e.bottom, n), "a binomial argument")
        if a.denominator != 1 or b.denominator != 1 or a < 0:
            raise _undefined(n, e, "has an argument outside the non-negative integers")
        a, b = int(a), int(b)
        return CycloNumber.rational(comb(a, b) if 0 <= b <= a else 0)
    if isinstance(e, Trig):
        x = _as_rational(eval_at(pi_multiple(e), n), "a trigonometric argument divided by Pi")
        try:
            return trig_value(e.kind, x)
        except PoleError:
            raise _undefined(n, e, "has a pole") from None
    if isinstance(e, Chi):
        return CycloNumber.rational(indicator_eval(e.term, n))
    raise TypeError(f"cannot evaluate {to_string(e)}")


def evaluate(src_or_expr, indices):
    e = parse(src_or_expr) if isinstance(src_or_expr, str) else src_or_expr
    return [eval_at(e, k) for k in indices]
