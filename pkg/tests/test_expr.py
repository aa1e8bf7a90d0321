from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

from htseq.errors import DomainError, NonCyclotomicError, ParseError, UndefinedValueError
from htseq.expr import Add, Div, Factorial, Mul, Num, PiConst, Pow, Trig, Var, eval_at, evaluate, parse, to_string

from strategies import expressions

N = sympy.Symbol("n")

def sympy_value(src: str, k: int) -> complex:
    def chi(m, j):
        return sympy.Integer(1 if k % int(m) == int(j) else 0)

    e = sympy.sympify(src.replace("^", "**").replace("Pi", "pi").replace("(n+1)!", "factorial(n+1)")
                      .replace("n!", "factorial(n)"), locals={"chi": chi, "n": N})
    return complex(sympy.N(e.subs(N, k), 40))


@given(expressions)
@settings(max_examples=150, deadline=None)
def test_print_parse_round_trip(src):
    e = parse(src)
    assert parse(to_string(e)) == e


@given(expressions)
@settings(max_examples=80, deadline=None)
def test_evaluation_matches_sympy(src):
    e = parse(src)
    for k in range(7):
        got = complex(eval_at(e, k))
        want = sympy_value(src, k)
        assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


def test_structure_examples():
    assert parse("sin(n*Pi/4)^2") == Pow(Trig("sin", Div(Mul(Var(), PiConst()), Num(Fraction(4)))), Num(Fraction(2)))
    assert parse("n! + 1/n!") == Add(Factorial(Var()), Div(Num(Fraction(1)), Factorial(Var())))
    e = parse("sin(cos(n*Pi/3)*Pi)")
    assert e == Trig("sin", Mul(Trig("cos", parse("n*Pi/3")), PiConst()))


def test_values():
    assert eval_at(parse("sin(n*Pi/4)^2"), 2) == 1
    assert eval_at(parse("sin(cos(n*Pi/3)*Pi)"), 0) == 0
    assert eval_at(parse("n! + 1/n!"), 3) == Fraction(37, 6)  # 3! + 1/3! = 6 + 1/6
    assert evaluate("chi(3,1)", range(6)) == [0, 1, 0, 0, 1, 0]


def test_pole_names_index():
    with pytest.raises(UndefinedValueError) as info:
        evaluate("tan(n*Pi/4)", range(5))
    assert info.value.index == 2
    assert "n = 2" in str(info.value)


def test_division_by_zero_names_index():
    with pytest.raises(UndefinedValueError) as info:
        evaluate("1/(n-3)", range(5))
    assert info.value.index == 3


@pytest.mark.parametrize("src", ["sin(n)", "cos(n^2*Pi)", "tan(Pi/n)"])
def test_non_rational_trig_arguments(src):
    with pytest.raises(DomainError):
        parse(src)


@pytest.mark.parametrize("src,pos", [("n +* 2", 3), ("sin(n*Pi", 8), ("foo(n)", 0), ("n!!+", 4)])
def test_parse_errors_carry_offsets(src, pos):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert info.value.position == pos


def test_irrational_power_is_rejected():
    with pytest.raises(NonCyclotomicError):
        eval_at(parse("2^(1/3)"), 1)
