from fractions import Fraction

import pytest
from hypothesis import given, settings

from htseq.cyclo import CycloNumber
from htseq.errors import UnsupportedStructureError
from htseq.expr import eval_at, parse
from htseq.monomials import Signature, periodic_values, to_monomials
from htseq.poly import Poly, RatFunc

from strategies import expressions


@given(expressions)
@settings(max_examples=100, deadline=None)
def test_monomial_expansion_agrees_with_evaluation(src):
    e = parse(src)
    ms = to_monomials(e)
    for k in range(12):
        assert ms.value(k) == eval_at(e, k)


def test_factorial_pair_has_two_signatures():
    ms = to_monomials(parse("n! + 1/n!"))
    sigs = set(ms.terms)
    assert sigs == {Signature(((1, 1),)), Signature(((1, -1),))}
    fwd, _ = Signature(((1, 1),)).shift_ratio(1)
    back, _ = Signature(((1, -1),)).shift_ratio(1)
    assert fwd == RatFunc(Poly.linear(1, 1)) and back == RatFunc(Poly.const(1), Poly.linear(1, 1))


def test_sine_half_pi_uses_zeta4():
    ms = to_monomials(parse("sin(n*Pi/2)"))
    assert {s.base for s in ms.terms} == {CycloNumber.zeta(4), CycloNumber.zeta(4, 3)}
    assert ms.field_order() == 4


def test_cos_n_pi_is_single_rational_geometric():
    ms = to_monomials(parse("cos(n*Pi)"))
    (sig,) = ms.terms
    assert sig.base == -1 and sig.facts == ()


def test_difference_of_equal_forms_is_zero():
    ms = to_monomials(parse("31/3 - chi(2,0) - (59/3 - (-1)^n)/2"))
    assert ms.is_zero()


def test_periodic_values_are_minimal_period():
    assert periodic_values(parse("tan(n*Pi/3)")) == [0, CycloNumber.zeta(12) + CycloNumber.zeta(12, 11),
                                                     -(CycloNumber.zeta(12) + CycloNumber.zeta(12, 11))]
    assert len(periodic_values(parse("chi(4,1)*chi(6,1)"))) == 12


@pytest.mark.parametrize("src", ["1/(n! + 1)", "n^n", "2^(n^2)"])
def test_unsupported(src):
    with pytest.raises(UnsupportedStructureError):
        to_monomials(parse(src))


def test_shift_ratio_of_dilated_factorial():
    r, c = Signature(((2, 1),), CycloNumber.rational(3)).shift_ratio(1)
    for k in range(6):
        x = Fraction(k)
        assert r(x) * c.to_fraction() == Signature(((2, 1),), CycloNumber.rational(3)).value(k + 1).to_fraction() \
            / Signature(((2, 1),), CycloNumber.rational(3)).value(k).to_fraction()
