import json
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from htseq.cyclo import CycloNumber, sqrt_element
from htseq.expr import evaluate
from htseq.hyperterm import HTSTerm, HyperTerm, hts_latex, make_term
from htseq.indicator import IndicatorTerm
from htseq.poly import Poly

k = Poly.x()
SQRT2 = sqrt_element(2)


def test_term_values():
    assert HyperTerm(2, 0, Fraction(-1))(6) == -1
    _, fact = make_term(1, 0, 1, k + 1, Poly.const(1), Poly.const(1))
    assert fact(4) == 24


def test_fold4_term_matches_the_sequence_it_came_from():
    # anchor -sqrt(2)/4 at n = 1 for sin(Pi*cos(n*Pi)/6)*sin(n*Pi/4) on the class 1 mod 4
    t = HTSTerm.from_terms([(-SQRT2 / 4, HyperTerm(4, 1, Fraction(-1)))])
    seq = evaluate("sin(Pi*cos(n*Pi)/6)*sin(n*Pi/4)", [1, 5, 9, 13])
    assert [t(n) for n in (1, 5, 9, 13)] == seq
    assert t(9) == -SQRT2 / 4


def test_make_term_moves_constants_out():
    f, h = make_term(3, 2, Fraction(1, 2), 2 * k + 2, 3 * k + 9, 5 * k)
    assert h.A == k + 1 and h.B == k + 3 and h.C == k
    for q in range(8):
        # direct product from k0 = 0 with the unnormalised polynomials
        v = Fraction(5 * q) * Fraction(1, 2) ** q
        for i in range(q):
            v = v * (2 * i + 2) / (3 * i + 9)
        assert f * h(3 * q + 2) == v


h_ = HyperTerm(1, 0, Fraction(2), Poly.const(1), k + 1)      # 2^k / k!
g_ = HyperTerm(1, 0, Fraction(-1), Poly.const(1), Poly.const(1), k + 1)  # (-1)^k (k+1)


def lifted(h, m, j):
    return HyperTerm(m, j, h.z, h.A, h.B, h.C, h.k0)


def test_example_sum_and_product():
    u = HTSTerm.from_terms([(1, lifted(h_, 4, 1)), (1, lifted(h_, 5, 2))])
    v = HTSTerm.from_terms([(1, lifted(g_, 6, 2)), (1, lifted(g_, 4, 3))])
    s = u + v
    assert [c for c, _ in s.components] == [IndicatorTerm(4, 1), IndicatorTerm(4, 3), IndicatorTerm(5, 2),
                                            IndicatorTerm(6, 2)]
    p = u * v
    # chi(n mod 5 = 2) * chi(n mod 6 = 2) = chi(n mod 30 = 2) contributes as well
    assert [c for c, _ in p.components] == [IndicatorTerm(20, 7), IndicatorTerm(30, 2)]
    for n in range(130):
        assert s(n) == u(n) + v(n)
        assert p(n) == u(n) * v(n)


def test_zero():
    u = HTSTerm.from_terms([(3, lifted(h_, 4, 1))])
    assert (u * HTSTerm.zero()).is_zero()
    assert (u - u).is_zero()


kernels = st.tuples(
    st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 3), Fraction(-3, 2)]),
    st.integers(0, 3), st.integers(0, 3), st.integers(0, 2),
)
classes = st.integers(1, 6).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, m - 1)))
constants = st.sampled_from([CycloNumber.rational(1), CycloNumber.rational(Fraction(-2, 3)), SQRT2,
                             CycloNumber.zeta(3), CycloNumber.rational(5)])


@st.composite
def hts_terms(draw):
    pairs = []
    for _ in range(draw(st.integers(1, 3))):
        (m, j), (z, a, b, c), const = draw(classes), draw(kernels), draw(constants)
        A = k + a + 1 if a else Poly.const(1)
        B = k + b + 1 if b else Poly.const(1)
        C = k + c if c else Poly.const(1)
        f, h = make_term(m, j, z, A, B, C)
        pairs.append((const * f, h))
    return HTSTerm.from_terms(pairs)


@given(hts_terms(), hts_terms())
@settings(max_examples=200, deadline=None)
def test_ring_closure(s, t):
    a, p = s + t, s * t
    for n in range(40):
        assert a(n) == s(n) + t(n)
        assert p(n) == s(n) * t(n)
    for chi, terms in p.components:
        assert all(h.m == chi.m and h.j == chi.j for _, h in terms)


@given(hts_terms())
@settings(max_examples=60, deadline=None)
def test_json_round_trip(s):
    d = s.to_json()
    text = json.dumps(d)
    back = HTSTerm.from_json(json.loads(text))
    assert back == s
    assert json.dumps(back.to_json()) == text


def test_latex():
    t = HTSTerm.from_terms([(sqrt_element(3), HyperTerm(3, 1)), (-sqrt_element(3), HyperTerm(3, 2))])
    out = hts_latex(t)
    assert r"\sqrt{3}" in out and r"\chi_{\{\mathit{modp}(n,3)=1\}}" in out
