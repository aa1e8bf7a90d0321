from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from htseq.holonomic import Recurrence, parse_recurrence, sum_closure
from htseq.hyper import hyper, hyper_ratios, mfold_hyper, newton_folds, polynomial_solutions, solution_terms
from htseq.hyperterm import make_term
from htseq.linalg import rank
from htseq.poly import Poly, RatFunc

n = Poly.x()
N = sympy.Symbol("n")


def test_example_ratios():
    r = parse_recurrence("-a(n) + a(n+1) - a(n+2) + a(n+3) = 0")
    assert hyper_ratios(r) == [RatFunc.const(1)]
    recn1n = Recurrence(((n + 3) * (n + 1) ** 2, -(n * n + 3 * n + 1) * (n * n + 3 * n + 3), n * (n + 2) ** 2))
    assert set(hyper_ratios(recn1n)) == {RatFunc(n + 1), RatFunc(Poly.const(1), n + 1)}
    assert hyper_ratios(parse_recurrence("a(n+1) - 2*a(n) = 0")) == [RatFunc.const(2)]


def _sympy_ratios(coeffs):
    """Hypergeometric solutions from sympy's rsolve_hyper, as ratio functions."""
    sol = sympy.solvers.recurr.rsolve_hyper([c.as_expr() if hasattr(c, "as_expr") else c for c in coeffs], 0, N)
    out = set()
    for term in sympy.Add.make_args(sympy.expand(sol)):
        t = term.subs({s: 1 for s in term.free_symbols - {N}})
        out.add(sympy.simplify(sympy.combsimp(t.subs(N, N + 1) / t)))
    return out


def _our_ratio_exprs(r):
    return {sympy.simplify(sympy.sympify(str(q).replace("^", "**"), locals={"n": N})) for q in hyper_ratios(r)}


def test_against_sympy_rsolve_hyper():
    cases = [
        [N + 1, -(2 * N + 3), N + 2],
        [2 * (N + 1), -(N + 2)],
        [-(N + 1) * 3, 1],
        [6, -5, 1],
        [2 * (N + 1) * (N + 2), -3 * (N + 2), 1],
    ]
    for cs in cases:
        polys = []
        for c in cs:
            p = sympy.Poly(c, N).all_coeffs()[::-1]
            polys.append(Poly([Fraction(int(x.p), int(x.q)) for x in p]))
        want = _sympy_ratios(cs)
        got = _our_ratio_exprs(Recurrence(tuple(polys)))
        assert want and all(any(sympy.simplify(w - g) == 0 for g in got) for w in want), (cs, want, got)


def test_irrational_ratios_are_not_found_over_q():
    # sympy finds ratios -(1 +- sqrt(5)) (n+1)/2 here; none is rational
    r = Recurrence(((n + 1) * (n + 2), -(n + 2), Poly.const(-1)))
    assert hyper_ratios(r) == []


def test_polynomial_solutions():
    # (n+1) C(n+1) - (n+2) C(n) = 0 has C = n+1
    assert polynomial_solutions([-(n + 2), n + 1]) == [n + 1]
    assert polynomial_solutions([Poly.const(-1), Poly.const(1)]) == [Poly.const(1)]
    assert polynomial_solutions([Poly.const(1), Poly.const(1)]) == []


terms_st = st.tuples(
    st.sampled_from([1, -1, 2, -2, 3, Fraction(1, 2), Fraction(-1, 3)]),
    st.integers(0, 4), st.integers(1, 4), st.integers(0, 2),
)


def _values(z, a, b, c, count, start):
    """h(k) = (k+c) * z^k * prod (i+a)/(i+b), from k = start."""
    _, h = make_term(1, 0, z, n + a, n + b, n + c if c else Poly.const(1))
    return [h(k) for k in range(start, start + count)]


@given(terms_st, terms_st)
@settings(max_examples=100, deadline=None)
def test_hyper_round_trip(t1, t2):
    recs = []
    for z, a, b, c in (t1, t2):
        C = n + c if c else Poly.const(1)
        recs.append(Recurrence((-(n + a) * C.shift(1) * Fraction(z), (n + b) * C)))
    r = sum_closure(*recs)
    fams = hyper(r)
    found = []
    start, count = 12, 3 * r.order + 6
    for fam in fams:
        for C in fam.Cs:
            _, h = make_term(1, 0, fam.z, fam.A, fam.B, C)
            found.append([h(k) for k in range(start, start + count)])
    base = rank([list(col) for col in zip(*found)]) if found else 0
    for t in (t1, t2):
        col = _values(*t, count, start)
        rows = [list(x) for x in zip(*(found + [col]))]
        assert found and rank(rows) == base


def test_newton_folds():
    assert newton_folds(parse_recurrence("a(n) + a(n+4) = 0")) == [1, 4]
    a212579 = parse_recurrence("a(n)=a(n-1)+2*a(n-2)-a(n-3)-2*a(n-4)-a(n-5)+2*a(n-6)+a(n-7)-a(n-8)")
    assert newton_folds(a212579) == [1, 3]


def test_mfold_bases():
    b = mfold_hyper(parse_recurrence("a(n) + a(n+4) = 0"), 4)
    assert b.to_json() == [{"m": 4, "ratios": ["-1"]}]
    b = mfold_hyper(parse_recurrence("-a(n) + a(n+1) - a(n+2) + a(n+3) = 0"))
    assert b.to_json() == [{"m": 1, "ratios": ["1"]}, {"m": 2, "ratios": ["-1"]}]
    b = mfold_hyper(parse_recurrence("a(n+1) - a(n) = 0"), 3)
    assert b.to_json() == [{"m": 1, "ratios": ["1"]}]


def test_solution_terms_cover_all_classes():
    terms = solution_terms(parse_recurrence("a(n) + a(n+4) = 0"))
    assert sorted((h.m, h.j, h.z) for h in terms) == [(4, j, -1) for j in range(4)]


@given(terms_st, terms_st, terms_st)
@settings(max_examples=30, deadline=None)
def test_pruning_keeps_every_family(t1, t2, t3):
    # the early degree-bound test must agree with the plain enumeration
    import htseq.hyper as H

    recs = []
    for z, a, b, c in (t1, t2, t3):
        C = n + c if c else Poly.const(1)
        recs.append(Recurrence((-(n + a) * C.shift(1) * Fraction(z), (n + b) * C)))
    r = sum_closure(sum_closure(recs[0], recs[1]), recs[2])
    fast = set(hyper_ratios(r))
    saved = H._indicial_offset
    H._indicial_offset = lambda *args: None
    try:
        slow = set(hyper_ratios(r))
    finally:
        H._indicial_offset = saved
    assert fast == slow
