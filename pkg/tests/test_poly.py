from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from hyperseq.poly import (
    Poly,
    RatFunc,
    SturmChain,
    cauchy_bound,
    constant_sign_ranges,
    format_ratfunc,
    poly_gcd,
    root_free_from,
    sign,
    squarefree,
)

coeffs = st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=5)


def test_arithmetic():
    x = Poly.x()
    p = (x + 1) * (x - 2)
    assert p == Poly((-2, -1, 1))
    q, r = p.divmod(x - 2)
    assert q == x + 1 and r.is_zero()
    assert (x ** 3).degree == 3
    assert Poly(()).degree == -1


def test_gcd_and_squarefree():
    x = Poly.x()
    a = (x - 1) ** 2 * (x + 3)
    b = (x - 1) * (x + 5)
    assert poly_gcd(a, b) == x - 1
    assert squarefree(a) == ((x - 1) * (x + 3)).monic()


def test_cauchy_bound_exceeds_roots():
    x = Poly.x()
    p = (x - 7) * (x + 2) * (x - Fraction(1, 2))
    assert cauchy_bound(p) > 7
    assert root_free_from(p) > 7


def test_sturm_counts_roots():
    x = Poly.x()
    p = (x - 1) * (x - 4) * (x - 9)
    s = SturmChain(p)
    assert s.roots_between(0, 10) == 3
    assert s.roots_between(2, 5) == 1
    assert s.roots_between(10, 100) == 0


@settings(max_examples=200, deadline=None)
@given(st.lists(coeffs, min_size=1, max_size=3), st.integers(min_value=0, max_value=40))
def test_constant_sign_ranges_are_sound(cs, lo):
    polys = [Poly(c) for c in cs if any(c)]
    if not polys:
        return
    hi = lo + 200
    ranges = constant_sign_ranges(polys, lo, hi)
    assert ranges[0][0] == lo and ranges[-1][1] == hi
    for (a, b), (c, _) in zip(ranges, ranges[1:]):
        assert b == c
    for a, b in ranges:
        first = tuple(sign(p(a)) for p in polys)
        for n in range(a, b):
            assert tuple(sign(p(n)) for p in polys) == first


def test_ratfunc_reduction_and_limit():
    x = Poly.x()
    f = RatFunc((x - 1) * (x + 2), (x - 1) * (x * 2))
    assert f.den == x
    assert f.num == (x + 2).scale(Fraction(1, 2))
    assert f.limit() == Fraction(1, 2)
    assert RatFunc(x * x, x + 1).limit() is None
    assert RatFunc(Poly.const(3), x).limit() == 0
    assert RatFunc(Poly.const(1), x)(0) is None


def test_format_ratfunc():
    x = Poly.x()
    assert format_ratfunc(RatFunc(Poly.const(1), x)) == "1/n"
    assert format_ratfunc(RatFunc(Poly.const(-1), x.scale(3))) == "-1/(3*n)"
    assert format_ratfunc(RatFunc(x * x * 3 + x, x * x + 5)) == "(3*n^2 + n)/(n^2 + 5)"
