import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperseq import natset as ns
from hyperseq.errors import EmptyBasisIntersection, IncoherentConstraints, ParseError
from hyperseq.filters import (
    DEFAULT_FRAGMENT,
    FilterBasis,
    Measure01,
    UltraFragment,
    crt,
    decide,
    fragment_residue,
    generated_member,
    measure,
    parse_fragment,
)
from test_natset import natsets

fragments = st.lists(
    st.tuples(st.integers(min_value=1, max_value=30), st.integers(min_value=0, max_value=29)), max_size=3
).map(lambda cs: UltraFragment(tuple((m, r % m) for m, r in cs)) if _coherent(cs) else DEFAULT_FRAGMENT)


def _coherent(cs):
    try:
        crt([(m, r % m) for m, r in cs])
    except IncoherentConstraints:
        return False
    return True


def test_crt():
    assert crt([(2, 1), (3, 2)]) == (5, 6)
    assert crt([(4, 2), (6, 4)]) == (10, 12)
    with pytest.raises(IncoherentConstraints):
        crt([(2, 1), (4, 2)])
    with pytest.raises(IncoherentConstraints):
        UltraFragment(((2, 1), (4, 2)))


def test_residue_examples():
    assert all(fragment_residue(DEFAULT_FRAGMENT, m) == 0 for m in range(1, 50))
    u = UltraFragment(((2, 1),))
    assert (u.residue(2), u.residue(4), u.residue(6)) == (1, 1, 1)
    assert UltraFragment(((2, 1), (3, 2))).residue(6) == 5


def test_parse_fragment():
    assert parse_fragment("2:1,3:2").residue(6) == 5
    assert parse_fragment("") == DEFAULT_FRAGMENT
    with pytest.raises(ParseError):
        parse_fragment("2-1")


def test_decide_examples():
    assert decide(DEFAULT_FRAGMENT, ns.evens())
    assert not decide(DEFAULT_FRAGMENT, ns.odds())
    for u in (DEFAULT_FRAGMENT, UltraFragment(((2, 1),)), UltraFragment(((7, 3), (5, 4)))):
        assert all(decide(u, ns.tail(nu)) for nu in (0, 3, 10**6))
        assert not decide(u, ns.finite([0, 1, 2, 99]))
        assert not decide(u, ns.empty())


def test_generated_member_examples():
    assert generated_member([ns.tail(3), ns.tail(7)], ns.tail(5))
    assert generated_member([ns.evens()], ns.full())
    assert not generated_member([ns.evens(), ns.tail(10)], ns.odds())
    with pytest.raises(EmptyBasisIntersection):
        FilterBasis((ns.evens(), ns.odds()))


def test_measure_examples():
    for u in (DEFAULT_FRAGMENT, UltraFragment(((2, 1),))):
        mu = Measure01(u)
        assert mu(ns.full()) == 1
        assert mu(ns.finite([3, 4])) == 0
        assert mu(ns.empty()) == 0
        assert mu(ns.evens()) + mu(ns.odds()) == 1


@settings(max_examples=500, deadline=None)
@given(natsets(), natsets(), fragments)
def test_ultrafilter_laws(a, b, u):
    assert decide(u, a) != decide(u, ~a)
    if decide(u, a | b):
        assert decide(u, a) or decide(u, b)
    if (a & b).is_empty():
        assert decide(u, a | b) == (decide(u, a) + decide(u, b) == 1)
        assert measure(u, a | b) == measure(u, a) + measure(u, b)
    if decide(u, a) and decide(u, b):
        assert decide(u, a & b)
    if decide(u, a) and a <= b:
        assert decide(u, b)
    if a.is_cofinite():
        assert decide(u, a)
    if a.is_finite():
        assert not decide(u, a)


@settings(max_examples=200, deadline=None)
@given(fragments, st.integers(min_value=1, max_value=1000), st.integers(min_value=1, max_value=50))
def test_coherence(u, d, k):
    m = d * k
    assert u.residue(d) == u.residue(m) % d
