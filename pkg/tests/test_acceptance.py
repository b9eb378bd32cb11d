"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the pytest terminal summary.
Random inputs come from fixed seeds so every run checks the same cases.
"""

import random
import time
from fractions import Fraction

import numpy as np

from corpus import CORPUS, EPS_GRID, Oracle, natset_bits
from hyperseq import natset as ns
from hyperseq.errors import NotHypernatural
from hyperseq.expr import evaluate, germ, parse
from hyperseq.filters import DEFAULT_FRAGMENT, UltraFragment, decide
from hyperseq.hyper import (
    FrechetOrder,
    Germ,
    Order,
    classify,
    compare,
    equal_under,
    frechet_compare,
    inverse,
    standard_part,
)
from hyperseq.limits import (
    BadEpsilon,
    frechet_limit_check,
    limit,
    order_check,
    replay,
    robinson_limit,
    s_epsilon,
    squeeze_check,
    witness_nu,
)
from hyperseq.models import model_check
from hyperseq.poly import Poly, RatFunc
from hyperseq.starsets import (
    Interval,
    Point,
    RealSetDesc,
    as_hypernatural,
    nonstandard_witness,
    star_member,
)

Q = Fraction
RESULTS: list[str] = []


def report(num, title, violations, checked):
    ok = not violations
    line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {title}  ({checked} checks, {len(violations)} violations)"
    RESULTS.append(line)
    print(line)
    assert ok, violations[:5]


def random_fragment(rng):
    while True:
        cons = tuple((m, rng.randrange(m)) for m in rng.sample(range(2, 13), rng.randint(0, 3)))
        try:
            return UltraFragment(cons)
        except Exception:
            continue


def random_ratfunc(rng, max_deg=3, finite=False):
    while True:
        num = Poly([rng.randint(-5, 5) for _ in range(rng.randint(1, max_deg + 1))])
        den = Poly([rng.randint(-5, 5) for _ in range(rng.randint(1, max_deg + 1))])
        if den.is_zero():
            continue
        f = RatFunc(num, den)
        if finite and f.num.degree > f.den.degree:
            continue
        return f


def random_germ(rng, finite=False):
    m = rng.choice([1, 1, 2, 3, 4])
    return Germ([random_ratfunc(rng, finite=finite) for _ in range(m)])


# ---- 1 -----------------------------------------------------------------------

def test_criterion_01_worked_examples():
    bad, n = [], 0

    def check(cond, what):
        nonlocal n
        n += 1
        if not cond:
            bad.append(what)

    inf = germ("1/n")
    c = classify(inf)
    check(c.infinitesimal and c.finite and not c.standard, "1/n infinitesimal")
    check(compare(inf, 0) is Order.GREATER, "1/n > 0")
    check(classify(germ("n")).infinitely_large, "n infinitely large")
    for r in (Q(0), Q(1), Q(-3, 2)):
        x = germ(f"{r} + 1/n")
        c = classify(x)
        check(c.finite and not c.standard and not c.infinitely_large, f"{r}+1/n finite non-standard")
        check(standard_part(x) == r, f"st({r}+1/n) = {r}")
    report(1, "classification examples", bad, n)


# ---- 2 -----------------------------------------------------------------------

def test_criterion_02_evens_odds():
    rng = random.Random(2)
    e, o = ns.evens(), ns.odds()
    bad = []
    if e.is_cofinite() or o.is_cofinite() or not (e | o).is_cofinite():
        bad.append("cofiniteness of E, O, E u O")
    for _ in range(20):
        u = random_fragment(rng)
        if decide(u, e) == decide(u, o):
            bad.append(u)
    report(2, "evens/odds corollary over 20 fragments", bad, 23)


# ---- 3 -----------------------------------------------------------------------

def test_criterion_03_zero_divisors():
    rng = random.Random(3)
    x, y = germ("case(2;1,0)"), germ("case(2;0,1)")
    bad = []
    if not (x * y).is_zero() or x * y != Germ.const(0):
        bad.append("product not zero")
    if frechet_compare(x, y) is not FrechetOrder.INCOMPARABLE:
        bad.append("frechet comparable")
    for _ in range(20):
        u = random_fragment(rng)
        if compare(x, y, u) is Order.EQUAL:
            bad.append(u)
    report(3, "zero divisors and incomparability", bad, 22)


# ---- 4 -----------------------------------------------------------------------

def test_criterion_04_limit_engines():
    top = 10**5
    bad, n = [], 0
    if witness_nu(germ("1/n"), 0, Q(1, 100)) != 101:
        bad.append("witness_nu(1/n, 0, 1/100) != 101")
    for text, expected in CORPUS:
        g = germ(text)
        e = parse(text)
        for k in range(g.threshold, g.threshold + 200):
            if g(k) != evaluate(e, k):
                bad.append((text, "germ differs from expression", k))
                break
        v = limit(g)
        rob = robinson_limit(g)
        n += 1
        if v.converges != (expected is not None) or rob.converges != v.converges:
            bad.append((text, "verdict"))
            continue
        target = expected if expected is not None else Q(0)
        if v.converges and v.limit != expected:
            bad.append((text, "limit value"))
        oracle = Oracle(g, top)
        for eps in EPS_GRID:
            n += 1
            fr = frechet_limit_check(g, target, eps)
            try:
                nu = witness_nu(g, target, eps)
            except Exception:
                nu = None
            if (nu is not None) != fr:
                bad.append((text, eps, "frechet vs witness"))
            if v.converges and not fr:
                bad.append((text, eps, "robinson vs frechet"))
            bits = np.array(oracle.members(target, eps))
            if not np.array_equal(natset_bits(s_epsilon(g, target, eps), top), bits):
                bad.append((text, eps, "S_eps differs from oracle"))
            if nu is not None:
                if 0 < nu <= top and bits[nu - 1]:
                    bad.append((text, eps, "nu not minimal"))
                if nu < top and not bits[nu:].all():
                    bad.append((text, eps, "oracle fails past nu"))
        if not v.converges:
            if not any(isinstance(c, BadEpsilon) and not c.s_eps.is_cofinite() for c in v.counterexamples):
                bad.append((text, "no BadEpsilon"))
    assert len(CORPUS) >= 30
    report(4, f"three limit engines on {len(CORPUS)} germs, oracle to 10^5", bad, n)


# ---- 5 -----------------------------------------------------------------------

def random_natset(rng):
    m = rng.randint(1, 6)
    if rng.random() < 0.5:
        res = set(range(m))
    else:
        res = {r for r in range(m) if rng.random() < 0.5}
    t = rng.randint(0, 40)
    exc = {k: rng.random() < 0.5 for k in rng.sample(range(t), min(t, rng.randint(0, 6)))} if t else {}
    return ns.normalize(t, m, res, exc)


def test_criterion_05_frechet_axioms():
    rng = random.Random(5)
    sets = [random_natset(rng) for _ in range(1000)]
    bad, n = [], 0
    n += 1
    if ns.empty().is_cofinite():
        bad.append("(i) empty set cofinite")
    for a, b in zip(sets, sets[1:] + sets[:1]):
        n += 3
        h = max(a.threshold, b.threshold) + 60
        outside = [k for k in range(h, h + 60) if k not in a]
        if a.is_cofinite() != (not outside):
            bad.append(("cofinite vs pointwise", a))
        if a.is_cofinite() and b.is_cofinite() and not (a & b).is_cofinite():
            bad.append(("(ii)", a, b))
        sup = a | b
        if a.is_cofinite() and a <= sup and not sup.is_cofinite():
            bad.append(("(iii)", a, b))
    for k in range(101):
        n += 1
        t = ns.tail(k + 1)
        if not t.is_cofinite() or k in t:
            bad.append(("(iv)", k))
    report(5, "Frechet filter axioms over 1000 random sets", bad, n)


# ---- 6 -----------------------------------------------------------------------

def test_criterion_06_field_order_st():
    rng = random.Random(6)
    frags = [DEFAULT_FRAGMENT, UltraFragment(((2, 1),)), UltraFragment(((3, 2),)), UltraFragment(((4, 3),)), UltraFragment(((12, 7),))]
    bad, n = [], 0
    for i in range(500):
        x, y, z = random_germ(rng), random_germ(rng), random_germ(rng)
        fx, fy = random_germ(rng, finite=True), random_germ(rng, finite=True)
        if x + y != y + x or x * y != y * x:
            bad.append(("commutativity", i))
        if (x + y) + z != x + (y + z) or (x * y) * z != x * (y * z):
            bad.append(("associativity", i))
        if x * (y + z) != x * y + x * z:
            bad.append(("distributivity", i))
        for u in frags:
            n += 1
            if sum(compare(x, y, u) is o for o in Order) != 1:
                bad.append(("trichotomy", i))
            if not x.selected(u).is_zero() and not equal_under(x * inverse(x, u), 1, u):
                bad.append(("inverse", i))
            sx, sy = standard_part(fx, u), standard_part(fy, u)
            if standard_part(fx + fy, u) != sx + sy or standard_part(fx * fy, u) != sx * sy:
                bad.append(("st homomorphism", i))
            if compare(fx, fy, u) is Order.LESS and not sx <= sy:
                bad.append(("st order", i))
        r = Q(rng.randint(-20, 20), rng.randint(1, 9))
        h = r + germ("1/n")
        if not (standard_part(Germ.const(r)) == standard_part(h) == r and compare(Germ.const(r), h) is Order.LESS):
            bad.append(("st strictness", r))
    report(6, "field, order and st laws, 500 samples x 5 fragments", bad, n)


# ---- 7 -----------------------------------------------------------------------

def random_realset(rng, need_interval=False):
    def q():
        return Q(rng.randint(-8, 8), rng.choice([1, 2, 3]))

    pieces = []
    for j in range(rng.randint(1 if need_interval else 0, 3)):
        if (need_interval and j == 0) or rng.random() < 0.6:
            lo, hi = q(), q()
            while hi == lo:
                hi = q()
            lo, hi = min(lo, hi), max(lo, hi)
            lo = None if rng.random() < 0.15 else lo
            hi = None if rng.random() < 0.15 else hi
            pieces.append(Interval(lo, hi, lo is not None and rng.random() < 0.5, hi is not None and rng.random() < 0.5))
        else:
            pieces.append(Point(q()))
    return RealSetDesc(pieces)


def probe_germ(rng):
    kind = rng.random()
    if kind < 0.4:
        return random_germ(rng)
    c = Q(rng.randint(-8, 8), rng.choice([1, 2, 3]))
    if kind < 0.6:
        return Germ.const(c)
    s = rng.choice([Q(1), Q(-1), Q(1, 7)])
    return Germ.const(c) + Germ.const(s) * germ("1/n")


def test_criterion_07_star_boolean():
    rng = random.Random(7)
    bad, n = [], 0
    for i in range(500):
        x, a, b, u = probe_germ(rng), random_realset(rng), random_realset(rng), random_fragment(rng)
        n += 1
        ma, mb = star_member(x, a, u), star_member(x, b, u)
        if star_member(x, a.intersection(b), u) != (ma and mb):
            bad.append(("intersection", i))
        if star_member(x, a.union(b), u) != (ma or mb):
            bad.append(("union", i))
        if star_member(x, a.difference(b), u) != (ma and not mb):
            bad.append(("difference", i))
        if a.issubset(b) and ma and not mb:
            bad.append(("subset", i))
    for i in range(50):
        a = random_realset(rng, need_interval=True)
        n += 1
        for p in a.pieces:
            pts = [p.value] if isinstance(p, Point) else [c for c in (p.lo, p.hi) if c is not None and a.contains(c)]
            if isinstance(p, Interval):
                lo = p.lo if p.lo is not None else (p.hi - 5 if p.hi is not None else Q(0))
                hi = p.hi if p.hi is not None else lo + 5
                pts.append((lo + hi) / 2)
            for c in pts:
                if not star_member(Germ.const(c), a):
                    bad.append(("A in *A", i, c))
        w = nonstandard_witness(a)
        if not star_member(w, a) or w.is_constant():
            bad.append(("proper extension", i))
    report(7, "star-extension Boolean identities", bad, n)


# ---- 8 -----------------------------------------------------------------------

def test_criterion_08_hypernatural_dichotomy():
    rng = random.Random(8)
    bad, accepted = [], 0
    for i in range(200):
        m = rng.choice([1, 1, 2, 3])
        pieces = []
        for _ in range(m):
            cs = [rng.randint(-4, 6) for _ in range(rng.randint(1, 4))]
            pieces.append(RatFunc(Poly(cs).scale(Q(1, rng.choice([1, 1, 2, 6])))))
        g = Germ(pieces)
        u = random_fragment(rng)
        try:
            w = as_hypernatural(g, u)
        except NotHypernatural:
            continue
        accepted += 1
        c = classify(w.germ, u)
        if w.is_standard():
            v = w.standard_value()
            if not (c.standard and v is not None and v >= 0 and c.standard_value == v):
                bad.append(("standard", i))
        elif not c.infinitely_large:
            bad.append(("finite non-standard hypernatural", i))
    assert accepted > 20
    report(8, f"hypernatural dichotomy on 200 germs ({accepted} accepted)", bad, 200)


# ---- 9 -----------------------------------------------------------------------

def test_criterion_09_finite_models():
    t0 = time.perf_counter()
    bad = []
    for k in (1, 2, 3, 4):
        rep = model_check(k)
        if rep["filters"] != 2**k - 1 or rep["ultrafilters"] != k or rep["violations"]:
            bad.append((k, rep))
    elapsed = time.perf_counter() - t0
    if elapsed >= 10:
        bad.append(("runtime", elapsed))
    report(9, f"finite models k=1..4 in {elapsed:.2f}s", bad, 4)


# ---- 10 ----------------------------------------------------------------------

def test_criterion_10_squeeze_and_order():
    a, x, b = germ("-1/n"), germ("case(2;1,-1)*(1/n)"), germ("1/n")
    bad = []
    for eps in (Q(1, 10), Q(1, 100)):
        tr = squeeze_check(a, b, x, 0, eps)
        if not tr.conclusion or not tr.steps[-1].result:
            bad.append(("conclusion", eps))
        if replay(tr).to_json() != tr.to_json():
            bad.append(("replay", eps))
    rep = order_check(germ("1 - 1/n"), germ("1"))
    if not (rep.holds and rep.strict_premise and not rep.strict_conclusion):
        bad.append("order trace")
    report(10, "squeeze traces replay bit-identically", bad, 3)
