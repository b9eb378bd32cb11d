"""Germ corpus with hand-derived limits, and an exact brute-force oracle."""

from fractions import Fraction

from hyperseq.expr import germ

Q = Fraction

# (expression, limit or None when divergent)
CORPUS = [
    ("1/n", Q(0)),
    ("n", None),
    ("(-1)^n", None),
    ("(-1)^n/n", Q(0)),
    ("1 + 1/n", Q(1)),
    ("-3/2 + 1/n", Q(-3, 2)),
    ("(3*n^2+n)/(n^2+5)", Q(3)),
    ("(2*n^3 - n)/(5*n^3 + 7)", Q(2, 5)),
    ("(n^4 - 3*n^2)/(2*n^4 + n + 1)", Q(1, 2)),
    ("n^2/(n+1)", None),
    ("1/(n-3)", Q(0)),
    ("(n+1)/(n-1)", Q(1)),
    ("case(2; 1, -1)", None),
    ("case(2; 1/n, 2/n)", Q(0)),
    ("case(3; 1 + 1/n, 1 - 1/n^2, 1)", Q(1)),
    ("case(2; 1, 1/n)", None),
    ("case(2; n, 1/n)", None),
    ("7", Q(7)),
    ("0", Q(0)),
    ("1/n^4", Q(0)),
    ("(n^2 - 1)/(n^2 + 1)", Q(1)),
    ("n - n^2/(n+1)", Q(1)),
    ("(1 + 1/n)^2", Q(1)),
    ("(-1)^n * (n+1)/n", None),
    ("(5*n - 2)/(n^3 + n + 1)", Q(0)),
    ("-1*n^3 + n", None),
    ("case(4; 0, 1/n, 0, -1/n)", Q(0)),
    ("case(3; 2, 2 + 1/n, 2 - 3/n)", Q(2)),
    ("1/(n^2 - 10*n + 26)", Q(0)),
    ("(n^3 + 2)/(1000*n^3 - 999*n^2)", Q(1, 1000)),
    ("case(2; (n+1)/n, (n-1)/n)", Q(1)),
    ("1/(n-1000)", Q(0)),
    ("(-1)^n/(n^2 + 1)", Q(0)),
    ("case(2; 1/2, -1/2) + 1/n", None),
    ("n/(n+1) - 1", Q(0)),
]

EPS_GRID = (Q(1), Q(1, 2), Q(1, 10), Q(1, 100), Q(1, 10**6))


def _int_poly(p, scale):
    return [int(c * scale) for c in p.coeffs]


def _horner(cs, n):
    acc = 0
    for c in reversed(cs):
        acc = acc * n + c
    return acc


class Oracle:
    """Pointwise truth of |a(n) - L| < eps for n < top, in integer arithmetic.

    Each class piece p/q is cleared to integer polynomials P, Q with
    a(n) = P(n)/Q(n); undefined points (Q(n) = 0) count as failures.
    """

    def __init__(self, g, top):
        self.top = top
        self.values = []
        cleared = []
        for f in g.pieces:
            d = 1
            for c in f.num.coeffs + f.den.coeffs:
                d = d * c.denominator // _gcd(d, c.denominator)
            cleared.append((_int_poly(f.num, d), _int_poly(f.den, d)))
        m = g.modulus
        for n in range(top):
            P, Qd = cleared[n % m]
            self.values.append((_horner(P, n), _horner(Qd, n)))

    def members(self, limit, eps):
        ln, ld = limit.numerator, limit.denominator
        en, ed = eps.numerator, eps.denominator
        out = []
        for p, q in self.values:
            # |p/q - ln/ld| < en/ed  <=>  (ed*(ld*p - ln*q))^2 < (en*ld*q)^2
            if q == 0:
                out.append(False)
                continue
            lhs = ed * (ld * p - ln * q)
            rhs = en * ld * q
            out.append(lhs * lhs < rhs * rhs)
        return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def corpus_germs():
    return [(text, germ(text), lim) for text, lim in CORPUS]


def natset_bits(s, top):
    """Membership of s on [0, top) as a numpy bool array, read off the blocks."""
    import numpy as np

    idx = np.arange(top)
    out = np.isin(idx % s.modulus, sorted(s.residues))
    for b in s.blocks:
        lo, hi = min(b.start, top), min(b.stop, top)
        if lo < hi:
            out[lo:hi] = np.isin(idx[lo:hi] % b.modulus, sorted(b.residues))
    return out
