"""Exhaustive checks of the filter and ultrafilter theorems on {0..k-1}, k <= 4.

Subsets are bitmasks; a family is the set of its member bitmasks.  Filters
are found by checking the axioms directly on every one of the 2^(2^k)
families, so the count 2^k - 1 comes out as a result, not an input.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ._kernels import filter_mask, measure_mask
from .errors import NotAFilter, NotUltra, UniverseTooLarge

MAX_K = 4


def _check_k(k: int) -> None:
    if not 1 <= k <= MAX_K:
        raise UniverseTooLarge(f"universe size must be between 1 and {MAX_K}, got {k}")


@dataclass(frozen=True, order=True)
class FiniteFamily:
    k: int
    members: frozenset[int]

    def __post_init__(self):
        _check_k(self.k)
        members = frozenset(int(s) for s in self.members)
        if any(not 0 <= s < (1 << self.k) for s in members):
            raise ValueError("member outside the power set of the universe")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_mask(cls, k: int, mask: int) -> "FiniteFamily":
        return cls(k, frozenset(s for s in range(1 << k) if (mask >> s) & 1))

    @classmethod
    def principal(cls, k: int, base: int) -> "FiniteFamily":
        """{X : base ⊆ X}."""
        return cls(k, frozenset(s for s in range(1 << k) if s & base == base))

    @property
    def universe(self) -> int:
        return (1 << self.k) - 1

    @property
    def mask(self) -> int:
        return sum(1 << s for s in self.members)

    def __contains__(self, s: int) -> bool:
        return s in self.members

    def core(self) -> int:
        """Intersection of all members (the universe for an empty family)."""
        out = self.universe
        for s in self.members:
            out &= s
        return out

    def is_filter(self) -> bool:
        m = self.members
        if not m or 0 in m:
            return False
        for a in m:
            for b in m:
                if a & b not in m:
                    return False
            for x in range(1 << self.k):
                if a | x not in m:
                    return False
        return True

    def dichotomy(self) -> bool:
        """Every subset or its complement is a member."""
        return all(s in self.members or (self.universe ^ s) in self.members for s in range(1 << self.k))

    def as_sets(self) -> list[list[int]]:
        return [[i for i in range(self.k) if (s >> i) & 1] for s in sorted(self.members)]


def enumerate_filters(k: int) -> list[FiniteFamily]:
    _check_k(k)
    flags = filter_mask(k)
    return [FiniteFamily.from_mask(k, int(f)) for f in flags.nonzero()[0]]


def _maximal(filters: list[FiniteFamily]) -> list[FiniteFamily]:
    return [f for f in filters if not any(f.members < g.members for g in filters)]


def enumerate_ultrafilters(k: int) -> list[FiniteFamily]:
    """Maximal filters, found by comparison against every other filter."""
    return _maximal(enumerate_filters(k))


def extend_filter(f: FiniteFamily) -> list[FiniteFamily]:
    """All ultrafilters containing f."""
    if not f.is_filter():
        raise NotAFilter(f"family {f.as_sets()} is not a filter")
    return [u for u in enumerate_ultrafilters(f.k) if f.members <= u.members]


def _is_ultra(f: FiniteFamily) -> bool:
    return f.is_filter() and f in enumerate_ultrafilters(f.k)


def check_measure(u: FiniteFamily) -> dict:
    """Verify that mu(A) = [A in u] is a two-valued finitely additive measure
    and that the measure lemmas hold for it."""
    if not _is_ultra(u):
        raise NotUltra(f"family {u.as_sets()} is not an ultrafilter")
    k, full = u.k, u.universe
    subsets = range(1 << k)

    def mu(s: int) -> int:
        return 1 if s in u else 0

    disjoint = [(a, b) for a, b in product(subsets, subsets) if a & b == 0]
    checks = {
        "two_valued": all(mu(s) in (0, 1) for s in subsets),
        "mu_universe": mu(full) == 1,
        "mu_empty": mu(0) == 0,
        "additive": all(mu(a | b) == mu(a) + mu(b) for a, b in disjoint),
        "complement_exactly_one": all(mu(s) + mu(full ^ s) == 1 for s in subsets),
        "intersection": all(mu(a & b) == 1 for a in subsets for b in subsets if mu(a) and mu(b)),
        "upward": all(mu(b) == 1 for a in subsets for b in subsets if a & b == a and mu(a)),
    }
    return {
        "k": k,
        "ultrafilter": u.as_sets(),
        "disjoint_pairs": len(disjoint),
        "checks": checks,
        "ok": all(checks.values()),
    }


def _union_lemma(u: FiniteFamily, max_sets: int = 3) -> bool:
    subsets = range(1 << u.k)
    for n in range(1, max_sets + 1):
        for sets in product(subsets, repeat=n):
            union = 0
            for s in sets:
                union |= s
            if union not in u:
                continue
            hits = sum(s in u for s in sets)
            if hits == 0:
                return False
            disjoint = all(a & b == 0 for i, a in enumerate(sets) for b in sets[i + 1:])
            if disjoint and hits != 1:
                return False
    return True


def _measures(k: int) -> list[FiniteFamily]:
    """Families {A : mu(A) = 1} over every finitely additive two-valued mu."""
    flags = measure_mask(k)
    return [FiniteFamily.from_mask(k, int(m)) for m in flags.nonzero()[0]]


def model_check(k: int) -> dict:
    """Run every finite-universe theorem check for one k and report counts."""
    _check_k(k)
    filters = enumerate_filters(k)
    ultras = _maximal(filters)
    ultra_set = set(ultras)
    principal = {FiniteFamily.principal(k, b) for b in range(1, 1 << k)}
    points = {FiniteFamily.principal(k, 1 << i) for i in range(k)}
    checks = {
        "filter_count": len(filters) == (1 << k) - 1,
        "filters_are_principal": set(filters) == principal,
        "ultrafilter_count": len(ultras) == k,
        "ultrafilters_are_points": ultra_set == points,
        "every_filter_extends": all(extend_filter(f) for f in filters),
        "dichotomy_iff_ultra": all(f.dichotomy() == (f in ultra_set) for f in filters),
        "union_lemma": all(_union_lemma(u) for u in ultras),
        "measure_lemmas": all(check_measure(u)["ok"] for u in ultras),
        "measure_correspondence": set(_measures(k)) == ultra_set,
        "no_free_filter": all(f.core() != 0 for f in filters),
    }
    return {
        "k": k,
        "families": 1 << (1 << k),
        "filters": len(filters),
        "ultrafilters": len(ultras),
        "checks": checks,
        "violations": sum(not v for v in checks.values()),
    }
