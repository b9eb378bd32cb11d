"""Filters generated by finite bases, ultrafilter fragments, and the
two-valued measure they induce, all restricted to eventually periodic sets.

An :class:`UltraFragment` is the residue tower of one integer point ``x``:
it picks the class ``x mod m`` for every modulus ``m``.  Any free
ultrafilter containing the tower's classes decides an eventually periodic
set ``A`` by whether ``x mod m_A`` lies in the tail residues of ``A``; the
finite prefix never matters because cofinite sets belong to every free
ultrafilter.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import EmptyBasisIntersection, IncoherentConstraints, ParseError
from .natset import NatSet


def crt(constraints: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Smallest x >= 0 and modulus M with x = r_i (mod m_i) for every pair.

    Moduli need not be coprime; raises IncoherentConstraints when the
    congruences conflict.
    """
    x, big = 0, 1
    for m, r in constraints:
        if m < 1:
            raise IncoherentConstraints(f"modulus must be positive, got {m}")
        r %= m
        g = gcd(big, m)
        if (r - x) % g:
            raise IncoherentConstraints(f"x = {x} mod {big} conflicts with x = {r} mod {m}")
        # solve x + big*k = r (mod m)
        step = big // g
        k = ((r - x) // g) * pow(step, -1, m // g) % (m // g) if m // g > 1 else 0
        x += big * k
        big = lcm(big, m)
        x %= big
    return x, big


@dataclass(frozen=True)
class UltraFragment:
    constraints: tuple[tuple[int, int], ...] = ()
    point: int = field(init=False)
    period: int = field(init=False)

    def __post_init__(self):
        cons = tuple((int(m), int(r) % int(m) if int(m) > 0 else int(r)) for m, r in self.constraints)
        x, big = crt(cons)
        object.__setattr__(self, "constraints", cons)
        object.__setattr__(self, "point", x)
        object.__setattr__(self, "period", big)

    def residue(self, m: int) -> int:
        if m < 1:
            raise ValueError("modulus must be positive")
        return self.point % m

    def decide(self, a: NatSet) -> bool:
        return self.residue(a.modulus) in a.residues

    def __contains__(self, a: NatSet) -> bool:
        return self.decide(a)

    def to_text(self) -> str:
        return ",".join(f"{m}:{r}" for m, r in self.constraints)


DEFAULT_FRAGMENT = UltraFragment()


def fragment_residue(u: UltraFragment, m: int) -> int:
    return u.residue(m)


def decide(u: UltraFragment, a: NatSet) -> bool:
    return u.decide(a)


def parse_fragment(text: str) -> UltraFragment:
    """``"2:1,3:2"`` -> constraints; the empty string is the zero tower."""
    pairs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        m = re.fullmatch(r"(\d+)\s*:\s*(\d+)", item)
        if not m:
            start = text.find(item)
            raise ParseError(f"bad fragment constraint {item!r}", (start, start + len(item)), text)
        pairs.append((int(m.group(1)), int(m.group(2))))
    return UltraFragment(tuple(pairs))


class Measure01:
    """The {0,1}-valued finitely additive measure of a fragment."""

    def __init__(self, fragment: UltraFragment = DEFAULT_FRAGMENT):
        self.fragment = fragment

    def __call__(self, a: NatSet) -> int:
        return int(self.fragment.decide(a))


def measure(u: UltraFragment, a: NatSet) -> int:
    return Measure01(u)(a)


@dataclass(frozen=True)
class FilterBasis:
    sets: tuple[NatSet, ...]
    core: NatSet = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sets = tuple(self.sets)
        if not sets:
            raise EmptyBasisIntersection("a filter basis needs at least one set")
        core = sets[0]
        for s in sets[1:]:
            core = core & s
        if core.is_empty():
            raise EmptyBasisIntersection("basis sets have empty intersection")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "core", core)

    def generates(self, a: NatSet) -> bool:
        return self.core.issubset(a)


def generated_member(g: FilterBasis | Sequence[NatSet], a: NatSet) -> bool:
    if not isinstance(g, FilterBasis):
        g = FilterBasis(tuple(g))
    return g.generates(a)
