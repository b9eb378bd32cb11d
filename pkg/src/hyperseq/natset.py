"""Eventually periodic subsets of N and their Boolean algebra.

A :class:`NatSet` is stored as a canonical tail rule plus a prefix:

* for ``n >= threshold`` membership is ``n % modulus in residues``, with
  ``modulus`` the minimal period of the tail and ``threshold`` the least
  index from which the rule holds;
* below the threshold, membership is given by contiguous blocks, each a
  periodic pattern on its own index range.  Blocks keep sets such as
  ``{n < 10**6 : n odd}`` small; the exceptions (indices where the prefix
  disagrees with the tail rule) are derived from them on demand.

Threshold, modulus and residues are unique for a given set.  Block
encodings of the same prefix can differ, so equality compares prefixes
pointwise (in time proportional to the number of blocks, not to the
threshold).
"""

from __future__ import annotations

import re
from bisect import bisect_right
from functools import lru_cache
from math import lcm
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import ParseError

Pattern = tuple[int, frozenset]

_ALL: Pattern = (1, frozenset({0}))
_NONE: Pattern = (1, frozenset())


class Block(NamedTuple):
    start: int
    stop: int
    modulus: int
    residues: frozenset

    def contains(self, n: int) -> bool:
        return n % self.modulus in self.residues


@lru_cache(maxsize=4096)
def _divisors(m: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, m + 1) if m % d == 0)


@lru_cache(maxsize=65536)
def reduce_pattern(modulus: int, residues: frozenset) -> Pattern:
    """Minimal period of the periodic set {n : n % modulus in residues}."""
    if not residues:
        return _NONE
    if len(residues) == modulus:
        return _ALL
    for d in _divisors(modulus):
        if d == modulus:
            break
        small = frozenset(r % d for r in residues)
        if len(small) * (modulus // d) == len(residues):
            return d, small
    return modulus, residues


def _lift(pattern: Pattern, big: int) -> frozenset:
    m, res = pattern
    return frozenset(x for x in range(big) if x % m in res)


def _combine(p: Pattern, q: Pattern, op) -> Pattern:
    big = lcm(p[0], q[0])
    res = frozenset(x for x in range(big) if op(x % p[0] in p[1], x % q[0] in q[1]))
    return reduce_pattern(big, res)


def _last_hit(start: int, stop: int, big: int, hits: Iterable[int]) -> int | None:
    """Largest n in [start, stop) with n % big in hits."""
    best = None
    top = stop - 1
    for h in hits:
        n = top - ((top - h) % big)
        if n >= start and (best is None or n > best):
            best = n
    return best


def _pattern_points(start: int, stop: int, pattern: Pattern) -> tuple[bool, bool]:
    """(has a member, has a non-member) within [start, stop)."""
    m, res = pattern
    length = stop - start
    if length >= m:
        return bool(res), len(res) < m
    members = [(n % m in res) for n in range(start, stop)]
    return any(members), not all(members)


class NatSet:
    __slots__ = ("threshold", "modulus", "residues", "blocks", "_starts")

    def __init__(self, threshold: int, modulus: int, residues: frozenset, blocks: tuple[Block, ...]):
        # use normalize()/from_blocks(); this trusts its arguments
        self.threshold = threshold
        self.modulus = modulus
        self.residues = residues
        self.blocks = blocks
        self._starts = [b.start for b in blocks]

    # ---- construction -------------------------------------------------
    @classmethod
    def from_blocks(cls, blocks: Iterable[tuple[int, int, int, Iterable[int]]], modulus: int, residues: Iterable[int]) -> "NatSet":
        """Build from contiguous prefix blocks covering [0, T) and a tail rule from T."""
        raw = []
        pos = 0
        for a, b, m, res in blocks:
            if a != pos or b < a:
                raise ValueError(f"blocks must be contiguous from 0; got [{a}, {b}) after {pos}")
            if b > a:
                raw.append(Block(a, b, *reduce_pattern(m, frozenset(r % m for r in res))))
            pos = b
        tail = reduce_pattern(modulus, frozenset(r % modulus for r in residues))
        return cls._canonical(raw, pos, tail)

    @classmethod
    def _canonical(cls, blocks: list[Block], threshold: int, tail: Pattern) -> "NatSet":
        blocks = _merge(blocks)
        m, res = tail
        # absorb prefix blocks that already follow the tail rule
        while blocks:
            blk = blocks[-1]
            big = lcm(blk.modulus, m)
            diff = [x for x in range(big) if (x % blk.modulus in blk.residues) != (x % m in res)]
            hit = _last_hit(blk.start, threshold, big, diff)
            if hit is None:
                blocks.pop()
                threshold = blk.start
                continue
            threshold = hit + 1
            blocks[-1] = blk._replace(stop=threshold)
            break
        tidy = []
        for blk in blocks:
            has_in, has_out = _pattern_points(blk.start, blk.stop, (blk.modulus, blk.residues))
            if not has_in:
                blk = Block(blk.start, blk.stop, *_NONE)
            elif not has_out:
                blk = Block(blk.start, blk.stop, *_ALL)
            tidy.append(blk)
        return cls(threshold, m, res, tuple(_merge(tidy)))

    # ---- queries ------------------------------------------------------
    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        if n >= self.threshold:
            return n % self.modulus in self.residues
        blk = self.blocks[bisect_right(self._starts, n) - 1]
        return blk.contains(n)

    def member(self, n: int) -> bool:
        return n in self

    def is_cofinite(self) -> bool:
        return self.modulus == 1 and bool(self.residues)

    def frechet_witness(self) -> int | None:
        """Least nu with {nu, nu+1, ...} a subset of self, if one exists."""
        return self.threshold if self.is_cofinite() else None

    def is_finite(self) -> bool:
        return not self.residues

    def is_empty(self) -> bool:
        return self.is_finite() and all(not b.residues for b in self.blocks)

    def is_periodic(self) -> bool:
        return self.threshold == 0

    def __iter__(self) -> Iterator[int]:
        n = 0
        if self.is_finite():
            for n in range(self.threshold):
                if n in self:
                    yield n
            return
        while True:
            if n in self:
                yield n
            n += 1

    def _pattern_at(self, n: int) -> Pattern:
        if n >= self.threshold:
            return self.modulus, self.residues
        blk = self.blocks[bisect_right(self._starts, n) - 1]
        return blk.modulus, blk.residues

    def _breaks(self) -> list[int]:
        return [b.start for b in self.blocks] + [self.threshold]

    # ---- Boolean algebra ---------------------------------------------
    def _zip(self, other: "NatSet", op) -> "NatSet":
        cuts = sorted(set(self._breaks()) | set(other._breaks()) | {0})
        blocks = []
        for a, b in zip(cuts, cuts[1:]):
            pat = _combine(self._pattern_at(a), other._pattern_at(a), op)
            blocks.append(Block(a, b, *pat))
        top = cuts[-1]
        tail = _combine(self._pattern_at(top), other._pattern_at(top), op)
        return NatSet._canonical(blocks, top, tail)

    def complement(self) -> "NatSet":
        m = self.modulus
        tail = reduce_pattern(m, frozenset(range(m)) - self.residues)
        blocks = [Block(b.start, b.stop, *reduce_pattern(b.modulus, frozenset(range(b.modulus)) - b.residues)) for b in self.blocks]
        return NatSet(self.threshold, tail[0], tail[1], tuple(blocks))

    def intersect(self, other: "NatSet") -> "NatSet":
        return self._zip(other, lambda x, y: x and y)

    def union(self, other: "NatSet") -> "NatSet":
        # De Morgan on complement/intersect
        return self.complement().intersect(other.complement()).complement()

    def difference(self, other: "NatSet") -> "NatSet":
        return self.intersect(other.complement())

    def symmetric_difference(self, other: "NatSet") -> "NatSet":
        return self._zip(other, lambda x, y: x != y)

    __invert__ = complement
    __and__ = intersect
    __or__ = union
    __sub__ = difference
    __xor__ = symmetric_difference

    def issubset(self, other: "NatSet") -> bool:
        return self.difference(other).is_empty()

    __le__ = issubset

    def issuperset(self, other: "NatSet") -> bool:
        return other.issubset(self)

    __ge__ = issuperset

    def equals(self, other: "NatSet") -> bool:
        if (self.threshold, self.modulus, self.residues) != (other.threshold, other.modulus, other.residues):
            return False
        if self.blocks == other.blocks:
            return True
        cuts = sorted(set(self._breaks()) | set(other._breaks()))
        for a, b in zip(cuts, cuts[1:]):
            p, q = self._pattern_at(a), other._pattern_at(a)
            if p == q:
                continue
            big = lcm(p[0], q[0])
            if b - a >= big:
                if _lift(p, big) != _lift(q, big):
                    return False
            elif any((n % p[0] in p[1]) != (n % q[0] in q[1]) for n in range(a, b)):
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, NatSet):
            return NotImplemented
        return self.equals(other)

    def __hash__(self) -> int:
        return hash((self.threshold, self.modulus, self.residues))

    def shift_down(self, k: int = 1) -> "NatSet":
        """The set {n - k : n in self, n >= k}."""
        if k == 0:
            return self
        blocks = []
        for blk in self.blocks:
            a, b = max(blk.start - k, 0), blk.stop - k
            if b > a:
                m = blk.modulus
                blocks.append(Block(a, b, m, frozenset((r - k) % m for r in blk.residues)))
        m = self.modulus
        top = max(self.threshold - k, 0)
        tail = (m, frozenset((r - k) % m for r in self.residues))
        return NatSet._canonical(blocks, top, tail)

    # ---- exceptions and text -----------------------------------------
    def exception_progressions(self) -> list[tuple[int, int, int, bool]]:
        """Flips against the tail rule as (first, last, step, forced_in) progressions."""
        out = []
        m, res = self.modulus, self.residues
        for blk in self.blocks:
            big = lcm(blk.modulus, m)
            length = blk.stop - blk.start
            if length <= 2 * big:
                for n in range(blk.start, blk.stop):
                    inside = n % blk.modulus in blk.residues
                    if inside != (n % m in res):
                        out.append((n, n, 1, inside))
                continue
            flips_in = [x for x in range(big) if x % blk.modulus in blk.residues and x % m not in res]
            flips_out = [x for x in range(big) if x % blk.modulus not in blk.residues and x % m in res]
            for flips, flag in ((flips_in, True), (flips_out, False)):
                if len(flips) == big:
                    out.append((blk.start, blk.stop - 1, 1, flag))
                    continue
                for h in flips:
                    first = blk.start + ((h - blk.start) % big)
                    last = _last_hit(blk.start, blk.stop, big, [h])
                    if last is not None and first <= last:
                        out.append((first, last, big, flag))
        out.sort()
        return _join_runs(out)

    def exceptions(self) -> Iterator[tuple[int, bool]]:
        """Every index below the threshold whose membership overrides the tail rule."""
        for n in range(self.threshold):
            inside = n in self
            if inside != (n % self.modulus in self.residues):
                yield n, inside

    def to_text(self) -> str:
        res = ",".join(str(r) for r in sorted(self.residues))
        items = []
        for first, last, step, flag in self.exception_progressions():
            sgn = "+" if flag else "-"
            if first == last:
                items.append(f"{sgn}{first}")
            elif step == 1:
                items.append(f"{sgn}{first}..{last}")
            else:
                items.append(f"{sgn}{first}..{last}%{step}")
        return f"{{T={self.threshold}; mod={self.modulus}; res={res}; exc={','.join(items)}}}"

    def __repr__(self) -> str:
        return f"NatSet({self.to_text()})"

    def __str__(self) -> str:
        return self.to_text()


def _merge(blocks: list[Block]) -> list[Block]:
    out: list[Block] = []
    for blk in blocks:
        if blk.stop <= blk.start:
            continue
        if out and out[-1].stop == blk.start and (out[-1].modulus, out[-1].residues) == (blk.modulus, blk.residues):
            out[-1] = out[-1]._replace(stop=blk.stop)
        else:
            out.append(blk)
    return out


def _join_runs(items: list[tuple[int, int, int, bool]]) -> list[tuple[int, int, int, bool]]:
    # glue consecutive unit flips with the same flag into step-1 runs
    out: list[tuple[int, int, int, bool]] = []
    for first, last, step, flag in items:
        if out:
            pf, pl, ps, pflag = out[-1]
            if pflag == flag and (ps == 1 or pf == pl) and (step == 1 or first == last) and first == pl + 1:
                out[-1] = (pf, last, 1, flag)
                continue
        out.append((first, last, step, flag))
    return out


# ---- constructors -------------------------------------------------------

def normalize(threshold: int, modulus: int, residues: Iterable[int],
              exceptions: Mapping[int, bool] | Iterable[tuple[int, bool]] = ()) -> NatSet:
    """Canonical form of: tail rule ``n % modulus in residues`` for n >= threshold,
    the same rule below it, overridden at the listed exception indices."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if threshold < 0:
        raise ValueError("threshold must be natural")
    res = frozenset(int(r) for r in residues)
    if any(r < 0 or r >= modulus for r in res):
        raise ValueError(f"residues must lie in [0, {modulus})")
    exc = dict(exceptions.items() if isinstance(exceptions, Mapping) else exceptions)
    if any(k < 0 or k >= threshold for k in exc):
        raise ValueError("exception indices must lie below the threshold")
    blocks = []
    pos = 0
    for k in sorted(exc):
        if k > pos:
            blocks.append((pos, k, modulus, res))
        blocks.append((k, k + 1, 1, {0} if exc[k] else ()))
        pos = k + 1
    if threshold > pos:
        blocks.append((pos, threshold, modulus, res))
    return NatSet.from_blocks(blocks, modulus, res)


def full() -> NatSet:
    return NatSet(0, 1, frozenset({0}), ())


def empty() -> NatSet:
    return NatSet(0, 1, frozenset(), ())


def tail(nu: int) -> NatSet:
    """{nu, nu+1, nu+2, ...}"""
    if nu < 0:
        raise ValueError("tail start must be natural")
    return NatSet.from_blocks([(0, nu, 1, ())], 1, {0})


def residue_class(r: int, m: int) -> NatSet:
    return NatSet.from_blocks([], m, {r % m})


def evens() -> NatSet:
    return residue_class(0, 2)


def odds() -> NatSet:
    return residue_class(1, 2)


def finite(members: Iterable[int]) -> NatSet:
    ms = sorted(set(members))
    if ms and ms[0] < 0:
        raise ValueError("members must be natural")
    top = ms[-1] + 1 if ms else 0
    return normalize(top, 1, (), {k: True for k in ms})


def from_membership(bits: Iterable[bool], modulus: int, residues: Iterable[int]) -> NatSet:
    """Prefix given pointwise, followed by the tail rule."""
    blocks = [(i, i + 1, 1, {0} if b else ()) for i, b in enumerate(bits)]
    return NatSet.from_blocks(blocks, modulus, residues)


# ---- text form ----------------------------------------------------------

_FIELD = re.compile(r"^\s*(T|mod|res|exc)\s*=\s*(.*?)\s*$")
_EXC = re.compile(r"^([+-])\s*(\d+)(?:\s*\.\.\s*(\d+)(?:\s*%\s*(\d+))?)?$")


def parse_natset(text: str) -> NatSet:
    """Parse ``{T=5; mod=2; res=0; exc=+1,-3}`` or one of the aliases
    ``N``, ``empty``, ``evens``, ``odds``, ``tail(k)``, ``finite(a,b,...)``."""
    s = text.strip()
    alias = s.lower()
    if alias in ("n", "all", "full"):
        return full()
    if alias in ("empty", "{}"):
        return empty()
    if alias == "evens":
        return evens()
    if alias == "odds":
        return odds()
    m = re.fullmatch(r"tail\(\s*(\d+)\s*\)", alias)
    if m:
        return tail(int(m.group(1)))
    m = re.fullmatch(r"finite\(([\d,\s]*)\)", alias)
    if m:
        body = m.group(1).strip()
        return finite(int(x) for x in body.split(",") if x.strip()) if body else empty()
    if not (s.startswith("{") and s.endswith("}")):
        raise ParseError(f"unrecognized set text {text!r}", (0, len(text.encode())), text)
    fields: dict[str, str] = {}
    for part in s[1:-1].split(";"):
        if not part.strip():
            continue
        fm = _FIELD.match(part)
        if not fm:
            raise ParseError(f"bad set field {part.strip()!r}", _span_of(text, part), text)
        if fm.group(1) in fields:
            raise ParseError(f"duplicate field {fm.group(1)}", _span_of(text, part), text)
        fields[fm.group(1)] = fm.group(2)
    try:
        threshold = int(fields.get("T", "0") or 0)
        modulus = int(fields.get("mod", "1") or 1)
        res_text = fields.get("res", "")
        residues = [int(x) for x in res_text.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"non-integer field in {text!r}", (0, len(text.encode())), text) from exc
    exceptions: dict[int, bool] = {}
    for item in fields.get("exc", "").split(","):
        item = item.strip()
        if not item:
            continue
        em = _EXC.match(item)
        if not em:
            raise ParseError(f"bad exception item {item!r}", _span_of(text, item), text)
        flag = em.group(1) == "+"
        first = int(em.group(2))
        last = int(em.group(3)) if em.group(3) else first
        step = int(em.group(4)) if em.group(4) else 1
        if step < 1 or last < first:
            raise ParseError(f"bad exception range {item!r}", _span_of(text, item), text)
        for k in range(first, last + 1, step):
            exceptions[k] = flag
    try:
        return normalize(threshold, modulus, residues, exceptions)
    except ValueError as exc:
        raise ParseError(str(exc), (0, len(text.encode())), text) from exc


def _span_of(text: str, part: str) -> tuple[int, int]:
    i = text.find(part)
    if i < 0:
        return 0, len(text.encode())
    start = len(text[:i].encode())
    return start, start + len(part.encode())
