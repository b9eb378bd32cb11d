"""Sequence expressions: grammar, printer, exact evaluator, and the
canonicalizer into :class:`~hyperseq.hyper.Germ`.

Grammar (whitespace insignificant)::

    expr     := term (("+"|"-") term)*
    term     := factor (("*"|"/") factor)*
    factor   := atom ("^" sint)?
    atom     := rational | "n" | "(" expr ")"
              | "case" "(" uint ";" expr ("," expr)* ")" | "(-1)^n"
    rational := sint ("/" uint)?

A rational literal is read greedily, so ``n/2/3`` is ``n / (2/3)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import BranchCountMismatch, DivisionByZeroGerm, ExprSyntaxError, ZeroModulus
from .hyper import Germ
from .poly import RatFunc, root_free_from


# ---- syntax tree ------------------------------------------------------------

class SeqExpr:
    __slots__ = ()


@dataclass(frozen=True)
class RationalConst(SeqExpr):
    value: Fraction


@dataclass(frozen=True)
class IndexVar(SeqExpr):
    pass


@dataclass(frozen=True)
class Add(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class Sub(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class Mul(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class Div(SeqExpr):
    left: SeqExpr
    right: SeqExpr


@dataclass(frozen=True)
class IntPow(SeqExpr):
    base: SeqExpr
    exponent: int


@dataclass(frozen=True)
class CaseMod(SeqExpr):
    modulus: int
    branches: tuple[SeqExpr, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ZeroModulus(f"case modulus must be at least 2, got {self.modulus}")
        if len(self.branches) != self.modulus:
            raise BranchCountMismatch(f"case({self.modulus}; ...) needs {self.modulus} branches, got {len(self.branches)}")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


def const(value) -> RationalConst:
    return RationalConst(Fraction(value))


N = IndexVar()


# ---- parser -----------------------------------------------------------------

_SUGAR = re.compile(r"\(\s*-\s*1\s*\)\s*\^\s*n(?![A-Za-z0-9_])")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_DIGITS = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def span(self, start: int, end: int | None = None) -> tuple[int, int]:
        end = self.pos if end is None else end
        end = max(end, start)
        return len(self.text[:start].encode()), len(self.text[:end].encode())

    def fail(self, message: str, start: int | None = None, end: int | None = None, cls=ExprSyntaxError):
        start = self.pos if start is None else start
        if end is None:
            end = min(start + 1, len(self.text))
        raise cls(message, self.span(start, end), self.text)

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.fail(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def parse(self) -> SeqExpr:
        e = self.expr()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return e

    def expr(self) -> SeqExpr:
        left = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> SeqExpr:
        left = self.factor()
        while self.peek() in ("*", "/"):
            op = self.text[self.pos]
            self.pos += 1
            right = self.factor()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def factor(self) -> SeqExpr:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            base = IntPow(base, self.sint())
        return base

    def sint(self) -> int:
        start = self.pos
        neg = False
        if self.peek() == "-":
            neg = True
            self.pos += 1
        self.ws()
        m = _DIGITS.match(self.text, self.pos)
        if not m:
            self.fail("expected an integer", start)
        self.pos = m.end()
        value = int(m.group())
        return -value if neg else value

    def uint(self) -> int:
        self.ws()
        m = _DIGITS.match(self.text, self.pos)
        if not m:
            self.fail("expected a natural number")
        self.pos = m.end()
        return int(m.group())

    def _digit_follows(self, at: int) -> bool:
        j = at
        while j < len(self.text) and self.text[j].isspace():
            j += 1
        return j < len(self.text) and self.text[j].isdigit()

    def atom(self) -> SeqExpr:
        ch = self.peek()
        start = self.pos
        if not ch:
            self.fail("unexpected end of input")
        m = _SUGAR.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return CaseMod(2, (const(1), const(-1)))
        if ch.isdigit() or (ch == "-" and self._digit_follows(self.pos + 1)):
            num = self.sint()
            save = self.pos
            if self.peek() == "/" and self._digit_follows(self.pos + 1):
                self.pos += 1
                den = self.uint()
                if den == 0:
                    self.fail("zero denominator in rational literal", start)
                return RationalConst(Fraction(num, den))
            self.pos = save
            return RationalConst(Fraction(num))
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        m = _IDENT.match(self.text, self.pos)
        if m:
            name = m.group()
            self.pos = m.end()
            if name == "n":
                return IndexVar()
            if name == "case":
                return self.case_tail(start)
            self.fail(f"unknown identifier {name!r}", start, m.end())
        self.fail(f"unexpected {ch!r}")

    def case_tail(self, start: int) -> SeqExpr:
        self.expect("(")
        modulus = self.uint()
        self.expect(";")
        branches = [self.expr()]
        while self.peek() == ",":
            self.pos += 1
            branches.append(self.expr())
        self.expect(")")
        if modulus < 2:
            self.fail(f"case modulus must be at least 2, got {modulus}", start, self.pos, ZeroModulus)
        if len(branches) != modulus:
            self.fail(f"case({modulus}; ...) needs {modulus} branches, got {len(branches)}", start, self.pos, BranchCountMismatch)
        return CaseMod(modulus, tuple(branches))


def parse(text: str) -> SeqExpr:
    return _Parser(text).parse()


# ---- printer ----------------------------------------------------------------

_EXPR, _TERM, _FACTOR, _ATOM = range(4)


def _lit(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _level(e: SeqExpr) -> int:
    if isinstance(e, (Add, Sub)):
        return _EXPR
    if isinstance(e, (Mul, Div)):
        return _TERM
    if isinstance(e, IntPow):
        return _FACTOR
    return _ATOM


def _wrap(e: SeqExpr, need: int) -> str:
    s = format(e)
    return f"({s})" if _level(e) < need else s


def format(e: SeqExpr) -> str:  # noqa: A001 - mirrors the public operation name
    if isinstance(e, RationalConst):
        return _lit(e.value)
    if isinstance(e, IndexVar):
        return "n"
    if isinstance(e, CaseMod):
        return f"case({e.modulus}; " + ", ".join(format(b) for b in e.branches) + ")"
    if isinstance(e, (Add, Sub)):
        op = "+" if isinstance(e, Add) else "-"
        return f"{_wrap(e.left, _EXPR)} {op} {_wrap(e.right, _TERM)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, _TERM)}*{_wrap(e.right, _FACTOR)}"
    if isinstance(e, Div):
        right = _wrap(e.right, _FACTOR)
        if right[0].isdigit() or right[0] == "-":
            # keep "a/(2)" from being read back as a rational literal
            right = f"({right})"
        return f"{_wrap(e.left, _TERM)}/{right}"
    if isinstance(e, IntPow):
        base = format(e.base)
        if _level(e.base) < _ATOM or (isinstance(e.base, RationalConst) and (e.base.value < 0 or e.base.value.denominator != 1)):
            base = f"({base})"
        return f"{base}^{e.exponent}"
    raise TypeError(f"not a sequence expression: {e!r}")


# ---- exact evaluation ---------------------------------------------------------

def evaluate(e: SeqExpr, n: int) -> Fraction:
    """Value at index n; raises ZeroDivisionError where undefined."""
    if isinstance(e, RationalConst):
        return e.value
    if isinstance(e, IndexVar):
        return Fraction(n)
    if isinstance(e, Add):
        return evaluate(e.left, n) + evaluate(e.right, n)
    if isinstance(e, Sub):
        return evaluate(e.left, n) - evaluate(e.right, n)
    if isinstance(e, Mul):
        return evaluate(e.left, n) * evaluate(e.right, n)
    if isinstance(e, Div):
        return evaluate(e.left, n) / evaluate(e.right, n)
    if isinstance(e, IntPow):
        b = evaluate(e.base, n)
        return b ** e.exponent
    if isinstance(e, CaseMod):
        return evaluate(e.branches[n % e.modulus], n)
    raise TypeError(f"not a sequence expression: {e!r}")


# ---- canonicalization -----------------------------------------------------------

# A partial germ: modulus, per-class piece or None where the class is undefined,
# and the index from which every class value is defined.
_Partial = tuple[int, list, int]


def _refine(g: _Partial, m: int) -> list:
    gm, pieces, _ = g
    return [pieces[r % gm] for r in range(m)]


def _binary(a: _Partial, b: _Partial, fn) -> _Partial:
    m = lcm(a[0], b[0])
    pa, pb = _refine(a, m), _refine(b, m)
    out = [None if x is None or y is None else fn(x, y) for x, y in zip(pa, pb)]
    return m, out, max(a[2], b[2])


def _reciprocal(g: _Partial) -> _Partial:
    m, pieces, t = g
    out = []
    for p in pieces:
        if p is None or p.is_zero():
            out.append(None)
        else:
            out.append(p.reciprocal())
            t = max(t, root_free_from(p.num))
    return m, out, t


def _partial(e: SeqExpr) -> _Partial:
    if isinstance(e, RationalConst):
        return 1, [RatFunc.const(e.value)], 0
    if isinstance(e, IndexVar):
        return 1, [RatFunc.index()], 0
    if isinstance(e, Add):
        return _binary(_partial(e.left), _partial(e.right), lambda x, y: x + y)
    if isinstance(e, Sub):
        return _binary(_partial(e.left), _partial(e.right), lambda x, y: x - y)
    if isinstance(e, Mul):
        return _binary(_partial(e.left), _partial(e.right), lambda x, y: x * y)
    if isinstance(e, Div):
        return _binary(_partial(e.left), _reciprocal(_partial(e.right)), lambda x, y: x * y)
    if isinstance(e, IntPow):
        base = _partial(e.base)
        if e.exponent < 0:
            base = _reciprocal(base)
        k = abs(e.exponent)
        m, pieces, t = base
        return m, [None if p is None else p ** k for p in pieces], t
    if isinstance(e, CaseMod):
        subs = [_partial(b) for b in e.branches]
        m = lcm(e.modulus, *(s[0] for s in subs))
        pieces = []
        for rho in range(m):
            s = subs[rho % e.modulus]
            pieces.append(s[1][rho % s[0]])
        return m, pieces, max(s[2] for s in subs)
    raise TypeError(f"not a sequence expression: {e!r}")


def _den_bound(p: RatFunc) -> int:
    return p.pole_free_from()


def to_germ(e: SeqExpr) -> Germ:
    m, pieces, t = _partial(e)
    for r, p in enumerate(pieces):
        if p is None:
            raise DivisionByZeroGerm(
                f"a divisor in {format(e)!r} vanishes for all large n = {r} mod {m}"
            )
        t = max(t, _den_bound(p))
    return Germ(pieces, t)


def germ(text: str) -> Germ:
    """Parse and canonicalize in one step."""
    return to_germ(parse(text))


def germ_to_expr(g: Germ) -> SeqExpr:
    """An expression whose canonical germ is g."""
    return parse(g.format())
