"""Limit engines and the Fréchet-filter theorem checkers.

Three routes to ``lim a_n = L``:

* ``witness_nu``      - the least index nu after which |a_n - L| < eps;
* ``frechet_limit_check`` - whether S_eps = {n : |a_n - L| < eps} is cofinite;
* ``robinson_limit``  - class-wise standard parts at infinite hypernaturals.

Index sets are built exactly: on each residue class the defining
condition is a sign condition on a few polynomials, so Sturm chains
split [0, B) into ranges of constant truth, and past the Cauchy bound B
the truth is the eventual one.  Indices are the values of ``n`` itself.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    HypothesisFailed,
    InternalInconsistency,
    IsActuallyLimit,
    NoWitness,
    PremiseFailed,
)
from .hyper import Germ, format_rational, is_near
from .natset import NatSet
from .poly import Poly, constant_sign_ranges, int_eval, root_free_from, sign
from .starsets import HyperNat, as_hypernatural, compose

EPS_GRID = (Fraction(1), Fraction(1, 2), Fraction(1, 10), Fraction(1, 100), Fraction(1, 10**6))

SignTest = Callable[[tuple[int, ...]], bool]


def _class_truth(polys: Sequence[Poly], test: SignTest) -> tuple[list[tuple[int, int, bool]], int, bool]:
    """Constant-truth ranges of ``test(signs of polys at n)`` on [0, B), plus B
    and the truth on [B, inf)."""
    bound = max((root_free_from(p) for p in polys), default=0)
    ints = [p.primitive_int() for p in polys]

    def truth(n: int) -> bool:
        return test(tuple(sign(int_eval(c, n)) for c in ints))

    ranges = []
    for a, b in constant_sign_ranges(polys, 0, bound):
        t = truth(a)
        if ranges and ranges[-1][2] == t and ranges[-1][1] == a:
            ranges[-1] = (ranges[-1][0], b, t)
        else:
            ranges.append((a, b, t))
    return ranges, bound, truth(bound)


def index_set(modulus: int, class_polys: Sequence[Sequence[Poly]], test: SignTest) -> NatSet:
    """{n : test(signs of class_polys[n % modulus] at n)} as a NatSet."""
    per_class = [_class_truth(polys, test) for polys in class_polys]
    cuts = {0}
    for ranges, bound, _ in per_class:
        cuts.add(bound)
        for a, b, _ in ranges:
            cuts.add(a)
            cuts.add(b)
    top = max(bound for _, bound, _ in per_class)
    cuts = sorted(c for c in cuts if c <= top)
    starts = [[a for a, _, _ in ranges] for ranges, _, _ in per_class]

    def truth_at(j: int, n: int) -> bool:
        ranges, bound, eventual = per_class[j]
        if n >= bound:
            return eventual
        return ranges[bisect_right(starts[j], n) - 1][2]

    blocks = []
    for a, b in zip(cuts, cuts[1:]):
        blocks.append((a, b, modulus, [j for j in range(modulus) if truth_at(j, a)]))
    tail = [j for j in range(modulus) if per_class[j][2]]
    return NatSet.from_blocks(blocks, modulus, tail)


def s_epsilon(a, limit, eps) -> NatSet:
    """S_eps = {n : a_n is defined and |a_n - L| < eps}."""
    a = Germ.lift(a)
    limit, eps = Fraction(limit), Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    class_polys = []
    for f in a.pieces:
        p, q = f.num, f.den
        dev = p - q.scale(limit)
        gap = q * q * Poly.const(eps * eps) - dev * dev
        class_polys.append((gap, q))
    return index_set(a.modulus, class_polys, lambda s: s[0] > 0 and s[1] != 0)


def _le_polys(x: Germ, y: Germ):
    m = x.modulus * y.modulus // _gcd(x.modulus, y.modulus)
    out = []
    for r in range(m):
        fx, fy = x.piece(r), y.piece(r)
        out.append((fy.num * fx.den - fx.num * fy.den, fx.den, fy.den))
    return m, out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def le_set(x, y) -> NatSet:
    """{n : x_n and y_n are defined and x_n <= y_n}."""
    m, polys = _le_polys(Germ.lift(x), Germ.lift(y))
    return index_set(m, polys, lambda s: s[1] != 0 and s[2] != 0 and s[0] * s[1] * s[2] >= 0)


def lt_set(x, y) -> NatSet:
    m, polys = _le_polys(Germ.lift(x), Germ.lift(y))
    return index_set(m, polys, lambda s: s[1] != 0 and s[2] != 0 and s[0] * s[1] * s[2] > 0)


def frechet_limit_check(a, limit, eps) -> bool:
    return s_epsilon(a, limit, eps).is_cofinite()


def witness_nu(a, limit, eps) -> int:
    """Least nu with |a_n - L| < eps for every n >= nu."""
    s = s_epsilon(a, limit, eps)
    nu = s.frechet_witness()
    if nu is None:
        raise NoWitness(
            f"no index works for eps = {format_rational(Fraction(eps))}: S_eps is not cofinite", s
        )
    return nu


# ---- counterexamples and verdicts ---------------------------------------------

@dataclass(frozen=True)
class BadEpsilon:
    eps: Fraction
    limit: Fraction
    s_eps: NatSet

    def verify(self) -> bool:
        return not self.s_eps.is_cofinite()

    def as_dict(self) -> dict:
        return {
            "kind": "BadEpsilon",
            "L": format_rational(self.limit),
            "eps": format_rational(self.eps),
            "s_eps": self.s_eps.to_text(),
            "cofinite": self.s_eps.is_cofinite(),
        }


@dataclass(frozen=True)
class BadOmega:
    omega: HyperNat
    value_class: int
    modulus: int
    near_value: Fraction | None  # st of a at omega; None when infinitely large
    against: Fraction | None

    def verify(self, a: Germ) -> bool:
        at = compose(a, self.omega)
        if self.against is None:
            return not _finite(at)
        return not is_near(at, self.against)

    def as_dict(self) -> dict:
        return {
            "kind": "BadOmega",
            "omega": self.omega.germ.format(),
            "class": f"n = {self.value_class} mod {self.modulus}",
            "st_at_omega": None if self.near_value is None else format_rational(self.near_value),
            "finite_at_omega": self.near_value is not None,
            "L": None if self.against is None else format_rational(self.against),
        }


CounterExample = BadEpsilon | BadOmega


def _finite(g: Germ) -> bool:
    from .hyper import classify

    return classify(g).finite


@dataclass(frozen=True)
class LimitVerdict:
    converges: bool
    limit: Fraction | None = None
    counterexamples: tuple[CounterExample, ...] = ()
    engines: tuple[str, ...] = ()
    class_limits: tuple[Fraction | None, ...] = ()
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def outcome(self) -> str:
        return "converges" if self.converges else "diverges"

    def as_dict(self) -> dict:
        out: dict = {"outcome": self.outcome}
        if self.converges:
            out["limit"] = format_rational(self.limit)
        else:
            out["counterexample"] = [c.as_dict() for c in self.counterexamples]
        out["engines"] = list(self.engines)
        out["class_limits"] = [None if c is None else format_rational(c) for c in self.class_limits]
        if self.witnesses:
            out["witness_nu"] = {format_rational(k): v for k, v in self.witnesses.items()}
        return out


def class_limits(a) -> tuple[Fraction | None, ...]:
    return tuple(p.limit() for p in Germ.lift(a).pieces)


def _class_omega(m: int, r: int) -> HyperNat:
    return as_hypernatural(Germ((_affine(m, r),)))


def _affine(m: int, r: int):
    from .poly import RatFunc

    return RatFunc(Poly((r, m)))


def robinson_limit(a) -> LimitVerdict:
    """Converges(L) iff every class has the same finite limit L."""
    a = Germ.lift(a)
    lims = class_limits(a)
    m = a.modulus
    if all(x is not None for x in lims) and len(set(lims)) == 1:
        return LimitVerdict(True, lims[0], engines=("robinson",), class_limits=lims)
    finite = [x for x in lims if x is not None]
    ref = finite[0] if finite else None
    if None in lims:
        r = lims.index(None)
        bad = BadOmega(_class_omega(m, r), r, m, None, ref)
    else:
        r = next(j for j, x in enumerate(lims) if x != ref)
        bad = BadOmega(_class_omega(m, r), r, m, lims[r], ref)
    return LimitVerdict(False, None, (bad,), ("robinson",), lims)


def counterexample_epsilon(a, limit) -> BadEpsilon:
    a = Germ.lift(a)
    limit = Fraction(limit)
    lims = class_limits(a)
    if all(x == limit for x in lims):
        raise IsActuallyLimit(f"{a} converges to {format_rational(limit)}")
    if None in lims:
        eps = Fraction(1)
    else:
        eps = min(abs(x - limit) for x in lims if x != limit) / 2
    s = s_epsilon(a, limit, eps)
    if s.is_cofinite():
        raise InternalInconsistency(f"S_eps for eps={eps} is cofinite although {a} does not tend to {limit}")
    return BadEpsilon(eps, limit, s)


def limit(a, grid: Sequence[Fraction] = EPS_GRID) -> LimitVerdict:
    """Run all three engines and insist that they agree."""
    a = Germ.lift(a)
    rob = robinson_limit(a)
    engines = ("robinson", "frechet", "witness")
    if rob.converges:
        witnesses = {}
        for eps in grid:
            if not frechet_limit_check(a, rob.limit, eps):
                raise InternalInconsistency(f"Fréchet engine rejects L={rob.limit} at eps={eps} for {a}")
            witnesses[Fraction(eps)] = witness_nu(a, rob.limit, eps)
        return LimitVerdict(True, rob.limit, (), engines, rob.class_limits, witnesses)
    bad_omega = rob.counterexamples[0]
    if not bad_omega.verify(a):
        raise InternalInconsistency(f"BadOmega for {a} does not refute the limit")
    ref = bad_omega.against if bad_omega.against is not None else Fraction(0)
    bad_eps = counterexample_epsilon(a, ref)
    try:
        witness_nu(a, ref, bad_eps.eps)
    except NoWitness:
        pass
    else:
        raise InternalInconsistency(f"witness engine found nu although S_eps is not cofinite for {a}")
    return LimitVerdict(False, None, (bad_omega, bad_eps), engines, rob.class_limits)


# ---- proof traces ------------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    op: str
    args: tuple[str, ...]
    target: str
    result: NatSet | bool
    note: str = ""

    def as_dict(self) -> dict:
        res = self.result if isinstance(self.result, bool) else self.result.to_text()
        return {"op": self.op, "args": list(self.args), "target": self.target, "result": res, "note": self.note}


@dataclass(frozen=True)
class ProofTrace:
    theorem: str
    params: dict
    steps: tuple[TraceStep, ...]
    conclusion: bool

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "params": self.params,
            "steps": [s.as_dict() for s in self.steps],
            "conclusion": self.conclusion,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _squeeze_builders(a: Germ, x: Germ, b: Germ, L: Fraction, eps: Fraction) -> dict:
    return {
        "X": lambda: le_set(a, x) & le_set(x, b),
        "A_eps": lambda: s_epsilon(a, L, eps),
        "B_eps": lambda: s_epsilon(b, L, eps),
        "S_eps": lambda: s_epsilon(x, L, eps),
    }


_NOTES = {
    "X": "{n : a_n <= x_n <= b_n}",
    "A_eps": "{n : L - eps < a_n < L + eps}",
    "B_eps": "{n : L - eps < b_n < L + eps}",
    "S_eps": "{n : L - eps < x_n < L + eps}",
}


def squeeze_check(a, b, x, limit, eps) -> ProofTrace:
    """Replayable set-algebra proof that x_n -> L when a_n <= x_n <= b_n and a, b -> L."""
    a, b, x = Germ.lift(a), Germ.lift(b), Germ.lift(x)
    L, eps = Fraction(limit), Fraction(eps)
    build = _squeeze_builders(a, x, b, L, eps)
    env: dict[str, NatSet] = {}
    steps: list[TraceStep] = []

    def do_build(name):
        env[name] = build[name]()
        steps.append(TraceStep("build", (), name, env[name], _NOTES[name]))

    def do_cofinite(name, required: bool):
        ok = env[name].is_cofinite()
        steps.append(TraceStep("is_cofinite", (name,), f"{name}_in_Fr", ok))
        if required and not ok:
            raise HypothesisFailed(name, f"{name} = {_NOTES[name]} is not cofinite: {env[name].to_text()}")
        return ok

    for name in ("X", "A_eps", "B_eps"):
        do_build(name)
    for name in ("X", "A_eps", "B_eps"):
        do_cofinite(name, True)
    env["XA"] = env["X"] & env["A_eps"]
    steps.append(TraceStep("intersect", ("X", "A_eps"), "XA", env["XA"]))
    env["XAB"] = env["XA"] & env["B_eps"]
    steps.append(TraceStep("intersect", ("XA", "B_eps"), "XAB", env["XAB"]))
    do_cofinite("XAB", False)
    do_build("S_eps")
    inside = env["XAB"] <= env["S_eps"]
    steps.append(TraceStep("subset", ("XAB", "S_eps"), "XAB_sub_S", inside))
    if not inside:
        raise InternalInconsistency("X ∩ A_eps ∩ B_eps escapes S_eps")
    concl = do_cofinite("S_eps", False)
    if not concl:
        raise InternalInconsistency("superset of a cofinite set is not cofinite")
    params = {
        "a": a.format(), "b": b.format(), "x": x.format(),
        "L": format_rational(L), "eps": format_rational(eps),
    }
    return ProofTrace("squeeze", params, tuple(steps), concl)


def replay(trace: ProofTrace) -> ProofTrace:
    """Recompute every step from the recorded parameters.

    Raises InternalInconsistency on the first step whose recomputed result
    differs; returns the recomputed trace otherwise.
    """
    from .expr import germ

    p = trace.params
    build = _squeeze_builders(germ(p["a"]), germ(p["x"]), germ(p["b"]), Fraction(p["L"]), Fraction(p["eps"]))
    env: dict[str, object] = {}
    out = []
    for step in trace.steps:
        if step.op == "build":
            res = build[step.target]()
        elif step.op == "intersect":
            res = env[step.args[0]] & env[step.args[1]]
        elif step.op == "is_cofinite":
            res = env[step.args[0]].is_cofinite()
        elif step.op == "subset":
            res = env[step.args[0]] <= env[step.args[1]]
        else:
            raise InternalInconsistency(f"unknown trace op {step.op!r}")
        if res != step.result or (not isinstance(res, bool) and res.to_text() != step.result.to_text()):
            raise InternalInconsistency(f"replay of step {step.target} gave {res}, recorded {step.result}")
        env[step.target] = res
        out.append(TraceStep(step.op, step.args, step.target, res, step.note))
    return ProofTrace(trace.theorem, dict(p), tuple(out), trace.conclusion)


@dataclass(frozen=True)
class OrderReport:
    limit_a: Fraction
    limit_b: Fraction
    holds: bool
    strict_premise: bool
    strict_conclusion: bool
    le_set: NatSet

    def as_dict(self) -> dict:
        return {
            "limit_a": format_rational(self.limit_a),
            "limit_b": format_rational(self.limit_b),
            "holds": self.holds,
            "strict_premise": self.strict_premise,
            "strict_conclusion": self.strict_conclusion,
            "le_set": self.le_set.to_text(),
        }


def order_check(a, b) -> OrderReport:
    """If a_n <= b_n eventually and both converge, then lim a <= lim b."""
    a, b = Germ.lift(a), Germ.lift(b)
    ra, rb = robinson_limit(a), robinson_limit(b)
    if not ra.converges or not rb.converges:
        raise PremiseFailed("both sequences must converge")
    le = le_set(a, b)
    if not le.is_cofinite():
        raise PremiseFailed(f"{{n : a_n <= b_n}} is not cofinite: {le.to_text()}")
    if not ra.limit <= rb.limit:
        raise InternalInconsistency(f"limits {ra.limit} > {rb.limit} despite a_n <= b_n eventually")
    strict = lt_set(a, b).is_cofinite()
    return OrderReport(ra.limit, rb.limit, True, strict, ra.limit < rb.limit, le)
