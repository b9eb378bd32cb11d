"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 domain error,
3 internal inconsistency.  JSON is the default and stable output; errors
are written to stderr as a JSON object in JSON mode.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import limits
from .errors import DomainError, HyperseqError, InternalInconsistency, ParseError
from .expr import germ
from .filters import DEFAULT_FRAGMENT, Measure01, parse_fragment
from .hyper import classify, compare, format_rational, frechet_compare, parse_rational, standard_part
from .models import model_check
from .natset import NatSet, parse_natset
from .starsets import as_hypernatural, compose, parse_realset, star_member


class UsageError(HyperseqError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    return parse_rational(text)


def _positive(text: str) -> Fraction:
    q = parse_rational(text)
    if q <= 0:
        raise UsageError(f"eps must be positive, got {text}")
    return q


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--fragment", default="", help='ultrafilter fragment, e.g. "2:1,3:2"')
    common.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
    origin = common.add_mutually_exclusive_group()
    origin.add_argument("--one-based", dest="zero_based", action="store_false", help="index display as n (default)")
    origin.add_argument("--zero-based", dest="zero_based", action="store_true", help="index display as n - 1")
    common.set_defaults(zero_based=False)

    p = _Parser(prog="hyperseq", description="Exact hyperreal sequence germs, limits and filters.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    def lim_opts(sp):
        sp.add_argument("--L", dest="L", type=_rational, required=True, help="candidate limit p/q")
        sp.add_argument("--eps", type=_positive, required=True, help="positive rational")

    cmd("limit", "three-engine limit verdict").add_argument("expr")
    cmd("std-part", "standard part under the fragment").add_argument("expr")
    cmd("classify", "infinitesimal / finite / infinitely large").add_argument("expr")
    sp = cmd("compare", "order of two germs")
    sp.add_argument("x")
    sp.add_argument("y")
    sp = cmd("witness-nu", "least nu with |a_n - L| < eps for n >= nu")
    sp.add_argument("expr")
    lim_opts(sp)
    sp = cmd("s-epsilon", "the index set S_eps")
    sp.add_argument("expr")
    lim_opts(sp)
    sp = cmd("squeeze", "squeeze proof trace for lower <= x <= upper")
    sp.add_argument("lower")
    sp.add_argument("x")
    sp.add_argument("upper")
    lim_opts(sp)
    sp = cmd("star-member", "membership of a germ in *A")
    sp.add_argument("expr")
    sp.add_argument("set")
    sp = cmd("compose", "hypersequence a evaluated at a hypernatural omega")
    sp.add_argument("expr")
    sp.add_argument("omega")
    sp = cmd("set-op", "Boolean algebra on eventually periodic index sets")
    sp.add_argument("op", choices=("union", "intersect", "difference", "symdiff", "complement",
                                   "subset", "equal", "cofinite", "witness"))
    sp.add_argument("sets", nargs="+")
    cmd("model-check", "exhaustive finite-universe filter checks").add_argument("--k", type=int, required=True)
    cmd("measure", "two-valued measure of an index set").add_argument("set")
    return p


def _shift(args, s: NatSet) -> NatSet:
    return s.shift_down(1) if args.zero_based else s


def _shift_nu(args, nu: int) -> int:
    return max(nu - 1, 0) if args.zero_based else nu


def _run(args) -> tuple[object, str]:
    """Return (json payload, text rendering)."""
    u = parse_fragment(args.fragment) if args.fragment else DEFAULT_FRAGMENT
    c = args.command
    if c == "limit":
        v = limits.limit(germ(args.expr))
        d = v.as_dict()
        if "witness_nu" in d:
            d["witness_nu"] = {k: _shift_nu(args, n) for k, n in d["witness_nu"].items()}
        text = f"converges to {d['limit']}" if v.converges else "diverges"
        return d, text
    if c == "std-part":
        r = format_rational(standard_part(germ(args.expr), u))
        return {"standard_part": r}, r
    if c == "classify":
        d = classify(germ(args.expr), u).as_dict()
        kind = "infinitesimal" if d["infinitesimal"] else "finite" if d["finite"] else "infinitely large"
        return d, kind
    if c == "compare":
        x, y = germ(args.x), germ(args.y)
        o, f = compare(x, y, u).value, frechet_compare(x, y).value
        return {"order": o, "frechet": f}, f"{o} (frechet: {f})"
    if c == "witness-nu":
        nu = _shift_nu(args, limits.witness_nu(germ(args.expr), args.L, args.eps))
        return nu, str(nu)
    if c == "s-epsilon":
        s = limits.s_epsilon(germ(args.expr), args.L, args.eps)
        shown = _shift(args, s)
        nu = shown.frechet_witness()
        return {"set": shown.to_text(), "cofinite": s.is_cofinite(), "witness_nu": nu}, shown.to_text()
    if c == "squeeze":
        tr = limits.squeeze_check(germ(args.lower), germ(args.upper), germ(args.x), args.L, args.eps)
        lines = [f"{s.op} {','.join(s.args)} -> {s.target}: {s.as_dict()['result']}" for s in tr.steps]
        return tr.as_dict(), "\n".join(lines)
    if c == "star-member":
        m = star_member(germ(args.expr), parse_realset(args.set), u)
        return {"member": m}, str(m).lower()
    if c == "compose":
        g = compose(germ(args.expr), as_hypernatural(germ(args.omega), u))
        return {"result": g.format()}, g.format()
    if c == "set-op":
        return _set_op(args)
    if c == "model-check":
        d = model_check(args.k)
        text = "\n".join(f"{k}: {'pass' if v else 'FAIL'}" for k, v in d["checks"].items())
        return d, f"filters={d['filters']} ultrafilters={d['ultrafilters']}\n{text}"
    if c == "measure":
        mu = Measure01(u)(parse_natset(args.set))
        return {"measure": mu}, str(mu)
    raise UsageError(f"unknown command {c}")


_ARITY = {"complement": 1, "cofinite": 1, "witness": 1}


def _set_op(args) -> tuple[object, str]:
    want = _ARITY.get(args.op, 2)
    if len(args.sets) != want:
        raise UsageError(f"{args.op} takes {want} set(s), got {len(args.sets)}")
    sets = [parse_natset(t) for t in args.sets]
    a = sets[0]
    if args.op in ("cofinite", "subset", "equal"):
        if args.op == "cofinite":
            r = a.is_cofinite()
        elif args.op == "subset":
            r = a <= sets[1]
        else:
            r = a == sets[1]
        return {"result": r}, str(r).lower()
    if args.op == "witness":
        nu = a.frechet_witness()
        return {"result": nu}, "none" if nu is None else str(nu)
    b = sets[1] if len(sets) > 1 else None
    out = {
        "union": lambda: a | b,
        "intersect": lambda: a & b,
        "difference": lambda: a - b,
        "symdiff": lambda: a ^ b,
        "complement": lambda: ~a,
    }[args.op]()
    return {"result": out.to_text()}, out.to_text()


def _emit_error(err: HyperseqError, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps({"error": err.payload()}), file=sys.stderr)
    else:
        print(f"error: {err}", file=sys.stderr)


def _protect(arg: str) -> str:
    # "-1/n" or "-(n+1)" would otherwise be taken for an option; a leading
    # space is ignored by every value parser.
    return " " + arg if re.match(r"-[\d(n.]", arg) else arg


def main(argv: Sequence[str] | None = None) -> int:
    argv = [_protect(a) for a in (sys.argv[1:] if argv is None else argv)]
    fmt = "text" if "--format=text" in argv or _follows(argv, "--format", "text") else "json"
    try:
        args = _build_parser().parse_args(argv)
        payload, text = _run(args)
    except InternalInconsistency as e:
        _emit_error(e, fmt)
        return 3
    except DomainError as e:
        _emit_error(e, fmt)
        return 2
    except (ParseError, UsageError) as e:
        _emit_error(e, fmt)
        return 1
    except ValueError as e:
        _emit_error(UsageError(str(e)), fmt)
        return 1
    if args.fmt == "json":
        print(json.dumps(payload))
    else:
        print(text)
    return 0


def _follows(argv: list[str], flag: str, value: str) -> bool:
    return any(a == flag and b == value for a, b in zip(argv, argv[1:]))


if __name__ == "__main__":
    sys.exit(main())
