"""Exception hierarchy shared by every module.

The CLI maps :class:`ParseError` to exit code 1, :class:`DomainError` to
exit code 2 and :class:`InternalInconsistency` to exit code 3.
"""

from __future__ import annotations


class HyperseqError(Exception):
    """Base class for all library errors."""

    def payload(self) -> dict:
        return {"kind": type(self).__name__, "message": str(self)}


class ParseError(HyperseqError, ValueError):
    """Malformed user input (expression, set text, fragment text)."""

    def __init__(self, message: str, span: tuple[int, int] | None = None, text: str | None = None):
        self.span = span
        self.text = text
        if span is not None:
            message = f"{message} at bytes {span[0]}..{span[1]}"
        super().__init__(message)

    def payload(self) -> dict:
        out = super().payload()
        if self.span is not None:
            out["span"] = {"start": self.span[0], "end": self.span[1]}
        return out


class ExprSyntaxError(ParseError):
    pass


class ZeroModulus(ExprSyntaxError):
    pass


class BranchCountMismatch(ExprSyntaxError):
    pass


class DomainError(HyperseqError):
    """A well-formed request whose mathematical precondition fails."""


class DivisionByZeroGerm(DomainError, ZeroDivisionError):
    pass


class NotFinite(DomainError):
    pass


class NotHypernatural(DomainError):
    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)

    def payload(self) -> dict:
        out = super().payload()
        out["reason"] = self.reason
        return out


class DomainTooSmall(DomainError):
    pass


class NoWitness(DomainError):
    def __init__(self, message: str, s_eps=None):
        self.s_eps = s_eps
        super().__init__(message)

    def payload(self) -> dict:
        out = super().payload()
        if self.s_eps is not None:
            out["s_eps"] = self.s_eps.to_text()
        return out


class HypothesisFailed(DomainError):
    def __init__(self, name: str, message: str = ""):
        self.name = name
        super().__init__(message or f"hypothesis set {name} is not cofinite")

    def payload(self) -> dict:
        out = super().payload()
        out["set"] = self.name
        return out


class PremiseFailed(DomainError):
    pass


class IsActuallyLimit(DomainError):
    pass


class EmptyBasisIntersection(DomainError):
    pass


class IncoherentConstraints(DomainError):
    pass


class UniverseTooLarge(DomainError):
    pass


class NotAFilter(DomainError):
    pass


class NotUltra(DomainError):
    pass


class InternalInconsistency(HyperseqError, AssertionError):
    """A theorem-level invariant failed; never expected to be raised."""
