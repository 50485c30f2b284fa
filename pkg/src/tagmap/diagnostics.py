"""Shared diagnostic records for every compiler stage.

All parsers and checkers in this package report problems as :class:`Diagnostic`
values carrying a position inside the offending source text.  Fatal problems
are raised as :class:`CompileError`, which bundles the full diagnostic list so
callers can print everything that was found, not just the first failure.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Span:
    """Start/end position of a source region, 1-based lines and columns."""

    line: int
    column: int
    end_line: int = 0
    end_column: int = 0

    def __post_init__(self) -> None:
        if self.end_line == 0:
            object.__setattr__(self, "end_line", self.line)
        if self.end_column == 0:
            object.__setattr__(self, "end_column", self.column)

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str            # "error" or "warning"
    kind: str                # stable machine-readable category
    message: str
    span: Span = field(default_factory=lambda: Span(1, 1))

    def render(self) -> str:
        return f"{self.severity} [{self.kind}] at {self.span}: {self.message}"


def error(kind: str, message: str, span: Span | None = None) -> Diagnostic:
    return Diagnostic("error", kind, message, span or Span(1, 1))


def warning(kind: str, message: str, span: Span | None = None) -> Diagnostic:
    return Diagnostic("warning", kind, message, span or Span(1, 1))


class CompileError(Exception):
    """Raised when a source artifact cannot be compiled.

    Carries every diagnostic collected before the failure was declared.
    """

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].render() if self.diagnostics else "unknown error"
        extra = f" (+{len(self.diagnostics) - 1} more)" if len(self.diagnostics) > 1 else ""
        super().__init__(first + extra)


class SpecSyntaxError(CompileError):
    """A specification expression could not be parsed."""


class SpecTypeError(CompileError):
    """A specification parsed but is not well-typed against the type graph.

    ``disjunct`` holds the rendered unsatisfiable conjunction and ``conflict``
    the minimal subset of its atoms that cannot hold together.
    """

    def __init__(self, diagnostics: list[Diagnostic], disjunct: str = "",
                 conflict: tuple[str, ...] = ()):
        super().__init__(diagnostics)
        self.disjunct = disjunct
        self.conflict = conflict


class UnknownTagError(KeyError):
    """A physical tag without any mapping rule was met at runtime.

    This is the runtime face of a definition hole: the rule set has no
    coverage rule and no exception entry for the tag.
    """

    def __init__(self, tag: str):
        super().__init__(tag)
        self.tag = tag

    def __str__(self) -> str:
        return f"definition hole at runtime: no rule for physical tag {self.tag!r}"
