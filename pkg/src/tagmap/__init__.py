"""tagmap: compile tagset mappings and resolve abstract corpus queries."""

from .diagnostics import (
    CompileError,
    Diagnostic,
    Span,
    SpecSyntaxError,
    SpecTypeError,
    UnknownTagError,
)
from .maprules import CoverageRule, ExceptionEntry, RuleSet, parse_rules
from .mtree import MTree, build_mtree, render_explain
from .resolver import Resolution, TagPattern, render_query, resolve
from .retagger import (
    CorpusToken,
    RetagRecord,
    RetagSummary,
    parse_corpus_line,
    retag_lines,
    retag_token,
)
from .specexpr import (
    TypedSpec,
    compile_spec,
    denote,
    minimal_cover,
    parse_spec,
    render_cover,
    render_spec,
    typecheck,
)
from .typegraph import (
    FeatureDecl,
    TerminalClass,
    TypeGraph,
    appropriate_features,
    enumerate_terminal_classes,
    parse_tagset_definition,
)

__version__ = "0.1.0"

__all__ = [
    "CompileError",
    "CorpusToken",
    "CoverageRule",
    "Diagnostic",
    "ExceptionEntry",
    "FeatureDecl",
    "MTree",
    "Resolution",
    "RetagRecord",
    "RetagSummary",
    "RuleSet",
    "Span",
    "SpecSyntaxError",
    "SpecTypeError",
    "TagPattern",
    "TerminalClass",
    "TypeGraph",
    "TypedSpec",
    "UnknownTagError",
    "appropriate_features",
    "build_mtree",
    "compile_spec",
    "denote",
    "enumerate_terminal_classes",
    "minimal_cover",
    "parse_corpus_line",
    "parse_rules",
    "parse_spec",
    "parse_tagset_definition",
    "render_cover",
    "render_explain",
    "render_query",
    "render_spec",
    "resolve",
    "retag_lines",
    "retag_token",
    "typecheck",
    "__version__",
]
