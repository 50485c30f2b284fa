"""Coverage rules and the exception lexicon for one physical tag inventory.

A rules file has the shape::

    mapping <name> for tagset <graph-name>
    tags T1, T2, ...
    [pos = 'T1'] => <spec> .
    [w1, w2] << [pos = 'T2'] >> <spec> .

A coverage rule assigns a standard reading to every occurrence of a physical
tag; an exception entry reroutes the listed words under that tag to a
different reading. Parsing collects every diagnostic it can before failing.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import (
    CompileError,
    Diagnostic,
    Span,
    SpecSyntaxError,
    SpecTypeError,
    UnknownTagError,
    error,
    warning,
)
from .lexer import Token, tokenize
from .specexpr import (
    Atom,
    SpecExpr,
    TokenCursor,
    TypedSpec,
    parse_spec_at,
    render_spec,
    typecheck,
)
from .typegraph import POS_FEATURE, TypeGraph


@dataclass(frozen=True)
class CoverageRule:
    tag: str
    spec: SpecExpr
    typed: TypedSpec = field(compare=False, repr=False)
    span: Span = field(compare=False, default_factory=lambda: Span(1, 1))

    @property
    def reading(self) -> str:
        return render_spec(self.spec)


@dataclass(frozen=True)
class ExceptionEntry:
    words: tuple[str, ...]
    tag: str
    into: SpecExpr
    typed: TypedSpec = field(compare=False, repr=False)
    span: Span = field(compare=False, default_factory=lambda: Span(1, 1))

    @property
    def reading(self) -> str:
        return render_spec(self.into)


@dataclass
class RuleSet:
    """A compiled mapping: inventory, coverage rules and exception lexicon."""

    name: str
    graph: TypeGraph
    inventory: tuple[str, ...]
    coverage: dict[str, CoverageRule]
    exceptions: tuple[ExceptionEntry, ...]
    warnings: list[Diagnostic] = field(default_factory=list)
    word_index: dict[tuple[str, str], ExceptionEntry] = field(default_factory=dict)
    _by_tag: dict[str, list[ExceptionEntry]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.word_index:
            for entry in self.exceptions:
                for w in entry.words:
                    self.word_index[(w, entry.tag)] = entry
        if not self._by_tag:
            for entry in self.exceptions:
                self._by_tag.setdefault(entry.tag, []).append(entry)

    def exceptions_for(self, tag: str) -> tuple[ExceptionEntry, ...]:
        return tuple(self._by_tag.get(tag, ()))

    def standard_reading(self, tag: str, word: str | None = None) -> TypedSpec:
        """Reading of ``word`` occurring with ``tag``; the exception lexicon
        takes precedence over the tag's coverage rule."""
        if word is not None:
            entry = self.word_index.get((word, tag))
            if entry is not None:
                return entry.typed
        rule = self.coverage.get(tag)
        if rule is None:
            raise UnknownTagError(tag)
        return rule.typed

    def denotation(self, tag: str) -> int:
        rule = self.coverage.get(tag)
        if rule is None:
            raise UnknownTagError(tag)
        return rule.typed.denotation


def parse_rules(source: str, graph: TypeGraph,
                inventory: tuple[str, ...] | None = None) -> RuleSet:
    """Parse and typecheck a rules file against ``graph``.

    ``inventory`` cross-checks the file's ``tags`` header when given; the two
    must list the same tags in the same order.
    """
    c = TokenCursor(tokenize(source))
    diags: list[Diagnostic] = []
    warns: list[Diagnostic] = []

    try:
        name, graph_name = _parse_header(c)
    except SpecSyntaxError as exc:
        raise CompileError(exc.diagnostics) from None
    if graph_name and graph_name != graph.name:
        diags.append(error(
            "tagset-mismatch",
            f"rules target tagset {graph_name!r} but were compiled against "
            f"{graph.name!r}", c.cur.span))
    tags = _parse_inventory(c, diags)
    if inventory is not None and tags and tuple(inventory) != tags:
        diags.append(error(
            "inventory-mismatch",
            "tag inventory given by the caller disagrees with the file's "
            "tags header", c.cur.span))
    if not tags and inventory is not None:
        tags = tuple(inventory)

    coverage: dict[str, CoverageRule] = {}
    entries: list[ExceptionEntry] = []
    seen_rule: set[str] = set()
    seen_word: set[tuple[str, str]] = set()

    while c.cur.type != "EOF":
        if c.cur.type != "LBRACKET":
            diags.append(error("syntax",
                               f"expected a rule, found {c.cur.text!r}",
                               c.cur.span))
            _sync(c)
            continue
        try:
            _parse_rule(c, graph, tags, coverage, entries,
                        seen_rule, seen_word, diags, warns)
        except SpecSyntaxError as exc:
            diags.extend(exc.diagnostics)
            _sync(c)

    for entry in entries:
        rule = coverage.get(entry.tag)
        if rule is None:
            warns.append(warning(
                "exception-without-coverage",
                f"exception entry for tag {entry.tag} which has no coverage rule",
                entry.span))
        elif rule.typed.denotation == entry.typed.denotation:
            warns.append(warning(
                "redundant-exception",
                f"exception reading for {'|'.join(entry.words)} under "
                f"{entry.tag} equals the tag's coverage reading", entry.span))

    if any(d.severity == "error" for d in diags):
        raise CompileError(diags + warns)
    return RuleSet(name=name, graph=graph, inventory=tags,
                   coverage=coverage, exceptions=tuple(entries),
                   warnings=warns)


def _parse_header(c: TokenCursor) -> tuple[str, str]:
    _expect_word(c, "mapping")
    name = c.expect("NAME", "a mapping name").text
    _expect_word(c, "for")
    _expect_word(c, "tagset")
    graph_name = c.expect("NAME", "a tagset name").text
    return name, graph_name


def _parse_inventory(c: TokenCursor, diags: list[Diagnostic]) -> tuple[str, ...]:
    if not (c.cur.type == "NAME" and c.cur.text == "tags"):
        diags.append(error("syntax", "expected a tags header", c.cur.span))
        return ()
    c.advance()
    tags: list[str] = []
    seen: set[str] = set()
    while True:
        tok = c.expect("NAME", "a tag name")
        if tok.text in seen:
            diags.append(error("duplicate-tag",
                               f"tag {tok.text} listed twice in the inventory",
                               tok.span))
        else:
            seen.add(tok.text)
            tags.append(tok.text)
        if c.cur.type != "COMMA":
            break
        c.advance()
    return tuple(tags)


def _expect_word(c: TokenCursor, word: str) -> None:
    tok = c.cur
    if tok.type != "NAME" or tok.text != word:
        raise SpecSyntaxError([
            error("syntax", f"expected {word!r}, found {tok.text or 'end of input'!r}",
                  tok.span)])
    c.advance()


def _sync(c: TokenCursor) -> None:
    # skip to just past the next rule terminator
    while c.cur.type not in ("DOT", "EOF"):
        c.advance()
    if c.cur.type == "DOT":
        c.advance()


def _parse_rule(c: TokenCursor, graph: TypeGraph, tags: tuple[str, ...],
                coverage: dict[str, CoverageRule],
                entries: list[ExceptionEntry],
                seen_rule: set[str], seen_word: set[tuple[str, str]],
                diags: list[Diagnostic], warns: list[Diagnostic]) -> None:
    start = c.cur.span
    # a word list is a bracketed comma or ']'-terminated run of names; a rule
    # head is a bracketed spec
    is_words = (c.tokens[c.pos + 1].type == "NAME"
                and c.tokens[c.pos + 2].type in ("COMMA", "RBRACKET"))
    if is_words:
        words = _parse_words(c)
        _expect_sym(c, "OUTOF", "'<<'")
        tag = _parse_tag_head(c, graph, diags)
        _expect_sym(c, "INTO", "'>>'")
        into = parse_spec_at(c)
        _expect_sym(c, "DOT", "'.'")
        if tag is None:
            return
        if tags and tag not in tags:
            diags.append(error("unknown-tag",
                               f"tag {tag} is not in the inventory", start))
        typed = _typecheck_target(into, graph, diags)
        if typed is None:
            return
        for w in words:
            if (w, tag) in seen_word:
                diags.append(error(
                    "duplicate-word",
                    f"word {w!r} under tag {tag} already has an exception entry",
                    start))
            seen_word.add((w, tag))
        entries.append(ExceptionEntry(words=words, tag=tag, into=into,
                                      typed=typed, span=start))
        return

    tag = _parse_tag_head(c, graph, diags)
    _expect_sym(c, "ARROW", "'=>'")
    target = parse_spec_at(c)
    _expect_sym(c, "DOT", "'.'")
    if tag is None:
        return
    if tags and tag not in tags:
        diags.append(error("unknown-tag",
                           f"tag {tag} is not in the inventory", start))
    if tag in seen_rule:
        diags.append(error("duplicate-rule",
                           f"tag {tag} already has a coverage rule", start))
        return
    seen_rule.add(tag)
    typed = _typecheck_target(target, graph, diags)
    if typed is None:
        return
    coverage[tag] = CoverageRule(tag=tag, spec=target, typed=typed, span=start)


def _parse_words(c: TokenCursor) -> tuple[str, ...]:
    c.expect("LBRACKET", "'['")
    words = [c.expect("NAME", "a word").text]
    while c.cur.type == "COMMA":
        c.advance()
        words.append(c.expect("NAME", "a word").text)
    c.expect("RBRACKET", "']'")
    return tuple(words)


def _parse_tag_head(c: TokenCursor, graph: TypeGraph,
                    diags: list[Diagnostic]) -> str | None:
    """Parse ``[pos = '<TAG>']`` and return the tag, or record a diagnostic."""
    span = c.cur.span
    head = parse_spec_at(c)
    if (isinstance(head, Atom) and head.feature == POS_FEATURE
            and head.op == "=" and head.quoted):
        return head.value
    diags.append(error(
        "malformed-rule",
        "rule head must name one physical tag, as in [pos = 'NN']", span))
    return None


def _expect_sym(c: TokenCursor, type_: str, what: str) -> None:
    c.expect(type_, what)


def _typecheck_target(spec: SpecExpr, graph: TypeGraph,
                      diags: list[Diagnostic]) -> TypedSpec | None:
    try:
        return typecheck(spec, graph)
    except SpecTypeError as exc:
        diags.extend(exc.diagnostics)
        return None
