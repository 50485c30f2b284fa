"""Boolean specification expressions over a type graph.

Grammar (``[...]`` around the whole expression is optional)::

    spec   := '[' expr ']' | expr
    expr   := term ('|' term)*
    term   := factor ('&' factor)*
    factor := '!' factor | '(' expr ')' | atom
    atom   := NAME (('=' | '!=') (NAME | NUMBER | QUOTED))?

A bare name resolves through the graph's value index: it is either a
hierarchy node (shorthand for ``pos=<node>``) or a feature value (shorthand
for ``<feature>=<value>``); global name uniqueness makes this unambiguous.

Denotations are closed-world sets of terminal classes, materialised as
bitsets over the graph universe:

* ``f=v`` denotes the classes in which ``f`` is appropriate and equals ``v``;
* ``f!=v`` the classes in which ``f`` is appropriate and differs from ``v``;
* negation is pushed to the atoms structurally (``!(a & b)`` means
  ``!a | !b``), so on an atom it complements within the feature's
  appropriateness domain and De Morgan's laws hold by construction;
* ``&`` intersects and ``|`` unites.

An expression is well-typed when every disjunct of its disjunctive normal
form denotes at least one terminal class; a single contradictory disjunct
rejects the whole specification.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Diagnostic, Span, SpecSyntaxError, SpecTypeError, error
from .lexer import Token, tokenize
from .typegraph import POS_FEATURE, CoverNode, TypeGraph

_DEFAULT_SPAN = Span(1, 1)


@dataclass(frozen=True)
class Atom:
    feature: str
    op: str                      # "=" or "!="
    value: str
    quoted: bool = False         # value was a quoted literal (physical tag)
    span: Span = field(default_factory=lambda: _DEFAULT_SPAN, compare=False)

    def render(self) -> str:
        value = f"'{self.value}'" if self.quoted else self.value
        return f"{self.feature}{self.op}{value}"


@dataclass(frozen=True)
class BareAtom:
    name: str
    span: Span = field(default_factory=lambda: _DEFAULT_SPAN, compare=False)

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class And:
    left: "SpecExpr"
    right: "SpecExpr"


@dataclass(frozen=True)
class Or:
    left: "SpecExpr"
    right: "SpecExpr"


@dataclass(frozen=True)
class Not:
    child: "SpecExpr"


SpecExpr = Atom | BareAtom | And | Or | Not


# -- parsing ---------------------------------------------------------------


class TokenCursor:
    """Shared cursor over a token list for the expression-bearing parsers."""

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def expect(self, type_: str, what: str) -> Token:
        if self.cur.type != type_:
            raise SpecSyntaxError([
                error("syntax",
                      f"expected {what}, found {self.cur.text or 'end of input'!r}",
                      self.cur.span)])
        return self.advance()


def parse_spec(text: str) -> SpecExpr:
    """Parse one specification expression, consuming the entire input."""
    c = TokenCursor(tokenize(text))
    e = parse_spec_at(c)
    if c.cur.type != "EOF":
        raise SpecSyntaxError([
            error("syntax", f"unexpected trailing input {c.cur.text!r}", c.cur.span)])
    return e


def parse_spec_at(c: TokenCursor) -> SpecExpr:
    if c.cur.type == "LBRACKET":
        c.advance()
        e = _parse_expr(c)
        c.expect("RBRACKET", "']'")
        return e
    return _parse_expr(c)


def _parse_expr(c: TokenCursor) -> SpecExpr:
    e = _parse_term(c)
    while c.cur.type == "PIPE":
        c.advance()
        e = Or(e, _parse_term(c))
    return e


def _parse_term(c: TokenCursor) -> SpecExpr:
    e = _parse_factor(c)
    while c.cur.type == "AMP":
        c.advance()
        e = And(e, _parse_factor(c))
    return e


def _parse_factor(c: TokenCursor) -> SpecExpr:
    if c.cur.type == "BANG":
        c.advance()
        return Not(_parse_factor(c))
    if c.cur.type == "LPAREN":
        c.advance()
        e = _parse_expr(c)
        c.expect("RPAREN", "')'")
        return e
    if c.cur.type == "NAME":
        name = c.advance()
        if c.cur.type in ("EQ", "NEQ"):
            op = "=" if c.advance().type == "EQ" else "!="
            if c.cur.type not in ("NAME", "NUMBER", "QUOTED"):
                raise SpecSyntaxError([
                    error("syntax", "expected a value after the comparison",
                          c.cur.span)])
            val = c.advance()
            span = Span(name.span.line, name.span.column,
                        val.span.end_line, val.span.end_column)
            return Atom(name.text, op, val.value,
                        quoted=val.type == "QUOTED", span=span)
        return BareAtom(name.text, span=name.span)
    raise SpecSyntaxError([
        error("syntax",
              f"expected an atom, found {c.cur.text or 'end of input'!r}",
              c.cur.span)])


# -- rendering --------------------------------------------------------------

_PREC = {Or: 1, And: 2, Not: 3}


def render_spec(e: SpecExpr) -> str:
    """Canonical bracketed form; reparsing yields a structurally equal AST."""
    return f"[{render_expr(e)}]"


def render_expr(e: SpecExpr) -> str:
    if isinstance(e, (Atom, BareAtom)):
        return e.render()
    if isinstance(e, Not):
        return "!" + _child(e.child, 3)
    if isinstance(e, And):
        return _child(e.left, 2, left=True) + " & " + _child(e.right, 2)
    return _child(e.left, 1, left=True) + " | " + _child(e.right, 1)


def _child(e: SpecExpr, parent_prec: int, left: bool = False) -> str:
    text = render_expr(e)
    prec = _PREC.get(type(e), 4)
    # same-precedence right children keep their parentheses: '&' and '|'
    # associate to the left, so a right-nested tree must stay explicit
    if prec < parent_prec or (prec == parent_prec and not left):
        return f"({text})"
    return text


# -- typing and denotation ---------------------------------------------------


@dataclass(frozen=True)
class TypedSpec:
    """A well-typed specification with its materialised denotation."""

    expr: SpecExpr
    graph: TypeGraph = field(compare=False, repr=False)
    denotation: int = 0
    compatible_leaves: frozenset[str] = frozenset()
    dnf: tuple[tuple[Atom, ...], ...] = field(default=(), compare=False)

    @property
    def text(self) -> str:
        return render_spec(self.expr)

    def classes(self):
        return self.graph.classes(self.denotation)


def typecheck(e: SpecExpr, g: TypeGraph) -> TypedSpec:
    """Resolve, normalise and check ``e``; raise :class:`SpecTypeError` if any
    disjunctive-normal-form disjunct is unsatisfiable in ``g``."""
    resolved = _resolve(e, g)
    dnf = _to_dnf(_to_nnf(resolved))
    diags: list[Diagnostic] = []
    first_disjunct = ""
    first_core: tuple[str, ...] = ()
    union = 0
    for disjunct in dnf:
        mask = g.full_mask
        for atom in disjunct:
            mask &= _atom_mask(atom, g)
        if mask == 0:
            rendered = " & ".join(a.render() for a in disjunct)
            core = _conflict_core(disjunct, g)
            core_text = tuple(a.render() for a in core)
            if not first_disjunct:
                first_disjunct = rendered
                first_core = core_text
            diags.append(error(
                "ill-typed",
                f"unsatisfiable disjunct [{rendered}]: "
                f"{' and '.join(core_text)} cannot hold together",
                disjunct[0].span))
        union |= mask
    if diags:
        raise SpecTypeError(diags, disjunct=first_disjunct, conflict=first_core)
    leaves = frozenset(t.leaf for t in g.classes(union))
    return TypedSpec(expr=e, graph=g, denotation=union,
                     compatible_leaves=leaves, dnf=dnf)


def compile_spec(text: str, g: TypeGraph) -> TypedSpec:
    """Parse and typecheck in one step."""
    return typecheck(parse_spec(text), g)


def denote(e: SpecExpr, g: TypeGraph) -> int:
    """Denotation bitset of ``e`` without the satisfiability requirement."""
    resolved = _resolve(e, g)
    return _denote_nnf(_to_nnf(resolved), g)


def _resolve(e: SpecExpr, g: TypeGraph) -> SpecExpr:
    diags: list[Diagnostic] = []
    resolved = _resolve_walk(e, g, diags)
    if diags:
        raise SpecTypeError(diags)
    return resolved


def _resolve_walk(e: SpecExpr, g: TypeGraph, diags: list[Diagnostic]) -> SpecExpr:
    if isinstance(e, BareAtom):
        if g.is_node(e.name):
            return Atom(POS_FEATURE, "=", e.name, span=e.span)
        owner = g.value_index.get(e.name)
        if owner is not None:
            return Atom(owner, "=", e.name, span=e.span)
        diags.append(error("unknown-name",
                           f"{e.name!r} is neither a hierarchy node nor a feature value",
                           e.span))
        return e
    if isinstance(e, Atom):
        if e.quoted:
            diags.append(error("unknown-value",
                               f"quoted value {e.value!r} is a physical tag and cannot "
                               "appear in a standard-tagset specification", e.span))
            return e
        if e.feature == POS_FEATURE:
            if not g.is_node(e.value):
                diags.append(error("unknown-value",
                                   f"{e.value!r} is not a hierarchy node", e.span))
            return e
        decl = g.feature_map.get(e.feature)
        if decl is None:
            diags.append(error("unknown-feature",
                               f"unknown feature {e.feature!r}", e.span))
            return e
        if e.value not in decl.values:
            diags.append(error("unknown-value",
                               f"{e.value!r} is not a value of feature {e.feature!r}",
                               e.span))
        return e
    if isinstance(e, Not):
        return Not(_resolve_walk(e.child, g, diags))
    if isinstance(e, And):
        return And(_resolve_walk(e.left, g, diags), _resolve_walk(e.right, g, diags))
    return Or(_resolve_walk(e.left, g, diags), _resolve_walk(e.right, g, diags))


def _to_nnf(e: SpecExpr) -> SpecExpr:
    if isinstance(e, Atom):
        return e
    if isinstance(e, And):
        return And(_to_nnf(e.left), _to_nnf(e.right))
    if isinstance(e, Or):
        return Or(_to_nnf(e.left), _to_nnf(e.right))
    if isinstance(e, Not):
        return _negate(e.child)
    raise AssertionError(f"unresolved node {e!r}")


def _negate(e: SpecExpr) -> SpecExpr:
    if isinstance(e, Atom):
        return Atom(e.feature, "!=" if e.op == "=" else "=", e.value, span=e.span)
    if isinstance(e, Not):
        return _to_nnf(e.child)
    if isinstance(e, And):
        return Or(_negate(e.left), _negate(e.right))
    if isinstance(e, Or):
        return And(_negate(e.left), _negate(e.right))
    raise AssertionError(f"unresolved node {e!r}")


def _to_dnf(e: SpecExpr) -> tuple[tuple[Atom, ...], ...]:
    if isinstance(e, Atom):
        return ((e,),)
    if isinstance(e, Or):
        return _to_dnf(e.left) + _to_dnf(e.right)
    if isinstance(e, And):
        left = _to_dnf(e.left)
        right = _to_dnf(e.right)
        return tuple(l + r for l in left for r in right)
    raise AssertionError(f"negation not normalised away: {e!r}")


def _atom_mask(atom: Atom, g: TypeGraph) -> int:
    if atom.feature == POS_FEATURE:
        mask = g.node_mask(atom.value)
        return mask if atom.op == "=" else g.full_mask & ~mask
    mask = g.atom_mask(atom.feature, atom.value)
    if atom.op == "=":
        return mask
    return g.feature_mask(atom.feature) & ~mask


def _denote_nnf(e: SpecExpr, g: TypeGraph) -> int:
    if isinstance(e, Atom):
        return _atom_mask(e, g)
    if isinstance(e, And):
        return _denote_nnf(e.left, g) & _denote_nnf(e.right, g)
    if isinstance(e, Or):
        return _denote_nnf(e.left, g) | _denote_nnf(e.right, g)
    raise AssertionError(f"unexpected node {e!r}")


def _conflict_core(disjunct: tuple[Atom, ...], g: TypeGraph) -> tuple[Atom, ...]:
    """Minimal subset of an unsatisfiable conjunction that stays unsatisfiable."""

    def unsat(atoms) -> bool:
        mask = g.full_mask
        for a in atoms:
            mask &= _atom_mask(a, g)
        return mask == 0

    core = list(disjunct)
    for atom in list(core):
        if len(core) == 1:
            break
        trial = [a for a in core if a is not atom]
        if unsat(trial):
            core = trial
    return tuple(core)


# -- minimal covers ----------------------------------------------------------


def minimal_cover(mask: int, g: TypeGraph) -> tuple[CoverNode, ...]:
    """Smallest set of conjunctive descriptions denoting exactly ``mask``.

    Candidates are the graph's conjunctive descriptions whose denotation lies
    inside ``mask``; an exact branch-and-bound set cover over the maximal ones
    finds a minimum-size solution, with ties broken by declaration order.
    Results are cached on the graph.
    """
    if mask == 0:
        return ()
    cached = g._cover_cache.get(mask)
    if cached is not None:
        return cached
    inside = [c for c in g.cover_candidates if c.mask & ~mask == 0]
    primes: list[CoverNode] = []
    for c in inside:
        if not any(o.mask != c.mask and c.mask & ~o.mask == 0 for o in inside):
            primes.append(c)
    # greedy solution bounds the exact search
    best = _greedy_cover(mask, primes)
    best_len = len(best)
    chosen: list[CoverNode] = []

    def search(covered: int) -> None:
        nonlocal best, best_len
        if covered == mask:
            if len(chosen) < best_len:
                best = list(chosen)
                best_len = len(chosen)
            return
        if len(chosen) + 1 > best_len:
            return
        missing = mask & ~covered
        bit = missing & -missing
        for c in primes:
            if c.mask & bit:
                chosen.append(c)
                search(covered | c.mask)
                chosen.pop()

    search(0)
    result = tuple(sorted(best, key=lambda c: c.sort_key))
    g._cover_cache[mask] = result
    return result


def _greedy_cover(mask: int, primes: list[CoverNode]) -> list[CoverNode]:
    out: list[CoverNode] = []
    covered = 0
    while covered != mask:
        gain, pick = -1, None
        for c in primes:
            new = (c.mask & ~covered).bit_count()
            if new > gain:
                gain, pick = new, c
        assert pick is not None and gain > 0
        out.append(pick)
        covered |= pick.mask
    return out


def render_cover(cover: tuple[CoverNode, ...]) -> str:
    """Factored disjunctive rendering of a cover, shared atoms pulled out."""
    if not cover:
        return ""
    units = [tuple(c.render().split(" & ")) for c in cover]
    return _factor(units)


def _factor(units: list[tuple[str, ...]]) -> str:
    if len(units) == 1:
        return " & ".join(units[0])
    common = [u for u in units[0] if all(u in rest for rest in units[1:])]
    if common:
        rest = [tuple(u for u in row if u not in common) for row in units]
        return " & ".join(common) + " & (" + _factor_groups(rest) + ")"
    return _factor_groups(units)


def _factor_groups(units: list[tuple[str, ...]]) -> str:
    groups: dict[str, list[tuple[str, ...]]] = {}
    for row in units:
        groups.setdefault(row[0], []).append(row)
    parts = []
    for rows in groups.values():
        if len(rows) == 1:
            parts.append(" & ".join(rows[0]))
        else:
            parts.append(_factor(rows))
    return " | ".join(parts)
