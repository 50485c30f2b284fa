"""Standard-tagset definitions compiled into a typed feature graph.

A tagset definition declares a rooted part-of-speech hierarchy plus typed
features, each appropriate at one hierarchy node and optionally guarded by
appropriateness conditions on earlier features.  Compiling it yields a
:class:`TypeGraph` whose terminal classes, the maximal consistent feature
assignments per leaf, form the closed-world universe that every
specification expression denotes into.

Definition file format::

    tagset <name>
    hierarchy { <node> { <child> ... } ... }
    feature <name> for <node> [when <f>=<v> (or <f>=<v>)*] { <value>, ... }

``#`` starts a comment.  The hierarchy root is implicit and named ``root``.
Node, feature and value names share one global namespace: any collision is
rejected at compile time so that bare atoms in specification expressions
resolve unambiguously.  Hierarchy membership is exposed through the
pseudo-feature ``pos`` whose values are the hierarchy node names.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .diagnostics import CompileError, Diagnostic, Span, error
from .lexer import Token, tokenize

POS_FEATURE = "pos"
ROOT = "root"


@dataclass(frozen=True)
class FeatureDecl:
    """One typed feature: name, home node, value domain, guard conditions.

    ``conditions`` is a disjunction of (feature, value) atoms; the feature is
    appropriate for a class at its home subtree only when some atom holds in
    that class (always, when the tuple is empty).
    """

    name: str
    home: str
    values: tuple[str, ...]
    conditions: tuple[tuple[str, str], ...] = ()
    span: Span = field(default_factory=lambda: Span(1, 1), compare=False)


@dataclass(frozen=True)
class TerminalClass:
    """A maximal consistent assignment at one hierarchy leaf."""

    leaf: str
    assignment: tuple[tuple[str, str], ...]
    index: int = field(compare=False, default=-1)

    def value(self, feature: str) -> str | None:
        for f, v in self.assignment:
            if f == feature:
                return v
        return None

    def render(self) -> str:
        parts = [f"{POS_FEATURE}={self.leaf}"]
        parts += [f"{f}={v}" for f, v in self.assignment]
        return "[" + " & ".join(parts) + "]"


@dataclass(frozen=True)
class CoverNode:
    """A conjunctive class description: hierarchy node plus feature atoms.

    These are the nodes of the virtually expanded type graph; minimal covers
    and MTree assignments are sets of them.  ``implied_node`` records whether
    the feature atoms alone already pin down the node, in which case the
    rendering omits the ``pos=`` constraint.
    """

    node: str
    atoms: tuple[tuple[str, str], ...]
    mask: int = field(compare=False, default=0)
    implied_node: bool = field(compare=False, default=False)
    sort_key: tuple = field(compare=False, default=())

    def render(self) -> str:
        parts = []
        if not self.atoms or not self.implied_node:
            parts.append(f"{POS_FEATURE}={self.node}")
        parts += [f"{f}={v}" for f, v in self.atoms]
        return " & ".join(parts)


class TypeGraph:
    """A compiled tagset definition.

    Instances are immutable after construction and safe to read from several
    threads; the only internal mutation is an idempotent cover cache.  Build
    one with :func:`parse_tagset_definition`, not directly.
    """

    def __init__(self, name: str, parents: dict[str, str | None],
                 order: tuple[str, ...], features: tuple[FeatureDecl, ...]):
        self.name = name
        self._parents = dict(parents)
        self.nodes = order
        self.features = features
        self.feature_map = {f.name: f for f in features}
        self._node_index = {n: i for i, n in enumerate(order)}
        self._children: dict[str, list[str]] = {n: [] for n in order}
        for n in order:
            p = self._parents[n]
            if p is not None:
                self._children[p].append(n)
        self._ancestry = {n: self._path(n) for n in order}
        self.leaves = tuple(n for n in order if not self._children[n])
        self.value_index = {}
        for f in features:
            for v in f.values:
                self.value_index[v] = f.name
        self.universe = self._enumerate()
        self.full_mask = (1 << len(self.universe)) - 1
        self._atom_mask: dict[tuple[str, str], int] = {
            (f.name, v): 0 for f in features for v in f.values
        }
        self._feature_mask: dict[str, int] = {f.name: 0 for f in features}
        self._node_mask: dict[str, int] = {n: 0 for n in order}
        for t in self.universe:
            bit = 1 << t.index
            for f, v in t.assignment:
                self._atom_mask[(f, v)] |= bit
                self._feature_mask[f] |= bit
            for n in self._ancestry[t.leaf]:
                self._node_mask[n] |= bit
        self.cover_candidates = self._build_candidates()
        self._cover_cache: dict[int, tuple[CoverNode, ...]] = {}

    # -- structure -----------------------------------------------------

    def _path(self, node: str) -> tuple[str, ...]:
        path = []
        cur: str | None = node
        while cur is not None:
            path.append(cur)
            cur = self._parents[cur]
        return tuple(reversed(path))

    def is_node(self, name: str) -> bool:
        return name in self._node_index

    def is_leaf(self, name: str) -> bool:
        return name in self._node_index and not self._children[name]

    def children(self, node: str) -> tuple[str, ...]:
        return tuple(self._children[node])

    def ancestry(self, node: str) -> tuple[str, ...]:
        """Path from the root down to ``node``, inclusive."""
        return self._ancestry[node]

    def features_at(self, node: str) -> tuple[FeatureDecl, ...]:
        """Features whose home lies on the root path of ``node``."""
        if node not in self._node_index:
            raise ValueError(f"unknown hierarchy node {node!r}")
        path = set(self._ancestry[node])
        return tuple(f for f in self.features if f.home in path)

    # -- denotation masks ----------------------------------------------

    def node_mask(self, node: str) -> int:
        return self._node_mask[node]

    def atom_mask(self, feature: str, value: str) -> int:
        return self._atom_mask[(feature, value)]

    def feature_mask(self, feature: str) -> int:
        """Appropriateness domain: classes in which ``feature`` is assigned."""
        return self._feature_mask[feature]

    def classes(self, mask: int) -> tuple[TerminalClass, ...]:
        return tuple(t for t in self.universe if mask >> t.index & 1)

    def mask_of(self, classes) -> int:
        mask = 0
        for t in classes:
            mask |= 1 << t.index
        return mask

    # -- enumeration ----------------------------------------------------

    def _enumerate(self) -> tuple[TerminalClass, ...]:
        out: list[TerminalClass] = []
        for leaf in self.leaves:
            path = set(self._ancestry[leaf])
            feats = [f for f in self.features if f.home in path]
            self._expand(feats, 0, [], {}, out, leaf)
        return tuple(out)

    def _expand(self, feats, i, acc, seen, out, leaf) -> None:
        if i == len(feats):
            out.append(TerminalClass(leaf, tuple(acc), index=len(out)))
            return
        f = feats[i]
        applicable = not f.conditions or any(
            seen.get(cf) == cv for cf, cv in f.conditions
        )
        if not applicable:
            self._expand(feats, i + 1, acc, seen, out, leaf)
            return
        for v in f.values:
            acc.append((f.name, v))
            seen[f.name] = v
            self._expand(feats, i + 1, acc, seen, out, leaf)
            acc.pop()
            del seen[f.name]

    # -- conjunctive descriptions ----------------------------------------

    def _build_candidates(self) -> tuple[CoverNode, ...]:
        masks: set[int] = set()
        for node in self.nodes:
            nmask = self._node_mask[node]
            if not nmask:
                continue
            path = set(self._ancestry[node])
            feats = [f for f in self.features if f.home in path]
            choice = [[None] + list(f.values) for f in feats]
            for combo in product(*choice):
                mask = nmask
                for f, v in zip(feats, combo):
                    if v is not None:
                        mask &= self._atom_mask[(f.name, v)]
                if mask:
                    masks.add(mask)
        nodes = [self.cover_node(m) for m in masks]
        nodes.sort(key=lambda c: c.sort_key)
        return tuple(nodes)

    def cover_node(self, mask: int) -> CoverNode:
        """Canonical conjunctive description of the classes in ``mask``.

        The node is the deepest hierarchy node containing every class and the
        atoms are exactly the features constant across all of them.  Only
        meaningful for masks that some conjunction denotes exactly.
        """
        classes = self.classes(mask)
        if not classes:
            raise ValueError("cannot describe the empty class set")
        paths = [self._ancestry[t.leaf] for t in classes]
        depth = min(len(p) for p in paths)
        node = ROOT
        for i in range(depth):
            step = paths[0][i]
            if all(p[i] == step for p in paths):
                node = step
            else:
                break
        atoms = []
        for f in self.features:
            vals = {t.value(f.name) for t in classes}
            if len(vals) == 1 and None not in vals:
                atoms.append((f.name, vals.pop()))
        inter = self.full_mask
        for f, v in atoms:
            inter &= self._atom_mask[(f, v)]
        implied = bool(atoms) and inter == mask
        # more general descriptions order first, then hierarchy position,
        # then feature/value declaration order
        key = (len(atoms), self._node_index[node],
               tuple((self._feature_index(f), self.feature_map[f].values.index(v))
                     for f, v in atoms))
        return CoverNode(node, tuple(atoms), mask=mask,
                         implied_node=implied, sort_key=key)

    def _feature_index(self, name: str) -> int:
        for i, f in enumerate(self.features):
            if f.name == name:
                return i
        raise KeyError(name)


def enumerate_terminal_classes(g: TypeGraph) -> tuple[TerminalClass, ...]:
    """The closed-world universe, ordered by leaf document order then values."""
    return g.universe


def appropriate_features(g: TypeGraph, node: str) -> tuple[FeatureDecl, ...]:
    """Features appropriate at ``node``: home equal to it or an ancestor."""
    return g.features_at(node)


# -- parsing -------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0
        self.diags: list[Diagnostic] = []

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
            raise CompileError(self.diags + [
                error("syntax", f"expected {what}, found {self.cur.text or 'end of input'!r}",
                      self.cur.span)])
        return self.advance()

    def keyword(self, word: str) -> Token:
        if self.cur.type != "NAME" or self.cur.text != word:
            raise CompileError(self.diags + [
                error("syntax", f"expected {word!r}, found {self.cur.text or 'end of input'!r}",
                      self.cur.span)])
        return self.advance()


def parse_tagset_definition(source: str) -> TypeGraph:
    """Compile a tagset definition, raising :class:`CompileError` on failure.

    Semantic problems (duplicate names, dangling homes, ambiguous values,
    bad appropriateness references) are collected exhaustively before the
    error is raised.
    """
    p = _Parser(source)
    p.keyword("tagset")
    name_tok = p.expect("NAME", "tagset name")

    parents: dict[str, str | None] = {ROOT: None}
    order: list[str] = [ROOT]
    spans: dict[str, Span] = {}

    p.keyword("hierarchy")
    p.expect("LBRACE", "'{'")
    _parse_nodes(p, ROOT, parents, order, spans)
    p.expect("RBRACE", "'}'")

    raw_features: list[FeatureDecl] = []
    while p.cur.type == "NAME" and p.cur.text == "feature":
        raw_features.append(_parse_feature(p))
    if p.cur.type != "EOF":
        p.diags.append(error("syntax", f"unexpected trailing input {p.cur.text!r}", p.cur.span))

    _validate(p, parents, order, spans, raw_features)
    if p.diags:
        raise CompileError(p.diags)
    return TypeGraph(name_tok.text, parents, tuple(order), tuple(raw_features))


def _parse_nodes(p: _Parser, parent: str, parents, order, spans) -> None:
    while p.cur.type == "NAME":
        tok = p.advance()
        if tok.text in parents:
            p.diags.append(error("duplicate-node",
                                 f"duplicate hierarchy node {tok.text!r}", tok.span))
        else:
            parents[tok.text] = parent
            order.append(tok.text)
            spans[tok.text] = tok.span
        if p.cur.type == "LBRACE":
            p.advance()
            _parse_nodes(p, tok.text, parents, order, spans)
            p.expect("RBRACE", "'}'")


def _parse_feature(p: _Parser) -> FeatureDecl:
    p.keyword("feature")
    name = p.expect("NAME", "feature name")
    p.keyword("for")
    home = p.expect("NAME", "home node")
    conditions: list[tuple[str, str]] = []
    if p.cur.type == "NAME" and p.cur.text == "when":
        p.advance()
        while True:
            cf = p.expect("NAME", "condition feature")
            p.expect("EQ", "'='")
            if p.cur.type not in ("NAME", "NUMBER"):
                raise CompileError(p.diags + [
                    error("syntax", "expected condition value", p.cur.span)])
            cv = p.advance()
            conditions.append((cf.text, cv.text))
            if p.cur.type == "NAME" and p.cur.text == "or":
                p.advance()
                continue
            break
    p.expect("LBRACE", "'{'")
    values: list[str] = []
    value_spans: list[Span] = []
    while True:
        if p.cur.type not in ("NAME", "NUMBER"):
            raise CompileError(p.diags + [
                error("syntax", "expected feature value", p.cur.span)])
        tok = p.advance()
        values.append(tok.text)
        value_spans.append(tok.span)
        if p.cur.type == "COMMA":
            p.advance()
            if p.cur.type == "RBRACE":
                break
            continue
        break
    p.expect("RBRACE", "'}'")
    decl = FeatureDecl(name.text, home.text, tuple(values),
                       tuple(conditions), span=name.span)
    return decl


def _validate(p: _Parser, parents, order, spans, features: list[FeatureDecl]) -> None:
    reserved = {POS_FEATURE}
    for node in order:
        if node in reserved and node != ROOT:
            p.diags.append(error("name-collision",
                                 f"{node!r} is reserved for the position pseudo-feature",
                                 spans.get(node, Span(1, 1))))
    node_set = set(order)
    feature_names: dict[str, Span] = {}
    value_owner: dict[str, str] = {}
    for i, f in enumerate(features):
        if f.name in reserved:
            p.diags.append(error("name-collision",
                                 f"feature name {f.name!r} is reserved", f.span))
        if f.name in node_set:
            p.diags.append(error("name-collision",
                                 f"feature {f.name!r} collides with a hierarchy node", f.span))
        if f.name in feature_names:
            p.diags.append(error("duplicate-feature",
                                 f"duplicate feature {f.name!r}", f.span))
        else:
            feature_names[f.name] = f.span
        if f.home not in node_set:
            p.diags.append(error("dangling-home",
                                 f"feature {f.name!r} declared for unknown node {f.home!r}",
                                 f.span))
        seen_values: set[str] = set()
        for v in f.values:
            if v in seen_values:
                p.diags.append(error("duplicate-value",
                                     f"feature {f.name!r} repeats value {v!r}", f.span))
            seen_values.add(v)
            if v in node_set or v in reserved:
                p.diags.append(error("name-collision",
                                     f"value {v!r} collides with a hierarchy node name", f.span))
            elif v in value_owner and value_owner[v] != f.name:
                p.diags.append(error("ambiguous-value",
                                     f"value {v!r} already belongs to feature "
                                     f"{value_owner[v]!r}", f.span))
            else:
                value_owner.setdefault(v, f.name)
        earlier = {g.name: g for g in features[:i]}
        for cf, cv in f.conditions:
            if cf not in earlier:
                where = ("later feature" if any(g.name == cf for g in features[i:])
                         else "unknown feature")
                p.diags.append(error("appropriateness",
                                     f"condition of {f.name!r} references {where} {cf!r}; "
                                     "conditions may only use earlier declarations", f.span))
            elif cv not in earlier[cf].values:
                p.diags.append(error("appropriateness",
                                     f"condition of {f.name!r} tests {cf}={cv}, but {cv!r} "
                                     f"is not a value of {cf!r}", f.span))
    # feature names must not collide with values either, their own included
    for f in features:
        if f.name in value_owner:
            p.diags.append(error("name-collision",
                                 f"feature {f.name!r} collides with a value of "
                                 f"{value_owner[f.name]!r}", f.span))
