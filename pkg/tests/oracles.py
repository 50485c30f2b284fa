"""Independent reference implementations backing the test suite.

Nothing here reuses the package's set machinery. Universes are rebuilt by
brute-force generate-and-filter over explicit value products, denotations by
per-class evaluation of the expression tree, rule denotations from a regex
scrape of the rules fixture, and query resolution by plain set algebra over
frozensets. Expression trees come from the package parser (the surface
grammar is shared); every semantic step is recomputed from first principles.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path

from tagmap.specexpr import And, Atom, BareAtom, Not, Or, SpecExpr, parse_spec

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "tagmap" / "fixtures"

# Hand-entered copy of the fixture graph. Deliberately independent data
# entry: a divergence from the .tagset file is a test failure, not a sync
# problem to patch up.

LEAF_PATHS: dict[str, tuple[str, ...]] = {
    "v": ("root", "v"),
    "n": ("root", "nom", "n"),
    "pron": ("root", "nom", "pron"),
    "adj": ("root", "mod", "adj"),
    "adv": ("root", "mod", "adv"),
    "det": ("root", "det"),
    "conj": ("root", "conj"),
    "prep": ("root", "prep"),
    "numeral": ("root", "numeral"),
    "prt": ("root", "prt"),
    "intj": ("root", "intj"),
    "ex": ("root", "ex"),
    "fw": ("root", "fw"),
    "ls": ("root", "ls"),
    "posm": ("root", "posm"),
    "sym": ("root", "sym"),
    "to": ("root", "to"),
    "wadv": ("root", "wadv"),
}

ALL_NODES = sorted({n for path in LEAF_PATHS.values() for n in path})


@dataclass(frozen=True)
class OracleFeature:
    name: str
    home: str
    values: tuple[str, ...]
    conditions: tuple[tuple[str, str], ...] = ()   # disjunctive


FEATURES: tuple[OracleFeature, ...] = (
    OracleFeature("vtype", "v", ("aux", "con", "prim")),
    OracleFeature("vform", "v", ("fin", "inf", "part")),
    OracleFeature("mood", "v", ("ind", "subj", "imp"), (("vform", "fin"),)),
    OracleFeature("tense", "v", ("past", "pres"),
                  (("mood", "ind"), ("vform", "part"))),
    OracleFeature("pers", "v", ("1", "2", "3"), (("vform", "fin"),)),
    OracleFeature("ntype", "n", ("common", "prop", "mass")),
    OracleFeature("num", "n", ("sg", "pl"),
                  (("ntype", "common"), ("ntype", "prop"))),
    OracleFeature("case", "nom", ("gen", "ngen")),
    OracleFeature("antec", "pron", ("prs", "nprs")),
    OracleFeature("type", "pron", ("personal", "indef", "wh")),
    OracleFeature("degree", "mod", ("abs", "comp", "sup")),
    OracleFeature("dtype", "det", ("art", "pre", "dwh")),
    OracleFeature("ctype", "conj", ("coord", "subord")),
)

VALUE_OWNER = {v: f.name for f in FEATURES for v in f.values}

ClassKey = tuple[str, frozenset]


def class_key(leaf: str, assignment: dict[str, str]) -> ClassKey:
    return leaf, frozenset(assignment.items())


def oracle_universe() -> list[tuple[str, dict[str, str]]]:
    """Every maximal consistent assignment, by brute-force enumeration.

    For each leaf, every combination of (value | unset) over the leaf's
    potentially appropriate features is generated, then filtered: a feature
    must be set iff its appropriateness condition holds under the full
    assignment.
    """
    classes: list[tuple[str, dict[str, str]]] = []
    for leaf, path in LEAF_PATHS.items():
        feats = [f for f in FEATURES if f.home in path]
        options = [(None, *f.values) for f in feats]
        for combo in itertools.product(*options):
            assignment = {f.name: v for f, v in zip(feats, combo)
                          if v is not None}
            ok = True
            for f, v in zip(feats, combo):
                applicable = (not f.conditions
                              or any(assignment.get(cf) == cv
                                     for cf, cv in f.conditions))
                if applicable != (v is not None):
                    ok = False
                    break
            if ok:
                classes.append((leaf, assignment))
    return classes


def oracle_universe_keys() -> frozenset[ClassKey]:
    return frozenset(class_key(leaf, a) for leaf, a in oracle_universe())


# -- per-class expression evaluation ----------------------------------------


def resolve_bare(name: str) -> tuple[str, str]:
    """(feature, value) form of a bare atom, 'pos' for hierarchy nodes."""
    if name in ALL_NODES:
        return "pos", name
    return VALUE_OWNER[name], name


def eval_spec(e: SpecExpr, leaf: str, assignment: dict[str, str]) -> bool:
    if isinstance(e, BareAtom):
        f, v = resolve_bare(e.name)
        return eval_spec(Atom(f, "=", v), leaf, assignment)
    if isinstance(e, Atom):
        if e.feature == "pos":
            inside = e.value in LEAF_PATHS[leaf]
            return inside if e.op == "=" else not inside
        if e.feature not in assignment:
            return False
        if e.op == "=":
            return assignment[e.feature] == e.value
        return assignment[e.feature] != e.value
    if isinstance(e, And):
        return (eval_spec(e.left, leaf, assignment)
                and eval_spec(e.right, leaf, assignment))
    if isinstance(e, Or):
        return (eval_spec(e.left, leaf, assignment)
                or eval_spec(e.right, leaf, assignment))
    if isinstance(e, Not):
        return eval_neg(e.child, leaf, assignment)
    raise AssertionError(e)


def eval_neg(e: SpecExpr, leaf: str, assignment: dict[str, str]) -> bool:
    """Structural negation: pushed through connectives, flipped at atoms."""
    if isinstance(e, BareAtom):
        f, v = resolve_bare(e.name)
        return eval_neg(Atom(f, "=", v), leaf, assignment)
    if isinstance(e, Atom):
        flipped = Atom(e.feature, "!=" if e.op == "=" else "=", e.value)
        return eval_spec(flipped, leaf, assignment)
    if isinstance(e, And):
        return (eval_neg(e.left, leaf, assignment)
                or eval_neg(e.right, leaf, assignment))
    if isinstance(e, Or):
        return (eval_neg(e.left, leaf, assignment)
                and eval_neg(e.right, leaf, assignment))
    if isinstance(e, Not):
        return eval_spec(e.child, leaf, assignment)
    raise AssertionError(e)


def oracle_denote(spec: SpecExpr | str,
                  universe=None) -> frozenset[ClassKey]:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if universe is None:
        universe = oracle_universe()
    return frozenset(class_key(leaf, a) for leaf, a in universe
                     if eval_spec(spec, leaf, a))


# -- independent normal forms -------------------------------------------------


def oracle_nnf(e: SpecExpr, negate: bool = False) -> SpecExpr:
    if isinstance(e, BareAtom):
        f, v = resolve_bare(e.name)
        return oracle_nnf(Atom(f, "=", v), negate)
    if isinstance(e, Atom):
        if not negate:
            return e
        return Atom(e.feature, "!=" if e.op == "=" else "=", e.value)
    if isinstance(e, Not):
        return oracle_nnf(e.child, not negate)
    a, b = oracle_nnf(e.left, negate), oracle_nnf(e.right, negate)
    if isinstance(e, And):
        return Or(a, b) if negate else And(a, b)
    return And(a, b) if negate else Or(a, b)


def oracle_dnf(e: SpecExpr) -> list[list[Atom]]:
    e = oracle_nnf(e)

    def walk(x: SpecExpr) -> list[list[Atom]]:
        if isinstance(x, Atom):
            return [[x]]
        if isinstance(x, Or):
            return walk(x.left) + walk(x.right)
        if isinstance(x, And):
            return [l + r for l in walk(x.left) for r in walk(x.right)]
        raise AssertionError(x)

    return walk(e)


def oracle_well_typed(spec: SpecExpr | str) -> bool:
    """Accept iff every DNF disjunct denotes at least one class."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    universe = oracle_universe()
    for disjunct in oracle_dnf(spec):
        conj = disjunct[0]
        for atom in disjunct[1:]:
            conj = And(conj, atom)
        if not oracle_denote(conj, universe):
            return False
    return True


# -- rules fixture, scraped independently -------------------------------------

_COVERAGE_RE = re.compile(r"^\[pos = '([^']+)'\]\s*=>\s*(.*)\.\s*$")
_EXCEPTION_RE = re.compile(
    r"^\[([^\]]+)\]\s*<<\s*\[pos = '([^']+)'\]\s*>>\s*(.*)\.\s*$")


@dataclass(frozen=True)
class OracleRules:
    inventory: tuple[str, ...]
    coverage: dict[str, frozenset]                    # tag -> denotation keys
    coverage_text: dict[str, str]
    exceptions: tuple[tuple[tuple[str, ...], str, frozenset], ...]


def oracle_rules(path: Path | None = None) -> OracleRules:
    text = (path or FIXTURES / "upenn.rules").read_text()
    universe = oracle_universe()
    inventory: list[str] = []
    in_tags = False
    coverage: dict[str, frozenset] = {}
    coverage_text: dict[str, str] = {}
    exceptions = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.startswith("tags ") or (in_tags and line.startswith(" ")):
            in_tags = True
            chunk = line[5:] if line.startswith("tags ") else line
            inventory += [t.strip() for t in chunk.split(",") if t.strip()]
            continue
        in_tags = False
        m = _COVERAGE_RE.match(line)
        if m:
            tag, spec = m.group(1), m.group(2).strip()
            coverage[tag] = oracle_denote(spec, universe)
            coverage_text[tag] = spec
            continue
        m = _EXCEPTION_RE.match(line)
        if m:
            words = tuple(w.strip() for w in m.group(1).split(","))
            tag, spec = m.group(2), m.group(3).strip()
            exceptions.append((words, tag, oracle_denote(spec, universe)))
    return OracleRules(tuple(inventory), coverage, coverage_text,
                       tuple(exceptions))


# -- query resolution by set algebra -------------------------------------------


@dataclass(frozen=True)
class OracleResolution:
    patterns: tuple[tuple[str, str | None, tuple[str, ...]], ...]
    noise: dict[str, frozenset]                       # per included tag
    word_noise: dict[tuple[str, tuple[str, ...]], frozenset]
    uncovered: frozenset


def oracle_resolve(rules: OracleRules, s: frozenset) -> OracleResolution:
    patterns = []
    noise: dict[str, frozenset] = {}
    word_noise: dict[tuple[str, tuple[str, ...]], frozenset] = {}
    reachable: frozenset = frozenset()
    for tag in rules.inventory:
        cov = rules.coverage.get(tag, frozenset())
        entries = [(w, t, into) for w, t, into in rules.exceptions if t == tag]
        hits = [(w, into) for w, _, into in entries if into & s]
        if cov & s:
            excluded: list[str] = []
            for w, _, into in entries:
                if not into & s:
                    excluded += [x for x in w if x not in excluded]
            patterns.append((tag, "!=", tuple(excluded)) if excluded
                            else (tag, None, ()))
            reachable |= cov
            if cov - s:
                noise[tag] = cov - s
        elif hits:
            merged: list[str] = []
            for w, _ in hits:
                merged += [x for x in w if x not in merged]
            patterns.append((tag, "=", tuple(merged)))
        for w, into in hits:
            reachable |= into
            if into - s:
                word_noise[(tag, w)] = into - s
    return OracleResolution(tuple(patterns), noise, word_noise,
                            s - reachable)


def key_of(terminal) -> ClassKey:
    return (terminal.leaf, frozenset(terminal.assignment))


def mask_keys(graph, mask: int) -> frozenset:
    return frozenset(key_of(t) for t in graph.classes(mask))
