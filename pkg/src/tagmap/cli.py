"""Command-line interface.

    tagmap compile --tagset F [--rules F]            syntax, types, consistency
    tagmap check   --tagset F [--rules F]            same as compile
    tagmap explain --tagset F --rules F              per-tag assignments
    tagmap query   --tagset F --rules F [--batch F]  resolve abstract queries
    tagmap retag   --tagset F --rules F --corpus F   rewrite a corpus

Exit status: 0 on success, 1 on compile errors or definition holes met while
retagging, 2 when --strict is given and warnings were issued, 3 on I/O errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .diagnostics import CompileError, Diagnostic
from .maprules import RuleSet, parse_rules
from .mtree import build_mtree, render_explain
from .resolver import resolve
from .retagger import RetagSummary, retag_lines
from .typegraph import TypeGraph, parse_tagset_definition


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CompileError as exc:
        _print_diags(exc.diagnostics)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagmap",
        description="compile tagset mappings, resolve queries, retag corpora")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("compile", "check"):
        p = sub.add_parser(name, help="compile a tagset and optional rules")
        p.add_argument("--tagset", required=True, help="tagset definition file")
        p.add_argument("--rules", help="mapping rules file")
        p.add_argument("--strict", action="store_true",
                       help="treat warnings as failures")
        p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("explain", help="print per-tag standard assignments")
    p.add_argument("--tagset", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("query", help="resolve abstract queries to tag patterns")
    p.add_argument("--tagset", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("-e", "--expr", action="append", default=[],
                   help="query expression (repeatable)")
    p.add_argument("--batch", help="file with one query per line")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("retag", help="rewrite a tagged corpus with readings")
    p.add_argument("--tagset", required=True)
    p.add_argument("--rules", required=True)
    p.add_argument("--corpus", required=True, help="tagged corpus file")
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.add_argument("--format", choices=("slash", "tsv"), default="slash")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_retag)
    return parser


def _load(args) -> tuple[TypeGraph, RuleSet | None]:
    graph = parse_tagset_definition(Path(args.tagset).read_text())
    rules = None
    if getattr(args, "rules", None):
        rules = parse_rules(Path(args.rules).read_text(), graph)
    return graph, rules


def _print_diags(diags: list[Diagnostic]) -> None:
    for d in diags:
        print(d.render(), file=sys.stderr)


def _cmd_compile(args) -> int:
    graph, rules = _load(args)
    warnings: list[Diagnostic] = []
    tags = 0
    if rules is not None:
        tree = build_mtree(rules)
        warnings = rules.warnings + tree.diagnostics
        tags = len(rules.inventory)
    print(f"tags: {tags}, classes: {len(graph.universe)}, "
          f"warnings: {len(warnings)}")
    _print_diags(warnings)
    if warnings and args.strict:
        return 2
    return 0


def _cmd_explain(args) -> int:
    graph, rules = _load(args)
    tree = build_mtree(rules)
    print(render_explain(tree))
    if (rules.warnings or tree.diagnostics) and args.strict:
        return 2
    return 0


def _cmd_query(args) -> int:
    graph, rules = _load(args)
    had_error = False
    had_warning = False

    def run(line: str) -> None:
        nonlocal had_error, had_warning
        text = line.strip()
        if text.endswith("."):
            text = text[:-1].rstrip()
        if not text:
            return
        try:
            res = resolve(rules, text)
        except CompileError as exc:
            _print_diags(exc.diagnostics)
            had_error = True
            return
        out = res.render()
        if "WARN" in out:
            had_warning = True
        print(out)

    if args.expr or args.batch:
        for expr in args.expr:
            run(expr)
        if args.batch:
            for line in Path(args.batch).read_text().splitlines():
                if line.strip() in ("\\q", ""):
                    continue
                run(line)
        if had_error:
            return 1
    else:
        # the interactive session reports ill-typed queries and continues;
        # they do not fail the run
        while True:
            try:
                line = input("Query> ")
            except EOFError:
                print()
                break
            if line.strip() == "\\q":
                break
            run(line)

    if had_warning and args.strict:
        return 2
    return 0


def _cmd_retag(args) -> int:
    graph, rules = _load(args)
    lines = Path(args.corpus).read_text().splitlines()
    summary = RetagSummary()
    records: list[str] = []
    for item in retag_lines(rules, lines, args.format):
        summary.add(item)
        if isinstance(item, Diagnostic):
            print(item.render(), file=sys.stderr)
        else:
            records.append(item.render())
    body = "\n".join(records + [summary.render()]) + "\n"
    if args.output:
        Path(args.output).write_text(body)
    else:
        sys.stdout.write(body)
    if summary.holes:
        return 1
    if summary.malformed and args.strict:
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
