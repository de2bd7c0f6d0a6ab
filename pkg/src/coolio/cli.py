"""Command-line entry point.

One executable exposing each compiler phase plus the language server and
editor-asset generation:

    coolio lex FILE.cl         tokens, one per line
    coolio parse FILE.cl       indented AST dump
    coolio typecheck FILE.cl   OK + class map, or diagnostics
    coolio run FILE.cl         evaluate the program
    coolio lsp                 language server on stdio
    coolio emit-assets --out DIR

Diagnostics go to standard error as ``ERROR: line: phase: message``; the
exit code is 0 exactly when nothing was written to standard error. Exit
code 2 marks usage problems (missing file, unknown subcommand), 3 a program
that terminated via abort().
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import assets, lsp
from .diagnostics import Diagnostic, format_diagnostic
from .interpreter import run_program
from .lexer import TokenKind
from .pipeline import Analysis, analyze
from .syntax import dump_ast


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coolio", description="COOL language tooling")
    sub = ap.add_subparsers(dest="command", required=True)
    for phase in ("lex", "parse", "typecheck"):
        p = sub.add_parser(phase, help=f"run the {phase} phase")
        p.add_argument("file", help="COOL source file (.cl)")
    p = sub.add_parser("run", help="evaluate a program")
    p.add_argument("file", help="COOL source file (.cl)")
    p.add_argument("--fuel", type=int, default=None, help="step limit for evaluation")
    sub.add_parser("lsp", help="language server on stdio")
    p = sub.add_parser("emit-assets", help="write editor grammar and snippets")
    p.add_argument("--out", required=True, help="output directory")
    return ap


def _read_source(path_text: str, out) -> str | None:
    path = Path(path_text)
    if path.suffix != ".cl":
        # A warning, not an error: it must not disturb the exit code.
        print(f"warning: {path_text} does not end in .cl", file=out)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path_text}: {exc.strerror or exc}", file=sys.stderr)
        return None


def _report(diags: list[Diagnostic], err) -> int:
    for diag in diags:
        print(format_diagnostic(diag), file=err)
    return 1 if diags else 0


def _cmd_lex(analysis: Analysis, out, err) -> int:
    for tok in analysis.tokens:
        if tok.kind is TokenKind.EOF:
            continue
        print(f"{tok.span.line}: {tok.kind.name} {tok.lexeme}", file=out)
    return _report(analysis.through_lex, err)


def _cmd_parse(analysis: Analysis, out, err) -> int:
    print(dump_ast(analysis.program), file=out)
    return _report(analysis.through_parse, err)


def _cmd_typecheck(analysis: Analysis, out, err) -> int:
    diags = analysis.all_diagnostics
    if diags:
        return _report(diags, err)
    print("OK", file=out)
    for decl in analysis.program.classes:
        info = analysis.table.info(decl.name)
        print(f"{info.name} : {info.parent}", file=out)
        for sig in info.methods.values():
            formals = ", ".join(sig.formal_types)
            print(f"  {sig.name}({formals}) : {sig.return_type}", file=out)
    return 0


def _cmd_run(analysis: Analysis, fuel: int | None, out, err) -> int:
    diags = analysis.all_diagnostics
    if diags:
        return _report(diags, err)
    result = run_program(analysis.program, analysis.table, stdin=sys.stdin, stdout=out, fuel=fuel)
    if result.error is not None:
        print(format_diagnostic(result.error), file=err)
        return 1
    if result.abort_message is not None:
        print(result.abort_message, file=err)
        return 3
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_argparser().parse_args(argv)
    out, err = sys.stdout, sys.stderr

    if args.command == "lsp":
        return lsp.serve(sys.stdin.buffer, sys.stdout.buffer)
    if args.command == "emit-assets":
        try:
            written = assets.emit_assets(args.out)
        except OSError as exc:
            print(f"error: cannot write assets to {args.out}: {exc}", file=err)
            return 2
        for path in written:
            print(path, file=out)
        return 0

    source = _read_source(args.file, out)
    if source is None:
        return 2
    analysis = analyze(source)
    if args.command == "lex":
        return _cmd_lex(analysis, out, err)
    if args.command == "parse":
        return _cmd_parse(analysis, out, err)
    if args.command == "typecheck":
        return _cmd_typecheck(analysis, out, err)
    if args.command == "run":
        return _cmd_run(analysis, args.fuel, out, err)
    raise AssertionError(f"unhandled command {args.command}")


def entry() -> None:
    sys.exit(main())
