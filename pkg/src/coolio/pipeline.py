"""Shared front-end driver: lex, parse, build the class table, type-check.

Both the CLI and the language server run analysis through here so they agree
on phase ordering and diagnostic accumulation. Later phases always run on
the recovered AST, so one broken class does not hide errors in another.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import Diagnostic, sort_diagnostics
from .lexer import Token, tokenize
from .parser import parse
from .semantics import ClassTable, build_class_table, typecheck
from .syntax import Program


@dataclass
class Analysis:
    source: str
    tokens: list[Token]
    program: Program
    table: ClassTable
    lex_diagnostics: list[Diagnostic] = field(default_factory=list)
    parse_diagnostics: list[Diagnostic] = field(default_factory=list)
    semantic_diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def through_lex(self) -> list[Diagnostic]:
        return sort_diagnostics(self.lex_diagnostics)

    @property
    def through_parse(self) -> list[Diagnostic]:
        return sort_diagnostics(self.lex_diagnostics + self.parse_diagnostics)

    @property
    def all_diagnostics(self) -> list[Diagnostic]:
        return sort_diagnostics(
            self.lex_diagnostics + self.parse_diagnostics + self.semantic_diagnostics
        )

    @property
    def clean(self) -> bool:
        return not (self.lex_diagnostics or self.parse_diagnostics or self.semantic_diagnostics)


def analyze(source: str) -> Analysis:
    """Run every compile phase over ``source`` and collect the results."""
    tokens, lex_diags = tokenize(source)
    program, parse_diags = parse(tokens)
    table, build_diags = build_class_table(program)
    _, type_diags = typecheck(table, program)
    return Analysis(
        source=source,
        tokens=tokens,
        program=program,
        table=table,
        lex_diagnostics=lex_diags,
        parse_diagnostics=parse_diags,
        semantic_diagnostics=build_diags + type_diags,
    )
