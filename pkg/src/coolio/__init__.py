"""Tooling for COOL, the Classroom Object Oriented Language.

A four-phase frontend (lex, parse, typecheck, evaluate), a stdio language
server publishing diagnostics and snippet completions, and generators for
the TextMate grammar and snippet files editors consume.
"""

from .diagnostics import Diagnostic, LineIndex, Phase, format_diagnostic
from .interpreter import RunResult, run_program
from .lexer import Token, TokenKind, tokenize
from .parser import parse, parse_expression
from .pipeline import Analysis, analyze
from .semantics import ClassTable, build_class_table, conforms, join, typecheck
from .syntax import Program, dump_ast, pretty_print

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "ClassTable",
    "Diagnostic",
    "LineIndex",
    "Phase",
    "Program",
    "RunResult",
    "Token",
    "TokenKind",
    "analyze",
    "build_class_table",
    "conforms",
    "dump_ast",
    "format_diagnostic",
    "join",
    "parse",
    "parse_expression",
    "pretty_print",
    "run_program",
    "tokenize",
    "typecheck",
    "__version__",
]
