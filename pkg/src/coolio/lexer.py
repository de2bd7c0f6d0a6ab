"""Tokenizer for COOL source text.

Produces the full token stream, terminated by an EOF token, plus lexing
diagnostics.  Tokenization is total: malformed lexemes become diagnostics
and scanning resumes at the next safe character, so it never raises for any
input text.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, unique

from .diagnostics import Diagnostic, Phase

# The keyword row of the language. All keywords match case-insensitively
# except true/false, whose first letter must be lowercase (`True` is a
# type identifier).
KEYWORDS = (
    "class",
    "else",
    "false",
    "fi",
    "if",
    "in",
    "inherits",
    "isvoid",
    "let",
    "loop",
    "pool",
    "then",
    "while",
    "case",
    "esac",
    "new",
    "of",
    "not",
    "true",
)

_KEYWORD_SET = frozenset(KEYWORDS)

MAX_STRING_LENGTH = 1024
INT_MAX = 2**31 - 1


@unique
class TokenKind(Enum):
    KEYWORD = "KEYWORD"
    TYPEID = "TYPEID"
    OBJECTID = "OBJECTID"
    INT = "INT"
    STRING = "STRING"
    ASSIGN = "ASSIGN"  # <-
    DARROW = "DARROW"  # =>
    AT = "AT"
    DOT = "DOT"
    COMMA = "COMMA"
    SEMI = "SEMI"
    COLON = "COLON"
    LPAREN = "LPAREN"
    RPAREN = "RPAREN"
    LBRACE = "LBRACE"
    RBRACE = "RBRACE"
    PLUS = "PLUS"
    MINUS = "MINUS"
    STAR = "STAR"
    SLASH = "SLASH"
    TILDE = "TILDE"
    LT = "LT"
    LE = "LE"
    EQ = "EQ"
    EOF = "EOF"


@dataclass(frozen=True)
class SourceSpan:
    """Half-open character range ``[start, end)`` plus the 1-based line and
    column of its first character."""

    start: int
    end: int
    line: int
    column: int


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: SourceSpan
    # Canonical lowercase keyword name, decoded string text, or int value.
    value: object = None

    def is_keyword(self, name: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.value == name


_SINGLE_CHAR = {
    "@": TokenKind.AT,
    ".": TokenKind.DOT,
    ",": TokenKind.COMMA,
    ";": TokenKind.SEMI,
    ":": TokenKind.COLON,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "~": TokenKind.TILDE,
}

_ESCAPES = {"n": "\n", "t": "\t", "b": "\b", "f": "\f"}

_ASCII_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_IDENT_CHARS = _ASCII_LETTERS | frozenset("0123456789_")


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Scan ``source`` into (tokens ending with EOF, lexing diagnostics)."""
    return _Scanner(source).scan()


class _Scanner:
    def __init__(self, source: str) -> None:
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.diags: list[Diagnostic] = []

    # -- character primitives -------------------------------------------

    def _eof(self) -> bool:
        return self.pos >= len(self.src)

    def _current(self) -> str:
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def _peek(self) -> str:
        return self.src[self.pos + 1] if self.pos + 1 < len(self.src) else ""

    def _advance(self) -> str:
        ch = self.src[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def _error(self, line: int, message: str) -> None:
        self.diags.append(Diagnostic(Phase.LEXING, line, message))

    def _emit(self, kind: TokenKind, start: int, line: int, col: int, value: object = None) -> None:
        span = SourceSpan(start, self.pos, line, col)
        self.tokens.append(Token(kind, self.src[start : self.pos], span, value))

    # -- main loop -------------------------------------------------------

    def scan(self) -> tuple[list[Token], list[Diagnostic]]:
        while not self._eof():
            start, line, col = self.pos, self.line, self.col
            ch = self._current()
            if ch in " \t\r\f\v\n":
                self._advance()
            elif ch == "-" and self._peek() == "-":
                self._line_comment()
            elif ch == "(" and self._peek() == "*":
                self._block_comment()
            elif ch == "*" and self._peek() == ")":
                self._error(line, "unmatched *)")
                self._advance()
                self._advance()
            elif ch == '"':
                self._string(start, line, col)
            elif ch in "0123456789":
                self._number(start, line, col)
            elif ch in _ASCII_LETTERS:
                self._word(start, line, col)
            elif ch == "<":
                self._advance()
                if self._current() == "-":
                    self._advance()
                    self._emit(TokenKind.ASSIGN, start, line, col)
                elif self._current() == "=":
                    self._advance()
                    self._emit(TokenKind.LE, start, line, col)
                else:
                    self._emit(TokenKind.LT, start, line, col)
            elif ch == "=":
                self._advance()
                if self._current() == ">":
                    self._advance()
                    self._emit(TokenKind.DARROW, start, line, col)
                else:
                    self._emit(TokenKind.EQ, start, line, col)
            elif ch in _SINGLE_CHAR:
                self._advance()
                self._emit(_SINGLE_CHAR[ch], start, line, col)
            else:
                self._error(line, f"invalid character '{ch}'")
                self._advance()
        self.tokens.append(
            Token(TokenKind.EOF, "", SourceSpan(self.pos, self.pos, self.line, self.col))
        )
        return self.tokens, self.diags

    # -- comments ---------------------------------------------------------

    def _line_comment(self) -> None:
        # Consumes "--" through the next newline (inclusive) or EOF.
        while not self._eof():
            if self._advance() == "\n":
                break

    def _block_comment(self) -> None:
        open_line = self.line
        self._advance()  # (
        self._advance()  # *
        depth = 1
        while depth > 0:
            if self._eof():
                self._error(open_line, "unterminated block comment")
                return
            if self._current() == "(" and self._peek() == "*":
                self._advance()
                self._advance()
                depth += 1
            elif self._current() == "*" and self._peek() == ")":
                self._advance()
                self._advance()
                depth -= 1
            else:
                self._advance()

    # -- literals and words -----------------------------------------------

    def _number(self, start: int, line: int, col: int) -> None:
        digits = frozenset("0123456789")
        while self._current() in digits:
            self._advance()
        lexeme = self.src[start : self.pos]
        if len(lexeme) > 1 and lexeme[0] == "0":
            self._error(line, "integer literal has a leading zero")
        value = int(lexeme)
        if value > INT_MAX:
            self._error(line, "integer literal exceeds 32-bit range")
        self._emit(TokenKind.INT, start, line, col, value)

    def _word(self, start: int, line: int, col: int) -> None:
        while self._current() in _IDENT_CHARS:
            self._advance()
        lexeme = self.src[start : self.pos]
        lowered = lexeme.lower()
        if lowered in _KEYWORD_SET:
            # true/false keep their keyword status only with a lowercase
            # first letter; `True` is just a type identifier.
            if lowered in ("true", "false") and not lexeme[0].islower():
                self._emit(TokenKind.TYPEID, start, line, col)
            else:
                self._emit(TokenKind.KEYWORD, start, line, col, lowered)
        elif lexeme[0].isupper():
            self._emit(TokenKind.TYPEID, start, line, col)
        else:
            self._emit(TokenKind.OBJECTID, start, line, col)

    def _string(self, start: int, line: int, col: int) -> None:
        self._advance()  # opening quote
        chars: list[str] = []
        while True:
            if self._eof():
                self._error(line, "unterminated string")
                return
            ch = self._current()
            if ch == '"':
                self._advance()
                break
            if ch == "\n":
                # Raw newline terminates the literal; resume on the next line.
                self._error(self.line, "unterminated string")
                self._advance()
                return
            if ch == "\\":
                self._advance()
                if self._eof():
                    self._error(line, "unterminated string")
                    return
                esc = self._advance()
                if esc == "\n":
                    chars.append("\n")  # escaped newline continues the string
                else:
                    chars.append(_ESCAPES.get(esc, esc))
            else:
                chars.append(self._advance())
        decoded = "".join(chars)
        if len(decoded) > MAX_STRING_LENGTH:
            self._error(line, f"string constant exceeds {MAX_STRING_LENGTH} characters")
        self._emit(TokenKind.STRING, start, line, col, decoded)
