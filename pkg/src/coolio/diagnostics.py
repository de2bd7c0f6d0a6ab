"""Shared diagnostic model and line/character mapping.

Every phase (lexing, parsing, typechecking, evaluation) reports problems as
:class:`Diagnostic` values carrying a 1-based line number, the phase name,
and a message.  :class:`LineIndex` converts a line number into a character
range, measured in UTF-16 code units (the editor protocol default) or UTF-8
bytes, so line-addressed compiler errors can be shown as editor squiggles.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable


class Phase(Enum):
    """Compilation stage a diagnostic originates from."""

    LEXING = "lexing"
    PARSING = "parsing"
    TYPECHECKING = "typechecking"
    EVALUATION = "evaluation"


_PHASE_ORDER = {
    Phase.LEXING: 0,
    Phase.PARSING: 1,
    Phase.TYPECHECKING: 2,
    Phase.EVALUATION: 3,
}


@dataclass(frozen=True)
class Position:
    """A point in a document: 1-based line, 0-based character column."""

    line: int
    character: int


@dataclass(frozen=True)
class Range:
    start: Position
    end: Position


@dataclass(frozen=True)
class Diagnostic:
    """One user-facing error.

    Severity is always "error"; a "warning" tier is reserved but unused.
    ``range`` is filled in by the layer that owns the document text (the
    compiler itself records only line numbers).
    """

    phase: Phase
    line: int
    message: str
    range: Range | None = None


def format_diagnostic(diag: Diagnostic) -> str:
    """Render the stable one-line CLI form ``ERROR: <line>: <phase>: <message>``."""
    return f"ERROR: {diag.line}: {diag.phase.value}: {diag.message}"


def sort_diagnostics(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    """Deterministic report order: by line, then phase, then message."""
    return sorted(diags, key=lambda d: (d.line, _PHASE_ORDER[d.phase], d.message))


def _utf16_len(text: str) -> int:
    return sum(2 if ord(ch) > 0xFFFF else 1 for ch in text)


class LineIndex:
    """Start offsets of every line in a document.

    A line is a maximal run of characters not containing a newline; a
    trailing newline implies a final empty line.  Start offsets are in code
    points; per-line widths are available in UTF-16 code units or UTF-8
    bytes for protocol interop.
    """

    def __init__(self, text: str) -> None:
        self.text = text
        self.starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self.starts.append(i + 1)
        self.length = len(text)

    @property
    def line_count(self) -> int:
        return len(self.starts)

    def line_text(self, line: int) -> str:
        """Text of a 1-based line, newline excluded; out-of-range lines clamp."""
        line = min(max(line, 1), self.line_count)
        start = self.starts[line - 1]
        end = self.starts[line] - 1 if line < self.line_count else self.length
        return self.text[start:end]

    def line_width(self, line: int, encoding: str = "utf-16") -> int:
        text = self.line_text(line)
        if encoding == "utf-8":
            # surrogatepass: lone surrogates can arrive via JSON escapes in
            # protocol messages and must not crash width computation.
            return len(text.encode("utf-8", "surrogatepass"))
        return _utf16_len(text)

    def line_to_range(self, line: int, encoding: str = "utf-16") -> Range:
        """Full extent of a line as a character range.

        Covers character 0 through the line's last character, newline
        excluded.  Line numbers beyond the document clamp to the last line,
        making this total.
        """
        line = min(max(line, 1), self.line_count)
        return Range(Position(line, 0), Position(line, self.line_width(line, encoding)))


def build_line_index(document: str) -> LineIndex:
    return LineIndex(document)
