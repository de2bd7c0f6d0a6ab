"""Editor assets: the TextMate grammar and the snippet table.

Both artifacts are generated from data in this module so the language server
(snippet completion) and any editor client (vendored grammar/snippet files)
share one source of truth. Emission is deterministic byte-for-byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .lexer import KEYWORDS

GRAMMAR_FILENAME = "cool.tmLanguage.json"
SNIPPETS_FILENAME = "cool.code-snippets.json"

# Keywords are case-insensitive except true/false, which keep a lowercase
# first letter. The grammar approximates the latter as all-lowercase.
_CASE_INSENSITIVE = "|".join(k for k in KEYWORDS if k not in ("true", "false"))
KEYWORD_PATTERN = f"\\b((?i:{_CASE_INSENSITIVE})|true|false)\\b"


@dataclass(frozen=True)
class SnippetEntry:
    label: str
    prefix: str
    body: tuple[str, ...]
    description: str


SNIPPET_TABLE = (
    SnippetEntry(
        "COOL_class",
        "class",
        ("class ${1:Name} {", "\t${0:body}", "};"),
        "COOL: class",
    ),
    SnippetEntry(
        "COOL_class_inherits",
        "class",
        ("class ${1:Name} inherits ${2:Object}{", "\t${0:body}", "};"),
        "COOL: class inherits",
    ),
    SnippetEntry(
        "COOL_if",
        "if",
        ("if ${1:condition} then", "\t${2:expression}", "else", "\t${3:expression}", "fi$0"),
        "COOL: if then else fi",
    ),
    SnippetEntry(
        "COOL_while",
        "while",
        ("while ${1:condition} loop", "\t${2:expression}", "pool$0"),
        "COOL: while loop pool",
    ),
    SnippetEntry(
        "COOL_let",
        "let",
        ("let ${1:name} : ${2:Type} <- ${3:value} in", "\t${0:expression}"),
        "COOL: let in",
    ),
    SnippetEntry(
        "COOL_case",
        "case",
        ("case ${1:expression} of", "\t${2:name} : ${3:Type} => ${4:expression};", "esac$0"),
        "COOL: case of esac",
    ),
)


def matching_snippets(word: str) -> list[SnippetEntry]:
    """Entries whose prefix starts with ``word`` (case-sensitive)."""
    return [entry for entry in SNIPPET_TABLE if entry.prefix.startswith(word)]


def textmate_grammar() -> dict:
    """TextMate grammar covering every lexical class of the language."""
    return {
        "scopeName": "source.cool",
        "name": "COOL",
        "fileTypes": ["cl"],
        "patterns": [
            {"include": "#block_comment"},
            {"include": "#line_comment"},
            {"include": "#string"},
            {"include": "#keyword"},
            {"include": "#special_id"},
            {"include": "#integer"},
            {"include": "#class_id"},
            {"include": "#object_id"},
            {"include": "#operator"},
        ],
        "repository": {
            "line_comment": {
                "begin": "--",
                "end": "$\\n?",
                "name": "comment.line.double-dash.cool",
            },
            "block_comment": {
                "begin": "\\(\\*",
                "end": "\\*\\)",
                "name": "comment.block.cool",
                "patterns": [{"include": "#block_comment"}],
            },
            "string": {
                "begin": "\"",
                "end": "\"",
                "name": "string.quoted.double.cool",
                "patterns": [
                    {"match": "\\\\.", "name": "constant.character.escape.cool"}
                ],
            },
            "keyword": {
                "match": KEYWORD_PATTERN,
                "name": "keyword.other.cool",
            },
            "special_id": {
                "match": "\\b(self|SELF_TYPE)\\b",
                "name": "variable.language.cool",
            },
            "integer": {
                "match": "\\b(0|[1-9][0-9]*)\\b",
                "name": "constant.numeric.integer.cool",
            },
            "class_id": {
                "match": "\\b[A-Z][A-Za-z0-9_]*\\b",
                "name": "entity.name.type.class.cool",
            },
            "object_id": {
                "match": "\\b[a-z][A-Za-z0-9_]*\\b",
                "name": "variable.other.cool",
            },
            "operator": {
                "match": "<-|=>|<=|[-+*/~<=@.,;:(){}]",
                "name": "keyword.operator.cool",
            },
        },
    }


def snippet_json() -> dict:
    return {
        entry.label: {
            "prefix": entry.prefix,
            "body": list(entry.body),
            "description": entry.description,
        }
        for entry in SNIPPET_TABLE
    }


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def emit_assets(outdir: str | Path) -> list[Path]:
    """Write both asset files; returns the paths written."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    grammar_path = out / GRAMMAR_FILENAME
    snippets_path = out / SNIPPETS_FILENAME
    grammar_path.write_text(_dump(textmate_grammar()), encoding="utf-8", newline="\n")
    snippets_path.write_text(_dump(snippet_json()), encoding="utf-8", newline="\n")
    return [grammar_path, snippets_path]
