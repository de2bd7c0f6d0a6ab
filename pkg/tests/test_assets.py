"""Generated editor assets: TextMate grammar and snippet table."""

import json
import re

from coolio.assets import (
    GRAMMAR_FILENAME,
    KEYWORD_PATTERN,
    SNIPPETS_FILENAME,
    SNIPPET_TABLE,
    emit_assets,
    matching_snippets,
    snippet_json,
    textmate_grammar,
)
from coolio.lexer import KEYWORDS

# The full keyword family of the language, as one canonical row.
KEYWORD_ROW = {
    "class", "else", "false", "fi", "if", "in", "inherits", "isvoid", "let",
    "loop", "pool", "then", "while", "case", "esac", "new", "of", "not", "true",
}


def test_keyword_pattern_spells_out_the_keyword_row():
    words = set(re.findall(r"[a-z_]{2,}", KEYWORD_PATTERN))
    assert words == KEYWORD_ROW


def test_lexer_and_grammar_share_the_keyword_set():
    assert set(KEYWORDS) == KEYWORD_ROW


def test_keyword_pattern_behaviour():
    pattern = re.compile(KEYWORD_PATTERN)
    for word in ["class", "Class", "CLASS", "iNhErItS", "true", "false", "esac"]:
        assert pattern.search(word), word
    for word in ["True", "TRUE", "False", "klass", "truex", "xclass", "selftype"]:
        assert not pattern.search(word), word


def test_grammar_skeleton():
    grammar = textmate_grammar()
    assert grammar["scopeName"] == "source.cool"
    assert grammar["name"] == "COOL"
    assert grammar["fileTypes"] == ["cl"]
    includes = [p["include"] for p in grammar["patterns"]]
    assert includes == [
        "#block_comment", "#line_comment", "#string", "#keyword",
        "#special_id", "#integer", "#class_id", "#object_id", "#operator",
    ]
    assert set(grammar["repository"]) == {i[1:] for i in includes}


def test_line_comment_rule():
    rule = textmate_grammar()["repository"]["line_comment"]
    assert rule["begin"] == "--"
    assert rule["name"] == "comment.line.double-dash.cool"


def test_block_comment_rule_nests():
    rule = textmate_grammar()["repository"]["block_comment"]
    assert rule["begin"] == "\\(\\*"
    assert rule["end"] == "\\*\\)"
    assert {"include": "#block_comment"} in rule["patterns"]


def test_class_id_rule():
    rule = textmate_grammar()["repository"]["class_id"]
    assert rule["name"] == "entity.name.type.class.cool"
    assert re.fullmatch(rule["match"].replace("\\b", ""), "Main")
    assert not re.fullmatch(rule["match"].replace("\\b", ""), "main")


def test_special_id_rule():
    rule = textmate_grammar()["repository"]["special_id"]
    pattern = re.compile(rule["match"])
    assert pattern.search("self")
    assert pattern.search("SELF_TYPE")
    assert not pattern.search("selfish")


def test_integer_rule_rejects_leading_zero():
    rule = textmate_grammar()["repository"]["integer"]
    pattern = re.compile(rule["match"])
    assert pattern.search("0")
    assert pattern.search("42")
    assert not pattern.search("042")


def test_grammar_regexes_compile():
    repository = textmate_grammar()["repository"]
    for rule in repository.values():
        for key in ("match", "begin", "end"):
            if key in rule:
                re.compile(rule[key])


def test_class_inherits_snippet_is_verbatim():
    entry = snippet_json()["COOL_class_inherits"]
    assert entry == {
        "prefix": "class",
        "body": [
            "class ${1:Name} inherits ${2:Object}{",
            "\t${0:body}",
            "};",
        ],
        "description": "COOL: class inherits",
    }


def test_snippet_table_covers_compound_forms():
    prefixes = {entry.prefix for entry in SNIPPET_TABLE}
    assert {"class", "if", "while", "let", "case"} <= prefixes
    labels = [entry.label for entry in SNIPPET_TABLE]
    assert len(labels) == len(set(labels))
    placeholder = re.compile(r"\$(\d+|\{\d+:[^}]*\})")
    for entry in SNIPPET_TABLE:
        joined = "\n".join(entry.body)
        assert placeholder.search(joined), entry.label
        # Every snippet carries an explicit final tab stop.
        assert "$0" in joined or "${0:" in joined, entry.label


def test_matching_snippets_prefix_filter():
    assert [e.label for e in matching_snippets("cla")] == [
        "COOL_class",
        "COOL_class_inherits",
    ]
    assert [e.label for e in matching_snippets("le")] == ["COOL_let"]
    assert matching_snippets("zz") == []
    assert list(matching_snippets("")) == list(SNIPPET_TABLE)
    # Case-sensitive: capitalized words match nothing.
    assert matching_snippets("Cla") == []


def test_emission_is_deterministic(tmp_path):
    first = emit_assets(tmp_path / "a")
    second = emit_assets(tmp_path / "b")
    assert [p.name for p in first] == [GRAMMAR_FILENAME, SNIPPETS_FILENAME]
    for one, two in zip(first, second):
        assert one.read_bytes() == two.read_bytes()
    # Re-emitting over an existing directory is byte-stable too.
    third = emit_assets(tmp_path / "a")
    for one, three in zip(first, third):
        assert one.read_bytes() == three.read_bytes()


def test_emitted_files_are_faithful_json(tmp_path):
    grammar_path, snippets_path = emit_assets(tmp_path)
    assert json.loads(grammar_path.read_text()) == textmate_grammar()
    assert json.loads(snippets_path.read_text()) == snippet_json()
    text = snippets_path.read_text()
    # Byte-level form of the class-inherits body, tab escaped as \t.
    assert '"class ${1:Name} inherits ${2:Object}{",' in text
    assert '"\\t${0:body}",' in text
    assert '"description": "COOL: class inherits"' in text
    grammar_text = grammar_path.read_text()
    assert '"scopeName": "source.cool"' in grammar_text
    assert '"comment.line.double-dash.cool"' in grammar_text
