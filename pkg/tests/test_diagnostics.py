"""Diagnostic formatting/ordering and the line-to-character-range index."""

from hypothesis import given, settings
from hypothesis import strategies as st

from coolio.diagnostics import (
    Diagnostic,
    LineIndex,
    Phase,
    Position,
    Range,
    build_line_index,
    format_diagnostic,
    sort_diagnostics,
)


def test_line_starts_examples():
    assert build_line_index("a\nbb\n").starts == [0, 2, 5]
    assert build_line_index("").starts == [0]
    assert build_line_index("abc").starts == [0]


def test_line_to_range_examples():
    index = build_line_index("a\nbb\n")
    assert index.line_to_range(2) == Range(Position(2, 0), Position(2, 2))

    single = build_line_index("a")
    assert single.line_to_range(1) == Range(Position(1, 0), Position(1, 1))
    # Out-of-range lines clamp to the last line.
    assert single.line_to_range(99) == Range(Position(1, 0), Position(1, 1))
    assert single.line_to_range(0) == Range(Position(1, 0), Position(1, 1))


def test_trailing_newline_implies_final_empty_line():
    index = build_line_index("a\nbb\n")
    assert index.line_count == 3
    assert index.line_text(3) == ""
    assert index.line_to_range(3) == Range(Position(3, 0), Position(3, 0))


def test_format_examples():
    assert (
        format_diagnostic(
            Diagnostic(Phase.TYPECHECKING, 2, "String does not conform to Int")
        )
        == "ERROR: 2: typechecking: String does not conform to Int"
    )
    assert (
        format_diagnostic(Diagnostic(Phase.LEXING, 1, "unterminated string"))
        == "ERROR: 1: lexing: unterminated string"
    )
    assert (
        format_diagnostic(Diagnostic(Phase.EVALUATION, 7, "division by zero"))
        == "ERROR: 7: evaluation: division by zero"
    )


def test_sort_orders_by_line_then_phase_then_message():
    diags = [
        Diagnostic(Phase.EVALUATION, 2, "z"),
        Diagnostic(Phase.LEXING, 2, "a"),
        Diagnostic(Phase.TYPECHECKING, 1, "m"),
        Diagnostic(Phase.PARSING, 2, "b"),
        Diagnostic(Phase.LEXING, 2, "b"),
    ]
    ordered = sort_diagnostics(diags)
    assert [(d.line, d.phase, d.message) for d in ordered] == [
        (1, Phase.TYPECHECKING, "m"),
        (2, Phase.LEXING, "a"),
        (2, Phase.LEXING, "b"),
        (2, Phase.PARSING, "b"),
        (2, Phase.EVALUATION, "z"),
    ]


def test_utf16_widths_count_code_units():
    # U+1D11E is outside the BMP: two UTF-16 units, four UTF-8 bytes.
    index = build_line_index("a\U0001d11eb")
    assert index.line_width(1, "utf-16") == 4
    assert index.line_width(1, "utf-8") == 6
    assert index.line_to_range(1) == Range(Position(1, 0), Position(1, 4))
    assert index.line_to_range(1, "utf-8") == Range(Position(1, 0), Position(1, 6))


def test_ascii_widths_agree_across_encodings():
    index = build_line_index("hello\nworld")
    assert index.line_width(1, "utf-16") == index.line_width(1, "utf-8") == 5


# -- properties -----------------------------------------------------------------

_documents = st.one_of(
    st.text(),
    st.lists(st.text(st.characters(blacklist_characters="\n"))).map("\n".join),
)


@given(_documents)
@settings(max_examples=300)
def test_index_matches_split_oracle(text):
    index = build_line_index(text)
    lines = text.split("\n")
    assert index.line_count == len(lines)
    assert index.line_count == text.count("\n") + 1
    assert index.starts[0] == 0
    assert all(a < b for a, b in zip(index.starts, index.starts[1:]))
    for i, expected in enumerate(lines, start=1):
        assert index.line_text(i) == expected


@given(_documents, st.integers(min_value=-5, max_value=500))
@settings(max_examples=300)
def test_line_to_range_is_total_and_in_bounds(text, line):
    index = build_line_index(text)
    for encoding in ("utf-16", "utf-8"):
        rng = index.line_to_range(line, encoding)
        assert 1 <= rng.start.line <= index.line_count
        assert rng.end.line == rng.start.line
        assert rng.start.character == 0
        assert rng.end.character == index.line_width(rng.start.line, encoding)
        # The clamped line is real: its text is part of the document.
        assert index.line_text(rng.start.line) in text or text == ""


_triples = st.tuples(
    st.sampled_from(list(Phase)),
    st.integers(min_value=1, max_value=9999),
    st.text(min_size=0, max_size=40),
)


@given(_triples, _triples)
@settings(max_examples=300)
def test_format_is_injective_on_triples(a, b):
    da = Diagnostic(a[0], a[1], a[2])
    db = Diagnostic(b[0], b[1], b[2])
    if (a[1], a[0], a[2]) != (b[1], b[0], b[2]):
        assert format_diagnostic(da) != format_diagnostic(db)
    else:
        assert format_diagnostic(da) == format_diagnostic(db)


@given(
    st.lists(
        st.builds(
            Diagnostic,
            st.sampled_from(list(Phase)),
            st.integers(min_value=1, max_value=50),
            st.text(max_size=10),
        )
    )
)
@settings(max_examples=200)
def test_sort_is_deterministic_and_permutes(diags):
    once = sort_diagnostics(diags)
    twice = sort_diagnostics(list(reversed(diags)))
    assert once == twice
    assert sorted(format_diagnostic(d) for d in once) == sorted(
        format_diagnostic(d) for d in diags
    )
