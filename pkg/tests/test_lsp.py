"""Scripted JSON-RPC sessions against the language server.

Every test drives serve() over in-memory binary streams and re-parses the
output with a strict frame reader, so any stray or misframed bytes fail the
session (the frame audit).
"""

import io
import json

from coolio.lsp import serve

URI = "file:///tmp/example.cl"

HELLO = (
    "class Main inherits IO {\n"
    "  main() : Object {\n"
    '    out_string("HelloWorld")\n'
    "  };\n"
    "};\n"
)

# A conformance error on line 2 (0-based line 1 on the wire).
BAD_ATTR = (
    "class Main {\n"
    '  num : Int <- "hello";\n'
    "  main() : Object { num };\n"
    "};\n"
)

FIXED_ATTR = BAD_ATTR.replace('"hello"', "42")


def frame(message) -> bytes:
    body = json.dumps(message).encode("utf-8")
    return f"Content-Length: {len(body)}\r\n\r\n".encode("ascii") + body


def parse_frames(data: bytes):
    """Strict reader: raises if the stream is not exactly a frame sequence."""
    messages = []
    pos = 0
    while pos < len(data):
        header_end = data.index(b"\r\n\r\n", pos)
        header = data[pos:header_end].decode("ascii")
        assert header.startswith("Content-Length: "), header
        assert "\r\n" not in header, "unexpected extra header line"
        length = int(header[len("Content-Length: "):])
        body = data[header_end + 4 : header_end + 4 + length]
        assert len(body) == length, "truncated frame body"
        messages.append(json.loads(body.decode("utf-8")))
        pos = header_end + 4 + length
    return messages


def run_session(messages, raw: bytes = b""):
    stream = b"".join(frame(m) for m in messages) + raw
    out = io.BytesIO()
    code = serve(io.BytesIO(stream), out)
    replies = parse_frames(out.getvalue())
    for reply in replies:
        assert reply.get("jsonrpc") == "2.0"
    return code, replies


def init(msg_id=1, capabilities=None):
    return {
        "jsonrpc": "2.0",
        "id": msg_id,
        "method": "initialize",
        "params": {"capabilities": capabilities or {}},
    }


INITIALIZED = {"jsonrpc": "2.0", "method": "initialized", "params": {}}
SHUTDOWN = {"jsonrpc": "2.0", "id": 99, "method": "shutdown", "params": None}
EXIT = {"jsonrpc": "2.0", "method": "exit", "params": None}


def did_open(text, uri=URI, version=1):
    return {
        "jsonrpc": "2.0",
        "method": "textDocument/didOpen",
        "params": {
            "textDocument": {
                "uri": uri,
                "languageId": "cool",
                "version": version,
                "text": text,
            }
        },
    }


def did_change(text, uri=URI, version=2):
    return {
        "jsonrpc": "2.0",
        "method": "textDocument/didChange",
        "params": {
            "textDocument": {"uri": uri, "version": version},
            "contentChanges": [{"text": text}],
        },
    }


def did_save(uri=URI, text=None):
    params = {"textDocument": {"uri": uri}}
    if text is not None:
        params["text"] = text
    return {"jsonrpc": "2.0", "method": "textDocument/didSave", "params": params}


def completion(msg_id, line, character, uri=URI):
    return {
        "jsonrpc": "2.0",
        "id": msg_id,
        "method": "textDocument/completion",
        "params": {
            "textDocument": {"uri": uri},
            "position": {"line": line, "character": character},
        },
    }


def response_to(replies, msg_id):
    found = [r for r in replies if r.get("id") == msg_id and "method" not in r]
    assert len(found) == 1, (msg_id, replies)
    return found[0]


def published(replies):
    return [
        r["params"]
        for r in replies
        if r.get("method") == "textDocument/publishDiagnostics"
    ]


# -- lifecycle -------------------------------------------------------------------


def test_initialize_capabilities():
    code, replies = run_session([init(), INITIALIZED, SHUTDOWN, EXIT])
    assert code == 0
    result = response_to(replies, 1)["result"]
    caps = result["capabilities"]
    assert caps["positionEncoding"] == "utf-16"
    assert caps["textDocumentSync"] == {"openClose": True, "change": 1, "save": True}
    triggers = caps["completionProvider"]["triggerCharacters"]
    assert triggers == [*"abcdefghijklmnopqrstuvwxyz", "_"]
    assert result["serverInfo"]["name"] == "coolio"
    # shutdown responds with a null result
    assert response_to(replies, 99)["result"] is None


def test_exit_after_shutdown_is_zero():
    code, _ = run_session([init(), SHUTDOWN, EXIT])
    assert code == 0


def test_exit_without_shutdown_is_one():
    code, _ = run_session([init(), EXIT])
    assert code == 1


def test_eof_without_exit_is_one():
    code, replies = run_session([init(), SHUTDOWN])
    assert code == 1
    assert response_to(replies, 99)["result"] is None


def test_requests_before_initialize_are_rejected():
    code, replies = run_session([completion(5, 0, 0), init(1), SHUTDOWN, EXIT])
    assert code == 0
    error = response_to(replies, 5)["error"]
    assert error["code"] == -32002


def test_notifications_before_initialize_are_dropped():
    code, replies = run_session([did_open(HELLO), init(), SHUTDOWN, EXIT])
    assert code == 0
    assert published(replies) == []


def test_unknown_request_is_method_not_found():
    unknown = {"jsonrpc": "2.0", "id": 7, "method": "textDocument/hover", "params": {}}
    code, replies = run_session([init(), unknown, SHUTDOWN, EXIT])
    assert code == 0
    assert response_to(replies, 7)["error"]["code"] == -32601


def test_unknown_notification_is_ignored():
    unknown = {"jsonrpc": "2.0", "method": "workspace/nonsense", "params": {}}
    code, replies = run_session([init(), unknown, SHUTDOWN, EXIT])
    assert code == 0
    assert len(replies) == 2  # initialize + shutdown responses only


def test_malformed_json_body():
    bad = b"Content-Length: 9\r\n\r\nnot json!"
    code, replies = run_session([init()], raw=bad)
    assert code == 1  # stream then ends without exit
    errors = [r for r in replies if "error" in r]
    assert len(errors) == 1
    assert errors[0]["error"]["code"] == -32700
    assert errors[0]["id"] is None


def test_non_object_body_is_invalid_request():
    body = json.dumps([1, 2, 3]).encode()
    bad = f"Content-Length: {len(body)}\r\n\r\n".encode() + body
    _, replies = run_session([init()], raw=bad)
    errors = [r for r in replies if "error" in r]
    assert len(errors) == 1
    assert errors[0]["error"]["code"] == -32600


# -- diagnostics -----------------------------------------------------------------


def test_clean_document_publishes_empty_list():
    code, replies = run_session([init(), did_open(HELLO), SHUTDOWN, EXIT])
    assert code == 0
    reports = published(replies)
    assert len(reports) == 1
    assert reports[0]["uri"] == URI
    assert reports[0]["version"] == 1
    assert reports[0]["diagnostics"] == []


def test_error_document_publishes_one_diagnostic():
    _, replies = run_session([init(), did_open(BAD_ATTR), SHUTDOWN, EXIT])
    reports = published(replies)
    assert len(reports) == 1
    diags = reports[0]["diagnostics"]
    assert len(diags) == 1
    diag = diags[0]
    assert diag["message"] == "String does not conform to Int"
    assert diag["severity"] == 1
    assert diag["code"] == "typechecking"
    assert diag["source"] == "cool"
    line_text = BAD_ATTR.splitlines()[1]
    assert diag["range"] == {
        "start": {"line": 1, "character": 0},
        "end": {"line": 1, "character": len(line_text)},
    }


def test_empty_document_publishes_one_parse_diagnostic():
    _, replies = run_session([init(), did_open(""), SHUTDOWN, EXIT])
    reports = published(replies)
    assert len(reports) == 1
    diags = reports[0]["diagnostics"]
    assert len(diags) == 1
    assert diags[0]["code"] == "parsing"
    assert diags[0]["message"] == "program requires at least one class"
    assert diags[0]["range"] == {
        "start": {"line": 0, "character": 0},
        "end": {"line": 0, "character": 0},
    }


def test_did_change_syncs_but_does_not_publish():
    session = [
        init(),
        did_open(BAD_ATTR, version=1),
        did_change(FIXED_ATTR, version=2),
        SHUTDOWN,
        EXIT,
    ]
    _, replies = run_session(session)
    reports = published(replies)
    assert len(reports) == 1  # only the didOpen publish
    assert len(reports[0]["diagnostics"]) == 1


def test_save_after_fix_clears_diagnostics():
    session = [
        init(),
        did_open(BAD_ATTR, version=1),
        did_change(FIXED_ATTR, version=2),
        did_save(),
        SHUTDOWN,
        EXIT,
    ]
    _, replies = run_session(session)
    reports = published(replies)
    assert len(reports) == 2
    assert len(reports[0]["diagnostics"]) == 1
    assert reports[1]["diagnostics"] == []
    assert reports[1]["version"] == 2


def test_save_with_included_text_reanalyzes():
    session = [
        init(),
        did_open(HELLO, version=1),
        did_save(text=BAD_ATTR),
        SHUTDOWN,
        EXIT,
    ]
    _, replies = run_session(session)
    reports = published(replies)
    assert len(reports) == 2
    assert reports[0]["diagnostics"] == []
    assert len(reports[1]["diagnostics"]) == 1


def test_save_of_unopened_document_is_ignored():
    _, replies = run_session([init(), did_save(uri="file:///nowhere.cl"), SHUTDOWN, EXIT])
    assert published(replies) == []


def test_published_versions_never_decrease():
    session = [
        init(),
        did_open(BAD_ATTR, version=1),
        did_change(FIXED_ATTR, version=5),
        did_save(),
        did_change(BAD_ATTR, version=3),  # stale version must not regress
        did_save(),
        SHUTDOWN,
        EXIT,
    ]
    _, replies = run_session(session)
    versions = [r["version"] for r in published(replies)]
    assert versions == [1, 5, 5]
    assert all(a <= b for a, b in zip(versions, versions[1:]))


def test_documents_are_independent():
    other = "file:///tmp/other.cl"
    session = [
        init(),
        did_open(BAD_ATTR, uri=URI),
        did_open(HELLO, uri=other),
        SHUTDOWN,
        EXIT,
    ]
    _, replies = run_session(session)
    reports = {r["uri"]: r["diagnostics"] for r in published(replies)}
    assert len(reports[URI]) == 1
    assert reports[other] == []


def test_ranges_lie_within_the_document():
    source = 'class Main { s : Int <- "héllo\U0001d11e"; main() : Object { 0 }; };\n'
    _, replies = run_session([init(), did_open(source), SHUTDOWN, EXIT])
    lines = source.split("\n")
    for report in published(replies):
        for diag in report["diagnostics"]:
            rng = diag["range"]
            assert rng["start"]["line"] == rng["end"]["line"]
            assert 0 <= rng["start"]["line"] < len(lines)
            line_text = lines[rng["start"]["line"]]
            utf16_width = sum(2 if ord(c) > 0xFFFF else 1 for c in line_text)
            assert rng["start"]["character"] == 0
            assert rng["end"]["character"] <= utf16_width


# -- completion ------------------------------------------------------------------


def test_completion_for_cla_prefix():
    doc = "cla"
    session = [init(), did_open(doc), completion(4, 0, 3), SHUTDOWN, EXIT]
    _, replies = run_session(session)
    items = response_to(replies, 4)["result"]
    assert [item["label"] for item in items] == ["COOL_class", "COOL_class_inherits"]
    inherits = items[1]
    assert inherits["detail"] == "COOL: class inherits"
    assert inherits["insertText"] == (
        "class ${1:Name} inherits ${2:Object}{\n\t${0:body}\n};"
    )
    assert inherits["insertTextFormat"] == 2
    assert inherits["kind"] == 15
    assert inherits["filterText"] == "class"


def test_completion_le_includes_let_snippet():
    session = [init(), did_open("le"), completion(4, 0, 2), SHUTDOWN, EXIT]
    _, replies = run_session(session)
    items = response_to(replies, 4)["result"]
    assert [item["label"] for item in items] == ["COOL_let"]


def test_completion_empty_word_returns_full_table():
    session = [init(), did_open("x "), completion(4, 0, 2), SHUTDOWN, EXIT]
    _, replies = run_session(session)
    items = response_to(replies, 4)["result"]
    assert len(items) == 6


def test_completion_no_match():
    session = [init(), did_open("zz"), completion(4, 0, 2), SHUTDOWN, EXIT]
    _, replies = run_session(session)
    assert response_to(replies, 4)["result"] == []


def test_completion_out_of_range_or_unknown_doc():
    session = [
        init(),
        did_open("cla"),
        completion(4, 9, 0),    # line beyond document
        completion(5, 0, 99),   # character beyond line
        completion(6, 0, 1, uri="file:///absent.cl"),
        SHUTDOWN,
        EXIT,
    ]
    _, replies = run_session(session)
    assert response_to(replies, 4)["result"] == []
    assert response_to(replies, 5)["result"] == []
    assert response_to(replies, 6)["result"] == []


def test_completion_word_extraction_mid_line():
    doc = "class Main { le"
    session = [init(), did_open(doc), completion(4, 0, len(doc)), SHUTDOWN, EXIT]
    _, replies = run_session(session)
    assert [i["label"] for i in response_to(replies, 4)["result"]] == ["COOL_let"]


def test_utf8_position_encoding_negotiation():
    caps = {"general": {"positionEncodings": ["utf-8", "utf-16"]}}
    doc = "\U0001d11ecla"  # astral char is 4 UTF-8 bytes, 2 UTF-16 units
    session = [init(capabilities=caps), did_open(doc), completion(4, 0, 7), SHUTDOWN, EXIT]
    code, replies = run_session(session)
    assert code == 0
    result = response_to(replies, 1)["result"]
    assert result["capabilities"]["positionEncoding"] == "utf-8"
    labels = [i["label"] for i in response_to(replies, 4)["result"]]
    assert labels == ["COOL_class", "COOL_class_inherits"]


def test_utf16_is_the_default_encoding():
    doc = "\U0001d11ecla"
    session = [init(), did_open(doc), completion(4, 0, 5), SHUTDOWN, EXIT]
    _, replies = run_session(session)
    labels = [i["label"] for i in response_to(replies, 4)["result"]]
    assert labels == ["COOL_class", "COOL_class_inherits"]
    # The UTF-8 column for the same cursor lands beyond the UTF-16 line width.
    session = [init(), did_open(doc), completion(4, 0, 7), SHUTDOWN, EXIT]
    _, replies = run_session(session)
    assert response_to(replies, 4)["result"] == []
