"""Language server speaking JSON-RPC 2.0 over Content-Length framed streams.

Analysis (lex through typecheck; never evaluation) runs on didOpen and
didSave and is published as textDocument/publishDiagnostics. didChange only
syncs text. Completion serves the snippet table filtered by the identifier
prefix under the cursor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .assets import SnippetEntry, matching_snippets
from .diagnostics import Diagnostic, LineIndex
from .pipeline import analyze

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
SERVER_NOT_INITIALIZED = -32002

_WORD_CHARS = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")

_TRIGGER_CHARACTERS = [*"abcdefghijklmnopqrstuvwxyz", "_"]


@dataclass
class _Document:
    text: str
    version: int
    index: LineIndex


class LspServer:
    def __init__(self, instream, outstream) -> None:
        self.inp = instream
        self.out = outstream
        self.docs: dict[str, _Document] = {}
        self.initialized = False
        self.shutdown_requested = False
        self.exit_code: int | None = None
        self.encoding = "utf-16"

    # -- wire ------------------------------------------------------------

    def _read_frame(self) -> bytes | None:
        content_length: int | None = None
        while True:
            line = self.inp.readline()
            if not line:
                return None  # input closed
            line = line.rstrip(b"\r\n")
            if not line:
                break  # end of headers
            name, _, value = line.partition(b":")
            if name.strip().lower() == b"content-length":
                try:
                    content_length = int(value.strip())
                except ValueError:
                    return None
        if content_length is None:
            return None
        body = b""
        while len(body) < content_length:
            chunk = self.inp.read(content_length - len(body))
            if not chunk:
                return None
            body += chunk
        return body

    def _send(self, message: dict) -> None:
        body = json.dumps(message, ensure_ascii=False).encode("utf-8")
        self.out.write(f"Content-Length: {len(body)}\r\n\r\n".encode("ascii"))
        self.out.write(body)
        self.out.flush()

    def _respond(self, msg_id, result) -> None:
        self._send({"jsonrpc": "2.0", "id": msg_id, "result": result})

    def _respond_error(self, msg_id, code: int, message: str) -> None:
        self._send({"jsonrpc": "2.0", "id": msg_id, "error": {"code": code, "message": message}})

    def _notify(self, method: str, params: dict) -> None:
        self._send({"jsonrpc": "2.0", "method": method, "params": params})

    # -- main loop ------------------------------------------------------------

    def serve(self) -> int:
        while self.exit_code is None:
            body = self._read_frame()
            if body is None:
                return 1  # stream ended without an exit notification
            try:
                msg = json.loads(body.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError):
                self._respond_error(None, PARSE_ERROR, "malformed JSON body")
                continue
            if not isinstance(msg, dict):
                self._respond_error(None, INVALID_REQUEST, "message must be an object")
                continue
            self._handle(msg)
        return self.exit_code

    def _handle(self, msg: dict) -> None:
        method = msg.get("method")
        msg_id = msg.get("id")
        if method is None:
            return  # a response; this server sends no requests
        params = msg.get("params") or {}

        if method == "exit":
            self.exit_code = 0 if self.shutdown_requested else 1
            return
        if method == "initialize":
            self._on_initialize(msg_id, params)
            return
        if not self.initialized:
            if msg_id is not None:
                self._respond_error(msg_id, SERVER_NOT_INITIALIZED, "server not initialized")
            return

        if method == "initialized":
            return
        if method == "shutdown":
            self.shutdown_requested = True
            self._respond(msg_id, None)
            return
        if method == "textDocument/didOpen":
            doc = params["textDocument"]
            self._store(doc["uri"], doc.get("text", ""), doc.get("version", 0))
            self._publish(doc["uri"])
            return
        if method == "textDocument/didChange":
            uri = params["textDocument"]["uri"]
            version = params["textDocument"].get("version", 0)
            changes = params.get("contentChanges") or []
            if changes:
                # Full-document sync: the last change carries the whole text.
                self._store(uri, changes[-1].get("text", ""), version)
            return
        if method == "textDocument/didSave":
            uri = params["textDocument"]["uri"]
            if "text" in params and params["text"] is not None:
                existing = self.docs.get(uri)
                version = existing.version if existing is not None else 0
                self._store(uri, params["text"], version)
            if uri in self.docs:
                self._publish(uri)
            return
        if method == "textDocument/completion":
            self._on_completion(msg_id, params)
            return
        if msg_id is not None:
            self._respond_error(msg_id, METHOD_NOT_FOUND, f"method not found: {method}")

    # -- handlers ----------------------------------------------------------

    def _on_initialize(self, msg_id, params: dict) -> None:
        offered = (params.get("capabilities") or {}).get("general") or {}
        encodings = offered.get("positionEncodings") or []
        if "utf-8" in encodings:
            self.encoding = "utf-8"
        self.initialized = True
        self._respond(
            msg_id,
            {
                "capabilities": {
                    "positionEncoding": self.encoding,
                    "textDocumentSync": {"openClose": True, "change": 1, "save": True},
                    "completionProvider": {"triggerCharacters": _TRIGGER_CHARACTERS},
                },
                "serverInfo": {"name": "coolio"},
            },
        )

    def _store(self, uri: str, text: str, version: int) -> None:
        existing = self.docs.get(uri)
        if existing is not None and version < existing.version:
            version = existing.version  # versions never move backwards
        self.docs[uri] = _Document(text, version, LineIndex(text))

    def _publish(self, uri: str) -> None:
        doc = self.docs[uri]
        analysis = analyze(doc.text)
        wire = [self._wire_diagnostic(d, doc.index) for d in analysis.all_diagnostics]
        self._notify(
            "textDocument/publishDiagnostics",
            {"uri": uri, "version": doc.version, "diagnostics": wire},
        )

    def _wire_diagnostic(self, diag: Diagnostic, index: LineIndex) -> dict:
        rng = diag.range if diag.range is not None else index.line_to_range(diag.line, self.encoding)
        return {
            "range": {
                "start": {"line": rng.start.line - 1, "character": rng.start.character},
                "end": {"line": rng.end.line - 1, "character": rng.end.character},
            },
            "severity": 1,
            "code": diag.phase.value,
            "source": "cool",
            "message": diag.message,
        }

    def _on_completion(self, msg_id, params: dict) -> None:
        uri = params.get("textDocument", {}).get("uri")
        position = params.get("position") or {}
        doc = self.docs.get(uri)
        if doc is None:
            self._respond(msg_id, [])
            return
        word = _word_before(doc, position, self.encoding)
        if word is None:
            self._respond(msg_id, [])
            return
        items = [self._completion_item(entry) for entry in matching_snippets(word)]
        self._respond(msg_id, items)

    @staticmethod
    def _completion_item(entry: SnippetEntry) -> dict:
        return {
            "label": entry.label,
            "kind": 15,  # snippet
            "detail": entry.description,
            "filterText": entry.prefix,
            "insertText": "\n".join(entry.body),
            "insertTextFormat": 2,  # snippet syntax with ${n:placeholder}
            "documentation": "\n".join(entry.body),
        }


def _codepoint_column(text: str, character: int, encoding: str) -> int | None:
    """Map a wire column (UTF-16 units or UTF-8 bytes) to a code-point index;
    None when it lies beyond the line."""
    if character < 0:
        return None
    units = 0
    for i, ch in enumerate(text):
        if units >= character:
            return i
        units += len(ch.encode("utf-8")) if encoding == "utf-8" else (2 if ord(ch) > 0xFFFF else 1)
    return len(text) if units >= character else None


def _word_before(doc: _Document, position: dict, encoding: str) -> str | None:
    """Identifier run ending at the cursor; None when the position is
    outside the document."""
    line = position.get("line")
    character = position.get("character")
    if not isinstance(line, int) or not isinstance(character, int):
        return None
    if line < 0 or line >= doc.index.line_count:
        return None
    text = doc.index.line_text(line + 1)
    column = _codepoint_column(text, character, encoding)
    if column is None:
        return None
    start = column
    while start > 0 and text[start - 1] in _WORD_CHARS:
        start -= 1
    return text[start:column]


def serve(instream, outstream) -> int:
    """Run the server loop over binary streams; returns the exit status."""
    return LspServer(instream, outstream).serve()
