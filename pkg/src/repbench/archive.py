"""Results archives: versioned JSON and the plain dict-literal text format.

The dict-literal format is what ``str()`` of a nested ``{n: {label: counts}}``
dict produces, e.g. ``{3: {'0': {'000 00': 1024}}}``. It is parsed with a
small recursive-descent parser, never evaluated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from repbench import rep_code
from repbench.rep_code import LABELS, Counts, LayoutError

FORMAT_NAME = "repbench.results"
FORMAT_VERSION = 1


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ArchiveError(ValueError):
    """Archive content is well-formed but violates the results layout."""


@dataclass
class ResultsArchive:
    """Raw counts per code size: ``entries[n][label] -> {raw string: count}``."""

    entries: dict[int, dict[str, Counts]] = field(default_factory=dict)
    rounds: dict[int, int] = field(default_factory=dict)
    config: dict | None = None
    timestamp: str | None = None
    version: int = FORMAT_VERSION

    def __len__(self) -> int:
        return len(self.entries)

    def add(self, n: int, T: int, raw: dict[str, Counts]) -> None:
        self.entries[n] = {label: dict(sorted(raw[label].items())) for label in sorted(raw)}
        self.rounds[n] = T
        validate_entry(n, T, self.entries[n])

    def validate(self) -> None:
        for n, raw in self.entries.items():
            validate_entry(n, self.rounds[n], raw)


def validate_entry(n: int, T: int, raw: dict[str, Counts]) -> None:
    if not isinstance(n, int) or n < 2:
        raise ArchiveError(f"invalid code size {n!r}")
    for label, counts in raw.items():
        if label not in LABELS:
            raise ArchiveError(f"n={n}: unknown logical label {label!r}")
        for string, count in counts.items():
            try:
                rep_code.split_raw(string, n, T)
            except LayoutError as exc:
                raise ArchiveError(f"n={n}, label {label!r}: {exc}") from None
            if not isinstance(count, int) or isinstance(count, bool) or count < 0:
                raise ArchiveError(f"n={n}, label {label!r}: bad count {count!r} for {string!r}")


def _infer_rounds(n: int, raw: dict[str, Counts]) -> int:
    for counts in raw.values():
        for string in counts:
            try:
                return rep_code.infer_rounds(string, n)
            except LayoutError as exc:
                raise ArchiveError(f"n={n}: {exc}") from None
    return 1


# -- dict-literal text ------------------------------------------------------


class _Parser:
    """Grammar::

        object := '{' [entry (',' entry)* [',']] '}'
        entry  := key ':' value
        key    := integer | string
        value  := integer | object
        string := "'" chars "'"
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return ParseError(message, line, column)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise self.error(f"expected {char!r}, found {found!r}")
        self.pos += 1

    def parse(self):
        value = self.parse_object()
        if self.peek():
            raise self.error(f"unexpected trailing text {self.peek()!r}")
        return value

    def parse_object(self) -> dict:
        self.expect("{")
        result = {}
        if self.peek() == "}":
            self.pos += 1
            return result
        while True:
            key_pos = self.pos
            key = self.parse_key()
            self.expect(":")
            value = self.parse_value()
            if key in result:
                raise self.error(f"duplicate key {key!r}", key_pos)
            result[key] = value
            c = self.peek()
            if c == ",":
                self.pos += 1
                if self.peek() == "}":
                    self.pos += 1
                    return result
            elif c == "}":
                self.pos += 1
                return result
            else:
                raise self.error(f"expected ',' or '}}', found {c or 'end of input'!r}")

    def parse_key(self):
        c = self.peek()
        if c == "'":
            return self.parse_string()
        if c.isdigit():
            return self.parse_int()
        raise self.error(f"expected integer or quoted key, found {c or 'end of input'!r}")

    def parse_value(self):
        c = self.peek()
        if c == "{":
            return self.parse_object()
        if c.isdigit():
            return self.parse_int()
        raise self.error(f"expected integer or '{{', found {c or 'end of input'!r}")

    def parse_int(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])

    def parse_string(self) -> str:
        start = self.pos
        self.pos += 1
        end = self.text.find("'", self.pos)
        if end < 0:
            raise self.error("unterminated string", start)
        value = self.text[self.pos:end]
        if "\n" in value:
            raise self.error("newline inside string", start)
        self.pos = end + 1
        return value


def parse_dict_literal(text: str) -> dict:
    """Parse dict-literal text into nested dicts (no layout checks)."""
    return _Parser(text).parse()


def ingest_dict_literal(text: str) -> ResultsArchive:
    data = parse_dict_literal(text)
    archive = ResultsArchive()
    for n, raw in data.items():
        if not isinstance(n, int):
            raise ArchiveError(f"top-level keys must be integer code sizes, got {n!r}")
        if not isinstance(raw, dict):
            raise ArchiveError(f"n={n}: expected a dict of labels")
        for label, counts in raw.items():
            if not isinstance(counts, dict):
                raise ArchiveError(f"n={n}, label {label!r}: expected a dict of counts")
            if any(isinstance(v, dict) for v in counts.values()):
                raise ArchiveError(f"n={n}, label {label!r}: counts must be integers")
        archive.add(n, _infer_rounds(n, raw), raw)
    return archive


def to_dict_literal(archive: ResultsArchive) -> str:
    return str({n: archive.entries[n] for n in sorted(archive.entries)})


# -- JSON -------------------------------------------------------------------


def to_json(archive: ResultsArchive) -> str:
    doc = {
        "format": FORMAT_NAME,
        "version": archive.version,
        "timestamp": archive.timestamp,
        "config": archive.config,
        "entries": [
            {"n": n, "T": archive.rounds[n], "results": archive.entries[n]}
            for n in sorted(archive.entries)
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def from_json(text: str) -> ResultsArchive:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ArchiveError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ArchiveError(f"unsupported archive version {doc.get('version')!r}")
    archive = ResultsArchive(config=doc.get("config"), timestamp=doc.get("timestamp"))
    for entry in doc.get("entries", []):
        try:
            n, T, results = entry["n"], entry["T"], entry["results"]
        except (KeyError, TypeError):
            raise ArchiveError(f"malformed entry {entry!r}") from None
        if n in archive.entries:
            raise ArchiveError(f"duplicate entry for n={n}")
        archive.add(n, T, results)
    return archive


def read_archive(path, fmt: str = "auto") -> ResultsArchive:
    text = Path(path).read_text()
    if fmt == "auto":
        # the dict-literal format never contains double quotes
        fmt = "json" if '"' in text else "dict-literal"
    if fmt == "json":
        return from_json(text)
    if fmt == "dict-literal":
        return ingest_dict_literal(text)
    raise ValueError(f"unknown archive format {fmt!r}")


def write_archive(archive: ResultsArchive, path, fmt: str = "json") -> None:
    text = to_json(archive) if fmt == "json" else to_dict_literal(archive) + "\n"
    Path(path).write_text(text)
