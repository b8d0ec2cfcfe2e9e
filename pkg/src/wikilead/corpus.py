"""Line-delimited JSON readers and writers for corpus, wiki and dataset files.

Corpus lines:  {"docid": str, "url": str, "title": str, "text": str}
Wiki lines:    {"title": str, "summary": str}
Dataset lines: {"title": str, "summary": str, "docs": [str, ...]}
"""

from __future__ import annotations

import io
import json
import logging
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, List, Tuple, Union

logger = logging.getLogger(__name__)

Stream = Union[IO[str], IO[bytes], Iterable[str], Iterable[bytes]]


class DataError(Exception):
    """Malformed or inconsistent input data."""


class MalformedLineError(DataError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class MissingKeyError(MalformedLineError):
    def __init__(self, line_no: int, key: str):
        super().__init__(line_no, f"missing key {key}")
        self.key = key


class DuplicateDocIdError(DataError):
    def __init__(self, docid: str, line_no: int):
        super().__init__(f"line {line_no}: duplicate docid {docid!r}")
        self.docid = docid
        self.line_no = line_no


@dataclass(frozen=True)
class CorpusRecord:
    docid: str
    url: str
    title: str
    text: str


@dataclass
class DatasetExample:
    title: str
    summary: str
    docs: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"title": self.title, "summary": self.summary, "docs": list(self.docs)}


def _lines(stream: Stream) -> Iterator[Tuple[int, str]]:
    for line_no, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if line:
            yield line_no, line


def _parse(line_no: int, line: str, keys: Tuple[str, ...]) -> dict:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLineError(line_no, f"invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise MalformedLineError(line_no, "expected a JSON object")
    for key in keys:
        if key not in obj:
            raise MissingKeyError(line_no, key)
    return obj


def _string(obj: dict, key: str, line_no: int) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise MalformedLineError(line_no, f"key {key} must be a string")
    return value


def read_corpus(stream: Stream, on_error: str = "abort") -> Iterator[CorpusRecord]:
    """Yield corpus records lazily in file order.

    ``on_error`` is ``"abort"`` (raise) or ``"skip"`` (log a warning with the
    line number and continue).  Duplicate docids always raise.
    """
    if on_error not in ("abort", "skip"):
        raise ValueError(f"unknown on_error policy {on_error!r}")
    seen = set()
    for line_no, line in _lines(stream):
        try:
            obj = _parse(line_no, line, ("docid", "url", "title", "text"))
            record = CorpusRecord(
                docid=_string(obj, "docid", line_no),
                url=_string(obj, "url", line_no),
                title=_string(obj, "title", line_no),
                text=_string(obj, "text", line_no),
            )
            if not record.docid:
                raise MalformedLineError(line_no, "empty docid")
        except MalformedLineError as exc:
            if on_error == "abort":
                raise
            logger.warning("skipping corpus %s", exc)
            continue
        if record.docid in seen:
            raise DuplicateDocIdError(record.docid, line_no)
        seen.add(record.docid)
        yield record


def read_wiki(stream: Stream) -> Iterator[Tuple[str, str]]:
    """Yield ``(title, summary)`` pairs."""
    for line_no, line in _lines(stream):
        obj = _parse(line_no, line, ("title", "summary"))
        yield _string(obj, "title", line_no), _string(obj, "summary", line_no)


def read_examples(stream: Stream) -> Iterator[DatasetExample]:
    for line_no, line in _lines(stream):
        obj = _parse(line_no, line, ("title", "summary", "docs"))
        docs = obj["docs"]
        if not isinstance(docs, list) or not all(isinstance(d, str) for d in docs):
            raise MalformedLineError(line_no, "docs must be a list of strings")
        yield DatasetExample(
            _string(obj, "title", line_no), _string(obj, "summary", line_no), docs
        )


def dump_line(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False) + "\n"


def write_examples(sink: IO[str], examples: Iterable[DatasetExample]) -> int:
    n = 0
    for ex in examples:
        sink.write(dump_line(ex.to_json()))
        n += 1
    return n


def load_examples(path) -> List[DatasetExample]:
    with open(path, encoding="utf-8") as fh:
        return list(read_examples(fh))


def examples_to_string(examples: Iterable[DatasetExample]) -> str:
    buf = io.StringIO()
    write_examples(buf, examples)
    return buf.getvalue()
