"""Reading and writing the annotation table.

The canonical interchange format is an RFC 4180 CSV file, UTF-8, with
one fixed ten-column header (see :data:`CSV_HEADER`). An equivalent
JSON array-of-objects form is supported for programmatic use. Parsing
is tolerant where tolerance is cheap (CRLF, semicolon separators in the
based-on cell, stray whitespace) and strict where ambiguity would be
dangerous (the header must match exactly).
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

from .schema import (
    BaseRef,
    EdgeKind,
    IssueCode,
    MalformedFieldError,
    MethodRecord,
    PartialDate,
    Severity,
    ValidationIssue,
    normalize_acronym,
    validate_record,
)

__all__ = [
    "CSV_HEADER",
    "StrictParseError",
    "TableDocument",
    "TableFormatError",
    "based_on_cell",
    "export_records_json",
    "export_table",
    "parse_based_on",
    "parse_records_json",
    "parse_table",
    "record_from_dict",
    "record_to_dict",
]

# Canonical column names, in order. parse_table rejects any other header.
CSV_HEADER: tuple[str, ...] = (
    "Paper title",
    "Link to paper",
    "Names of authors",
    "Release date",
    "Place of publication",
    "Method name",
    "Subject area (Using For)",
    "Acronym of method name",
    "A brief description of the method",
    "Based on",
)

_JSON_KEYS = (
    "title",
    "url",
    "authors",
    "release_date",
    "venue",
    "method_name",
    "subject_area",
    "acronym",
    "description",
    "based_on",
)


class TableFormatError(ValueError):
    """Structurally unreadable input: wrong header, not a JSON array, etc.

    Always fatal, regardless of lenient mode.
    """


class StrictParseError(ValueError):
    """Raised in strict mode when any error-severity issue was found."""

    def __init__(self, issues: list[ValidationIssue]):
        errors = sum(1 for i in issues if i.severity is Severity.ERROR)
        super().__init__(f"{errors} error(s) found in table")
        self.issues: tuple[ValidationIssue, ...] = tuple(issues)


@dataclass
class TableDocument:
    """Result of parsing one table: records in source order plus issues."""

    records: list[MethodRecord] = field(default_factory=list)
    issues: list[ValidationIssue] = field(default_factory=list)
    source_name: str = ""


def _token_to_ref(index: int, token: str) -> BaseRef:
    kind = EdgeKind.DIRECT
    if token.startswith("~"):
        kind = EdgeKind.CONCEPTUAL
        token = token[1:].strip()
    try:
        target = normalize_acronym(token)
    except MalformedFieldError as exc:
        raise MalformedFieldError(f"based-on token {index}: {exc}") from exc
    return BaseRef(target, kind)


def parse_based_on(cell: str) -> list[BaseRef]:
    """Parse one based-on cell into references.

    Tokens are comma-separated (semicolons tolerated), trimmed, then
    normalized; a leading ``~`` marks the reference as conceptual. Empty
    tokens are dropped, so ``""`` yields ``[]``. Malformed tokens raise
    :class:`MalformedFieldError` naming the token position.
    """
    refs: list[BaseRef] = []
    for index, raw in enumerate(re.split(r"[,;]", cell)):
        token = raw.strip()
        if not token:
            continue
        refs.append(_token_to_ref(index, token))
    return refs


def based_on_cell(refs: tuple[BaseRef, ...] | list[BaseRef]) -> str:
    """Inverse of :func:`parse_based_on`; always emits comma separators."""
    return ", ".join(
        ("~" if ref.kind is EdgeKind.CONCEPTUAL else "") + ref.target for ref in refs
    )


def _record_from_cells(cells: list[str]) -> MethodRecord:
    try:
        release = PartialDate.parse(cells[3])
    except MalformedFieldError as exc:
        raise MalformedFieldError(f"release date: {exc}") from exc
    try:
        acronym = normalize_acronym(cells[7])
    except MalformedFieldError as exc:
        raise MalformedFieldError(f"acronym: {exc}") from exc
    return MethodRecord(
        title=cells[0].strip(),
        url=cells[1].strip(),
        authors=tuple(a.strip() for a in cells[2].split(";") if a.strip()),
        release_date=release,
        venue=cells[4].strip(),
        method_name=cells[5].strip(),
        subject_area=cells[6].strip(),
        acronym=acronym,
        description=cells[8].strip(),
        based_on=tuple(parse_based_on(cells[9])),
    )


def parse_table(content: str, lenient: bool = True, source_name: str = "") -> TableDocument:
    """Parse CSV table text into records plus per-row issues.

    Lenient mode skips rows that cannot be parsed into a record and
    reports them; rows that parse but violate record-local rules are
    kept, with their issues attached, so callers can decide. Strict mode
    (``lenient=False``) parses everything first, then aborts with
    :class:`StrictParseError` if any error-severity issue was found.

    A malformed header is always fatal (:class:`TableFormatError`): with
    the wrong columns nothing downstream can be trusted.
    """
    if content.startswith("﻿"):
        content = content[1:]
    reader = csv.reader(io.StringIO(content))
    try:
        header = next(reader)
    except StopIteration:
        raise TableFormatError("empty input: the header row is missing") from None
    if tuple(header) != CSV_HEADER:
        raise TableFormatError(
            f"unexpected header: expected the {len(CSV_HEADER)} canonical columns, "
            f"got {len(header)}: {header!r}"
        )

    doc = TableDocument(source_name=source_name)
    row_index = -1
    for cells in reader:
        # csv yields [] for blank lines; a lone whitespace cell is noise too.
        if not cells or (len(cells) == 1 and not cells[0].strip()):
            continue
        row_index += 1
        if len(cells) != len(CSV_HEADER):
            doc.issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.MALFORMED_FIELD,
                    row_index,
                    f"expected {len(CSV_HEADER)} columns, got {len(cells)}; row skipped",
                )
            )
            continue
        try:
            record = _record_from_cells(cells)
        except MalformedFieldError as exc:
            doc.issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.MALFORMED_FIELD,
                    row_index,
                    f"{exc}; row skipped",
                )
            )
            continue
        doc.issues.extend(validate_record(record))
        doc.records.append(record)

    if not lenient and any(i.severity is Severity.ERROR for i in doc.issues):
        raise StrictParseError(doc.issues)
    return doc


def _records_of(doc_or_records) -> list[MethodRecord]:
    if isinstance(doc_or_records, TableDocument):
        return doc_or_records.records
    return list(doc_or_records)


def export_table(doc_or_records: TableDocument | list[MethodRecord]) -> str:
    """Serialize records to canonical CSV (LF line endings, minimal quoting).

    Round-trip stable: ``parse_table(export_table(doc))`` reproduces the
    records field for field.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    # With an LF terminator, minimal quoting does not consider a bare CR
    # quote-worthy, which would make the row unreadable; such rows are
    # written fully quoted instead.
    quoting_writer = csv.writer(out, lineterminator="\n", quoting=csv.QUOTE_ALL)
    writer.writerow(CSV_HEADER)
    for record in _records_of(doc_or_records):
        row = (
            record.title,
            record.url,
            "; ".join(record.authors),
            str(record.release_date),
            record.venue,
            record.method_name,
            record.subject_area,
            record.acronym,
            record.description,
            based_on_cell(record.based_on),
        )
        (quoting_writer if any("\r" in cell for cell in row) else writer).writerow(row)
    return out.getvalue()


def record_to_dict(record: MethodRecord) -> dict:
    """Wire form of one record, shared by the JSON table format and the API."""
    return {
        "title": record.title,
        "url": record.url,
        "authors": list(record.authors),
        "release_date": str(record.release_date),
        "venue": record.venue,
        "method_name": record.method_name,
        "subject_area": record.subject_area,
        "acronym": record.acronym,
        "description": record.description,
        "based_on": [
            ("~" if ref.kind is EdgeKind.CONCEPTUAL else "") + ref.target
            for ref in record.based_on
        ],
    }


def record_from_dict(obj: dict) -> MethodRecord:
    """Parse the JSON object form of a record. Raises MalformedFieldError."""
    if not isinstance(obj, dict):
        raise MalformedFieldError("record must be a JSON object")

    def text(key: str) -> str:
        value = obj.get(key, "")
        if not isinstance(value, str):
            raise MalformedFieldError(f"{key} must be a string")
        return value.strip()

    authors = obj.get("authors", [])
    if not isinstance(authors, list) or any(not isinstance(a, str) for a in authors):
        raise MalformedFieldError("authors must be a list of strings")
    based = obj.get("based_on", [])
    if not isinstance(based, list) or any(not isinstance(t, str) for t in based):
        raise MalformedFieldError("based_on must be a list of strings")

    refs: list[BaseRef] = []
    for index, token in enumerate(based):
        token = token.strip()
        if not token:
            continue
        refs.append(_token_to_ref(index, token))
    try:
        release = PartialDate.parse(text("release_date"))
    except MalformedFieldError as exc:
        raise MalformedFieldError(f"release date: {exc}") from exc
    try:
        acronym = normalize_acronym(text("acronym"))
    except MalformedFieldError as exc:
        raise MalformedFieldError(f"acronym: {exc}") from exc
    return MethodRecord(
        title=text("title"),
        url=text("url"),
        authors=tuple(a.strip() for a in authors if a.strip()),
        release_date=release,
        venue=text("venue"),
        method_name=text("method_name"),
        subject_area=text("subject_area"),
        acronym=acronym,
        description=text("description"),
        based_on=tuple(refs),
    )


def parse_records_json(content: str, lenient: bool = True, source_name: str = "") -> TableDocument:
    """JSON counterpart of :func:`parse_table` with the same issue semantics."""
    try:
        data = json.loads(content)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise TableFormatError("JSON table must be an array of record objects")

    doc = TableDocument(source_name=source_name)
    for row_index, obj in enumerate(data):
        try:
            record = record_from_dict(obj)
        except MalformedFieldError as exc:
            doc.issues.append(
                ValidationIssue(
                    Severity.ERROR,
                    IssueCode.MALFORMED_FIELD,
                    row_index,
                    f"{exc}; entry skipped",
                )
            )
            continue
        doc.issues.extend(validate_record(record))
        doc.records.append(record)

    if not lenient and any(i.severity is Severity.ERROR for i in doc.issues):
        raise StrictParseError(doc.issues)
    return doc


def export_records_json(doc_or_records: TableDocument | list[MethodRecord]) -> str:
    """Serialize records to the JSON array-of-objects form."""
    payload = [record_to_dict(r) for r in _records_of(doc_or_records)]
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
