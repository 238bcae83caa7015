"""Domain types for annotated machine-learning method records.

A record captures one method as annotated by hand from a paper: the
identifying metadata, the subject area it is used for, and the acronyms
of the methods it builds on. Acronyms are the primary key everywhere.
All types in this module are immutable values and safe to share between
threads without copying.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from enum import Enum

__all__ = [
    "Acronym",
    "BaseRef",
    "EdgeKind",
    "IssueCode",
    "MalformedFieldError",
    "MethodRecord",
    "PartialDate",
    "Severity",
    "ValidationIssue",
    "ValidationReport",
    "normalize_acronym",
    "validate_record",
]

# Normalized acronym: uppercase alphanumerics plus "-", "_", ".", 1-32 chars.
Acronym = str

_ACRONYM_RE = re.compile(r"[A-Z0-9._-]{1,32}")
_DATE_RE = re.compile(r"(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?")
_URL_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.-]*://\S+")


class MalformedFieldError(ValueError):
    """A raw field value that cannot be normalized into its domain type."""


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class IssueCode(str, Enum):
    DUPLICATE_ACRONYM = "duplicate_acronym"
    DANGLING_REF = "dangling_ref"
    SELF_LOOP = "self_loop"
    CYCLE = "cycle"
    DATE_ANOMALY = "date_anomaly"
    MALFORMED_FIELD = "malformed_field"


class EdgeKind(str, Enum):
    DIRECT = "direct"
    CONCEPTUAL = "conceptual"


def normalize_acronym(raw: str) -> Acronym:
    """Trim, uppercase and validate a method acronym.

    Idempotent: normalizing an already-normalized acronym returns it
    unchanged. Raises :class:`MalformedFieldError` when the value is
    empty after trimming or contains characters outside the allowed set.
    """
    value = raw.strip().upper()
    if not value:
        raise MalformedFieldError("acronym is empty")
    if not _ACRONYM_RE.fullmatch(value):
        raise MalformedFieldError(
            f"acronym {value!r} must be 1-32 characters from A-Z, 0-9, '-', '_', '.'"
        )
    return value


@dataclass(frozen=True)
class PartialDate:
    """A release date whose month and day may be unknown.

    Missing parts are treated as 01 for ordering purposes only; they are
    never invented when the date is displayed.
    """

    year: int
    month: int | None = None
    day: int | None = None

    @classmethod
    def parse(cls, raw: str) -> "PartialDate":
        match = _DATE_RE.fullmatch(raw.strip())
        if not match:
            raise MalformedFieldError(
                f"release date {raw!r} is not of the form YYYY, YYYY-MM or YYYY-MM-DD"
            )
        year, month, day = match.groups()
        return cls(
            int(year),
            int(month) if month is not None else None,
            int(day) if day is not None else None,
        )

    @property
    def is_complete(self) -> bool:
        return self.month is not None and self.day is not None

    def sort_key(self) -> tuple[int, int, int]:
        return (self.year, self.month or 1, self.day or 1)

    def calendar_problem(self) -> str | None:
        """Describe why this date cannot exist, or None if it can."""
        if self.month is not None and not 1 <= self.month <= 12:
            return f"month {self.month} is out of range"
        if self.day is not None:
            try:
                date(self.year, self.month or 1, self.day)
            except ValueError:
                return f"{self} is not a valid calendar date"
        return None

    def __str__(self) -> str:
        out = f"{self.year:04d}"
        if self.month is not None:
            out += f"-{self.month:02d}"
            if self.day is not None:
                out += f"-{self.day:02d}"
        return out


@dataclass(frozen=True)
class BaseRef:
    """One "based on" reference: the base method plus how it is inherited.

    ``direct`` means structural inheritance (the base is a component or a
    drop-in-replaceable building block); ``conceptual`` means the base
    only inspired the method.
    """

    target: Acronym
    kind: EdgeKind = EdgeKind.DIRECT


@dataclass(frozen=True)
class MethodRecord:
    """One annotated method. ``acronym`` is the primary key."""

    title: str
    url: str
    authors: tuple[str, ...]
    release_date: PartialDate
    venue: str
    method_name: str
    subject_area: str
    acronym: Acronym
    description: str
    based_on: tuple[BaseRef, ...] = ()


@dataclass(frozen=True)
class ValidationIssue:
    """One problem found in a record, a table row, or the graph.

    ``subject`` is the acronym of the offending record when one exists,
    otherwise the zero-based data-row index of the unparseable row.
    """

    severity: Severity
    code: IssueCode
    subject: Acronym | int
    detail: str

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def as_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code.value,
            "subject": self.subject,
            "detail": self.detail,
        }

    def __str__(self) -> str:
        return f"[{self.severity.value}] {self.code.value} ({self.subject}): {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    """Structured validation outcome from ingest or graph building."""

    issues: tuple[ValidationIssue, ...] = ()

    @property
    def errors(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[ValidationIssue, ...]:
        return tuple(i for i in self.issues if i.severity is Severity.WARNING)

    @property
    def has_errors(self) -> bool:
        return any(i.severity is Severity.ERROR for i in self.issues)

    def summary(self) -> str:
        return f"{len(self.errors)} errors, {len(self.warnings)} warnings"


def _error(code: IssueCode, subject: Acronym | int, detail: str) -> ValidationIssue:
    return ValidationIssue(Severity.ERROR, code, subject, detail)


def _warning(code: IssueCode, subject: Acronym | int, detail: str) -> ValidationIssue:
    return ValidationIssue(Severity.WARNING, code, subject, detail)


def validate_record(record: MethodRecord) -> list[ValidationIssue]:
    """Run every record-local check and return the violations found.

    Graph-level concerns (dangling references, cycles through other
    records, duplicate keys across records) are out of scope here; see
    ``graphcore.build_graph``.
    """
    issues: list[ValidationIssue] = []
    subject = record.acronym

    if not record.title.strip():
        issues.append(_error(IssueCode.MALFORMED_FIELD, subject, "title is empty"))
    if not record.method_name.strip():
        issues.append(_error(IssueCode.MALFORMED_FIELD, subject, "method name is empty"))
    if not record.subject_area.strip():
        issues.append(_error(IssueCode.MALFORMED_FIELD, subject, "subject area is empty"))

    try:
        if normalize_acronym(record.acronym) != record.acronym:
            issues.append(
                _error(IssueCode.MALFORMED_FIELD, subject, "acronym is not in normalized form")
            )
    except MalformedFieldError as exc:
        issues.append(_error(IssueCode.MALFORMED_FIELD, subject, str(exc)))

    for position, author in enumerate(record.authors):
        if not author or author != author.strip() or ";" in author:
            issues.append(
                _error(
                    IssueCode.MALFORMED_FIELD,
                    subject,
                    f"author {position} must be nonempty, trimmed and contain no ';'",
                )
            )

    if record.url and not _URL_RE.fullmatch(record.url):
        issues.append(
            _warning(IssueCode.MALFORMED_FIELD, subject, f"url {record.url!r} is not absolute")
        )

    problem = record.release_date.calendar_problem()
    if problem:
        issues.append(_error(IssueCode.DATE_ANOMALY, subject, problem))

    seen: set[Acronym] = set()
    for ref in record.based_on:
        if ref.target == record.acronym:
            issues.append(
                _error(IssueCode.SELF_LOOP, subject, "record lists itself in based-on")
            )
        if ref.target in seen:
            issues.append(
                _error(
                    IssueCode.MALFORMED_FIELD,
                    subject,
                    f"duplicate based-on target {ref.target}",
                )
            )
        seen.add(ref.target)

    return issues
