"""File persistence: dataset bootstrap, submission log, collections.

Storage is three plain files. The dataset file (CSV or JSON) is the
bootstrap content and is never rewritten; every accepted submission is
appended to a JSON-lines log, and startup replays that log over the
bootstrap records, so the log is the source of truth for everything
that happened after the dataset was authored. Collections live in one
JSON file rewritten atomically on every change. A crash between a log
append and anything else therefore loses nothing: the next startup
replays the appended line and lands in the same state.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .graphcore import MethodGraph, build_graph
from .ingest import (
    TableDocument,
    parse_records_json,
    parse_table,
    record_from_dict,
    record_to_dict,
)
from .schema import (
    Acronym,
    MalformedFieldError,
    MethodRecord,
    ValidationIssue,
    ValidationReport,
)

__all__ = [
    "Collection",
    "Datastore",
    "DatastoreError",
    "Submission",
    "append_submission",
    "apply_submission",
    "load_dataset",
    "read_collections",
    "read_dataset",
    "read_log",
    "write_collections",
]


class DatastoreError(RuntimeError):
    """A storage file is missing, unreadable, or corrupt."""


@dataclass(frozen=True)
class Submission:
    """One community mutation: a record to add or to replace (keyed by
    its acronym), who sent it, and what validation said."""

    record: MethodRecord
    submitter: str
    submitted_at: str
    status: str  # "accepted" | "rejected"
    issues: tuple[ValidationIssue, ...] = ()

    def as_dict(self) -> dict:
        return {
            "record": record_to_dict(self.record),
            "submitter": self.submitter,
            "submitted_at": self.submitted_at,
            "status": self.status,
            "issues": [issue.as_dict() for issue in self.issues],
        }


@dataclass(frozen=True)
class Collection:
    name: str
    members: frozenset[Acronym]
    created_at: str


@dataclass(frozen=True)
class Datastore:
    """The three file paths one service instance owns."""

    dataset_path: Path
    log_path: Path
    collections_path: Path

    @classmethod
    def at(
        cls,
        dataset_path: str | Path,
        log_path: str | Path | None = None,
        collections_path: str | Path | None = None,
    ) -> "Datastore":
        """Paths for a dataset; companions default to siblings of it."""
        dataset = Path(dataset_path)
        return cls(
            dataset_path=dataset,
            log_path=Path(log_path) if log_path else dataset.with_suffix(".log.jsonl"),
            collections_path=(
                Path(collections_path)
                if collections_path
                else dataset.with_suffix(".collections.json")
            ),
        )


def read_dataset(path: str | Path) -> TableDocument:
    """Parse the bootstrap dataset, leniently; format picked by suffix
    (.json means the record-array form, anything else the CSV table)."""
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatastoreError(f"cannot read dataset {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        return parse_records_json(content, source_name=str(path))
    return parse_table(content, source_name=str(path))


def read_log(path: str | Path) -> list[Submission]:
    """Replay the accepted-submission log, oldest first.

    A missing file is an empty log. A torn final line (crash mid-append)
    is skipped; a malformed line anywhere else means the log is corrupt
    and startup should not guess, so that raises.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except FileNotFoundError:
        return []
    except OSError as exc:
        raise DatastoreError(f"cannot read submission log {path}: {exc}") from exc
    entries: list[Submission] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            record = record_from_dict(obj["record"])
            entries.append(
                Submission(
                    record=record,
                    submitter=str(obj.get("submitter", "")),
                    submitted_at=str(obj.get("submitted_at", "")),
                    status="accepted",
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, MalformedFieldError) as exc:
            if lineno == len(lines):
                break  # torn tail write; the submission never happened
            raise DatastoreError(
                f"corrupt submission log {path} at line {lineno}: {exc}"
            ) from exc
    return entries


def append_submission(path: str | Path, submission: Submission) -> None:
    """Append one accepted submission as a single JSON line and flush it
    to disk before returning; the append is the commit point."""
    line = json.dumps(
        {
            "submitted_at": submission.submitted_at,
            "submitter": submission.submitter,
            "record": record_to_dict(submission.record),
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )
    with open(path, "a", encoding="utf-8") as handle:
        handle.write(line + "\n")
        handle.flush()
        os.fsync(handle.fileno())


def apply_submission(
    records: list[MethodRecord], record: MethodRecord
) -> list[MethodRecord]:
    """Replace the record with the same acronym, or append a new one.
    Position is preserved on replacement so rebuilds stay stable."""
    out = list(records)
    for i, existing in enumerate(out):
        if existing.acronym == record.acronym:
            out[i] = record
            return out
    out.append(record)
    return out


def load_dataset(store: Datastore) -> tuple[MethodGraph, ValidationReport]:
    """Bootstrap + replay: parse the dataset file, apply every logged
    submission in order, and build snapshot 1."""
    document = read_dataset(store.dataset_path)
    records = list(document.records)
    for submission in read_log(store.log_path):
        records = apply_submission(records, submission.record)
    graph, report = build_graph(records, snapshot_id=1)
    issues: list[ValidationIssue] = list(document.issues)
    issues.extend(report.issues)
    return graph, ValidationReport(tuple(issues))


def read_collections(path: str | Path) -> dict[str, Collection]:
    """Load the collections file; missing means no collections yet."""
    path = Path(path)
    try:
        content = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        return {}
    except OSError as exc:
        raise DatastoreError(f"cannot read collections {path}: {exc}") from exc
    try:
        raw = json.loads(content)
        out = {}
        for entry in raw:
            collection = Collection(
                name=str(entry["name"]),
                members=frozenset(str(m) for m in entry["members"]),
                created_at=str(entry.get("created_at", "")),
            )
            out[collection.name] = collection
        return out
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DatastoreError(f"corrupt collections file {path}: {exc}") from exc


def write_collections(path: str | Path, collections: dict[str, Collection]) -> None:
    """Rewrite the collections file atomically (write aside + rename)."""
    path = Path(path)
    payload = [
        {
            "name": c.name,
            "members": sorted(c.members),
            "created_at": c.created_at,
        }
        for c in sorted(collections.values(), key=lambda c: c.name)
    ]
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text + "\n", encoding="utf-8")
    os.replace(tmp, path)
