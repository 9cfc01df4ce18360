"""Commit-facts fixture files: line-delimited JSON records plus an optional
trailing snapshot of final file state (identifiers and line ownership).

This format carries everything downstream stages need, so fixture runs and
real repository scans are interchangeable. `ingest` also serializes scans
into it as the pipeline's first artifact.
"""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

from .errors import FactsFormatError
from .records import CommitRecord, FileChange, ScanResult

__all__ = ["load_commit_facts", "save_commit_facts"]

_HEX = set("0123456789abcdef")


def _require(record: dict, line_no: int, field: str, types, allow_none: bool = False):
    if field not in record:
        raise FactsFormatError(line_no, field, "missing")
    value = record[field]
    if value is None and allow_none:
        return None
    if isinstance(value, bool) or not isinstance(value, types):
        raise FactsFormatError(
            line_no, field, f"expected {getattr(types, '__name__', types)}, got {type(value).__name__}"
        )
    return value


def _check_hash(value: str, line_no: int, field: str) -> str:
    if len(value) != 40 or not set(value) <= _HEX:
        raise FactsFormatError(line_no, field, "must be a 40-char lowercase hex string")
    return value


def _parse_change(raw: dict, line_no: int) -> FileChange:
    if not isinstance(raw, dict):
        raise FactsFormatError(line_no, "changes", "each change must be an object")
    path = _require(raw, line_no, "path", str)
    language = _require(raw, line_no, "language", str, allow_none=True)
    counts = {}
    for field in ("added", "deleted", "modified"):
        n = _require(raw, line_no, field, int)
        if n < 0:
            raise FactsFormatError(line_no, field, "must be >= 0")
        counts[field] = n
    return FileChange(
        path=path,
        language=language,
        lines_added=counts["added"],
        lines_deleted=counts["deleted"],
        lines_modified=counts["modified"],
    )


def _parse_record(raw: dict, line_no: int) -> CommitRecord:
    repo = _require(raw, line_no, "repo", str)
    chash = _check_hash(_require(raw, line_no, "hash", str), line_no, "hash")
    name = _require(raw, line_no, "author_name", str)
    email = _require(raw, line_no, "author_email", str)
    at = _require(raw, line_no, "authored_at", int)
    if at < 0:
        raise FactsFormatError(line_no, "authored_at", "must be >= 0")
    parents = _require(raw, line_no, "parents", list)
    for p in parents:
        if not isinstance(p, str):
            raise FactsFormatError(line_no, "parents", "entries must be strings")
        _check_hash(p, line_no, "parents")
    raw_changes = _require(raw, line_no, "changes", list)
    changes = tuple(_parse_change(c, line_no) for c in raw_changes)
    seen_paths = set()
    for c in changes:
        if c.path in seen_paths:
            raise FactsFormatError(line_no, "changes", f"duplicate path {c.path!r}")
        seen_paths.add(c.path)
    return CommitRecord(
        repo=repo,
        hash=chash,
        author_name=name,
        author_email=email,
        authored_at=at,
        parents=tuple(parents),
        changes=changes,
    )


def _parse_snapshot(raw: dict, line_no: int, result: ScanResult) -> None:
    files = _require(raw, line_no, "files", list)
    for entry in files:
        if not isinstance(entry, dict):
            raise FactsFormatError(line_no, "files", "each file must be an object")
        path = _require(entry, line_no, "path", str)
        language = _require(entry, line_no, "language", str, allow_none=True)
        identifiers = _require(entry, line_no, "identifiers", dict)
        for token, count in identifiers.items():
            if not isinstance(token, str) or isinstance(count, bool) or not isinstance(count, int) or count < 1:
                raise FactsFormatError(line_no, "identifiers", "must map tokens to counts >= 1")
        owners = _require(entry, line_no, "owners", dict)
        lines: list[str] = []
        for key in sorted(owners):
            count = owners[key]
            if not isinstance(key, str) or isinstance(count, bool) or not isinstance(count, int) or count < 0:
                raise FactsFormatError(line_no, "owners", "must map signature keys to counts >= 0")
            lines.extend([key] * count)
        result.languages[path] = language
        if lines:
            result.ownership[path] = lines
        if identifiers:
            result.identifiers[path] = dict(identifiers)


def load_commit_facts(path: str | Path) -> ScanResult:
    """Parse a commit-facts file; raises FactsFormatError naming the first
    offending line and field."""
    result = ScanResult(records=[])
    seen_hashes: set[tuple[str, str]] = set()
    snapshot_seen = False
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if snapshot_seen:
                raise FactsFormatError(line_no, "snapshot", "snapshot must be the last record")
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FactsFormatError(line_no, "(record)", f"invalid JSON: {exc.msg}") from exc
            if not isinstance(raw, dict):
                raise FactsFormatError(line_no, "(record)", "each line must be an object")
            if "snapshot" in raw:
                snap = raw["snapshot"]
                if not isinstance(snap, dict):
                    raise FactsFormatError(line_no, "snapshot", "must be an object")
                _parse_snapshot(snap, line_no, result)
                snapshot_seen = True
                continue
            record = _parse_record(raw, line_no)
            key = (record.repo, record.hash)
            if key in seen_hashes:
                raise FactsFormatError(line_no, "hash", f"duplicate commit {record.hash}")
            seen_hashes.add(key)
            result.records.append(record)
    return result


def save_commit_facts(result: ScanResult, path: str | Path) -> None:
    """Serialize a scan into the commit-facts format (deterministic bytes)."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in result.records:
            fh.write(
                json.dumps(
                    {
                        "repo": r.repo,
                        "hash": r.hash,
                        "author_name": r.author_name,
                        "author_email": r.author_email,
                        "authored_at": r.authored_at,
                        "parents": list(r.parents),
                        "changes": [
                            {
                                "path": c.path,
                                "language": c.language,
                                "added": c.lines_added,
                                "deleted": c.lines_deleted,
                                "modified": c.lines_modified,
                            }
                            for c in r.changes
                        ],
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
                + "\n"
            )
        paths = sorted(set(result.ownership) | set(result.identifiers))
        if paths:
            files = []
            for p in paths:
                owners = Counter(result.ownership.get(p, []))
                files.append(
                    {
                        "path": p,
                        "language": result.languages.get(p),
                        "identifiers": result.identifiers.get(p, {}),
                        "owners": dict(owners),
                    }
                )
            fh.write(
                json.dumps({"snapshot": {"files": files}}, sort_keys=True, separators=(",", ":"))
                + "\n"
            )
