"""Core record types produced by repository scanning and fixture loading."""

from __future__ import annotations

from dataclasses import dataclass, field


def signature_key(name: str, email: str) -> str:
    """Canonical key for a commit signature; emails compare lowercased."""
    return f"{name} <{email.lower()}>"


@dataclass(frozen=True)
class FileChange:
    """Line-change facts for one file within one commit."""

    path: str
    language: str | None
    lines_added: int
    lines_deleted: int
    lines_modified: int


@dataclass(frozen=True)
class CommitRecord:
    """One commit's author signature, timestamp and per-file changes."""

    repo: str
    hash: str
    author_name: str
    author_email: str
    authored_at: int
    parents: tuple[str, ...]
    changes: tuple[FileChange, ...]

    @property
    def author_key(self) -> str:
        return signature_key(self.author_name, self.author_email)


# OwnershipMap: path -> one owner signature key per current line.
OwnershipMap = dict[str, list[str]]

# IdentifierBag: path -> normalized token -> occurrence count.
IdentifierBag = dict[str, dict[str, int]]


@dataclass
class ScanResult:
    """Everything a repository walk (or fixture load) yields."""

    records: list[CommitRecord]
    ownership: OwnershipMap = field(default_factory=dict)
    identifiers: IdentifierBag = field(default_factory=dict)
    languages: dict[str, str | None] = field(default_factory=dict)

    def merge(self, other: "ScanResult") -> None:
        """Pool another scan into this one (paths must not collide)."""
        self.records.extend(other.records)
        self.ownership.update(other.ownership)
        self.identifiers.update(other.identifiers)
        self.languages.update(other.languages)
