"""Walk Git repositories: linearize history, replay diffs, track line ownership.

Uses the git CLI (rev-list / diff-tree / cat-file --batch); no extra
dependencies. The walk follows the first-parent chain of HEAD, so merge
side-branches contribute only through their merge commit's diff.
"""

from __future__ import annotations

import subprocess
from collections.abc import Mapping, Sequence
from pathlib import Path

from .diffing import EditScript, classify_hunks, diff_lines
from .errors import (
    CorruptHistoryError,
    EmptyRepositoryError,
    GitObjectError,
    NotARepositoryError,
    OwnershipError,
)
from .langconfig import LanguageConfig, detect_language
from .identifiers import extract_identifiers
from .records import CommitRecord, FileChange, ScanResult, signature_key

__all__ = ["scan_repository", "linearize_history", "update_ownership"]

_EMPTY_TREE = "4b825dc642cb6eb9a060e54bf8d69288fbee4904"
_NULL_SHA = "0" * 40
_BINARY_SNIFF_BYTES = 8000
_MAX_IDENTIFIER_BYTES = 1 << 20


def linearize_history(parents: Mapping[str, Sequence[str]], head: str) -> list[str]:
    """First-parent chain from head back to the root, returned oldest first."""
    chain: list[str] = []
    seen: set[str] = set()
    cur = head
    while True:
        if cur in seen:
            raise CorruptHistoryError(f"cycle detected at commit {cur}")
        if cur not in parents:
            raise CorruptHistoryError(f"commit {cur} missing from the graph")
        seen.add(cur)
        chain.append(cur)
        first = parents[cur]
        if not first:
            break
        cur = first[0]
    chain.reverse()
    return chain


def update_ownership(owners: list[str], script: EditScript, author_key: str) -> list[str]:
    """Replay one edit script over a file's per-line owner list."""
    if len(owners) != script.old_len:
        raise OwnershipError(
            f"ownership length {len(owners)} does not match diff old side {script.old_len}"
        )
    out: list[str] = []
    pos = 0
    for h in script.hunks:
        out.extend(owners[pos : h.old_start])
        pos = h.old_start + h.deletions
        out.extend([author_key] * h.insertions)
    out.extend(owners[pos:])
    if len(out) != script.new_len:
        raise OwnershipError(
            f"replayed ownership length {len(out)} does not match diff new side {script.new_len}"
        )
    return out


def _git(repo: Path, *args: str) -> bytes:
    proc = subprocess.run(
        ["git", "-C", str(repo), *args],
        capture_output=True,
        check=False,
    )
    if proc.returncode != 0:
        raise GitObjectError(
            f"git {' '.join(args)} failed in {repo}: {proc.stderr.decode(errors='replace').strip()}"
        )
    return proc.stdout


class _BlobReader:
    """Persistent `git cat-file --batch` channel."""

    def __init__(self, repo: Path):
        self._proc = subprocess.Popen(
            ["git", "-C", str(repo), "cat-file", "--batch"],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
        )

    def read(self, sha: str) -> bytes:
        assert self._proc.stdin is not None and self._proc.stdout is not None
        self._proc.stdin.write(sha.encode() + b"\n")
        self._proc.stdin.flush()
        header = self._proc.stdout.readline().decode().strip()
        if header.endswith(" missing") or not header:
            raise GitObjectError(f"unreadable Git object {sha}")
        _, _, size = header.split()
        data = self._proc.stdout.read(int(size))
        self._proc.stdout.read(1)  # trailing newline
        return data

    def close(self) -> None:
        if self._proc.stdin is not None:
            self._proc.stdin.close()
        self._proc.wait()


def _is_binary(data: bytes) -> bool:
    return b"\x00" in data[:_BINARY_SNIFF_BYTES]


def _decode_lines(data: bytes) -> list[str]:
    return data.decode("utf-8", errors="replace").splitlines()


def _parse_diff_tree(raw: bytes) -> list[tuple[str, str, str, str, str]]:
    """(old_mode, new_mode, old_sha, new_sha, path) per changed file."""
    parts = raw.split(b"\x00")
    out = []
    i = 0
    while i < len(parts):
        token = parts[i].decode("utf-8", errors="replace")
        if not token:
            i += 1
            continue
        if not token.startswith(":"):
            # leading commit id line emitted by some diff-tree invocations
            i += 1
            continue
        meta = token[1:].split(" ")
        old_mode, new_mode, old_sha, new_sha, _status = meta[:5]
        path = parts[i + 1].decode("utf-8", errors="replace")
        out.append((old_mode, new_mode, old_sha, new_sha, path))
        i += 2
    return out


def scan_repository(repo_path: str | Path, config: LanguageConfig) -> ScanResult:
    """Scan one repository along the first-parent chain of HEAD.

    Returns commit records oldest-first plus final-state line ownership and
    identifier bags. Binary files are skipped entirely; files over 1 MiB are
    tracked for ownership but skipped for identifier extraction.
    """
    repo = Path(repo_path)
    probe = subprocess.run(
        ["git", "-C", str(repo), "rev-parse", "--git-dir"],
        capture_output=True,
        check=False,
    )
    if probe.returncode != 0:
        raise NotARepositoryError(f"not a readable Git repository: {repo}")
    head_probe = subprocess.run(
        ["git", "-C", str(repo), "rev-parse", "HEAD"],
        capture_output=True,
        check=False,
    )
    if head_probe.returncode != 0:
        raise EmptyRepositoryError(f"repository has no commits: {repo}")
    head = head_probe.stdout.decode().strip()

    graph: dict[str, list[str]] = {}
    for line in _git(repo, "rev-list", "--parents", head).decode().splitlines():
        hashes = line.split()
        graph[hashes[0]] = hashes[1:]
    chain = linearize_history(graph, head)

    meta: dict[str, tuple[str, str, int, tuple[str, ...]]] = {}
    log_raw = _git(
        repo, "log", "--format=%H%x1f%an%x1f%ae%x1f%at", head
    ).decode("utf-8", errors="replace")
    for entry in log_raw.splitlines():
        if not entry:
            continue
        chash, name, email, at = entry.split("\x1f")
        meta[chash] = (name, email, int(at), tuple(graph[chash]))

    repo_name = repo.resolve().name
    blobs = _BlobReader(repo)
    records: list[CommitRecord] = []
    ownership: dict[str, list[str]] = {}
    languages: dict[str, str | None] = {}
    current_blob: dict[str, str] = {}
    binary_paths: set[str] = set()
    try:
        for chash in chain:
            name, email, at, parents = meta[chash]
            author = signature_key(name, email)
            base = parents[0] if parents else _EMPTY_TREE
            raw = _git(repo, "diff-tree", "-r", "-z", "--no-renames", base, chash)
            changes: list[FileChange] = []
            for old_mode, new_mode, old_sha, new_sha, path in _parse_diff_tree(raw):
                if "160000" in (old_mode, new_mode) or "120000" in (old_mode, new_mode):
                    continue  # submodules and symlinks carry no line content
                if path in binary_paths:
                    continue
                old_data = b"" if old_sha == _NULL_SHA else blobs.read(old_sha)
                new_data = b"" if new_sha == _NULL_SHA else blobs.read(new_sha)
                if _is_binary(old_data) or _is_binary(new_data):
                    binary_paths.add(path)
                    ownership.pop(path, None)
                    languages.pop(path, None)
                    current_blob.pop(path, None)
                    continue
                old_lines = _decode_lines(old_data)
                new_lines = _decode_lines(new_data)
                script = diff_lines(old_lines, new_lines)
                added, deleted, modified = classify_hunks(script)
                language = detect_language(path, config)
                changes.append(
                    FileChange(
                        path=path,
                        language=language,
                        lines_added=added,
                        lines_deleted=deleted,
                        lines_modified=modified,
                    )
                )
                prev = ownership.get(path, [])
                new_owners = update_ownership(prev, script, author)
                if new_sha == _NULL_SHA:
                    ownership.pop(path, None)
                    languages.pop(path, None)
                    current_blob.pop(path, None)
                else:
                    ownership[path] = new_owners
                    languages[path] = language
                    current_blob[path] = new_sha
            records.append(
                CommitRecord(
                    repo=repo_name,
                    hash=chash,
                    author_name=name,
                    author_email=email,
                    authored_at=at,
                    parents=parents,
                    changes=tuple(changes),
                )
            )

        identifiers: dict[str, dict[str, int]] = {}
        for path in sorted(ownership):
            language = languages.get(path)
            if language is None or config.is_markup(language):
                continue
            data = blobs.read(current_blob[path])
            if len(data) > _MAX_IDENTIFIER_BYTES:
                continue
            bag = extract_identifiers(data.decode("utf-8", errors="replace"))
            if bag:
                identifiers[path] = bag
    finally:
        blobs.close()

    return ScanResult(
        records=records,
        ownership=ownership,
        identifiers=identifiers,
        languages=languages,
    )
