"""Line diffing: minimal edit scripts via Myers' O(ND) algorithm.

A script is an ordered list of hunks; each hunk deletes a contiguous run of
old lines and inserts a contiguous run of new lines at the same spot. Hunks
are the unit for change classification (added / modified / deleted) and for
line-ownership replay.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Hunk", "EditScript", "diff_lines", "classify_hunks", "apply_script"]


@dataclass(frozen=True)
class Hunk:
    """One contiguous edit: old_lines removed at old_start, new_lines inserted at new_start."""

    old_start: int
    old_lines: tuple[str, ...]
    new_start: int
    new_lines: tuple[str, ...]

    @property
    def deletions(self) -> int:
        return len(self.old_lines)

    @property
    def insertions(self) -> int:
        return len(self.new_lines)


@dataclass(frozen=True)
class EditScript:
    """Ordered hunks transforming a document of old_len lines into new_len lines."""

    hunks: tuple[Hunk, ...]
    old_len: int
    new_len: int

    @property
    def total_edits(self) -> int:
        return sum(h.deletions + h.insertions for h in self.hunks)


def _myers_matches(a: list[str], b: list[str]) -> list[tuple[int, int]]:
    """Indices (i, j) with a[i] == b[j] forming a maximum common subsequence."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return []
    v = {1: 0}
    trace: list[dict[int, int]] = []
    found_d = -1
    for d in range(n + m + 1):
        trace.append(dict(v))
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v[k - 1] < v[k + 1]):
                x = v[k + 1]  # step down: consume one line of b
            else:
                x = v[k - 1] + 1  # step right: consume one line of a
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[k] = x
            if x >= n and y >= m:
                found_d = d
                break
        if found_d >= 0:
            break
    matches: list[tuple[int, int]] = []
    x, y = n, m
    for d in range(found_d, 0, -1):
        vd = trace[d]
        k = x - y
        if k == -d or (k != d and vd[k - 1] < vd[k + 1]):
            prev_k = k + 1
        else:
            prev_k = k - 1
        px = vd[prev_k]
        py = px - prev_k
        if prev_k == k + 1:
            sx, sy = px, py + 1
        else:
            sx, sy = px + 1, py
        while x > sx and y > sy:
            x -= 1
            y -= 1
            matches.append((x, y))
        x, y = px, py
    while x > 0 and y > 0:
        x -= 1
        y -= 1
        matches.append((x, y))
    matches.reverse()
    return matches


def diff_lines(old: list[str], new: list[str]) -> EditScript:
    """Minimal edit script (LCS-optimal total edits) from old to new."""
    n, m = len(old), len(new)
    p = 0
    while p < n and p < m and old[p] == new[p]:
        p += 1
    s = 0
    while s < n - p and s < m - p and old[n - 1 - s] == new[m - 1 - s]:
        s += 1
    core_old = old[p : n - s]
    core_new = new[p : m - s]
    matches = _myers_matches(core_old, core_new)
    hunks: list[Hunk] = []
    ai = bj = 0
    for mi, mj in matches + [(len(core_old), len(core_new))]:
        if mi > ai or mj > bj:
            hunks.append(
                Hunk(
                    old_start=p + ai,
                    old_lines=tuple(core_old[ai:mi]),
                    new_start=p + bj,
                    new_lines=tuple(core_new[bj:mj]),
                )
            )
        ai, bj = mi + 1, mj + 1
    return EditScript(hunks=tuple(hunks), old_len=n, new_len=m)


def classify_hunks(script: EditScript) -> tuple[int, int, int]:
    """Split a script's edits into (added, deleted, modified) line counts.

    Within a hunk, min(deletions, insertions) lines count as modified; the
    surplus counts as added or deleted.
    """
    added = deleted = modified = 0
    for h in script.hunks:
        d, i = h.deletions, h.insertions
        modified += min(d, i)
        added += max(0, i - d)
        deleted += max(0, d - i)
    return added, deleted, modified


def apply_script(old: list[str], script: EditScript) -> list[str]:
    """Replay a script against its old side; used for verification."""
    out: list[str] = []
    pos = 0
    for h in script.hunks:
        out.extend(old[pos : h.old_start])
        pos = h.old_start + h.deletions
        out.extend(h.new_lines)
    out.extend(old[pos:])
    return out
