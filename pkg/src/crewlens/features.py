"""Per-identity feature spaces: daily commit series, language change matrix,
and ownership-weighted identifier documents."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from .langconfig import LanguageConfig
from .records import CommitRecord

__all__ = [
    "DailySeries",
    "LangMatrix",
    "build_daily_series",
    "normalize_series",
    "build_language_matrix",
    "saturate",
    "build_file_tfidf",
    "build_developer_docs",
]

SECONDS_PER_DAY = 86400
CHANGE_KINDS = ("added", "deleted", "modified")


@dataclass(frozen=True)
class DailySeries:
    """Commits per UTC day over one identity's active span."""

    identity: int
    start_day: int
    values: tuple[float, ...]


@dataclass(frozen=True)
class LangMatrix:
    """Rows: identities; columns: (language, change kind); values: line counts."""

    ids: tuple[int, ...]
    columns: tuple[tuple[str, str], ...]
    values: np.ndarray

    def column_labels(self) -> list[str]:
        return [f"{lang}:{kind}" for lang, kind in self.columns]


def build_daily_series(
    records: Iterable[CommitRecord], key_to_id: Mapping[str, int]
) -> dict[int, DailySeries]:
    """Bucket commits per identity by UTC calendar day; inactive days are zeros."""
    days: dict[int, Counter[int]] = defaultdict(Counter)
    for r in records:
        days[key_to_id[r.author_key]][r.authored_at // SECONDS_PER_DAY] += 1
    out: dict[int, DailySeries] = {}
    for ident, counter in days.items():
        start, end = min(counter), max(counter)
        values = tuple(float(counter.get(d, 0)) for d in range(start, end + 1))
        out[ident] = DailySeries(identity=ident, start_day=start, values=values)
    return out


def normalize_series(s: DailySeries) -> DailySeries:
    """Divide by the mean so the shape, not the volume, is compared."""
    mean = sum(s.values) / len(s.values)
    if mean <= 0:
        raise ValueError(f"series for identity {s.identity} has zero mean")
    return DailySeries(
        identity=s.identity,
        start_day=s.start_day,
        values=tuple(v / mean for v in s.values),
    )


def build_language_matrix(
    records: Iterable[CommitRecord],
    key_to_id: Mapping[str, int],
    config: LanguageConfig,
) -> LangMatrix:
    """Sum added/deleted/modified lines per (identity, language).

    Markup languages and files with no detected language are excluded;
    identities whose row would be all zeros get no row.
    """
    sums: dict[int, Counter[tuple[str, str]]] = defaultdict(Counter)
    languages: set[str] = set()
    for r in records:
        ident = key_to_id[r.author_key]
        for c in r.changes:
            if c.language is None or config.is_markup(c.language):
                continue
            languages.add(c.language)
            sums[ident][(c.language, "added")] += c.lines_added
            sums[ident][(c.language, "deleted")] += c.lines_deleted
            sums[ident][(c.language, "modified")] += c.lines_modified
    columns = tuple(
        (lang, kind) for lang in sorted(languages) for kind in CHANGE_KINDS
    )
    col_index = {c: i for i, c in enumerate(columns)}
    ids = []
    rows = []
    for ident in sorted(sums):
        row = np.zeros(len(columns))
        for key, count in sums[ident].items():
            row[col_index[key]] = count
        if row.any():
            ids.append(ident)
            rows.append(row)
    values = np.array(rows) if rows else np.zeros((0, len(columns)))
    return LangMatrix(ids=tuple(ids), columns=columns, values=values)


def saturate(matrix: LangMatrix, p: float = 95.0) -> LangMatrix:
    """Clip each column at its p-th percentile (linear interpolation)."""
    if matrix.values.size == 0:
        return matrix
    thresholds = np.percentile(matrix.values, p, axis=0, method="linear")
    return LangMatrix(
        ids=matrix.ids,
        columns=matrix.columns,
        values=np.minimum(matrix.values, thresholds),
    )


def build_file_tfidf(
    bags: Mapping[str, Mapping[str, int]]
) -> dict[str, dict[str, float]]:
    """tf * ln(N/df) per file, with N the number of non-empty bags."""
    nonempty = {path: bag for path, bag in bags.items() if bag}
    if not nonempty:
        raise ValueError("no non-empty identifier bags")
    n = len(nonempty)
    df: Counter[str] = Counter()
    for bag in nonempty.values():
        df.update(bag.keys())
    out: dict[str, dict[str, float]] = {}
    for path, bag in nonempty.items():
        out[path] = {term: tf * math.log(n / df[term]) for term, tf in bag.items()}
    return out


def build_developer_docs(
    file_tfidf: Mapping[str, Mapping[str, float]],
    ownership: Mapping[str, list[str]],
    key_to_id: Mapping[str, int],
) -> dict[int, dict[str, float]]:
    """Sum file TF-IDF vectors into per-identity documents, weighted by the
    share of lines the identity owns in each file. Zero weights are dropped."""
    docs: dict[int, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    for path, weights in file_tfidf.items():
        owners = ownership.get(path)
        if not owners:
            continue
        total = len(owners)
        shares: Counter[int] = Counter()
        for key in owners:
            shares[key_to_id[key]] += 1
        for ident, lines in shares.items():
            fraction = lines / total
            doc = docs[ident]
            for term, w in weights.items():
                doc[term] += fraction * w
    out: dict[int, dict[str, float]] = {}
    for ident, doc in docs.items():
        cleaned = {t: w for t, w in doc.items() if w > 0}
        if cleaned:
            out[ident] = cleaned
    return out
