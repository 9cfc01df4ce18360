"""Distance computation, clustering and 2D embedding.

All functions are deterministic given their inputs and seeds. Dimensionality
reduction is classical metric MDS (eigendecomposition of the double-centered
squared-distance matrix) rather than a stochastic neighbor method, so plots
and downstream clustering are exactly reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

__all__ = [
    "DtwParams",
    "DbscanParams",
    "Embedding2D",
    "KMeansResult",
    "dtw_exact",
    "fast_dtw",
    "pairwise_dtw",
    "pairwise_l2",
    "dbscan",
    "suggest_eps",
    "embed_2d",
    "kmeans",
    "select_k_elbow",
]


@dataclass(frozen=True)
class DtwParams:
    """FastDTW search radius; pointwise cost is |a_i - b_j|."""

    radius: int = 1

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("radius must be >= 0")


@dataclass(frozen=True)
class DbscanParams:
    eps: float
    min_pts: int = 3

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise ValueError("eps must be > 0")
        if self.min_pts < 1:
            raise ValueError("min_pts must be >= 1")


@dataclass(frozen=True)
class Embedding2D:
    """2D coordinates plus the eigenvalues behind them; clamped notes whether
    a negative eigenvalue had to be zeroed."""

    coords: np.ndarray
    eigenvalues: tuple[float, float]
    clamped: bool


@dataclass(frozen=True)
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    wcss: float
    wcss_history: tuple[float, ...]


def check_distance_matrix(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.isfinite(d).all():
        raise ValueError("distance matrix must be finite")
    if (d < 0).any():
        raise ValueError("distances must be >= 0")
    if not np.allclose(d, d.T, atol=1e-9):
        raise ValueError("distance matrix must be symmetric")
    if not np.allclose(np.diagonal(d), 0.0, atol=1e-9):
        raise ValueError("distance matrix diagonal must be zero")
    return d


# ---------------------------------------------------------------------------
# Dynamic time warping


def dtw_exact(a, b) -> float:
    """Optimal warp cost under |a_i - b_j| with steps right/down/diagonal."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        raise ValueError("DTW inputs must be non-empty")
    inf = float("inf")
    prev = [0.0] + [inf] * m
    for i in range(n):
        cur = [inf] * (m + 1)
        ai = a[i]
        for j in range(1, m + 1):
            c = ai - b[j - 1]
            if c < 0:
                c = -c
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = c + best
        prev = cur
    return prev[m]


def _halve(x: tuple[float, ...]) -> tuple[float, ...]:
    # average adjacent pairs; an odd tail element stays as its own cell so
    # the coarse path always projects onto the fine grid's last row/column
    out = [(x[i] + x[i + 1]) / 2 for i in range(0, len(x) - 1, 2)]
    if len(x) % 2:
        out.append(x[-1])
    return tuple(out)


def _windowed_dtw(
    a, b, window: list[tuple[int, int]] | None
) -> tuple[float, list[tuple[int, int]]]:
    """DP over an explicit cell window (None = full grid); returns cost+path."""
    n, m = len(a), len(b)
    if window is None:
        window = [(i, j) for i in range(n) for j in range(m)]
    inf = float("inf")
    cost: dict[tuple[int, int], float] = {(0, 0): 0.0}
    parent: dict[tuple[int, int], tuple[int, int] | None] = {(0, 0): None}
    for i, j in window:
        dt = abs(a[i] - b[j])
        best = inf
        best_prev = None
        for prev in ((i, j), (i, j + 1), (i + 1, j)):
            c = cost.get(prev, inf)
            if c < best:
                best = c
                best_prev = prev
        key = (i + 1, j + 1)
        cost[key] = best + dt
        parent[key] = best_prev
    end = (n, m)
    if cost.get(end, inf) == inf:
        raise AssertionError("window does not admit a complete warp path")
    path: list[tuple[int, int]] = []
    cur: tuple[int, int] | None = end
    while cur is not None and cur != (0, 0):
        path.append((cur[0] - 1, cur[1] - 1))
        cur = parent[cur]
    path.reverse()
    return cost[end], path


def _expand_window(
    path: list[tuple[int, int]], len_a: int, len_b: int, radius: int
) -> list[tuple[int, int]]:
    coarse: set[tuple[int, int]] = set()
    for i, j in path:
        for di in range(-radius, radius + 1):
            for dj in range(-radius, radius + 1):
                coarse.add((i + di, j + dj))
    fine: set[tuple[int, int]] = set()
    for i, j in coarse:
        for fi in (2 * i, 2 * i + 1):
            if not 0 <= fi < len_a:
                continue
            for fj in (2 * j, 2 * j + 1):
                if 0 <= fj < len_b:
                    fine.add((fi, fj))
    return sorted(fine)


def _fastdtw_rec(
    a: tuple[float, ...], b: tuple[float, ...], radius: int
) -> tuple[float, list[tuple[int, int]]]:
    if min(len(a), len(b)) <= 2 * radius + 2:
        return _windowed_dtw(a, b, None)
    _, coarse_path = _fastdtw_rec(_halve(a), _halve(b), radius)
    window = _expand_window(coarse_path, len(a), len(b), radius)
    return _windowed_dtw(a, b, window)


def fast_dtw(a, b, params: DtwParams = DtwParams()) -> float:
    """Multi-resolution DTW approximation; always the cost of a legal warp
    path, hence an upper bound on dtw_exact. Symmetric in its arguments."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("DTW inputs must be non-empty")
    ta, tb = tuple(float(v) for v in a), tuple(float(v) for v in b)
    if (len(tb), tb) < (len(ta), ta):
        ta, tb = tb, ta
    cost, _ = _fastdtw_rec(ta, tb, params.radius)
    return cost


def pairwise_dtw(series: list, params: DtwParams = DtwParams()) -> np.ndarray:
    """FastDTW distance matrix over DailySeries values (or plain sequences)."""
    if len(series) < 2:
        raise ValueError("need at least 2 series")
    values = [getattr(s, "values", s) for s in series]
    n = len(values)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = fast_dtw(values[i], values[j], params)
    return d


def pairwise_l2(rows: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix between row vectors."""
    rows = np.asarray(rows, dtype=float)
    if rows.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    sq = (rows**2).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2 * rows @ rows.T
    np.maximum(d2, 0.0, out=d2)
    d = np.sqrt(d2)
    np.fill_diagonal(d, 0.0)
    return (d + d.T) / 2


# ---------------------------------------------------------------------------
# Clustering


def dbscan(d: np.ndarray, params: DbscanParams) -> np.ndarray:
    """Density clustering on an explicit distance matrix.

    A point is core when at least min_pts points (itself included) lie within
    eps. Clusters are eps-connected components of core points; border points
    join the first cluster that reaches them (deterministic index order);
    everything else is labeled -1.
    """
    d = check_distance_matrix(d)
    n = d.shape[0]
    neighbors = [np.flatnonzero(d[i] <= params.eps) for i in range(n)]
    core = np.array([len(nb) >= params.min_pts for nb in neighbors])
    labels = np.full(n, -1, dtype=int)
    cluster = 0
    for seed in range(n):
        if not core[seed] or labels[seed] != -1:
            continue
        queue = [seed]
        labels[seed] = cluster
        while queue:
            p = queue.pop(0)
            for q in neighbors[p]:
                if labels[q] != -1:
                    continue
                labels[q] = cluster
                if core[q]:
                    queue.append(int(q))
        cluster += 1
    return labels


def _knee_index(ys) -> int:
    """Index of the point farthest from the chord through the first and last
    points, after normalizing the curve to the unit square. Endpoints are
    excluded; ties resolve to the smaller index."""
    ys = np.asarray(ys, dtype=float)
    n = len(ys)
    if n <= 2:
        return n - 1
    xs = np.arange(n) / (n - 1)
    span = ys.max() - ys.min()
    yn = (ys - ys.min()) / span if span > 0 else np.zeros(n)
    x0, y0 = 0.0, yn[0]
    x1, y1 = 1.0, yn[-1]
    norm = sqrt((x1 - x0) ** 2 + (y1 - y0) ** 2)
    best_i, best_d = 1, -1.0
    for i in range(1, n - 1):
        dist = abs((y1 - y0) * xs[i] - (x1 - x0) * yn[i] + x1 * y0 - y1 * x0) / norm
        if dist > best_d + 1e-12:
            best_i, best_d = i, dist
    return best_i


def suggest_eps(d: np.ndarray, min_pts: int = 3) -> float:
    """Knee of the sorted min_pts-th-nearest-neighbor distance curve."""
    d = check_distance_matrix(d)
    n = d.shape[0]
    k = min(min_pts, n - 1)
    kdist = np.sort(np.sort(d, axis=1)[:, 1:][:, k - 1])
    eps = float(kdist[_knee_index(kdist)])
    if eps <= 0:
        positive = d[d > 0]
        eps = float(positive.min()) if positive.size else 1.0
    return eps


# ---------------------------------------------------------------------------
# Embedding


def embed_2d(d: np.ndarray) -> Embedding2D:
    """Classical metric MDS onto the top-2 non-negative eigenpairs.

    Sign convention: each axis is flipped so its largest-magnitude coordinate
    is positive, making the embedding fully deterministic.
    """
    d = check_distance_matrix(d)
    n = d.shape[0]
    if n < 2:
        raise ValueError("need at least 2 points to embed")
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ (d**2) @ j
    b = (b + b.T) / 2
    evals, evecs = np.linalg.eigh(b)
    coords = np.zeros((n, 2))
    top = (float(evals[-1]), float(evals[-2]))
    # eigenvalues within fp dust of zero are rank deficiency, not clamping
    tol = max(float(evals[-1]), 0.0) * 1e-12
    clamped = False
    for axis, idx in enumerate((-1, -2)):
        lam = float(evals[idx])
        if lam <= tol:
            if lam < -tol:
                clamped = True
            continue
        col = evecs[:, idx] * sqrt(lam)
        if col[np.argmax(np.abs(col))] < 0:
            col = -col
        coords[:, axis] = col
    return Embedding2D(coords=coords, eigenvalues=top, clamped=clamped)


# ---------------------------------------------------------------------------
# K-Means with elbow selection


def _kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = ((points - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            r = rng.random() * total
            idx = min(int(np.searchsorted(np.cumsum(closest), r, side="right")), n - 1)
        centers[c] = points[idx]
        closest = np.minimum(closest, ((points - centers[c]) ** 2).sum(axis=1))
    return centers


def kmeans(points: np.ndarray, k: int, seed) -> KMeansResult:
    """Lloyd iterations from a seeded k-means++ start.

    Runs to an assignment fixpoint (or 300 iterations); an empty cluster is
    reseeded to the point farthest from its current center, which keeps the
    per-iteration WCSS non-increasing.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if k < 1 or k > n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    centers = _kmeanspp_init(points, k, rng)
    history: list[float] = []
    prev_labels: np.ndarray | None = None
    labels = np.zeros(n, dtype=int)
    for _ in range(300):
        dists = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = dists.argmin(axis=1)
        for c in range(k):
            if (labels == c).any():
                continue
            farthest = int(dists[np.arange(n), labels].argmax())
            centers[c] = points[farthest]
            dists[:, c] = ((points - centers[c]) ** 2).sum(axis=1)
            labels = dists.argmin(axis=1)
        for c in range(k):
            members = points[labels == c]
            if len(members):
                centers[c] = members.mean(axis=0)
        wcss = float(((points - centers[labels]) ** 2).sum())
        history.append(wcss)
        if prev_labels is not None and np.array_equal(labels, prev_labels):
            break
        prev_labels = labels
    return KMeansResult(
        labels=labels,
        centers=centers,
        wcss=history[-1],
        wcss_history=tuple(history),
    )


def kmeans_best(points: np.ndarray, k: int, seed: int, restarts: int = 10) -> KMeansResult:
    """Best-of-restarts k-means; each restart uses a derived seed."""
    best: KMeansResult | None = None
    for r in range(restarts):
        res = kmeans(points, k, [seed, k, r])
        if best is None or res.wcss < best.wcss:
            best = res
    assert best is not None
    return best


def select_k_elbow(points: np.ndarray, k_max: int, seed: int, restarts: int = 10) -> int:
    """Elbow rule: k whose normalized WCSS point lies farthest from the chord
    between k=1 and k=k_max (chord endpoints excluded, ties to smaller k)."""
    points = np.asarray(points, dtype=float)
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    k_max = min(k_max, points.shape[0])
    wcss = [kmeans_best(points, k, seed, restarts).wcss for k in range(1, k_max + 1)]
    return 1 + _knee_index(wcss)
