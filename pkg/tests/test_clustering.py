"""DBSCAN against a brute-force reachability reference; K-Means and the
elbow rule against constructed optima."""

import numpy as np
import pytest

from crewlens.analytics import (
    DbscanParams,
    dbscan,
    kmeans,
    kmeans_best,
    pairwise_l2,
    select_k_elbow,
    suggest_eps,
    _knee_index,
)


def brute_force_dbscan(d, eps, min_pts):
    """Reachability closure by repeated scanning; intentionally naive."""
    n = len(d)
    core = [(d[i] <= eps).sum() >= min_pts for i in range(n)]
    labels = [-1] * n
    cluster = 0
    for seed in range(n):
        if not core[seed] or labels[seed] != -1:
            continue
        labels[seed] = cluster
        changed = True
        while changed:
            changed = False
            for i in range(n):
                if labels[i] == cluster and core[i]:
                    for j in range(n):
                        if d[i][j] <= eps and labels[j] == -1:
                            labels[j] = cluster
                            changed = True
        cluster += 1
    return labels


def labels_equivalent(a, b):
    fwd, back = {}, {}
    for x, y in zip(a, b):
        if (x == -1) != (y == -1):
            return False
        if x == -1:
            continue
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


def distances_1d(points):
    p = np.asarray(points, dtype=float)
    return np.abs(p[:, None] - p[None, :])


class TestDbscan:
    def test_two_groups_no_noise(self):
        d = distances_1d([0, 1, 2, 10, 11])
        labels = dbscan(d, DbscanParams(eps=1.5, min_pts=2))
        assert labels.tolist() == [0, 0, 0, 1, 1]

    def test_all_noise_when_eps_too_small(self):
        d = distances_1d([0, 10, 20])
        labels = dbscan(d, DbscanParams(eps=1.0, min_pts=2))
        assert labels.tolist() == [-1, -1, -1]

    def test_all_zero_matrix_single_cluster(self):
        labels = dbscan(np.zeros((4, 4)), DbscanParams(eps=0.5, min_pts=2))
        assert labels.tolist() == [0, 0, 0, 0]

    def test_min_pts_counts_self(self):
        # two points at distance 1, eps=1: each neighborhood has exactly 2
        d = distances_1d([0, 1])
        assert dbscan(d, DbscanParams(eps=1.0, min_pts=2)).tolist() == [0, 0]
        assert dbscan(d, DbscanParams(eps=1.0, min_pts=3)).tolist() == [-1, -1]

    def test_matches_brute_force_reference(self):
        rng = np.random.default_rng(11)
        for trial in range(100):
            n = int(rng.integers(2, 41))
            pts = rng.uniform(0, 10, size=(n, 2))
            d = pairwise_l2(pts)
            eps = float(rng.uniform(0.2, 4.0))
            min_pts = int(rng.integers(1, 6))
            mine = dbscan(d, DbscanParams(eps=eps, min_pts=min_pts))
            ref = brute_force_dbscan(d, eps, min_pts)
            assert labels_equivalent(mine.tolist(), ref), f"trial {trial}"

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            DbscanParams(eps=0.0, min_pts=2)
        with pytest.raises(ValueError):
            DbscanParams(eps=1.0, min_pts=0)

    def test_rejects_asymmetric_matrix(self):
        d = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValueError):
            dbscan(d, DbscanParams(eps=1.0, min_pts=1))


class TestPairwiseL2:
    def test_three_four_five(self):
        d = pairwise_l2(np.array([[0.0, 0.0], [3.0, 4.0]]))
        assert d[0, 1] == pytest.approx(5.0)

    def test_identical_rows(self):
        d = pairwise_l2(np.array([[1.0, 2.0], [1.0, 2.0]]))
        assert d[0, 1] == pytest.approx(0.0)

    def test_unit_axes(self):
        d = pairwise_l2(np.eye(3))
        off = d[~np.eye(3, dtype=bool)]
        assert np.allclose(off, np.sqrt(2))


class TestKMeans:
    def test_k1_center_is_centroid(self):
        pts = np.array([[0.0, 0], [2, 0], [0, 4]])
        res = kmeans(pts, 1, seed=0)
        assert np.allclose(res.centers[0], pts.mean(axis=0))
        assert set(res.labels.tolist()) == {0}

    def test_two_obvious_groups(self):
        pts = np.array([[0.0, 0], [0.1, 0], [10, 0], [10.1, 0]])
        for seed in range(10):
            res = kmeans(pts, 2, seed=seed)
            assert res.labels[0] == res.labels[1]
            assert res.labels[2] == res.labels[3]
            assert res.labels[0] != res.labels[2]

    def test_k_equals_n_zero_wcss(self):
        pts = np.array([[0.0, 0], [1, 0], [0, 1], [5, 5]])
        res = kmeans(pts, 4, seed=1)
        assert res.wcss == 0.0
        assert sorted(res.labels.tolist()) == [0, 1, 2, 3]

    def test_k_out_of_range(self):
        pts = np.zeros((3, 2))
        with pytest.raises(ValueError):
            kmeans(pts, 4, seed=0)
        with pytest.raises(ValueError):
            kmeans(pts, 0, seed=0)

    def test_wcss_monotone_over_iterations(self):
        rng = np.random.default_rng(13)
        for trial in range(30):
            pts = rng.uniform(0, 10, size=(int(rng.integers(5, 40)), 2))
            k = int(rng.integers(1, min(6, len(pts)) + 1))
            res = kmeans(pts, k, seed=trial)
            hist = res.wcss_history
            assert all(hist[i + 1] <= hist[i] + 1e-12 for i in range(len(hist) - 1))

    def test_deterministic_given_seed(self):
        pts = np.random.default_rng(5).uniform(0, 10, size=(25, 2))
        a = kmeans(pts, 3, seed=42)
        b = kmeans(pts, 3, seed=42)
        assert np.array_equal(a.labels, b.labels)
        assert np.array_equal(a.centers, b.centers)


class TestElbow:
    def test_hand_curve_knee_at_two(self):
        # normalized chord distances: 0.452 at k=2, 0.314 at k=3
        assert 1 + _knee_index([100, 20, 15, 12, 10]) == 2

    def test_linear_decay_returns_smallest_interior(self):
        assert 1 + _knee_index([100, 80, 60, 40, 20]) == 2

    def test_three_blobs(self):
        hits = 0
        for seed in range(20):
            rng = np.random.default_rng(seed)
            centers = np.array([[0.0, 0], [40, 0], [0, 40]])
            pts = np.vstack([c + rng.normal(0, 1.0, size=(10, 2)) for c in centers])
            if select_k_elbow(pts, k_max=8, seed=seed) == 3:
                hits += 1
        assert hits >= 18

    def test_kmax_two(self):
        pts = np.random.default_rng(0).uniform(0, 1, size=(6, 2))
        assert select_k_elbow(pts, k_max=2, seed=0) == 2

    def test_kmeans_best_improves_or_matches(self):
        pts = np.random.default_rng(9).uniform(0, 10, size=(30, 2))
        single = kmeans(pts, 4, seed=[3, 4, 0]).wcss
        best = kmeans_best(pts, 4, seed=3, restarts=10).wcss
        assert best <= single + 1e-12


class TestSuggestEps:
    def test_knee_lands_between_population_and_outliers(self):
        # the classic k-dist picture: a dense population plus far outliers;
        # the knee should put eps above the population band and below the
        # outlier distances, so the blob clusters and the outliers are noise
        rng = np.random.default_rng(21)
        blob = rng.normal(0, 0.5, size=(15, 2))
        outliers = np.array([[100.0, 0.0], [0.0, 100.0], [-100.0, -100.0]])
        d = pairwise_l2(np.vstack([blob, outliers]))
        eps = suggest_eps(d, min_pts=3)
        labels = dbscan(d, DbscanParams(eps=eps, min_pts=3))
        assert labels_equivalent(labels.tolist(), [0] * 15 + [-1] * 3)

    def test_positive_even_for_duplicates(self):
        d = np.zeros((5, 5))
        assert suggest_eps(d, min_pts=3) > 0
