"""Classical MDS: exact reconstruction of Euclidean configurations."""

import numpy as np
import pytest

from crewlens.analytics import embed_2d, pairwise_l2


def reconstructed(coords):
    return np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=2))


def test_two_points_exact():
    d = np.array([[0.0, 5.0], [5.0, 0.0]])
    emb = embed_2d(d)
    assert np.linalg.norm(emb.coords[0] - emb.coords[1]) == pytest.approx(5.0)


def test_right_triangle_distances_reproduced():
    d = np.array([[0.0, 3, 5], [3, 0, 4], [5, 4, 0]])
    emb = embed_2d(d)
    assert np.abs(reconstructed(emb.coords) - d).max() < 1e-9


def test_collinear_second_axis_zero():
    pts = np.array([0.0, 1.0, 3.0])
    d = np.abs(pts[:, None] - pts[None, :])
    emb = embed_2d(d)
    assert np.abs(emb.coords[:, 1]).max() < 1e-8
    assert not emb.clamped


def test_centered_columns():
    rng = np.random.default_rng(8)
    pts = rng.uniform(-4, 4, size=(12, 2))
    emb = embed_2d(pairwise_l2(pts))
    assert np.abs(emb.coords.mean(axis=0)).max() < 1e-9


def test_planar_reconstruction_property():
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = int(rng.integers(2, 31))
        pts = rng.uniform(-5, 5, size=(n, 2))
        d = pairwise_l2(pts)
        emb = embed_2d(d)
        assert np.abs(reconstructed(emb.coords) - d).max() < 1e-6


def test_sign_convention_deterministic():
    rng = np.random.default_rng(23)
    pts = rng.uniform(0, 10, size=(9, 2))
    d = pairwise_l2(pts)
    a = embed_2d(d)
    b = embed_2d(d)
    assert np.array_equal(a.coords, b.coords)
    for axis in range(2):
        col = a.coords[:, axis]
        if col.any():
            assert col[np.argmax(np.abs(col))] > 0


def test_non_euclidean_distances_still_embed():
    # violates the triangle inequality: the centered Gram matrix gets negative
    # eigenvalues at the bottom of the spectrum. The top two stay non-negative
    # (the spectrum always contains the structural zero and has positive
    # trace), so the embedding is finite and nothing needs clamping.
    d = np.array([[0.0, 1.0, 3.0], [1.0, 0.0, 1.0], [3.0, 1.0, 0.0]])
    n = 3
    j = np.eye(n) - 1.0 / n
    evals = np.linalg.eigvalsh(-0.5 * j @ (d**2) @ j)
    assert evals[0] < -1e-6  # the input really is non-Euclidean
    emb = embed_2d(d)
    assert np.isfinite(emb.coords).all()
    assert not emb.clamped


def test_single_point_rejected():
    with pytest.raises(ValueError):
        embed_2d(np.zeros((1, 1)))
