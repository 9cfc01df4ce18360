"""DTW and FastDTW: hand-computed dynamic programs plus oracle properties."""

import numpy as np
import pytest

from crewlens.analytics import DtwParams, dtw_exact, fast_dtw, pairwise_dtw


def test_identical_series_zero_cost():
    assert dtw_exact([1, 2, 3], [1, 2, 3]) == 0.0


def test_three_by_two_dynamic_program():
    # 3x2 DP by hand: warp 1 onto either 0 or 2 at cost 1
    assert dtw_exact([0, 1, 2], [0, 2]) == 1.0


def test_single_element_row():
    # |5-1| + |5-1|
    assert dtw_exact([5], [1, 1]) == 8.0


def test_exact_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.uniform(0, 5, size=rng.integers(1, 30))
        b = rng.uniform(0, 5, size=rng.integers(1, 30))
        assert dtw_exact(a, b) == pytest.approx(dtw_exact(b, a), abs=1e-12)


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        dtw_exact([], [1])
    with pytest.raises(ValueError):
        fast_dtw([1], [])


def test_fast_dtw_self_distance_zero():
    rng = np.random.default_rng(2)
    for r in (0, 1, 4):
        a = rng.uniform(0, 5, size=50)
        assert fast_dtw(a, a, DtwParams(radius=r)) == 0.0


def test_fast_dtw_base_case_equals_exact():
    rng = np.random.default_rng(3)
    for _ in range(20):
        r = int(rng.integers(0, 4))
        # either length within the base-case bound forces the exact path
        a = rng.uniform(0, 5, size=rng.integers(1, 2 * r + 3))
        b = rng.uniform(0, 5, size=rng.integers(1, 40))
        assert fast_dtw(a, b, DtwParams(radius=r)) == pytest.approx(
            dtw_exact(a, b), abs=1e-12
        )


def test_fast_dtw_full_radius_equals_exact():
    rng = np.random.default_rng(4)
    for _ in range(40):
        a = rng.uniform(0, 5, size=rng.integers(1, 65))
        b = rng.uniform(0, 5, size=rng.integers(1, 65))
        assert fast_dtw(a, b, DtwParams(radius=64)) == pytest.approx(
            dtw_exact(a, b), abs=1e-9
        )


def test_fast_dtw_upper_bound():
    rng = np.random.default_rng(5)
    for _ in range(40):
        a = rng.uniform(0, 5, size=rng.integers(1, 65))
        b = rng.uniform(0, 5, size=rng.integers(1, 65))
        exact = dtw_exact(a, b)
        for r in (0, 1, 4):
            assert fast_dtw(a, b, DtwParams(radius=r)) >= exact - 1e-9


def test_fast_dtw_symmetric_in_arguments():
    rng = np.random.default_rng(6)
    for _ in range(30):
        a = rng.uniform(0, 5, size=rng.integers(1, 50))
        b = rng.uniform(0, 5, size=rng.integers(1, 50))
        p = DtwParams(radius=1)
        assert fast_dtw(a, b, p) == fast_dtw(b, a, p)


def test_pairwise_matrix_consistent_with_direct_calls():
    rng = np.random.default_rng(7)
    series = [rng.uniform(0, 3, size=rng.integers(2, 30)) for _ in range(5)]
    d = pairwise_dtw(series, DtwParams(radius=1))
    assert d.shape == (5, 5)
    assert np.allclose(np.diagonal(d), 0.0)
    assert np.allclose(d, d.T)
    for i in range(5):
        for j in range(5):
            if i != j:
                assert d[i, j] == pytest.approx(
                    fast_dtw(series[i], series[j], DtwParams(radius=1))
                )


def test_pairwise_identical_series():
    d = pairwise_dtw([[1.0, 2.0], [1.0, 2.0]], DtwParams(radius=1))
    assert d.tolist() == [[0.0, 0.0], [0.0, 0.0]]


def test_pairwise_requires_two_series():
    with pytest.raises(ValueError):
        pairwise_dtw([[1.0]], DtwParams())


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        DtwParams(radius=-1)
