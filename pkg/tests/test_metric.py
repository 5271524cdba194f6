"""Distance, diameter and covering-radius behavior."""

from __future__ import annotations

import math

import numpy as np
import pytest

from divicover.metric import (
    CACHE_MAX_POINTS,
    FiniteMetricSpace,
    UsageError,
    diameter,
    distance,
    effective_delta,
    relative_radius,
)

from conftest import brute_diameter, brute_radius, random_space


class TestConstruction:
    def test_one_dimensional_input_becomes_column(self):
        sp = FiniteMetricSpace([0.0, 1.0, 2.0])
        assert sp.points.shape == (3, 1)
        assert sp.n == 3 and sp.dim == 1

    def test_points_are_copied_and_read_only(self):
        raw = np.zeros((2, 2))
        sp = FiniteMetricSpace(raw)
        raw[0, 0] = 9.0  # caller's array stays writable
        assert sp.points[0, 0] == 0.0
        with pytest.raises(ValueError):
            sp.points[0, 0] = 1.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(points=np.empty((0, 2))),
            dict(points=[[1.0, np.nan]]),
            dict(points=[[1.0, np.inf]]),
            dict(points=[[0.0]], metric="cosine"),
            dict(points=[[0.0]], metric="l2", p=2.0),
            dict(points=[[0.0]], metric="lp"),
            dict(points=[[0.0]], metric="lp", p=0.5),
            dict(points=[[0.0]], metric="lp", p=math.inf),
        ],
    )
    def test_invalid_construction_rejected(self, kwargs):
        with pytest.raises(UsageError):
            FiniteMetricSpace(**kwargs)

    def test_metric_exponents(self):
        assert FiniteMetricSpace([[0.0]], metric="l2").p == 2.0
        assert FiniteMetricSpace([[0.0]], metric="linf").p == math.inf
        assert FiniteMetricSpace([[0.0]], metric="lp", p=3.0).p == 3.0


class TestDistance:
    def test_hand_values(self):
        # 3-4-5 triangle; sup and taxicab checked on the same pair
        pts = [[0.0, 0.0], [3.0, 4.0]]
        assert distance(FiniteMetricSpace(pts), 0, 1) == 5.0
        assert distance(FiniteMetricSpace(pts, metric="linf"), 0, 1) == 4.0
        assert distance(FiniteMetricSpace(pts, metric="lp", p=1.0), 0, 1) == 7.0

    def test_out_of_range_rejected(self, line3):
        with pytest.raises(UsageError):
            distance(line3, 0, 3)
        with pytest.raises(UsageError):
            distance(line3, -1, 0)

    @pytest.mark.parametrize("metric,p", [("l2", None), ("linf", None), ("lp", 1.5)])
    def test_metric_axioms_sampled(self, metric, p):
        rng = np.random.default_rng(11)
        sp = random_space(rng, 12, 3, metric, p)
        D = sp.dist_matrix()
        assert np.allclose(D, D.T)
        assert np.allclose(np.diag(D), 0.0)
        assert (D[~np.eye(12, dtype=bool)] > 0).all()
        for _ in range(200):
            i, j, k = rng.integers(0, 12, size=3)
            assert D[i, k] <= D[i, j] + D[j, k] + 1e-12

    def test_norm_comparison_sampled(self):
        # sup <= l2 <= sqrt(d) * sup on every pair
        rng = np.random.default_rng(3)
        pts = rng.standard_normal((20, 4))
        d2 = FiniteMetricSpace(pts).dist_matrix()
        di = FiniteMetricSpace(pts, metric="linf").dist_matrix()
        assert (di <= d2 + 1e-12).all()
        assert (d2 <= 2.0 * di + 1e-12).all()

    def test_pairwise_block_shape(self, line3):
        block = line3.pairwise([0, 2], [0, 1, 2])
        assert block.shape == (2, 3)
        assert np.allclose(block, [[0.0, 0.5, 1.0], [1.0, 0.5, 0.0]])


class TestDiameter:
    def test_line_and_square(self, line3, unit_square):
        assert diameter(line3) == (1.0, (0, 2))
        value, pair = diameter(unit_square)
        assert value == pytest.approx(math.sqrt(2.0), abs=1e-15)
        assert pair == (0, 3)

    def test_singleton_and_duplicates(self, line3):
        assert diameter(line3, [1]) == (0.0, (1, 1))
        sp = FiniteMetricSpace([2.0, 2.0, 2.0])
        assert diameter(sp) == (0.0, (0, 1))
        assert diameter(FiniteMetricSpace([[2.0, 2.0]] * 3, metric="linf")) == (0.0, (0, 1))

    def test_tie_breaks_to_lexicographically_first_pair(self):
        # both diagonals of the square realize the diameter; (0, 3) < (1, 2)
        sp = FiniteMetricSpace([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        assert diameter(sp)[1] == (0, 3)

    def test_subset_of_space(self, line3):
        assert diameter(line3, [0, 1]) == (0.5, (0, 1))
        assert diameter(line3, np.array([2, 1])) == (0.5, (1, 2))

    @pytest.mark.parametrize("metric,p", [("l2", None), ("linf", None), ("lp", 3.0)])
    def test_matches_brute_force(self, metric, p):
        rng = np.random.default_rng(5)
        for _ in range(10):
            sp = random_space(rng, int(rng.integers(2, 15)), int(rng.integers(1, 4)), metric, p)
            idx = np.arange(sp.n)
            assert diameter(sp) == brute_diameter(sp, idx)

    def test_linf_fast_path_matches_brute_force_on_grid(self):
        # grids maximize sup-metric ties, stressing the pair selection
        g = np.stack(np.meshgrid(np.arange(3.0), np.arange(3.0)), -1).reshape(-1, 2)
        sp = FiniteMetricSpace(g, metric="linf")
        assert diameter(sp) == brute_diameter(sp, np.arange(sp.n))
        rng = np.random.default_rng(17)
        for _ in range(20):
            sub = np.sort(rng.choice(sp.n, size=int(rng.integers(2, 8)), replace=False))
            assert diameter(sp, sub) == brute_diameter(sp, sub)

    def test_chunked_path_matches_cached_path(self):
        # above the cache bound the scan runs in blocks; same value, same pair
        rng = np.random.default_rng(23)
        pts = rng.standard_normal((CACHE_MAX_POINTS + 50, 2))
        big = FiniteMetricSpace(pts)
        assert big.dist_matrix() is None
        D = big.pairwise(np.arange(big.n), np.arange(big.n))
        iu = np.triu_indices(big.n, k=1)
        flat = int(np.argmax(D[iu]))
        expect_pair = (int(iu[0][flat]), int(iu[1][flat]))
        value, pair = diameter(big)
        assert value == pytest.approx(float(D[iu].max()), rel=1e-12)
        assert pair == expect_pair

    def test_invalid_subsets_rejected(self, line3):
        with pytest.raises(UsageError):
            diameter(line3, [])
        with pytest.raises(UsageError):
            diameter(line3, [0, 5])


class TestRelativeRadius:
    def test_line(self, line3):
        # center 0.5 reaches both ends in 0.5
        assert relative_radius(line3) == (0.5, 1)

    def test_center_may_lie_outside_subset(self):
        sp = FiniteMetricSpace([0.0, 1.0, 2.0])
        value, center = relative_radius(sp, [0, 2])
        assert value == 1.0 and center == 1

    def test_square(self, unit_square):
        value, center = relative_radius(unit_square)
        # no point is central: best reach is a full diagonal
        assert value == pytest.approx(math.sqrt(2.0), abs=1e-15)
        assert center == 0

    def test_bounds_sampled(self):
        rng = np.random.default_rng(29)
        for trial in range(20):
            metric, p = [("l2", None), ("linf", None), ("lp", 2.5)][trial % 3]
            sp = random_space(rng, int(rng.integers(2, 20)), int(rng.integers(1, 4)), metric, p)
            sub = np.sort(rng.choice(sp.n, size=int(rng.integers(1, sp.n + 1)), replace=False))
            r, c = relative_radius(sp, sub)
            d, _ = diameter(sp, sub)
            assert d / 2.0 - 1e-12 <= r <= d + 1e-12
            assert (r, c) == brute_radius(sp, sub)

    def test_linf_fast_path_matches_brute_force(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            sp = random_space(rng, int(rng.integers(2, 15)), int(rng.integers(1, 4)), "linf")
            sub = np.sort(rng.choice(sp.n, size=int(rng.integers(1, sp.n + 1)), replace=False))
            assert relative_radius(sp, sub) == brute_radius(sp, sub)


class TestEffectiveDelta:
    def test_hand_values(self):
        assert effective_delta(0.05, 3, math.inf) == 0.05
        assert effective_delta(0.3, 4, 2.0) == pytest.approx(0.15)
        assert effective_delta(0.2, 81, 4.0) == pytest.approx(0.2 / 3.0)
        assert effective_delta(1.0, 1, 1.0) == 1.0

    def test_monotone_in_dimension(self):
        vals = [effective_delta(0.4, d, 2.0) for d in (1, 2, 4, 8)]
        assert vals == sorted(vals, reverse=True)

    @pytest.mark.parametrize("bad", [dict(delta=0.0, dim=2, p=2.0), dict(delta=1.5, dim=2, p=2.0), dict(delta=0.2, dim=0, p=2.0), dict(delta=0.2, dim=2, p=0.5)])
    def test_invalid_rejected(self, bad):
        with pytest.raises(UsageError):
            effective_delta(**bad)
