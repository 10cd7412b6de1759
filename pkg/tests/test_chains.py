import math
from itertools import combinations

import numpy as np
import pytest

from hammerlip import kernels
from hammerlip.chains import (
    longest_chain_bruteforce,
    longest_chain_in_polygon,
    longest_chain_lipschitz,
    longest_chain_standard,
    optimal_support,
    order_matrix,
)
from hammerlip.errors import DegenerateBand, SizeLimit
from hammerlip.geometry import ConvexPolygon, Rect, SlopeBand, order_holds
from hammerlip.sampler import PointCloud, child_seed, sample_poisson_rect

INF = math.inf
CLASSICAL = SlopeBand(0, INF)

FIVE_XS = np.array([0.1, 0.2, 0.3, 0.5, 0.6])
FIVE_YS = np.array([0.2, 0.1, 0.5, 0.4, 0.7])


def cloud_of(xs, ys):
    return PointCloud.from_arrays(np.asarray(xs, float), np.asarray(ys, float))


def random_cloud(rng, n, scale=1.0):
    return cloud_of(rng.uniform(0, scale, n), rng.uniform(0, scale, n))


def chain_is_valid(path, band):
    return all(order_holds(p, q, band) for p, q in zip(path[:-1], path[1:]))


def path_points_in_cloud(path, cloud):
    pts = {(x, y) for x, y in zip(cloud.xs, cloud.ys)}
    return all((x, y) in pts for x, y in path)


def enumerate_max_chains(xs, ys, band):
    """All maximum chains by exhaustive DFS; oracle for small clouds."""
    n = len(xs)
    best_len = 0
    chains = []

    def extend(chain):
        nonlocal best_len, chains
        grew = False
        for j in range(n):
            if j in chain:
                continue
            if not chain or order_holds((xs[chain[-1]], ys[chain[-1]]), (xs[j], ys[j]), band):
                grew = True
                extend(chain + [j])
        if not grew and chain:
            if len(chain) > best_len:
                best_len = len(chain)
                chains = [list(chain)]
            elif len(chain) == best_len:
                chains.append(list(chain))

    extend([])
    return best_len, chains


class TestStandardEngine:
    def test_empty_and_single(self):
        empty = cloud_of([], [])
        res = longest_chain_standard(empty)
        assert res.length == 0 and res.path.shape == (0, 2)
        single = cloud_of([0.5], [0.5])
        res = longest_chain_standard(single)
        assert res.length == 1 and res.path.tolist() == [[0.5, 0.5]]

    def test_five_point_example(self):
        res = longest_chain_standard(cloud_of(FIVE_XS, FIVE_YS))
        assert res.length == 3
        assert chain_is_valid(res.path, CLASSICAL)

    def test_monotone_under_extra_point(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            cloud = random_cloud(rng, 40)
            base = longest_chain_standard(cloud).length
            extra = cloud_of(
                np.append(cloud.xs, rng.uniform(0, 1)), np.append(cloud.ys, rng.uniform(0, 1))
            )
            assert longest_chain_standard(extra).length >= base

    def test_oracle_equivalence_200_clouds(self):
        rng = np.random.default_rng(202)
        for trial in range(200):
            n = int(rng.integers(1, 301))
            cloud = random_cloud(rng, n)
            fast = longest_chain_standard(cloud)
            slow = longest_chain_bruteforce(cloud, CLASSICAL)
            assert fast.length == slow, f"trial {trial} (seed 202)"
            assert chain_is_valid(fast.path, CLASSICAL)
            assert path_points_in_cloud(fast.path, cloud)


class TestLipschitzEngine:
    def test_five_point_unique_optimum(self):
        band = SlopeBand(0.5, 2)
        res = longest_chain_lipschitz(cloud_of(FIVE_XS, FIVE_YS), band)
        assert res.length == 3
        assert res.path.tolist() == [[0.1, 0.2], [0.3, 0.5], [0.6, 0.7]]

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(31)
        for _ in range(100):
            alpha = float(rng.uniform(0.1, 2))
            band = SlopeBand(alpha, alpha * float(rng.uniform(1.2, 6)))
            cloud = random_cloud(rng, int(rng.integers(0, 301)))
            fast = longest_chain_lipschitz(cloud, band)
            assert fast.length == longest_chain_bruteforce(cloud, band)
            assert chain_is_valid(fast.path, band)
            assert path_points_in_cloud(fast.path, cloud)

    def test_classical_band_routes_to_standard(self):
        rng = np.random.default_rng(32)
        cloud = random_cloud(rng, 200)
        a = longest_chain_lipschitz(cloud, CLASSICAL)
        b = longest_chain_standard(cloud)
        assert a.length == b.length
        assert np.array_equal(a.path, b.path)

    def test_half_extended_bands_degenerate(self):
        cloud = random_cloud(np.random.default_rng(33), 10)
        with pytest.raises(DegenerateBand):
            longest_chain_lipschitz(cloud, SlopeBand(0, 2))
        with pytest.raises(DegenerateBand):
            longest_chain_lipschitz(cloud, SlopeBand(1, INF))


class TestBruteforce:
    def test_trivial(self):
        assert longest_chain_bruteforce(cloud_of([], []), CLASSICAL) == 0
        assert longest_chain_bruteforce(cloud_of([0.3], [0.7]), CLASSICAL) == 1

    def test_size_limit(self):
        big = cloud_of(np.arange(5001.0), np.arange(5001.0))
        with pytest.raises(SizeLimit):
            longest_chain_bruteforce(big, CLASSICAL)

    def test_order_matrix_agrees_with_scalar(self):
        rng = np.random.default_rng(40)
        for band in (CLASSICAL, SlopeBand(0.5, 2), SlopeBand(1, INF), SlopeBand(0, 3)):
            cloud = random_cloud(rng, 30)
            mat = order_matrix(cloud.xs, cloud.ys, band)
            for i in range(30):
                for j in range(30):
                    expected = order_holds((cloud.xs[i], cloud.ys[i]), (cloud.xs[j], cloud.ys[j]), band)
                    assert mat[i, j] == expected

    def test_callable_and_matrix_order_specs(self):
        rng = np.random.default_rng(41)
        cloud = random_cloud(rng, 60)
        band = SlopeBand(0.5, 2)
        expected = longest_chain_bruteforce(cloud, band)
        assert longest_chain_bruteforce(cloud, lambda xs, ys: order_matrix(xs, ys, band)) == expected
        assert longest_chain_bruteforce(cloud, order_matrix(cloud.xs, cloud.ys, band)) == expected


class TestPolygonChain:
    def test_empty_polygon_region(self):
        cloud = cloud_of([5.0, 6.0], [5.0, 6.0])
        poly = ConvexPolygon.from_rect(Rect(0, 1, 0, 1))
        assert longest_chain_in_polygon(cloud, poly).length == 0

    def test_bounding_rect_equals_standard(self):
        rng = np.random.default_rng(50)
        cloud = random_cloud(rng, 300)
        res = longest_chain_in_polygon(cloud, Rect(0, 1, 0, 1))
        assert res.length == longest_chain_standard(cloud).length


class TestOptimalSupport:
    def test_empty(self):
        assert len(optimal_support(cloud_of([], []))) == 0

    def test_full_chain_cloud(self):
        cloud = cloud_of([0.1, 0.2, 0.3], [0.1, 0.2, 0.3])
        assert list(optimal_support(cloud)) == [0, 1, 2]

    def test_exhaustive_union_small_clouds(self):
        rng = np.random.default_rng(60)
        for band in (CLASSICAL, SlopeBand(0.5, 2)):
            for _ in range(60):
                n = int(rng.integers(1, 13))
                cloud = random_cloud(rng, n)
                best_len, chains = enumerate_max_chains(cloud.xs, cloud.ys, band)
                union = sorted({i for chain in chains for i in chain})
                support = optimal_support(cloud, band)
                assert sorted(support) == union

    def test_support_contains_recovered_path(self):
        rng = np.random.default_rng(61)
        band = SlopeBand(0.7, 3)
        for _ in range(20):
            cloud = random_cloud(rng, 150)
            support = set(optimal_support(cloud, band).tolist())
            path = longest_chain_lipschitz(cloud, band).path
            pts = {(cloud.xs[i], cloud.ys[i]) for i in support}
            assert all((x, y) in pts for x, y in path)


class TestKernelBackends:
    def test_backends_agree(self):
        from hammerlip import _kernels_py

        try:
            from hammerlip import _kernels
        except ImportError:
            pytest.skip("compiled kernels not built")
        rng = np.random.default_rng(70)
        for n in (0, 1, 2, 17, 1000):
            ys = rng.uniform(0, 1, n)
            assert _kernels.lnds_length(ys) == _kernels_py.lnds_length(ys)
            k1, h1 = _kernels.lnds_heights(ys)
            k2, h2 = _kernels_py.lnds_heights(ys)
            assert k1 == k2 and np.array_equal(h1, h2)
            k1, p1, l1 = _kernels.lnds_path(ys)
            k2, p2, l2 = _kernels_py.lnds_path(ys)
            assert k1 == k2 and l1 == l2 and np.array_equal(p1, p2)

    def test_ties_chain_nondecreasing(self):
        # duplicate y values chain in a nondecreasing subsequence
        assert kernels.lnds_length(np.array([0.5, 0.5, 0.5])) == 3
        assert kernels.lnds_length(np.array([1.0, 0.5, 0.5, 0.7])) == 3

    def test_walk_path_order(self):
        ys = np.array([0.2, 0.1, 0.5, 0.4, 0.7])
        k, prev, last = kernels.lnds_path(ys)
        idx = kernels.walk_path(prev, last, k)
        assert list(np.diff(idx) > 0) == [True] * (k - 1)
        assert np.all(np.diff(ys[idx]) >= 0)
