import contextlib
import math
from concurrent import futures

import numpy as np
import pytest

from cornershuffle import mixing
from cornershuffle import walk
from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError


@pytest.fixture(params=["nopool", "threadpool"])
def pool(request):
    if request.param == "threadpool":
        with futures.ThreadPoolExecutor(max_workers=4) as tp:
            yield tp
    else:
        with contextlib.nullcontext():
            yield None


class TestCurve:
    def test_crossing_time_interpolates(self):
        t = mixing.crossing_time([0, 1, 2], [1.0, 0.6, 0.4])
        assert t == pytest.approx(1.5)

    def test_crossing_time_edges(self):
        assert mixing.crossing_time([0, 1], [0.9, 0.8]) == math.inf
        assert mixing.crossing_time([2, 3], [0.3, 0.1]) == 2.0

    def test_fit_power_law(self):
        xs = np.array([2.0, 4.0, 8.0])
        exponent, prefactor = mixing.fit_power_law(xs, 3 * xs**2)
        assert exponent == pytest.approx(2.0)
        assert prefactor == pytest.approx(3.0)

    def test_fit_power_law_needs_positive_points(self):
        with pytest.raises(DomainError):
            mixing.fit_power_law([1.0], [2.0])
        with pytest.raises(DomainError):
            mixing.fit_power_law([1.0, 2.0], [0.0, 1.0])

    @pytest.mark.parametrize("args", [(0, 1, 0), (-1, 1, 3), (2, 1, 3)])
    def test_invalid_grid(self, args):
        with pytest.raises(DomainError):
            mixing.time_grid(*args)

    def test_log_grid(self):
        with pytest.raises(DomainError):
            mixing.time_grid(0, 10, 5, log=True)
        np.testing.assert_allclose(mixing.time_grid(1, 100, 3, log=True), [1, 10, 100])

    def test_decade_grid(self):
        grid = mixing.decade_grid(1, 100, per_decade=10)
        assert len(grid) == 21
        assert grid[0] == pytest.approx(1) and grid[-1] == pytest.approx(100)

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            mixing.DistanceCurve("S", 2, 1, [0.0], [1.0], method="guess")

    def test_misaligned(self):
        with pytest.raises(DomainError):
            mixing.DistanceCurve("S", 2, 1, [0.0, 1.0], [1.0])

    def test_frame(self):
        curve = mixing.DistanceCurve("S", 2, 1, [0.0, 1.0], [0.75, 1.0 + 1e-15])
        frame = curve.to_frame()
        assert list(frame.columns) == ["t", "value", "lo", "hi", "method"]
        assert frame["value"].max() <= 1.0
        assert curve.describe()["k"] == 1


class TestSymmetries:
    @pytest.mark.parametrize("family,count", [("S0", 2), ("S", 4)])
    def test_symmetry_counts(self, family, count):
        assert len(mixing.array_symmetries(walk.ShuffleFamily(family, 3))) == count

    def test_representatives_cover_classes(self):
        family = walk.ShuffleFamily("S", 3)
        space = walk.TupleSpace(3, 1)
        # Centre, two corner pairs and the edge midpoints.
        reps = mixing.start_representatives(family, space)
        assert len(reps) == 4

    def test_r_has_one_representative(self):
        family = walk.ShuffleFamily("R", 3)
        reps = mixing.start_representatives(family, walk.TupleSpace(3, 2))
        np.testing.assert_array_equal(reps, [0])


class TestExactDistance:
    def test_time_zero(self):
        assert mixing.kset_distance_exact("S", 1, 0.0, n=2) == pytest.approx(0.75)
        assert mixing.kset_distance_exact("S", 2, 0.0, n=2) == pytest.approx(11 / 12)

    @pytest.mark.parametrize("family", ["S0", "S", "R"])
    def test_monotone(self, family):
        times = mixing.time_grid(0, 60, 31)
        curve = mixing.kset_distance_curve(family, 1, times, n=3)
        assert curve.is_monotone()
        assert curve.values[-1] < 0.05

    def test_symmetry_reduction_is_exact(self):
        times = [0.5, 2.0, 6.0]
        reduced = mixing.kset_distance_curve("S", 2, times, n=3)
        kernel = walk.marginal_kernel("S", 2, n=3)
        every = mixing.kset_distance_curve(
            "S", 2, times, n=3, starts=np.arange(len(kernel))
        )
        np.testing.assert_allclose(reduced.values, every.values, atol=1e-12)

    @pytest.mark.parametrize("family", ["S0", "S", "R"])
    def test_rational_matches_float(self, family):
        times = [0.0, 1.0, 4.0, 10.0]
        rational = mixing.kset_distance_curve(family, 1, times, n=3, rational=True)
        floats = mixing.kset_distance_curve(family, 1, times, n=3)
        np.testing.assert_allclose(rational.values, floats.values, atol=1e-12)
        assert rational.values[0] == pytest.approx(8 / 9)
        assert rational.metadata["arithmetic"] == "rational"
        assert floats.metadata["arithmetic"] == "float"

    def test_rational_needs_single_card(self):
        with pytest.raises(DomainError):
            mixing.kset_distance_curve("S", 2, [1.0], n=2, rational=True)

    def test_pool_gives_same_curve(self, pool):
        times = mixing.time_grid(0, 20, 11)
        serial = mixing.kset_distance_curve("S0", 2, times, n=3)
        pooled = mixing.kset_distance_curve("S0", 2, times, n=3, threadpool=pool)
        np.testing.assert_array_equal(serial.values, pooled.values)
        assert serial.metadata == pooled.metadata

    def test_r_matches_closed_form(self):
        n, t = 4, 3.0
        cells = n * n
        d = mixing.kset_distance_exact("R", 1, t, n=n)
        assert d == pytest.approx((1 - 1 / cells) * math.exp(-3 * t / (cells - 1)))

    def test_state_cap(self):
        with pytest.raises(CapExceeded):
            mixing.kset_distance_curve("S", 3, [1.0], n=5, state_cap=1000)

    def test_worst_start_dominates(self):
        times = [1.0, 4.0]
        kernel = walk.marginal_kernel("S0", 1, n=3)
        worst = mixing.kset_distance_curve("S0", 1, times, n=3)
        for start in range(len(kernel)):
            one = mixing.kset_distance_curve("S0", 1, times, n=3, starts=[start])
            assert np.all(one.values <= worst.values + 1e-12)


class TestFullDistance:
    def test_s0_n2(self):
        curve = mixing.full_tv_curve("S0", [0.0, 5.0, 50.0], n=2)
        assert curve.values[0] == pytest.approx(1 - 1 / 24)
        assert curve.is_monotone()
        assert curve.metadata["group_order"] == 24
        assert curve.metadata["full_group"]

    def test_full_dominates_marginal(self):
        times = [1.0, 3.0, 9.0]
        full = mixing.full_tv_curve("S", times, n=2)
        single = mixing.kset_distance_curve("S", 1, times, n=2)
        assert np.all(single.values <= full.values + 1e-12)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            mixing.full_tv_exact("S", 1.0, n=4)


class TestMonteCarlo:
    def test_reproducible(self, pool):
        a = mixing.kset_distance_mc("S", 1, 3.0, 3000, seed=5, n=3)
        b = mixing.kset_distance_mc("S", 1, 3.0, 3000, seed=5, n=3, threadpool=pool)
        assert a == b

    @pytest.mark.parametrize("n,t,reps", [(3, 2.0, 20000), (6, 30.0, 100000)])
    def test_interval_contains_exact(self, n, t, reps):
        curve = mixing.kset_distance_curve("S", 1, [t], n=n)
        (worst,) = curve.metadata["worst_starts"][0]
        estimate = mixing.kset_distance_mc(
            "S", 1, t, reps, seed=0, n=n, starts=[worst]
        )
        assert estimate.lo <= estimate.value <= estimate.hi
        assert estimate.lo - 0.005 <= curve.values[0] <= estimate.hi + 0.005

    def test_default_start_is_below_exact(self):
        exact = mixing.kset_distance_exact("S", 1, 2.0, n=3)
        estimate = mixing.kset_distance_mc("S", 1, 2.0, 20000, seed=0, n=3)
        assert estimate.starts == (2,)
        assert estimate.lo <= exact

    @pytest.mark.parametrize(
        "family,k,expected", [("S", 1, [3]), ("S", 2, [3, 12]), ("S0", 1, [15])]
    )
    def test_slowest_cells(self, family, k, expected):
        assert mixing.slowest_cells(family, k, n=4).tolist() == expected
        assert mixing.slowest_cells("R", k, n=4).tolist() == list(range(k))

    def test_time_zero(self):
        estimate = mixing.kset_distance_mc("S0", 2, 0.0, 100, seed=0, n=3)
        assert estimate.value == pytest.approx(1 - 1 / 72)

    def test_needs_replicates(self):
        with pytest.raises(DomainError):
            mixing.kset_distance_mc("S", 1, 1.0, 0, seed=0, n=3)

    def test_curve_metadata(self):
        curve = mixing.kset_distance_mc_curve("R", 1, [0.0, 1.0], 500, 7, n=3)
        assert curve.method == "mc"
        assert curve.metadata["seed"] == 7
        assert curve.metadata["replicates"] == 500
        assert curve.metadata["starts"] == [[1, 1]]
        assert np.all(curve.lo <= curve.values)
