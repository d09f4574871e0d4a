# Requires
#   pip install pytest-benchmark
# to run
import os

import numpy as np
import pytest

from cornershuffle import comparison
from cornershuffle import geometry
from cornershuffle import mixing
from cornershuffle import walk

EXPERIMENTS = {
    "(1): S, n=8, k=1": ("S", 8, 1),
    "(2): S0, n=8, k=1": ("S0", 8, 1),
    "(3): S, n=6, k=2": ("S", 6, 2),
    "(4): R, n=6, k=2": ("R", 6, 2),
}


@pytest.mark.parametrize("setting", EXPERIMENTS.values(), ids=EXPERIMENTS.keys())
class TestProfile:
    @pytest.fixture(autouse=True)
    def skip_on_ci(self):
        if os.environ.get("CI") == "true":
            pytest.skip("Not running benchmark on CI")

    @pytest.mark.benchmark(disable_gc=True, warmup=False)
    def test_exact_curve(self, setting, benchmark):
        family, n, k = setting
        times = mixing.time_grid(0, 10 * n, 40)

        def curve():
            return mixing.kset_distance_curve(family, k, times, n=n)

        result = benchmark(curve)
        assert result.is_monotone()

    @pytest.mark.benchmark(disable_gc=True, warmup=False)
    def test_sample_positions(self, setting, benchmark):
        family, n, k = setting
        positions = benchmark(
            walk.sample_positions, family, k, float(n * n), 10000, 0, n=n
        )
        assert positions.shape == (10000, k)


class TestProfileScans:
    @pytest.fixture(autouse=True)
    def skip_on_ci(self):
        if os.environ.get("CI") == "true":
            pytest.skip("Not running benchmark on CI")

    @pytest.mark.benchmark(disable_gc=True, warmup=False)
    def test_comparison_constant(self, benchmark):
        report = benchmark(comparison.comparison_constant, 6)
        assert not report.failures

    @pytest.mark.benchmark(disable_gc=True, warmup=False)
    def test_coupling(self, benchmark):
        run = benchmark(geometry.coupling_times, 8, 1, 200, 0)
        assert np.all(np.isfinite(run.times))
