import fractions
import math

import numpy as np
import pytest
from scipy import linalg

from cornershuffle import comparison
from cornershuffle import mixing
from cornershuffle import spectral
from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError
from cornershuffle.spectral import Partition


class TestPartitions:
    def test_partitions_of_4(self):
        assert spectral.partitions(4) == [
            (4,),
            (3, 1),
            (2, 2),
            (2, 1, 1),
            (1, 1, 1, 1),
        ]

    @pytest.mark.parametrize("m,count", [(0, 1), (1, 1), (5, 7), (9, 30), (20, 627)])
    def test_counts(self, m, count):
        assert len(spectral.partitions(m)) == count
        assert spectral.partition_count(m) == count

    def test_cap(self):
        with pytest.raises(CapExceeded) as e_info:
            spectral.partitions(41)
        assert e_info.value.cap_name == "partition_max_m"

    @pytest.mark.parametrize("parts", [(1, 2), (2, 0), (3, -1)])
    def test_invalid(self, parts):
        with pytest.raises(DomainError):
            Partition(parts)

    def test_conjugate(self):
        assert spectral.conjugate((3, 1)) == (2, 1, 1)
        assert Partition((4, 2, 1)).conjugate().conjugate() == (4, 2, 1)

    def test_shape(self):
        p = Partition((3, 1))
        assert p.m == 4 and p.t1 == 3 and p.t1_conjugate == 2
        assert p.cells() == [(1, 1), (1, 2), (1, 3), (2, 1)]
        assert sorted(p.hooks()) == [1, 1, 2, 4]
        assert p.content_square_sum() == 6

    def test_dimensions(self):
        assert spectral.dimension((2, 1)) == 2
        assert spectral.dimension((3, 2)) == 5
        for m in range(1, 9):
            total = sum(spectral.dimension(p) ** 2 for p in spectral.partitions(m))
            assert total == math.factorial(m)


class TestCharacters:
    def test_s3(self):
        tau = spectral.three_cycle_class(3)
        assert spectral.mn_character((3,), tau) == 1
        assert spectral.mn_character((2, 1), tau) == -1
        assert spectral.mn_character((1, 1, 1), tau) == 1

    def test_s4_table_entries(self):
        assert spectral.mn_character((2, 2), (2, 2)) == 2
        assert spectral.mn_character((2, 2), (2, 1, 1)) == 0
        assert spectral.mn_character((3, 1), (4,)) == -1
        assert spectral.mn_character((1, 1, 1, 1), (4,)) == -1

    def test_identity_class_is_dimension(self):
        for p in spectral.partitions(7):
            assert spectral.mn_character(p, (1,) * 7) == spectral.dimension(p)

    @pytest.mark.parametrize("m", [4, 6, 8])
    def test_column_orthogonality(self, m):
        tau = spectral.three_cycle_class(m)
        transposition = Partition((2,) + (1,) * (m - 2))
        ps = spectral.partitions(m)
        chi_tau = [spectral.mn_character(p, tau) for p in ps]
        chi_sw = [spectral.mn_character(p, transposition) for p in ps]
        # Centralizer of a three-cycle has order 3 (m - 3)!.
        assert sum(c * c for c in chi_tau) == 3 * math.factorial(m - 3)
        assert sum(a * b for a, b in zip(chi_tau, chi_sw)) == 0

    def test_degree_mismatch(self):
        with pytest.raises(DomainError):
            spectral.mn_character((2, 1), (2, 2))

    def test_no_three_cycles(self):
        with pytest.raises(DomainError):
            spectral.three_cycle_class(2)


class TestIngram:
    @pytest.mark.parametrize(
        "parts,r",
        [
            ((3,), 1),
            ((2, 1), fractions.Fraction(-1, 2)),
            ((1, 1, 1), 1),
            ((3, 1), 0),
            ((2, 2), fractions.Fraction(-1, 2)),
        ],
    )
    def test_values(self, parts, r):
        assert spectral.ingram_r(parts) == r

    @pytest.mark.parametrize("m", range(3, 10))
    def test_matches_characters(self, m):
        tau = spectral.three_cycle_class(m)
        for p in spectral.partitions(m):
            chi = spectral.mn_character(p, tau)
            expected = fractions.Fraction(chi, spectral.dimension(p))
            assert spectral.ingram_r(p) == expected

    def test_conjugates_agree(self):
        for p in spectral.partitions(8):
            assert spectral.ingram_r(p) == spectral.ingram_r(p.conjugate())

    def test_needs_three(self):
        with pytest.raises(DomainError):
            spectral.ingram_r((2,))


class TestCharBounds:
    @pytest.mark.parametrize("m", range(3, 15))
    def test_bounds_hold(self, m):
        for p in spectral.partitions(m):
            bound, _ = spectral.char_bounds(p)
            assert spectral.ingram_r(p) <= bound

    def test_cases(self):
        assert spectral.char_bounds((6, 2, 2))[1] == "t1>=m/2"
        assert spectral.char_bounds((3, 3, 2, 2))[1] == "both<=m/2"
        assert spectral.char_bounds((2, 1, 1, 1, 1, 1, 1))[1] == "dual"

    def test_hook_is_tight(self):
        p = Partition((5, 1, 1, 1, 1, 1))
        bound, case = spectral.char_bounds(p)
        assert case == "t1>=m/2"
        assert bound == spectral.ingram_r(p) == fractions.Fraction(1, 6)

    def test_short_shapes(self):
        bound, _ = spectral.char_bounds((3, 3, 2, 2))
        assert bound == fractions.Fraction(3, 8)


class TestSpectrum:
    def test_multiplicities(self):
        entries = spectral.r_spectrum(6)
        assert sum(e.multiplicity for e in entries) == math.factorial(6)
        assert sum(1 for e in entries if e.r == 1) == 2

    def test_small_m(self):
        with pytest.raises(DomainError):
            spectral.r_spectrum(2)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            spectral.r_spectrum(26)

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_kernel_eigenvalues(self, m):
        kernel = spectral.r_kernel(m)
        assert len(kernel) == math.factorial(m)
        assert kernel.is_doubly_stochastic()
        entries = spectral.r_spectrum(m)
        expected = np.sort(
            np.concatenate([np.full(e.multiplicity, float(e.r)) for e in entries])
        )
        eigs = np.sort(linalg.eigvalsh(kernel.matrix.toarray()))
        np.testing.assert_allclose(eigs, expected, atol=1e-9)

    def test_kernel_cap(self):
        with pytest.raises(CapExceeded) as e_info:
            spectral.r_kernel(8)
        assert e_info.value.cap_name == "r_kernel_max_m"

    def test_space_index(self):
        space = spectral.spectrum.SymmetricSpace(4)
        np.testing.assert_array_equal(
            space.index(space.elements), np.arange(math.factorial(4))
        )


class TestAlternatingSign:
    @pytest.mark.parametrize(
        "n,family,value",
        [
            (2, "S", fractions.Fraction(0)),
            (3, "S", fractions.Fraction(-1, 3)),
            (3, "S0", fractions.Fraction(-1, 3)),
        ],
    )
    def test_values(self, n, family, value):
        assert spectral.alternating_mean_sign(n, family) == value

    def test_matches_formula(self):
        for n in range(2, 9):
            total = sum(
                (-1) ** (i * j // 2) for i in range(1, n + 1) for j in range(1, n + 1)
            )
            expected = fractions.Fraction(total, n * n)
            assert spectral.alternating_mean_sign(n, "S0") == expected
            assert spectral.alternating_mean_sign(n, "S") == expected

    def test_r_is_rejected(self):
        with pytest.raises(DomainError):
            spectral.alternating_mean_sign(3, "R")


class TestUpperBound:
    def test_time_zero(self):
        for n in (2, 3):
            m = n * n
            value = spectral.ubl_bound(n, 0.0, 1, 0, clamp=False)
            assert value == pytest.approx(0.5 * math.sqrt(math.factorial(m) - 1))
            assert spectral.ubl_bound(n, 0.0, 1, 0) == 1.0

    def test_decreasing(self):
        t = np.linspace(0, 20, 41)
        values = spectral.ubl_bound(3, t, 50, fractions.Fraction(-1, 3))
        assert values.shape == t.shape
        assert np.all(np.diff(values) <= 1e-12)

    @pytest.mark.parametrize("c,lambda2,t", [(0, 0, 1.0), (2, 2, 1.0), (2, 0, -1.0)])
    def test_rejects(self, c, lambda2, t):
        with pytest.raises(DomainError):
            spectral.ubl_bound(2, t, c, lambda2)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            spectral.ubl_bound(6, 1.0, 1, 0)

    def test_partial_sums(self):
        t = np.array([0.5, 2.0, 8.0])
        c, lambda2 = 10, fractions.Fraction(-1, 3)
        near, rest = spectral.ubl_partial_sums(3, t, 0.25)
        bound = spectral.ubl_bound(3, t, c, lambda2, clamp=False)
        alternating = np.exp(-2 * c * t * (1 - float(lambda2)))
        np.testing.assert_allclose(near + rest, (2 * bound) ** 2 - alternating)

    def test_partial_sums_warns(self):
        with pytest.warns(UserWarning):
            spectral.ubl_partial_sums(2, 1.0, 0.75)

    def test_bounds_corner_shuffle_n2(self):
        report = comparison.comparison_constant(2, "S", strategy="auto")
        lambda2 = spectral.alternating_mean_sign(2, "S")
        t = np.array([0.5, 1.0, 2.0, 4.0])
        bound = spectral.ubl_bound(2, t, report.B, lambda2)
        exact = mixing.full_tv_curve("S", float(report.B) * t, n=2)
        assert np.all(exact.values <= bound + 1e-9)
