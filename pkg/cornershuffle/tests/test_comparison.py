import contextlib
import fractions
import math
from concurrent import futures

import pytest

from cornershuffle import comparison
from cornershuffle.comparison.decompose import MAX_LENGTHS
from cornershuffle.comparison.words import MAX_W
from cornershuffle.comparison.words import MAX_X
from cornershuffle.comparison.words import MAX_Y
from cornershuffle.comparison.words import MAX_Z
from cornershuffle.errors import CapExceeded
from cornershuffle.errors import DomainError
from cornershuffle.errors import InfeasibleDecomposition
from cornershuffle.errors import VerificationFailure
from cornershuffle.perm import TOP
from cornershuffle.perm import UL
from cornershuffle.perm import Perm
from cornershuffle.perm import Position
from cornershuffle.perm import corner_move_perm
from cornershuffle.perm import three_cycle


@pytest.fixture(params=["nopool", "threadpool"])
def pool(request):
    if request.param == "threadpool":
        with futures.ThreadPoolExecutor(max_workers=4) as tp:
            yield tp
    else:
        with contextlib.nullcontext():
            yield None


class TestMoveWord:
    def test_product_is_checked(self):
        with pytest.raises(VerificationFailure):
            comparison.MoveWord.from_moves(3, [UL(2, 2)], target=Perm.identity(3))

    def test_occurrences(self):
        word = comparison.MoveWord.from_moves(3, [UL(2, 2), UL(1, 2), UL(2, 2)])
        counts = word.occurrences()
        assert counts.sum() == 3
        assert len(counts) == 18
        assert counts[4] == 2 and counts[1] == 1

    def test_read_only_codes(self):
        word = comparison.build_X(5, 3, 3)
        with pytest.raises(ValueError):
            word.codes[0] = 0


class TestWords:
    @pytest.mark.parametrize("n", [5, 7])
    def test_x_lengths(self, n):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                assert len(comparison.build_X(n, i, j)) <= MAX_X

    def test_x_swaps_top_with_pivot(self):
        # X_ij moves T to (i, j) whatever the pivot.
        for i in range(1, 6):
            for j in range(1, 6):
                x = comparison.build_X(5, i, j)
                assert x.target(TOP) == Position(i, j)

    @pytest.mark.parametrize("n", [5, 6, 8])
    def test_y_claims(self, n):
        for i in range(2, n + 1):
            for j in range(2, n + 1):
                y = comparison.build_Y(n, i, j)
                assert len(y) <= MAX_Y
                assert y.target == comparison.y_claim(n, i, j)

    def test_y_claim_is_double_transposition(self):
        claim = comparison.y_claim(5, 3, 4)
        assert claim(Position(3, 4)) == TOP
        assert claim(Position(3, 1)) == Position(1, 4)
        assert comparison.y_claim(5, 1, 4) is None

    def test_y_products_table(self):
        table = comparison.y_products(4)
        assert len(table) == 16
        statuses = {(i, j): status for i, j, _, status in table}
        assert statuses[(1, 3)] == "recorded"
        assert statuses[(2, 2)] == "claimed"

    def test_z(self):
        p1, p2 = Position(2, 3), Position(4, 2)
        z = comparison.build_Z(5, p1, p2)
        assert len(z) <= MAX_Z
        assert z.target == three_cycle(5, TOP, p2, p1)

    def test_w(self):
        p1, p2, p3 = Position(2, 3), Position(4, 2), Position(5, 5)
        w = comparison.build_W(5, p1, p2, p3)
        assert len(w) <= MAX_W
        assert w.target == three_cycle(5, p3, p2, p1)

    @pytest.mark.parametrize(
        "p1,p2", [((2, 3), (2, 4)), ((2, 3), (4, 3)), ((1, 1), (2, 2))]
    )
    def test_z_rejects(self, p1, p2):
        with pytest.raises(DomainError):
            comparison.build_Z(5, p1, p2)

    def test_w_rejects_shared_row(self):
        with pytest.raises(DomainError):
            comparison.build_W(5, (2, 3), (2, 4), (5, 5))

    def test_pivot_range(self):
        with pytest.raises(DomainError):
            comparison.build_X(4, 5, 1)


class TestDecompose:
    def test_three_cycle_count(self):
        assert len(list(comparison.three_cycles(3))) == 2 * math.comb(9, 3)

    @pytest.mark.parametrize(
        "cells,case",
        [
            (((1, 2), (2, 3), (3, 1)), "A3"),
            (((1, 1), (2, 3), (3, 2)), "A3_top"),
            (((1, 1), (1, 2), (3, 3)), "A2"),
        ],
    )
    def test_classify(self, cells, case):
        assert comparison.classify(tuple(Position(*c) for c in cells)) == case

    def test_every_case_realizes_its_cycle(self):
        n = 5
        for cells in [
            (Position(1, 2), Position(2, 3), Position(3, 1)),
            (Position(2, 2), Position(1, 1), Position(3, 4)),
            (Position(1, 1), Position(1, 5), Position(4, 1)),
            (Position(2, 2), Position(2, 3), Position(2, 4)),
        ]:
            word = comparison.decompose_cells(n, *cells)
            assert word.target == three_cycle(n, *cells)
            assert len(word) <= MAX_LENGTHS[comparison.classify(cells)]

    def test_helper_pair(self):
        cells = (Position(1, 1), Position(1, 2), Position(2, 1))
        d, e = comparison.helper_pair(5, cells)
        assert d.row != e.row and d.col != e.col
        for p in (d, e):
            assert p.row not in (1, 2) and p.col not in (1, 2)

    def test_helper_pair_infeasible(self):
        cells = (Position(1, 1), Position(2, 1), Position(3, 2))
        with pytest.raises(InfeasibleDecomposition):
            comparison.helper_pair(4, cells)

    def test_unknown_strategy(self):
        with pytest.raises(DomainError):
            comparison.decompose_cells(3, TOP, Position(1, 2), Position(2, 1), "best")

    def test_decompose_three_cycle(self):
        c = three_cycle(5, Position(3, 3), Position(1, 4), Position(5, 2))
        assert comparison.decompose_three_cycle(5, c).target == c
        with pytest.raises(DomainError):
            comparison.decompose_three_cycle(5, corner_move_perm(5, UL(2, 2)))

    def test_shortest_words_n2(self):
        words = comparison.shortest_words(2)
        assert len(words) == 8
        for cells, word in words.items():
            assert word.target == three_cycle(2, *cells)

    def test_auto_falls_back_for_small_arrays(self):
        cells = (TOP, Position(1, 2), Position(2, 1))
        with pytest.raises(InfeasibleDecomposition):
            comparison.decompose_cells(2, *cells)
        word = comparison.decompose_cells(2, *cells, strategy="auto")
        assert word.target == three_cycle(2, *cells)


class TestComparisonConstant:
    def test_exhaustive_n5(self, pool):
        report = comparison.comparison_constant(5, threadpool=pool)
        assert report.failures == []
        assert report.cycles == 2 * math.comb(25, 3)
        assert sum(report.cases.values()) == report.cycles
        assert report.max_length <= MAX_LENGTHS["A2"]
        assert report.max_support <= report.support_bound
        assert isinstance(report.B, fractions.Fraction)

    def test_s_doubles_s0(self):
        s0 = comparison.comparison_constant(5, "S0")
        s = comparison.comparison_constant(5, "S")
        assert s.B == 2 * s0.B

    def test_pool_does_not_change_report(self, pool):
        serial = comparison.comparison_constant(5).to_dict()
        pooled = comparison.comparison_constant(5, threadpool=pool).to_dict()
        assert serial == pooled

    def test_sampled_is_reproducible(self):
        a = comparison.comparison_constant(6, exhaustive=False, samples=300, seed=4)
        b = comparison.comparison_constant(6, exhaustive=False, samples=300, seed=4)
        assert a.to_dict() == b.to_dict()
        assert a.cycles == 300
        assert not a.exhaustive

    def test_helpers_fail_on_small_arrays(self):
        report = comparison.comparison_constant(2)
        assert report.failures
        assert report.B is None
        assert comparison.comparison_constant(2, strategy="auto").failures == []

    def test_failures_withhold_constant(self):
        # Shared-line cycles need a helper pair, which a 4x4 array lacks.
        report = comparison.comparison_constant(4, "S", strategy="auto")
        assert report.failures
        assert report.B is None
        assert report.to_dict()["B"] is None
        with pytest.raises(VerificationFailure):
            report.constant()
        with pytest.raises(VerificationFailure):
            comparison.comparison_check(4, "S")

    def test_r_is_rejected(self):
        with pytest.raises(DomainError):
            comparison.comparison_constant(5, "R")

    def test_exhaustive_cap(self):
        with pytest.raises(CapExceeded) as e_info:
            comparison.comparison_constant(11)
        assert e_info.value.cap_name == "exhaustive_max_n"

    def test_dirichlet_comparison_n2(self):
        holds, details = comparison.comparison_check(2, "S")
        assert holds
        assert details["worst_margin"] >= -1e-9

    def test_verify_decompositions(self):
        result = comparison.verify_decompositions(5)
        assert result["ok"]
        assert result["y_claims_verified"] == 16
        assert fractions.Fraction(result["B_S"]) == 2 * fractions.Fraction(result["B"])
