"""
Tests for complexity tables, entropy estimates, exact SFT entropy,
separated counting and preimage trees.
"""

import math
from fractions import Fraction

import pytest

from shiftlab.core.exceptions import (
    ContractViolationError,
    CrossCheckError,
    EmptySubshiftError,
    InsufficientDataError,
)
from shiftlab.dynamics.entropy import (
    LOG2,
    SpectralResult,
    complexity,
    entropy_estimate,
    first_difference,
    path_growth_rate,
    preimage_tree,
    prepend_selectors,
    separated_count,
    separated_profile,
    sft_entropy_exact,
    shift_once,
    to_bits,
    weighted_distance,
)
from shiftlab.dynamics.noninv import tau
from shiftlab.dynamics.subshifts import (
    ForbiddenWordsShift,
    FullShift,
    PeriodicOrbits,
    PrefixStreamOracle,
    SturmianShift,
    TransferGraph,
    product_oracle,
    sft_approximation,
)
from shiftlab.dynamics.words import PeriodicStream, WordStream, de_bruijn, weighted_norm

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


@pytest.fixture
def golden():
    return ForbiddenWordsShift("01", ["11"])


@pytest.fixture
def fib():
    return SturmianShift(Fraction(233, 610), "golden")


class TestComplexity:
    """Test complexity tables."""

    def test_full_shift(self):
        table = complexity(FullShift("01"), 5)
        assert table.count_at(5) == 32

    def test_golden_mean(self, golden):
        assert complexity(golden, 5).counts() == [2, 3, 5, 8, 13]

    def test_sturmian(self, fib):
        assert complexity(fib, 5).count_at(5) == 6

    def test_slopes(self, golden):
        for row in complexity(golden, 20).rows:
            assert row.slope == pytest.approx(math.log(row.count) / row.n, abs=1e-12)

    @pytest.mark.parametrize("name", ["golden", "fib", "period"])
    def test_submultiplicative(self, name, golden, fib):
        oracle = {"golden": golden, "fib": fib, "period": PeriodicOrbits(["001", "01"])}[name]
        assert complexity(oracle, 20).is_submultiplicative()

    def test_truncated_at_cap(self):
        table = complexity(SturmianShift(Fraction(233, 610), enumeration_cap=10), 12)
        assert table.truncated
        assert table.n_max == 9

    def test_missing_row(self, golden):
        with pytest.raises(InsufficientDataError):
            complexity(golden, 3).count_at(4)


class TestEntropyEstimate:
    """Test entropy estimates from tables."""

    def test_full_shift_is_log_two(self):
        estimate = entropy_estimate(complexity(FullShift("01"), 20))
        assert estimate.final_slope == pytest.approx(LOG2, abs=1e-12)
        assert estimate.fit_slope == pytest.approx(LOG2, abs=1e-9)

    def test_golden_mean_against_exact_value(self, golden):
        estimate = entropy_estimate(complexity(golden, 30))
        exact = sft_entropy_exact(golden.graph)
        assert estimate.final_slope == pytest.approx(exact, abs=0.05)
        assert estimate.fit_slope == pytest.approx(exact, abs=0.05)

    def test_sturmian_tends_to_zero(self, fib):
        estimate = entropy_estimate(complexity(fib, 30))
        assert estimate.final_slope <= math.log(31) / 30 + 1e-12

    def test_product_with_full_shift(self, fib):
        estimate = entropy_estimate(complexity(product_oracle(fib, FullShift("01")), 16))
        assert estimate.fit_slope == pytest.approx(LOG2, abs=0.12)

    def test_sample_based_note(self):
        oracle = PrefixStreamOracle(PeriodicStream("0010"), horizon=40)
        estimate = entropy_estimate(complexity(oracle, 8))
        assert "sample-based" in estimate.note

    def test_needs_four_rows(self, golden):
        with pytest.raises(InsufficientDataError):
            entropy_estimate(complexity(golden, 3))

    def test_bits(self):
        assert to_bits(LOG2) == pytest.approx(1.0)


class TestExactEntropy:
    """Test sft_entropy_exact."""

    def test_full_shift(self):
        assert sft_entropy_exact(sft_approximation(FullShift("01"), 1)) == pytest.approx(LOG2, abs=1e-9)

    def test_golden_mean(self, golden):
        assert sft_entropy_exact(golden.graph) == pytest.approx(LOG_PHI, abs=1e-9)

    def test_cycle_has_zero_entropy(self):
        assert sft_entropy_exact(sft_approximation(PeriodicOrbits(["001"]), 2)) == pytest.approx(0.0, abs=1e-9)

    def test_path_growth_agrees(self, golden):
        assert path_growth_rate(golden.graph, 30) == pytest.approx(sft_entropy_exact(golden.graph), abs=1e-9)

    def test_disagreement_with_path_counts(self, golden, mocker):
        mocker.patch("shiftlab.dynamics.entropy.spectral_radius", return_value=SpectralResult(1.5, 10, True, 3))
        with pytest.raises(CrossCheckError):
            sft_entropy_exact(golden.graph)

    def test_reducible_graph_skips_path_counts(self):
        # 0^a 1^b: two fixed points joined by one edge, N_n = n + 1.
        graph = TransferGraph(1, [("0",), ("1",)], [("0", "0"), ("0", "1"), ("1", "1")])
        assert sft_entropy_exact(graph) == pytest.approx(0.0, abs=1e-9)

    def test_empty_graph(self):
        with pytest.raises(EmptySubshiftError):
            sft_entropy_exact(TransferGraph(1, [("0",), ("1",)], [("0", "1")]))

    @pytest.mark.parametrize("name", ["golden", "fib", "period"])
    def test_approximations_do_not_gain_entropy(self, name, golden, fib):
        oracle = {"golden": golden, "fib": fib, "period": PeriodicOrbits(["001", "01"])}[name]
        values = [sft_entropy_exact(sft_approximation(oracle, m)) for m in range(1, 7)]
        for coarse, fine in zip(values, values[1:]):
            assert fine <= coarse + 1e-6


class TestSeparatedCount:
    """Test quantized separated counting."""

    def test_constant_stream(self):
        stream = PeriodicStream((0.7,))
        for n in (1, 5, 20):
            assert separated_count(stream, n, 0.1, horizon=50) == 1

    def test_two_phases(self):
        assert separated_count(PeriodicStream((0.9, 0.1)), 4, 0.1, horizon=50) == 2

    def test_de_bruijn_prefix_realizes_every_word(self):
        word = tuple(Fraction(int(c)) for c in de_bruijn("01", 10))
        count = separated_count(WordStream(word), 10, Fraction(1, 2), horizon=len(word) - 10)
        assert count == 1024

    def test_horizon_too_long(self):
        with pytest.raises(InsufficientDataError):
            separated_count(WordStream((0.5,) * 10), 4, 0.1, horizon=10)

    def test_profile_rows(self):
        rows = separated_profile(PeriodicStream((0.9, 0.1)), [1, 2, 8], 0.1, prefix_length=40)
        assert [count for _, count, _ in rows] == [2, 2, 2]
        assert rows[-1][2] == pytest.approx(math.log(2) / 8)


class TestPreimageTree:
    """Test preimage trees and their separation checks."""

    def test_full_shift_three_levels(self):
        family = preimage_tree(("0",), prepend_selectors("01"), 3, shift_once, first_difference,
                               delta=1, strict=False)
        assert family.size == 8
        assert family.pairwise_checked
        assert family.level_separation == [1, 1, 1]

    def test_full_shift_ten_levels(self):
        family = preimage_tree(("0",), prepend_selectors("01"), 10, shift_once, first_difference,
                               delta=1, strict=False)
        assert family.size == 1024
        assert family.slope == pytest.approx(LOG2, abs=1e-12)

    def test_points_carry_their_address(self):
        family = preimage_tree(("0",), prepend_selectors("01"), 4, shift_once, first_difference)
        assert family.points[(1, 0, 1, 1)] == ("1", "0", "1", "1", "0")

    def test_coinciding_selectors(self):
        same = (lambda y: ("0",) + y, lambda y: ("0",) + y)
        with pytest.raises(ContractViolationError):
            preimage_tree(("0",), same, 2, shift_once, first_difference, delta=1, strict=False)

    def test_selector_that_is_not_a_preimage(self):
        broken = (lambda y: ("0",) + y, lambda y: ("1",) + y[1:])
        with pytest.raises(ContractViolationError) as excinfo:
            preimage_tree(("0", "1"), broken, 1, shift_once, first_difference)
        assert excinfo.value.word == (1,)

    def test_theta_branches_shrink_with_depth(self):
        """Branch gaps of tau_0 and tau_1 are |y|/16 and shrink level by level."""
        x = (Fraction(1, 2), Fraction(1))
        selectors = (lambda y: tau("0", y), lambda y: tau("1", y))
        family = preimage_tree(x, selectors, 6, shift_once, weighted_distance)
        assert family.size == 64
        assert family.level_separation[0] == weighted_norm(x) / 16
        gaps = family.level_separation
        assert all(deeper < shallower for shallower, deeper in zip(gaps, gaps[1:]))
