"""
Tests for extension sets, branching profiles, the periodic-orbit decision
and predictor/forcing word searches.
"""

from fractions import Fraction

import pytest

from shiftlab.core.exceptions import EmptySubshiftError, NotFoundError, NotInLanguageError
from shiftlab.dynamics.prediction import (
    branching_horizon,
    extensions,
    find_forcing_word,
    find_predictor_word,
    is_periodic_union,
    past_branching,
    verify_predictor,
)
from shiftlab.dynamics.subshifts import (
    ForbiddenWordsShift,
    FullShift,
    GraphShift,
    PeriodicOrbits,
    PrefixStreamOracle,
    SturmianShift,
    TransferGraph,
    sft_approximation,
)
from shiftlab.dynamics.words import PeriodicStream


def _words(*texts):
    return {tuple(t) for t in texts}


@pytest.fixture
def golden():
    return ForbiddenWordsShift("01", ["11"])


@pytest.fixture
def fib():
    return SturmianShift(Fraction(233, 610), "golden")


class TestExtensions:
    """Test extension sets."""

    def test_golden_mean(self, golden):
        assert extensions(golden, "1", 1) == _words("0")
        assert extensions(golden, "0", 1) == _words("0", "1")

    def test_full_shift_extends_every_way(self):
        assert len(extensions(FullShift("01"), "0110", 3)) == 8

    def test_word_outside_language(self, golden):
        with pytest.raises(NotInLanguageError):
            extensions(golden, "11", 1)

    def test_sample_based_oracle(self):
        oracle = PrefixStreamOracle(PeriodicStream("001"), horizon=20)
        assert extensions(oracle, "1", 2) == _words("00")


class TestPastBranching:
    """Test branching profiles."""

    def test_fibonacci_four_step_futures(self, fib):
        profile = past_branching(fib, 3, 4)
        assert profile.max_extensions == 3
        assert profile.argmax_past == tuple("010")

    def test_fibonacci_two_step_futures(self, fib):
        assert past_branching(fib, 3, 2).max_extensions == 2

    def test_histogram_covers_every_past(self, fib, golden):
        for oracle in (fib, golden):
            profile = past_branching(oracle, 5, 3)
            assert sum(profile.histogram.values()) == oracle.count(5)
            assert profile.max_extensions >= 1

    def test_periodic_pasts_continue_uniquely(self):
        oracle = PeriodicOrbits(["00101"])
        for k in (1, 3, 7):
            assert past_branching(oracle, 5, k).max_extensions == 1

    def test_report_keys(self, fib):
        payload = past_branching(fib, 3, 4).to_dict()
        assert payload["witness"] == "010"
        assert payload["horizon"] == 7
        assert payload["sample_based"] is False

    @pytest.mark.parametrize("k", range(1, 9))
    def test_sturmian_branching_settles_at_two(self, fib, k):
        """Long enough pasts of a Sturmian word have at most two futures."""
        horizon = branching_horizon(fib, k, 64)
        assert horizon is not None
        for m in range(horizon, 65):
            assert past_branching(fib, m, k).max_extensions <= 2


class TestPeriodicUnion:
    """Test is_periodic_union."""

    def test_period_three_cycle(self):
        graph = sft_approximation(PeriodicOrbits(["001"]), 2)
        decision = is_periodic_union(graph)
        assert decision.periodic
        assert decision.cycle_length_total == 3

    def test_golden_mean_branches_at_zero(self, golden):
        decision = is_periodic_union(sft_approximation(golden, 1))
        assert not decision.periodic
        assert decision.witness == ("0",)
        assert decision.witness_extensions == ("0", "1")

    def test_full_shift(self):
        decision = is_periodic_union(sft_approximation(FullShift("01"), 1))
        assert not decision.periodic
        assert decision.witness == ("0",)

    def test_periodic_language_stays_bounded(self):
        graph = sft_approximation(PeriodicOrbits(["001", "01"]), 4)
        decision = is_periodic_union(graph)
        assert decision.periodic
        shift = GraphShift(graph)
        for n in range(1, 31):
            assert shift.count(n) <= decision.cycle_length_total

    def test_empty_essential_part(self):
        graph = TransferGraph(1, _words("0", "1"), _words("01"))
        with pytest.raises(EmptySubshiftError):
            is_periodic_union(graph)


class TestPredictorSearch:
    """Test find_predictor_word and find_forcing_word."""

    def test_fibonacci_empty_future_word(self, fib):
        witness = find_predictor_word(fib, "", 1, budget=4)
        # "1" is always followed by "0"; shorter than the classical "00".
        assert witness.b == ("1",)
        assert witness.continuation == ("0",)
        assert verify_predictor(fib, "00", "", 1)

    def test_period_two(self):
        witness = find_predictor_word(PeriodicOrbits(["01"]), "0", 1, budget=3)
        assert witness.b == ()
        assert witness.continuation == ("1",)
        assert witness.exact

    def test_full_shift_has_no_predictor(self):
        with pytest.raises(NotFoundError) as excinfo:
            find_predictor_word(FullShift("01"), "0", 1, budget=4)
        assert excinfo.value.budget == 4

    def test_predictors_survive_rescan(self, fib):
        for a in ("0", "01", "0100"):
            for k in (1, 2, 3):
                witness = find_predictor_word(fib, a, k, budget=12)
                assert verify_predictor(fib, witness.b, witness.a, k)

    def test_forcing_one(self, fib):
        assert find_forcing_word(fib, "1", budget=4).v == tuple("00")

    def test_forcing_zero(self, fib):
        witness = find_forcing_word(fib, "0", budget=8)
        assert witness.v == ("1",)
        assert extensions(fib, witness.v, 1) == _words("0")

    def test_forcing_period_three(self):
        witness = find_forcing_word(PeriodicOrbits(["001"]), "001", budget=4)
        assert witness.v == ("1",)
        assert witness.horizon == 4

    def test_forcing_word_outside_language(self, fib):
        with pytest.raises(NotInLanguageError):
            find_forcing_word(fib, "11", budget=4)
