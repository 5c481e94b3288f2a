"""
Tests for partition entropies and the Rohlin distance.
"""

import math
from fractions import Fraction

import pytest

from shiftlab.core.exceptions import ParameterError, SampleMismatchError
from shiftlab.dynamics.partitions import (
    TAIL_ATOM,
    Partition,
    WeightedSample,
    conditional_entropy,
    equivalent,
    join,
    load_partitions,
    mutual_information,
    rohlin_distance,
    shannon_entropy,
    summarize,
    truncate,
)

LOG2 = math.log(2)


@pytest.fixture
def quarters():
    return WeightedSample.uniform(4)


@pytest.fixture
def halves(quarters):
    return Partition(quarters, [0, 0, 1, 1])


@pytest.fixture
def alternating(quarters):
    return Partition(quarters, [0, 1, 0, 1])


class TestWeightedSample:
    """Test WeightedSample validation."""

    def test_masses_must_sum_to_one(self):
        with pytest.raises(ParameterError):
            WeightedSample((0, 1), (Fraction(1, 2), Fraction(1, 3)))

    def test_float_masses_within_tolerance(self):
        sample = WeightedSample((0, 1, 2), (0.1, 0.2, 0.7))
        assert not sample.exact

    def test_geometric_closes_at_one(self):
        sample = WeightedSample.geometric(5)
        assert sample.masses == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 16))

    def test_distinct_points(self):
        with pytest.raises(ParameterError):
            WeightedSample((0, 0), (Fraction(1, 2), Fraction(1, 2)))


class TestShannonEntropy:
    """Test H(P)."""

    def test_trivial(self, quarters):
        assert shannon_entropy(Partition.trivial(quarters)) == 0

    def test_two_halves(self, halves):
        assert shannon_entropy(halves) == pytest.approx(LOG2)

    def test_half_quarter_quarter(self, quarters):
        assert shannon_entropy(Partition(quarters, [0, 0, 1, 2])) == pytest.approx(1.5 * LOG2)

    def test_zero_mass_atoms_ignored(self):
        sample = WeightedSample((0, 1, 2), (Fraction(1, 2), Fraction(1, 2), Fraction(0)))
        assert shannon_entropy(Partition.discrete(sample)) == pytest.approx(LOG2)


class TestConditionalEntropy:
    """Test H(P|Q), mutual information and joins."""

    def test_self(self, halves):
        assert conditional_entropy(halves, halves) == 0

    def test_given_trivial(self, halves, quarters):
        assert conditional_entropy(halves, Partition.trivial(quarters)) == pytest.approx(shannon_entropy(halves))

    def test_independent_halves(self, halves, alternating):
        assert conditional_entropy(halves, alternating) == pytest.approx(LOG2)
        assert mutual_information(halves, alternating) == pytest.approx(0.0, abs=1e-12)

    def test_join_refines_both(self, halves, alternating):
        joined = join(halves, alternating)
        assert len(joined.atoms) == 4
        assert conditional_entropy(halves, joined) == 0

    def test_different_samples(self, halves):
        other = Partition(WeightedSample.uniform(4), [0, 1, 1, 1])
        assert other.sample == halves.sample
        with pytest.raises(SampleMismatchError):
            conditional_entropy(halves, Partition(WeightedSample.uniform(2), [0, 1]))


class TestRohlinDistance:
    """Test the Rohlin distance."""

    def test_identity(self, halves):
        assert rohlin_distance(halves, halves) == 0

    def test_halves_to_trivial(self, halves, quarters):
        assert rohlin_distance(halves, Partition.trivial(quarters)) == pytest.approx(LOG2)

    def test_symmetric(self, halves, alternating):
        assert rohlin_distance(halves, alternating) == pytest.approx(rohlin_distance(alternating, halves))

    def test_triangle_inequality(self, rng):
        sample = WeightedSample.uniform(64)
        for _ in range(10000):
            p, q, r = (Partition(sample, [rng.randrange(4) for _ in range(64)]) for _ in range(3))
            assert rohlin_distance(p, r) <= rohlin_distance(p, q) + rohlin_distance(q, r) + 1e-12

    def test_summary_is_consistent(self, halves, alternating):
        summary = summarize(halves, alternating)
        assert summary.distance == pytest.approx(summary.h_p_given_q + summary.h_q_given_p)
        assert set(summary.to_dict()) == {"H(P)", "H(Q)", "H(P|Q)", "H(Q|P)", "d(P,Q)", "I(P;Q)"}


class TestTruncate:
    """Test P^(n) truncations."""

    def test_small_partitions_unchanged(self, halves):
        assert truncate(halves, 2) is halves
        assert truncate(halves, 5) is halves

    def test_tail_atom(self, quarters):
        truncated = truncate(Partition.discrete(quarters), 2)
        assert truncated.labels == (0, 1, TAIL_ATOM, TAIL_ATOM)

    def test_geometric_distances_decrease(self):
        p = Partition.discrete(WeightedSample.geometric(40))
        distances = [rohlin_distance(truncate(p, n), p) for n in range(1, 30)]
        assert all(later < earlier for earlier, later in zip(distances, distances[1:]))

    def test_small_tail_is_close(self):
        p = Partition.discrete(WeightedSample.geometric(40))
        for n in range(14, 30):
            assert rohlin_distance(truncate(p, n), p) < 1e-3

    def test_invalid_size(self, halves):
        with pytest.raises(ParameterError):
            truncate(halves, 0)


class TestEquivalence:
    """Test equivalence up to null sets."""

    def test_relabelled_atoms(self, halves, quarters):
        assert equivalent(halves, Partition(quarters, ["x", "x", "y", "y"]))
        assert not equivalent(halves, Partition(quarters, [0, 1, 1, 1]))

    def test_null_points_ignored(self):
        sample = WeightedSample((0, 1, 2), (Fraction(1, 2), Fraction(1, 2), Fraction(0)))
        assert equivalent(Partition(sample, [0, 1, 2]), Partition(sample, [0, 1, 1]))


class TestLoadPartitions:
    """Test the partition CSV format."""

    def test_round_values(self, tmp_path):
        path = tmp_path / "sample.csv"
        path.write_text("point,mass,atomP,atomQ\n# comment\na,1/4,0,0\nb,1/4,0,1\nc,1/4,1,0\nd,1/4,1,1\n",
                        encoding="utf-8")
        p, q = load_partitions(path)
        assert p.sample.points == ("a", "b", "c", "d")
        assert conditional_entropy(p, q) == pytest.approx(LOG2)

    def test_bad_row(self, tmp_path):
        path = tmp_path / "sample.csv"
        path.write_text("a,1/2,0\n", encoding="utf-8")
        with pytest.raises(ParameterError):
            load_partitions(path)
