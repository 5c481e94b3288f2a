"""
Tests for command handlers.
"""

import json
import math
from unittest.mock import Mock

import pytest

from shiftlab.commands.base import Command, CommandRegistry
from shiftlab.commands.language_commands import LanguageCommand
from shiftlab.core.exceptions import CommandExecutionError, ParameterError, ScheduleError, UsageError
from shiftlab.core.manifest import RunManifest


class TestCommandRegistry:
    """Test CommandRegistry class."""

    def test_register_command(self):
        """Test registering a command handler."""
        registry = CommandRegistry()
        mock_command = Mock()

        registry.register(mock_command)
        assert mock_command in registry._commands
        assert len(registry) == 1

    def test_unregister_command(self):
        """Test unregistering a command handler."""
        registry = CommandRegistry()
        mock_command = Mock()

        registry.register(mock_command)
        registry.unregister(mock_command)
        assert mock_command not in registry._commands

    def test_get_handler(self):
        """Test getting appropriate command handler."""
        registry = CommandRegistry()
        mock_command = Mock()
        mock_command.can_handle.return_value = True

        registry.register(mock_command)
        handler = registry.get_handler("lang")

        assert handler == mock_command
        mock_command.can_handle.assert_called_with("lang")

    def test_get_handler_not_found(self):
        """Test getting handler when none can handle the subcommand."""
        registry = CommandRegistry()
        mock_command = Mock()
        mock_command.can_handle.return_value = False

        registry.register(mock_command)
        assert registry.get_handler("lang") is None

    def test_execute_without_handler(self):
        """Test a subcommand nobody handles is a usage error."""
        with pytest.raises(UsageError):
            CommandRegistry().execute_command(RunManifest("lang"))

    def test_domain_errors_pass_through(self):
        """Test ShiftLabError subclasses reach the caller unchanged."""
        registry = CommandRegistry()
        mock_command = Mock()
        mock_command.can_handle.return_value = True
        mock_command.execute.side_effect = ParameterError("bad gap")
        registry.register(mock_command)

        with pytest.raises(ParameterError):
            registry.execute_command(RunManifest("markers"))

    def test_unexpected_errors_are_wrapped(self):
        """Test other exceptions become CommandExecutionError."""
        registry = CommandRegistry()
        mock_command = Mock()
        mock_command.can_handle.return_value = True
        mock_command.execute.side_effect = ValueError("boom")
        registry.register(mock_command)

        with pytest.raises(CommandExecutionError):
            registry.execute_command(RunManifest("markers"))

    def test_list_commands(self):
        """Test listing registered commands."""
        registry = CommandRegistry()
        registry.register(LanguageCommand())

        listing = registry.list_commands()
        assert listing["LanguageCommand"]["patterns"] == ["lang"]


class TestCommandHelpers:
    """Test helpers shared by command handlers."""

    def test_word_param(self):
        assert Command.word_param("0110") == ("0", "1", "1", "0")
        assert Command.word_param("a b c") == ("a", "b", "c")
        assert Command.word_param("") == ()

    def test_missing_context(self):
        with pytest.raises(CommandExecutionError):
            Command.service({}, "systems")


@pytest.fixture
def workbench(workbench_factory):
    return workbench_factory.create_workbench()


class TestLanguageCommand:
    """Test the lang subcommand."""

    def test_golden_mean_words(self, workbench):
        report = workbench.run(RunManifest("lang", "golden", {"n": 3}))

        assert [row[0] for row in report.rows] == ["000", "001", "010", "100", "101"]
        assert report.data["count"] == 5

    def test_check_flags(self, workbench):
        report = workbench.run(RunManifest("lang", "fib", {"n": 6, "check": True}))

        assert report.data["count"] == 7
        assert ["# factor_closed", True] in report.footer
        assert ["# extendable", True] in report.footer

    def test_needs_spec(self, workbench):
        with pytest.raises(UsageError):
            workbench.run(RunManifest("lang", None, {"n": 3}))

    def test_needs_length(self, workbench):
        with pytest.raises(UsageError):
            workbench.run(RunManifest("lang", "golden"))


class TestEntropyCommand:
    """Test the entropy subcommand."""

    def test_full_shift(self, workbench):
        report = workbench.run(RunManifest("entropy", "full2", {"nmax": 10}))

        assert report.data["final_slope"] == pytest.approx(math.log(2))
        assert report.data["exact_entropy"] == pytest.approx(math.log(2), abs=1e-9)
        assert len(report.rows) == 10

    def test_bits(self, workbench):
        report = workbench.run(RunManifest("entropy", "full2", {"nmax": 6, "bits": True}))

        assert report.data["unit"] == "bits"
        assert report.data["final_slope"] == pytest.approx(1.0)

    def test_tree_on_full_shift(self, workbench):
        report = workbench.run(RunManifest("entropy", "full2", {"nmax": 4, "tree_depth": 3}))

        assert report.data["tree"]["size"] == 8

    def test_tree_needs_full_shift(self, workbench):
        with pytest.raises(UsageError):
            workbench.run(RunManifest("entropy", "golden", {"nmax": 4, "tree_depth": 3}))

    def test_sturmian_has_no_exact_value(self, workbench):
        report = workbench.run(RunManifest("entropy", "fib", {"nmax": 8}))

        assert "exact_entropy" not in report.data
        assert [row[1] for row in report.rows] == list(range(2, 10))


class TestPredictionCommand:
    """Test the predict subcommand."""

    def test_branching(self, workbench):
        report = workbench.run(RunManifest("predict", "fib", {"m": 3, "k": 4}, output_format="json"))

        assert report.data["max_extensions"] == 3
        assert report.data["witness"] == "010"

    def test_predictor_for_empty_word(self, workbench):
        report = workbench.run(RunManifest("predict", "fib", {"a": "", "k": 1}))

        assert report.data["predictor"].b == ("1",)
        assert report.data["predictor_verified"]

    def test_forcing_word(self, workbench):
        report = workbench.run(RunManifest("predict", "fib", {"u": "0"}))

        assert report.data["forcing"].v == ("1",)

    def test_periodic_union(self, workbench):
        report = workbench.run(RunManifest("predict", "period3", {"order": 2}))

        assert report.data["periodic_union"].periodic
        assert report.data["order"] == 2

    def test_needs_a_question(self, workbench):
        with pytest.raises(UsageError):
            workbench.run(RunManifest("predict", "fib"))


class TestNoninvCommands:
    """Test noninv-build and noninv-analyze."""

    def test_build_tiny(self, workbench):
        report = workbench.run(RunManifest("noninv-build", "tiny"))

        assert [row[1] for row in report.rows] == [2, 36]
        assert report.data["materialized"] == 2

    def test_dump(self, workbench, tmp_path):
        workbench.run(RunManifest("noninv-build", "tiny", {"dump": str(tmp_path / "stages")}))

        assert sorted(p.name for p in (tmp_path / "stages").iterdir()) == ["x_0.txt", "x_1.txt", "x_2.txt"]

    def test_build_rejects_subshift_spec(self, workbench):
        with pytest.raises(ScheduleError):
            workbench.run(RunManifest("noninv-build", "golden"))

    def test_analyze_tiny(self, workbench):
        params = {"prefix": 7560, "decompose_length": 36, "window": 8, "window_start": 0}
        report = workbench.run(RunManifest("noninv-analyze", "tiny", params, output_format="json"))

        assert report.data["mixture"]["lambda"] == 1
        assert report.data["decomposition"]["segments"] == {"COPY": 8, "DECAYING": 8}
        assert report.data["decomposition"]["envelope_failures"] == []
        assert report.data["stage_witnesses"]


class TestPartitionCommand:
    """Test the partition subcommand."""

    def test_independent_halves(self, workbench, tmp_path):
        path = tmp_path / "sample.csv"
        path.write_text("a,1/4,0,0\nb,1/4,0,1\nc,1/4,1,0\nd,1/4,1,1\n", encoding="utf-8")

        report = workbench.run(RunManifest("partition", params={"input": str(path), "truncate": 1}))

        assert report.data["d(P,Q)"] == pytest.approx(2 * math.log(2))
        assert report.data["equivalent"] is False
        assert report.data["d(P,P^1)"] == pytest.approx(0.0, abs=1e-12)

    def test_needs_input(self, workbench):
        with pytest.raises(UsageError):
            workbench.run(RunManifest("partition"))


class TestMarkerCommand:
    """Test the markers subcommand."""

    def test_verify_inline_family(self, workbench):
        params = {"T": 10, "gap": 1, "shift_bound": 9, "family": json.dumps([list(range(10))])}
        report = workbench.run(RunManifest("markers", params=params))

        assert report.data["decision"].valid

    def test_search(self, workbench):
        report = workbench.run(RunManifest("markers", params={"T": 6, "gap": 1, "shift_bound": 3}, seed=5))

        assert report.data["size"] == len(report.data["family"])
        assert report.data["size"] >= 1

    def test_joint_from_file(self, workbench, tmp_path):
        path = tmp_path / "joint.json"
        path.write_text(json.dumps({
            "z1": "01101001", "z2": "01101001", "A": [0], "B": [0], "k": 0,
            "a_star": "0110", "pairs": [["11", "11"], ["10", "10"]],
        }), encoding="utf-8")
        params = {"T": 10, "gap": 1, "shift_bound": 9, "family": "[[0,1,2,3,4,5,6,7,8,9]]", "joint": str(path)}

        report = workbench.run(RunManifest("markers", params=params))

        assert [r.u for r in report.data["joint"]] == [1, 2]

    def test_malformed_joint(self, workbench):
        params = {"T": 10, "gap": 1, "shift_bound": 9, "family": "[[0]]", "joint": "{\"z1\": \"0\"}"}

        with pytest.raises(ParameterError):
            workbench.run(RunManifest("markers", params=params))
