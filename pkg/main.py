#!/usr/bin/env python3
"""
Main entry point for the shiftlab workbench.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional

# Add the package to sys.path if running as script
if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent))

from shiftlab import __version__
from shiftlab.config.settings import LOG_LEVELS, REPORT_FORMATS
from shiftlab.core.exceptions import ShiftLabError, UsageError
from shiftlab.core.factory import WorkbenchFactory
from shiftlab.core.manifest import RunManifest

EXIT_USAGE = 1
EXIT_FAILURE = 2

# Subcommands whose reports are structured documents rather than tables.
STRUCTURED = ("predict", "noninv-analyze", "markers")

GLOBAL_KEYS = {"config", "log_dir", "test_config", "list_commands", "subcommand",
               "spec", "format", "output", "seed", "log_level"}


class ShiftLabParser(argparse.ArgumentParser):
    """ArgumentParser whose errors become UsageError (exit status 1)."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = ShiftLabParser(add_help=False)
    common.add_argument("--format", choices=REPORT_FORMATS, default=argparse.SUPPRESS,
                        help="Report format (default: csv for tables, json for documents)")
    common.add_argument("--output", default=argparse.SUPPRESS, help="Write the report to this file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="Seed for randomized searches (default: 0)")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=argparse.SUPPRESS, help="Set logging level")
    return common


def build_parser() -> ShiftLabParser:
    common = _common_options()
    parser = ShiftLabParser(
        prog="shiftlab",
        description="Symbolic-dynamics workbench: languages, entropy, prediction and non-invertible constructions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
Examples:
  shiftlab lang --spec golden --n 5
  shiftlab entropy --spec config/specs/full2.shift --nmax 20
  shiftlab predict --spec fib --m 3 --k 4
  shiftlab noninv-build --spec noninv --dump out/stages
  shiftlab markers --T 12 --gap 2 --shift-bound 10
  shiftlab --list-commands
        """
    )
    parser.add_argument("-c", "--config", default="config/workbench.json",
                        help="Path to configuration file (default: config/workbench.json)")
    parser.add_argument("--log-dir", help="Directory for log files (default: from configuration)")
    parser.add_argument("--test-config", action="store_true", help="Test configuration file and exit")
    parser.add_argument("--list-commands", action="store_true", help="List all subcommands and exit")
    parser.add_argument("--version", action="version", version=f"shiftlab {__version__}")

    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    lang = sub.add_parser("lang", parents=[common], help="List L_n(X)")
    lang.add_argument("--spec", help="Spec file or library name")
    lang.add_argument("--n", type=int, help="Word length")
    lang.add_argument("--check", action="store_true", default=None,
                      help="Also verify factor-closure and extendability at n")

    entropy = sub.add_parser("entropy", parents=[common], help="Complexity table and entropy")
    entropy.add_argument("--spec")
    entropy.add_argument("--nmax", type=int, help="Largest word length (default: 12)")
    entropy.add_argument("--bits", action="store_true", default=None, help="Report entropies in bits")
    entropy.add_argument("--eps", help="Separation scale for noninv specs (default: 1/10)")
    entropy.add_argument("--prefix", type=int, help="Prefix length for noninv specs (default: 100000)")
    entropy.add_argument("--tree-depth", type=int, help="Also grow a preimage tree of this depth")
    entropy.add_argument("--tree-base", type=int, help="Base word length for noninv preimage trees")

    predict = sub.add_parser("predict", parents=[common], help="Branching, predictor and forcing words")
    predict.add_argument("--spec")
    predict.add_argument("--m", type=int, help="Past length")
    predict.add_argument("--k", type=int, help="Future length")
    predict.add_argument("--a", help="Word to predict after")
    predict.add_argument("--u", help="Future to force")
    predict.add_argument("--order", type=int, help="Test the order-m SFT approximation for periodicity")
    predict.add_argument("--budget", type=int, help="Longest predictor or forcing word searched")

    build = sub.add_parser("noninv-build", parents=[common], help="Lay out the construction stages")
    build.add_argument("--spec")
    build.add_argument("--dump", help="Directory for materialized stage word files")

    analyze = sub.add_parser("noninv-analyze", parents=[common], help="Analyze the construction")
    analyze.add_argument("--spec")
    analyze.add_argument("--cylinder", help="Cylinder box, e.g. '[3/4,1]' (default)")
    analyze.add_argument("--prefix", type=int, help="Symbols of x_* to examine (default: 100000)")
    analyze.add_argument("--checkpoints", help="Comma-separated prefix lengths for frequencies")
    analyze.add_argument("--stage", type=int, help="Decomposition stage (default: 0)")
    analyze.add_argument("--window", type=int, help="Window length for the COPY share (default: 100)")
    analyze.add_argument("--window-start", type=int, help="Window start (default: M_n L_n - 60)")
    analyze.add_argument("--witness-stage", type=int, help="Stage of the preimage witnesses (default: 1)")
    analyze.add_argument("--witness-length", type=int, help="Length of witnessed subwords (default: 4)")
    analyze.add_argument("--decompose-length", type=int, help="Prefix length decomposed (default: 4096)")

    partition = sub.add_parser("partition", parents=[common], help="Partition entropies")
    partition.add_argument("--input", help="CSV of point,mass,atomP,atomQ")
    partition.add_argument("--truncate", type=int, help="Also report the distance to n-atom truncations")

    markers = sub.add_parser("markers", parents=[common], help="Marker families")
    markers.add_argument("--T", type=int, help="Window length")
    markers.add_argument("--gap", type=int, help="Minimal spacing inside a set")
    markers.add_argument("--shift-bound", type=int, help="Largest shift k (default: 9T/10)")
    markers.add_argument("--delta", type=float, help="Size exponent: at least 2^(delta T) sets")
    markers.add_argument("--family", help="JSON array of index sets, inline or as a file path")
    markers.add_argument("--joint", help="JSON file describing a joint-occurrence check")
    markers.add_argument("--budget", type=int, help="Largest 2^T examined by the search")

    return parser


def manifest_from_args(args: argparse.Namespace, default_format: str) -> RunManifest:
    """Collect subcommand parameters into a RunManifest."""
    params: Dict[str, Any] = {key: value for key, value in vars(args).items() if key not in GLOBAL_KEYS}
    output_format = getattr(args, "format", None)
    if output_format is None:
        output_format = "json" if args.subcommand in STRUCTURED else default_format
    return RunManifest(
        subcommand=args.subcommand,
        spec=getattr(args, "spec", None),
        params=params,
        output_format=output_format,
        seed=getattr(args, "seed", 0),
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the workbench."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"Usage error: {e.message}", file=sys.stderr)
        return EXIT_USAGE

    factory = WorkbenchFactory(args.config, log_dir=args.log_dir)
    try:
        if args.test_config:
            return test_configuration(factory)

        if args.list_commands:
            return list_commands(factory)

        if not args.subcommand:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE

        workbench = factory.create_workbench()
        if getattr(args, "log_level", None):
            workbench.set_log_level(args.log_level)

        manifest = manifest_from_args(args, factory.config_manager.settings.default_format)
        return workbench.execute(manifest, getattr(args, "output", None))

    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return EXIT_FAILURE

    except UsageError as e:
        print(f"Usage error: {e.message}", file=sys.stderr)
        return EXIT_USAGE

    except ShiftLabError as e:
        print(f"shiftlab error: {e.message}", file=sys.stderr)
        return EXIT_FAILURE

    finally:
        factory.reset_services()


def test_configuration(factory: WorkbenchFactory) -> int:
    """Test configuration file."""
    print("Testing configuration...")
    if not factory.validate_configuration():
        print("✗ Configuration validation failed")
        return EXIT_USAGE

    config = factory.config_manager.config
    settings = config.settings
    print("✓ Configuration is valid")
    print(f"✓ Spec library entries: {len(config.spec_library)}")
    missing = sorted(name for name, path in config.spec_library.items() if not Path(path).exists())
    if missing:
        print(f"✗ Missing spec files: {', '.join(missing)}")
    print(f"✓ Enumeration cap: {settings.enumeration_cap}")
    print(f"✓ Exact cap: {settings.exact_cap}")
    print(f"✓ Stream budget: {settings.stream_budget}")
    return 0 if not missing else EXIT_FAILURE


def list_commands(factory: WorkbenchFactory) -> int:
    """List all available subcommands."""
    print("Available subcommands:")
    print("=" * 50)

    workbench = factory.create_workbench()
    for handler_name, info in workbench.get_commands_info().items():
        print(f"\n{handler_name}:")
        print(f"  Description: {info['description']}")
        for pattern in info['patterns']:
            print(f"    - {pattern}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
