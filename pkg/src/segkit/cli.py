"""CLI argument parsing for segkit."""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import TYPE_CHECKING, Sequence, cast

from segkit.commands import COMMANDS
from segkit.config import load_settings
from segkit.errors import SegkitError
from segkit.generators import GENERATORS
from segkit.models import (
    BenchConfig,
    Command,
    Generator,
    OutputFormat,
    Options,
    PenaltyKind,
    RunConfig,
    SeriesSource,
)
from segkit.parsers import (
    choice_of,
    comma_list,
    non_negative_int,
    positive_float,
    positive_int,
)
from segkit.penalty import PENALTIES
from segkit.utils import die, fail

if TYPE_CHECKING:
    from typing import NoReturn

DEFAULT_EPSILON = 0.1


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit 1 with a JSON error object."""

    def error(self, message: str) -> NoReturn:
        die(f"{self.prog}: {message}")


def format_command_details() -> str:
    """One line per solver command, from its docstring."""
    return "\n".join(
        f"  {name:<15} {(cls.__doc__ or '').strip().splitlines()[0]}"
        for name, cls in COMMANDS.items()
    )


def _add_source_arguments(p: argparse.ArgumentParser) -> None:
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--input",
        type=Path,
        metavar="PATH",
        help="CSV file with one value per row, or '-' for stdin.",
    )
    source.add_argument(
        "--generate",
        choices=list(GENERATORS),
        help="Draw a synthetic series instead of reading a file.",
    )
    p.add_argument(
        "--column", help="Column name or 0-based index (default: first column)."
    )
    p.add_argument(
        "--length",
        type=positive_int,
        default=1000,
        help="Synthetic series length (default: 1000).",
    )
    p.add_argument(
        "--seed",
        type=non_negative_int,
        default=0,
        help="Synthetic series seed (default: 0).",
    )


def parse_args(argv: Sequence[str]) -> Options:
    """Parse command-line arguments.

    Args:
        argv: Command-line arguments (without program name)

    Returns:
        Parsed options

    Raises:
        SystemExit: If arguments are invalid (exit code 1)
    """
    epilog = f"""
Commands:
{format_command_details()}

Examples:
  # 10 segments within 5% of the optimal squared error
  segkit solve --k 10 --epsilon 0.05 --input series.csv

  # Optimal min-max segmentation of the 'price' column
  segkit maxseg --k 4 --input prices.csv --column price

  # Min-max optima for every prefix of a synthetic series, one row only
  segkit cumulative-max --k 5 --generate walk --length 10000 --row 5000

  # Scaling table
  segkit bench --generators step,walk --sizes 1000,10000 --ks 10 \\
      --algorithms exact,solve
"""

    p = ArgumentParser(
        prog="segkit",
        description="Segment a numeric series into k pieces of minimal penalty.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=epilog,
    )
    p.add_argument(
        "--penalty",
        choices=list(PENALTIES),
        default="l2",
        help="Segment penalty (default: l2).",
    )
    p.add_argument(
        "--format",
        dest="output",
        choices=["json", "tsv"],
        default="json",
        help="Report format (default: json); bench always writes TSV.",
    )
    p.add_argument("--config", type=Path, metavar="FILE", help="TOML settings file.")
    verbosity_group = p.add_mutually_exclusive_group()
    verbosity_group.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Increase verbosity (-v: INFO, -vv: DEBUG).",
    )
    verbosity_group.add_argument(
        "-q",
        "--quiet",
        action="count",
        default=0,
        help="Decrease verbosity (-q: ERROR, -qq: silence non-critical).",
    )

    sub = p.add_subparsers(dest="command", required=True)
    for name, cls in COMMANDS.items():
        doc = (cls.__doc__ or "").strip().splitlines()[0]
        p_cmd = sub.add_parser(name, help=doc, description=doc)
        p_cmd.add_argument(
            "--k", type=positive_int, required=True, help="Number of segments."
        )
        if cls.uses_epsilon:
            p_cmd.add_argument(
                "--epsilon",
                type=positive_float,
                default=DEFAULT_EPSILON,
                help=f"Approximation slack (default: {DEFAULT_EPSILON}).",
            )
        if name.startswith("cumulative"):
            p_cmd.add_argument(
                "--row",
                type=non_negative_int,
                help="Emit only the table row of this prefix.",
            )
        _add_source_arguments(p_cmd)

    p_bench = sub.add_parser(
        "bench", help="Run solvers over synthetic series; TSV output."
    )
    p_bench.add_argument(
        "--generators",
        type=comma_list(choice_of(GENERATORS)),
        default=("step",),
        help="Comma list of step, walk, noise (default: step).",
    )
    p_bench.add_argument(
        "--sizes",
        type=comma_list(positive_int),
        default=(1000,),
        help="Comma list of series lengths (default: 1000).",
    )
    p_bench.add_argument(
        "--ks",
        type=comma_list(positive_int),
        default=(10,),
        help="Comma list of segment counts (default: 10).",
    )
    p_bench.add_argument(
        "--epsilons",
        type=comma_list(positive_float),
        default=(DEFAULT_EPSILON,),
        help=f"Comma list of slacks (default: {DEFAULT_EPSILON}).",
    )
    p_bench.add_argument(
        "--algorithms",
        type=comma_list(choice_of(COMMANDS)),
        default=("exact", "solve", "maxseg"),
        help="Comma list of commands to run (default: exact,solve,maxseg).",
    )
    p_bench.add_argument(
        "--seed", type=non_negative_int, default=0, help="Series seed (default: 0)."
    )
    p_bench.add_argument(
        "--jobs", type=positive_int, default=1, help="Worker processes (default: 1)."
    )
    p_bench.add_argument(
        "--repeats",
        type=positive_int,
        default=1,
        help="Runs per solver; the median wall time is reported (default: 1).",
    )

    ns = p.parse_args(list(argv))

    # Calculate verbosity: default is -1 (WARN), -v increases, -q decreases
    verbosity = -1 + ns.verbose - ns.quiet

    try:
        settings = load_settings(ns.config)
    except SegkitError as e:
        fail(e)

    penalty = cast(PenaltyKind, ns.penalty)
    config: RunConfig | BenchConfig
    if ns.command == "bench":
        config = BenchConfig(
            generators=cast(tuple[Generator, ...], ns.generators),
            sizes=ns.sizes,
            ks=ns.ks,
            epsilons=ns.epsilons,
            algorithms=ns.algorithms,
            seed=ns.seed,
            penalty=penalty,
            jobs=ns.jobs,
            repeats=ns.repeats,
            settings=settings,
        )
    else:
        if ns.column is not None and ns.input is None:
            die("--column only applies to --input")
        source = SeriesSource(
            path=ns.input,
            column=ns.column,
            generator=ns.generate,
            length=ns.length,
            seed=ns.seed,
        )
        config = RunConfig(
            command=cast(Command, ns.command),
            k=ns.k,
            source=source,
            epsilon=getattr(ns, "epsilon", None),
            penalty=penalty,
            output=cast(OutputFormat, ns.output),
            row=getattr(ns, "row", None),
            settings=settings,
        )

    return Options(config=config, verbosity=verbosity)
