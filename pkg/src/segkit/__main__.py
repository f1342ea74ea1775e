"""Main entry point for segkit."""

from __future__ import annotations

import logging
import sys

from segkit.bench import bench, write_tsv
from segkit.cli import parse_args
from segkit.commands import report_to_json, report_to_tsv, run
from segkit.errors import ExitCode, SegkitError
from segkit.models import BenchConfig, Options, RunConfig
from segkit.utils import die, fail, verbosity_to_log_level


def main(opt: Options) -> int:
    """Run segkit with the given options.

    Args:
        opt: Parsed CLI options

    Returns:
        Exit code (0 for success)
    """
    logging.basicConfig(
        level=verbosity_to_log_level(opt.verbosity),
        format="%(levelname)s: %(message)s",
    )

    try:
        match opt.config:
            case RunConfig(output="tsv"):
                sys.stdout.write(report_to_tsv(run(opt.config)))
            case RunConfig():
                print(report_to_json(run(opt.config)))
            case BenchConfig():
                write_tsv(bench(opt.config), sys.stdout)
    except SegkitError as e:
        fail(e)
    except Exception as e:
        logging.debug("Unhandled error", exc_info=True)
        die(f"{type(e).__name__}: {e}", code=ExitCode.CONTRACT, kind="internal")

    return ExitCode.OK


def script() -> None:
    """CLI entry point."""
    raise SystemExit(main(parse_args(sys.argv[1:])))


if __name__ == "__main__":
    script()
