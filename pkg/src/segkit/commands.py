"""Solver commands for segkit and the reports they produce."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Literal

from segkit.approx_scheme import solve_approx
from segkit.config import Settings
from segkit.cumulative import CumulativeTable, all_dp, all_ms, reconstruct_cumulative
from segkit.errors import UsageError
from segkit.exact_dp import bellman_all, reconstruct
from segkit.generators import generate
from segkit.maxseg import reconstruct_maxseg, solve_maxseg
from segkit.models import (
    RunConfig,
    RunReport,
    Segmentation,
    Series,
    SeriesSource,
    TableRow,
)
from segkit.parsers import ingest
from segkit.penalty import CountingPenalty, PenaltySource, build
from segkit.utils import elapsed_ms

REPORT_FIELDS = (
    "algorithm",
    "m",
    "k",
    "epsilon",
    "cost",
    "boundaries",
    "segment_costs",
    "wall_time_ms",
    "eval_count",
    "estimate_iterations",
)


@dataclass(frozen=True, slots=True)
class Solution:
    """What a command hands back before the report is assembled."""

    segmentation: Segmentation
    estimate_iterations: int | None = None
    table: CumulativeTable | None = None


class Command(ABC):
    """Strategy interface for solver commands."""

    aggregate: ClassVar[Literal["sum", "max"]] = "sum"
    uses_epsilon: ClassVar[bool] = False
    full_table: ClassVar[bool] = False

    @abstractmethod
    def solve(
        self, ps: PenaltySource, k: int, epsilon: float | None, settings: Settings
    ) -> Solution:
        """Run the solver over the whole series."""


class SolveCommand(Command):
    """(1 + epsilon)-approximate sum-cost segmentation in polylogarithmic time."""

    uses_epsilon = True

    def solve(
        self, ps: PenaltySource, k: int, epsilon: float | None, settings: Settings
    ) -> Solution:
        assert epsilon is not None
        outcome = solve_approx(
            ps,
            k,
            epsilon,
            alpha_seed=settings.alpha_seed,
            max_estimate_iterations=settings.max_estimate_iterations,
            max_oracle_pairs=settings.max_oracle_pairs,
        )
        return Solution(
            outcome.segmentation, estimate_iterations=outcome.estimate_iterations
        )


class ExactCommand(Command):
    """Optimal sum-cost segmentation by the quadratic dynamic program."""

    def solve(
        self, ps: PenaltySource, k: int, epsilon: float | None, settings: Settings
    ) -> Solution:
        if ps.m > settings.exact_cap:
            logging.warning(
                "exact on m=%d exceeds the cap of %d; expect quadratic run time",
                ps.m,
                settings.exact_cap,
            )
        return Solution(reconstruct(bellman_all(ps, k), ps.m, k))


class MaxSegCommand(Command):
    """Optimal min-max segmentation."""

    aggregate = "max"

    def solve(
        self, ps: PenaltySource, k: int, epsilon: float | None, settings: Settings
    ) -> Solution:
        result = solve_maxseg(ps, k)
        assert result.boundaries is not None
        return Solution(result.boundaries)


class CumulativeCommand(Command):
    """Approximate sum-cost optima for every prefix and level."""

    uses_epsilon = True

    def solve(
        self, ps: PenaltySource, k: int, epsilon: float | None, settings: Settings
    ) -> Solution:
        assert epsilon is not None
        table = all_dp(
            ps, k, epsilon, check_candidate_bound=settings.check_candidate_bound
        )
        return Solution(reconstruct_cumulative(table, ps.m, k), table=table)


class CumulativeMaxCommand(Command):
    """Exact min-max optima for every prefix and level."""

    aggregate = "max"
    full_table = True

    def solve(
        self, ps: PenaltySource, k: int, epsilon: float | None, settings: Settings
    ) -> Solution:
        table = all_ms(ps, k)
        return Solution(reconstruct_maxseg(ps, k, table.cost(ps.m, k)), table=table)


COMMANDS: dict[str, type[Command]] = {
    "solve": SolveCommand,
    "exact": ExactCommand,
    "maxseg": MaxSegCommand,
    "cumulative": CumulativeCommand,
    "cumulative-max": CumulativeMaxCommand,
}


def load_series(source: SeriesSource) -> Series:
    """Read the configured file, or draw the configured synthetic series."""
    if source.generator is not None:
        return generate(source.generator, source.length, source.seed)
    if source.path is None:
        raise UsageError("no input: give an input file or a generator")
    return ingest(source.path, source.column)


def _table_rows(
    table: CumulativeTable, row: int | None, full: bool
) -> tuple[TableRow, ...]:
    if row is not None:
        if not 0 <= row <= table.m:
            raise UsageError(f"row {row} is outside prefixes 0..{table.m}")
        prefixes = [row]
    else:
        prefixes = list(range(table.m + 1)) if full else [table.m]
    return tuple(TableRow(i=i, costs=table.row(i)) for i in prefixes)


def execute(
    command: str,
    series: Series,
    k: int,
    *,
    epsilon: float | None = None,
    penalty: str = "l2",
    settings: Settings | None = None,
    row: int | None = None,
    with_table: bool = True,
) -> RunReport:
    """Run one command over a series and build its report.

    wall_time_ms and eval_count cover the solver alone; building the
    penalty source and recomputing the reported costs are excluded.

    Raises:
        UsageError: On an unknown command, a missing epsilon or a bad row
    """
    if command not in COMMANDS:
        raise UsageError(
            f"unknown command '{command}': choose from {', '.join(COMMANDS)}"
        )
    cmd = COMMANDS[command]()
    settings = settings or Settings()
    if cmd.uses_epsilon and epsilon is None:
        raise UsageError(f"{command} needs an epsilon")
    if not cmd.uses_epsilon:
        epsilon = None

    source = build(penalty, series)
    counting = CountingPenalty(source)
    start = time.perf_counter()
    solution = cmd.solve(counting, k, epsilon, settings)
    wall_time_ms = elapsed_ms(start)

    segmentation = solution.segmentation
    if cmd.aggregate == "max":
        cost = segmentation.max_cost(source)
    else:
        cost = segmentation.total_cost(source)
    table = None
    if solution.table is not None and with_table:
        table = _table_rows(solution.table, row, cmd.full_table)

    logging.info(
        "%s: m=%d k=%d cost=%g in %.1f ms, %d eval(s)",
        command,
        series.m,
        k,
        cost,
        wall_time_ms,
        counting.eval_count,
    )
    return RunReport(
        algorithm=command,
        m=series.m,
        k=k,
        epsilon=epsilon,
        cost=cost,
        boundaries=segmentation.boundaries,
        segment_costs=tuple(segmentation.segment_costs(source)),
        wall_time_ms=wall_time_ms,
        eval_count=counting.eval_count,
        estimate_iterations=solution.estimate_iterations,
        table=table,
    )


def run(config: RunConfig) -> RunReport:
    """Load the configured series and execute the configured command."""
    series = load_series(config.source)
    return execute(
        config.command,
        series,
        config.k,
        epsilon=config.epsilon,
        penalty=config.penalty,
        settings=config.settings,
        row=config.row,
    )


def report_to_dict(report: RunReport) -> dict[str, Any]:
    """Report fields in their published order; table only for cumulative runs."""
    document: dict[str, Any] = {
        "algorithm": report.algorithm,
        "m": report.m,
        "k": report.k,
        "epsilon": report.epsilon,
        "cost": report.cost,
        "boundaries": list(report.boundaries),
        "segment_costs": list(report.segment_costs),
        "wall_time_ms": report.wall_time_ms,
        "eval_count": report.eval_count,
        "estimate_iterations": report.estimate_iterations,
    }
    if report.table is not None:
        document["table"] = [{"i": r.i, "costs": list(r.costs)} for r in report.table]
    return document


def report_to_json(report: RunReport) -> str:
    return json.dumps(report_to_dict(report))


def report_to_tsv(report: RunReport) -> str:
    """One header row and one data row; list fields are comma-joined."""
    document = report_to_dict(report)
    cells: list[str] = []
    for name in REPORT_FIELDS:
        value = document[name]
        if isinstance(value, list):
            cells.append(",".join(repr(x) for x in value))
        elif value is None:
            cells.append("")
        else:
            cells.append(str(value))
    out = io.StringIO()
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    writer.writerow(cells)
    return out.getvalue()
