"""Benchmark harness: run solvers over a matrix of synthetic series."""

from __future__ import annotations

import csv
import logging
import statistics
from collections.abc import Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import TextIO

from segkit.commands import COMMANDS, execute
from segkit.config import Settings
from segkit.errors import UsageError
from segkit.generators import generate
from segkit.models import BenchConfig, RunReport, Series

BENCH_FIELDS = (
    "generator",
    "seed",
    "m",
    "k",
    "epsilon",
    "algorithm",
    "wall_time_ms",
    "eval_count",
    "cost",
    "ratio_vs_exact",
)

RATIO_ALGORITHMS = frozenset({"solve", "cumulative"})


@dataclass(frozen=True, slots=True)
class Cell:
    """One (generator, m, k) series; epsilon-free solvers run once per cell."""

    generator: str
    seed: int
    m: int
    k: int
    epsilons: tuple[float, ...]
    algorithms: tuple[str, ...]
    penalty: str = "l2"
    repeats: int = 1
    settings: Settings = field(default_factory=Settings)


@dataclass(frozen=True, slots=True)
class BenchRow:
    generator: str
    seed: int
    m: int
    k: int
    epsilon: float | None
    algorithm: str
    wall_time_ms: float
    eval_count: int
    cost: float
    ratio_vs_exact: float | None = None


def plan(config: BenchConfig) -> list[Cell]:
    """Expand the matrix into cells, refusing exact runs above the size cap.

    Raises:
        UsageError: If an algorithm is unknown, or exact is requested
            with a size above settings.exact_cap
    """
    unknown = [a for a in config.algorithms if a not in COMMANDS]
    if unknown:
        raise UsageError(
            f"unknown algorithm(s) {', '.join(unknown)}: "
            f"choose from {', '.join(COMMANDS)}"
        )
    cap = config.settings.exact_cap
    if "exact" in config.algorithms:
        too_big = [m for m in config.sizes if m > cap]
        if too_big:
            raise UsageError(
                f"exact is quadratic and refused for m > {cap}: got size(s) "
                f"{', '.join(map(str, too_big))}"
            )
    return [
        Cell(
            generator=generator,
            seed=config.seed,
            m=m,
            k=k,
            epsilons=config.epsilons,
            algorithms=config.algorithms,
            penalty=config.penalty,
            repeats=config.repeats,
            settings=config.settings,
        )
        for generator, m, k in product(config.generators, config.sizes, config.ks)
    ]


def _timed(
    cell: Cell, series: Series, algorithm: str, epsilon: float | None
) -> RunReport:
    reports = [
        execute(
            algorithm,
            series,
            cell.k,
            epsilon=epsilon,
            penalty=cell.penalty,
            settings=cell.settings,
            with_table=False,
        )
        for _ in range(cell.repeats)
    ]
    median = statistics.median(r.wall_time_ms for r in reports)
    last = reports[-1]
    return RunReport(
        algorithm=last.algorithm,
        m=last.m,
        k=last.k,
        epsilon=last.epsilon,
        cost=last.cost,
        boundaries=last.boundaries,
        segment_costs=last.segment_costs,
        wall_time_ms=median,
        eval_count=last.eval_count,
        estimate_iterations=last.estimate_iterations,
    )


def ratio(cost: float, exact: float) -> float:
    if exact == 0:
        return 1.0 if cost == 0 else float("inf")
    return cost / exact


def run_cell(cell: Cell) -> list[BenchRow]:
    """Run every requested algorithm on one cell, exact first."""
    series = generate(cell.generator, cell.m, cell.seed)
    ordered = sorted(cell.algorithms, key=lambda a: a != "exact")
    exact_cost: float | None = None
    rows: list[BenchRow] = []
    for algorithm in ordered:
        epsilons: Iterable[float | None] = (
            cell.epsilons if COMMANDS[algorithm].uses_epsilon else (None,)
        )
        for epsilon in epsilons:
            report = _timed(cell, series, algorithm, epsilon)
            if algorithm == "exact":
                exact_cost = report.cost
            rows.append(
                BenchRow(
                    generator=cell.generator,
                    seed=cell.seed,
                    m=cell.m,
                    k=cell.k,
                    epsilon=epsilon,
                    algorithm=algorithm,
                    wall_time_ms=report.wall_time_ms,
                    eval_count=report.eval_count,
                    cost=report.cost,
                    ratio_vs_exact=(
                        ratio(report.cost, exact_cost)
                        if exact_cost is not None and algorithm in RATIO_ALGORITHMS
                        else None
                    ),
                )
            )
    logging.info(
        "bench cell %s m=%d k=%d: %d row(s)", cell.generator, cell.m, cell.k, len(rows)
    )
    return rows


def _rows(cells: list[Cell], jobs: int) -> Iterator[BenchRow]:
    if jobs == 1:
        for cell in cells:
            yield from run_cell(cell)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for rows in pool.map(run_cell, cells):
            yield from rows


def bench(config: BenchConfig) -> Iterator[BenchRow]:
    """Rows cell by cell in matrix order, from a process pool when jobs > 1.

    The matrix is validated before any cell runs.
    """
    cells = plan(config)
    logging.info("bench: %d cell(s), %d job(s)", len(cells), config.jobs)
    return _rows(cells, config.jobs)


def _cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_tsv(rows: Iterable[BenchRow], out: TextIO) -> None:
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(BENCH_FIELDS)
    for row in rows:
        writer.writerow(
            [
                row.generator,
                row.seed,
                row.m,
                row.k,
                _cell(row.epsilon),
                row.algorithm,
                f"{row.wall_time_ms:.3f}",
                row.eval_count,
                _cell(row.cost),
                _cell(row.ratio_vs_exact),
            ]
        )
