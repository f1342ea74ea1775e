"""Data models for segkit."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Literal

import numpy as np
import numpy.typing as npt

from segkit.config import Settings
from segkit.errors import ContractViolation, InputError

if TYPE_CHECKING:
    from segkit.penalty import PenaltySource

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]

Command = Literal["solve", "exact", "maxseg", "cumulative", "cumulative-max"]
PenaltyKind = Literal["l2", "range"]
Generator = Literal["step", "walk", "noise"]
OutputFormat = Literal["json", "tsv"]


@dataclass(frozen=True, slots=True, eq=False)
class Series:
    """A read-only sequence of real values x_1..x_m."""

    points: FloatArray

    def __post_init__(self) -> None:
        if self.points.ndim != 1:
            raise InputError("series must be one-dimensional")
        if self.points.size == 0:
            raise InputError("empty series")

    @classmethod
    def of(cls, values: Iterable[float] | FloatArray) -> Series:
        """Copy values into a read-only float64 series."""
        if isinstance(values, np.ndarray):
            points = values.astype(np.float64, copy=True)
        else:
            points = np.fromiter(values, dtype=np.float64)
        points.setflags(write=False)
        return cls(points)

    @property
    def m(self) -> int:
        return int(self.points.size)

    def scaled(self, factor: float) -> Series:
        return Series.of(self.points * factor)


@dataclass(frozen=True, slots=True)
class Segmentation:
    """Boundaries b_0 = 0 <= b_1 <= ... <= b_k; segment j covers (b_{j-1}, b_j]."""

    boundaries: tuple[int, ...]

    def __post_init__(self) -> None:
        b = self.boundaries
        if len(b) <= 1:
            raise ContractViolation(f"segmentation needs at least one segment, got {b}")
        if b[0] != 0:
            raise ContractViolation(f"segmentation must start at 0, got {b}")
        if any(x > y for x, y in zip(b, b[1:], strict=False)):
            raise ContractViolation(f"boundaries must be non-decreasing, got {b}")

    @classmethod
    def of(cls, boundaries: Sequence[int]) -> Segmentation:
        return cls(tuple(int(x) for x in boundaries))

    @property
    def k(self) -> int:
        return len(self.boundaries) - 1

    @property
    def end(self) -> int:
        return self.boundaries[-1]

    def segments(self) -> list[tuple[int, int]]:
        return list(zip(self.boundaries, self.boundaries[1:], strict=False))

    def segment_costs(self, ps: PenaltySource) -> list[float]:
        return [ps.eval(a, b) for a, b in self.segments()]

    def total_cost(self, ps: PenaltySource) -> float:
        # left to right, matching how the dynamic programs accumulate
        total = 0.0
        for cost in self.segment_costs(ps):
            total += cost
        return total

    def max_cost(self, ps: PenaltySource) -> float:
        return max(self.segment_costs(ps))


@dataclass(frozen=True, slots=True)
class SeriesSource:
    """Where a single run reads its series from."""

    path: Path | None = None
    column: str | None = None
    generator: Generator | None = None
    length: int = 1000
    seed: int = 0


@dataclass(frozen=True, slots=True)
class RunConfig:
    """A single solver run."""

    command: Command
    k: int
    source: SeriesSource
    epsilon: float | None = None
    penalty: PenaltyKind = "l2"
    output: OutputFormat = "json"
    row: int | None = None
    settings: Settings = field(default_factory=Settings)


@dataclass(frozen=True, slots=True)
class BenchConfig:
    """A benchmark matrix: every generator x size x k x epsilon cell."""

    generators: tuple[Generator, ...]
    sizes: tuple[int, ...]
    ks: tuple[int, ...]
    epsilons: tuple[float, ...]
    algorithms: tuple[str, ...]
    seed: int = 0
    penalty: PenaltyKind = "l2"
    jobs: int = 1
    repeats: int = 1
    settings: Settings = field(default_factory=Settings)


@dataclass(frozen=True, slots=True)
class Options:
    """CLI options."""

    config: RunConfig | BenchConfig
    verbosity: int


@dataclass(frozen=True, slots=True)
class TableRow:
    """Costs for one prefix i at levels 1..k."""

    i: int
    costs: tuple[float, ...]


@dataclass(frozen=True, slots=True)
class RunReport:
    """Result of one solver run; serialised as the published JSON report."""

    algorithm: str
    m: int
    k: int
    epsilon: float | None
    cost: float
    boundaries: tuple[int, ...]
    segment_costs: tuple[float, ...]
    wall_time_ms: float
    eval_count: int
    estimate_iterations: int | None = None
    table: tuple[TableRow, ...] | None = None
