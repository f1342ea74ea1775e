"""Tests for solver commands and report serialisation."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from segkit.commands import (
    COMMANDS,
    REPORT_FIELDS,
    execute,
    load_series,
    report_to_dict,
    report_to_json,
    report_to_tsv,
    run,
)
from segkit.config import Settings
from segkit.errors import UsageError
from segkit.models import RunConfig, Series, SeriesSource
from segkit.penalty import PENALTIES, build

SERIES = Series.of([1, 2, 3, 4])

SCHEMA: dict[str, tuple[type, ...]] = {
    "algorithm": (str,),
    "m": (int,),
    "k": (int,),
    "epsilon": (float, type(None)),
    "cost": (float,),
    "boundaries": (list,),
    "segment_costs": (list,),
    "wall_time_ms": (float,),
    "eval_count": (int,),
    "estimate_iterations": (int, type(None)),
}


def check_report(document: dict[str, Any], series: Series, penalty: str = "l2") -> None:
    """Schema and boundary/cost recomputation checks for a published report."""
    assert list(document)[: len(SCHEMA)] == list(SCHEMA)
    for name, types in SCHEMA.items():
        assert isinstance(document[name], types), name
    assert all(isinstance(b, int) for b in document["boundaries"])
    assert all(isinstance(c, float) for c in document["segment_costs"])

    ps = build(penalty, series)
    bounds = document["boundaries"]
    assert bounds[0] == 0
    assert bounds[-1] == document["m"] == ps.m
    assert len(bounds) == document["k"] + 1
    costs = [ps.eval(a, b) for a, b in zip(bounds, bounds[1:], strict=False)]
    assert costs == document["segment_costs"]
    if document["algorithm"] in {"maxseg", "cumulative-max"}:
        recomputed = max(costs)
    else:
        recomputed = math.fsum(costs)
    assert document["cost"] == pytest.approx(recomputed, rel=1e-12, abs=1e-12)


class TestExecute:
    """Tests for execute() function."""

    def test_solve(self):
        report = execute("solve", SERIES, 2, epsilon=0.1)
        assert 1.0 <= report.cost <= 1.1
        assert report.epsilon == 0.1
        assert report.estimate_iterations is not None
        assert report.eval_count > 0

    def test_maxseg(self):
        report = execute("maxseg", SERIES, 2)
        assert report.cost == 0.5
        assert report.boundaries == (0, 2, 4)
        assert report.estimate_iterations is None

    @pytest.mark.parametrize("kind", list(PENALTIES))
    def test_exact_single_segment(self, kind: str):
        series = Series.of([3, 1, 4, 1, 5])
        report = execute("exact", series, 1, penalty=kind)
        assert report.cost == build(kind, series).eval(0, 5)
        assert report.boundaries == (0, 5)

    def test_exact_ignores_epsilon(self):
        assert execute("exact", SERIES, 2, epsilon=0.3).epsilon is None

    def test_exact_eval_count(self):
        assert execute("exact", SERIES, 2).eval_count == 5 * 6 // 2

    def test_exact_above_cap_warns(self, caplog: pytest.LogCaptureFixture):
        execute("exact", SERIES, 2, settings=Settings(exact_cap=3))
        assert "exceeds the cap of 3" in caplog.text

    def test_cumulative_emits_final_row(self):
        report = execute("cumulative", SERIES, 2, epsilon=0.01)
        assert report.table is not None
        assert [row.i for row in report.table] == [4]
        assert report.table[0].costs[0] == 5.0
        assert report.boundaries == (0, 2, 4)

    def test_cumulative_max_emits_every_prefix(self):
        report = execute("cumulative-max", SERIES, 2)
        assert report.table is not None
        assert [row.i for row in report.table] == [0, 1, 2, 3, 4]
        assert report.table[3].costs == (2.0, 0.5)
        assert report.cost == 0.5
        assert report.boundaries == (0, 2, 4)

    def test_row(self):
        report = execute("cumulative-max", SERIES, 2, row=2)
        assert report.table is not None
        assert [(r.i, r.costs) for r in report.table] == [(2, (0.5, 0.0))]

    def test_row_out_of_range(self):
        with pytest.raises(UsageError, match="row 9 is outside prefixes 0..4"):
            execute("cumulative-max", SERIES, 2, row=9)

    def test_without_table(self):
        assert execute("cumulative-max", SERIES, 2, with_table=False).table is None

    @pytest.mark.parametrize(
        "command,aggregate",
        [
            ("solve", "sum"),
            ("exact", "sum"),
            ("cumulative", "sum"),
            ("maxseg", "max"),
            ("cumulative-max", "max"),
        ],
    )
    def test_aggregate(self, command: str, aggregate: str):
        assert COMMANDS[command].aggregate == aggregate
        series = Series.of([3, 1, 4, 1, 5, 9, 2, 6])
        report = execute(command, series, 3, epsilon=0.1)
        combine = max if aggregate == "max" else math.fsum
        assert report.cost == pytest.approx(combine(report.segment_costs), rel=1e-12)

    def test_missing_epsilon(self):
        with pytest.raises(UsageError, match="needs an epsilon"):
            execute("solve", SERIES, 2)

    def test_unknown_command(self):
        with pytest.raises(UsageError, match="unknown command 'fast'"):
            execute("fast", SERIES, 2)

    @pytest.mark.parametrize("kind", list(PENALTIES))
    @pytest.mark.parametrize("command", list(COMMANDS))
    def test_round_trip(self, command: str, kind: str, draw_series):
        rng = np.random.default_rng(len(command))
        for _ in range(5):
            series = draw_series(rng, int(rng.integers(1, 80)))
            report = execute(
                command, series, int(rng.integers(1, 6)), epsilon=0.2, penalty=kind
            )
            check_report(json.loads(report_to_json(report)), series, kind)

    @pytest.mark.parametrize("command", list(COMMANDS))
    def test_deterministic(self, command: str):
        series = Series.of([5, 1, 4, 4, 2, 8, 0, 3, 3, 9])
        first = report_to_dict(execute(command, series, 3, epsilon=0.1))
        second = report_to_dict(execute(command, series, 3, epsilon=0.1))
        first.pop("wall_time_ms")
        second.pop("wall_time_ms")
        assert json.dumps(first) == json.dumps(second)


class TestRun:
    """Tests for run() and load_series()."""

    def test_from_file(self, tmp_path: Path):
        path = tmp_path / "series.csv"
        path.write_text("t,v\n0,1\n1,2\n2,3\n3,4\n", encoding="utf-8")
        config = RunConfig(
            command="maxseg", k=2, source=SeriesSource(path=path, column="v")
        )
        report = run(config)
        assert report.cost == 0.5
        assert report.boundaries == (0, 2, 4)

    def test_from_generator(self):
        source = SeriesSource(generator="walk", length=300, seed=4)
        report = run(RunConfig(command="solve", k=4, source=source, epsilon=0.1))
        assert report.m == 300
        assert report.k == 4

    def test_no_source(self):
        with pytest.raises(UsageError, match="no input"):
            load_series(SeriesSource())


class TestSerialisation:
    """Tests for report_to_json() and report_to_tsv()."""

    def test_json_field_order(self):
        document = json.loads(report_to_json(execute("maxseg", SERIES, 2)))
        assert tuple(document) == REPORT_FIELDS

    def test_json_table(self):
        document = json.loads(
            report_to_json(execute("cumulative-max", SERIES, 2, row=4))
        )
        assert document["table"] == [{"i": 4, "costs": [5.0, 0.5]}]

    def test_tsv(self):
        lines = report_to_tsv(execute("maxseg", SERIES, 2)).splitlines()
        assert len(lines) == 2
        header = lines[0].split("\t")
        row = dict(zip(header, lines[1].split("\t"), strict=True))
        assert tuple(header) == REPORT_FIELDS
        assert row["algorithm"] == "maxseg"
        assert row["boundaries"] == "0,2,4"
        assert row["segment_costs"] == "0.5,0.5"
        assert row["epsilon"] == ""
        assert row["cost"] == "0.5"
