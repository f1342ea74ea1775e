"""Parsing functions for segkit: CSV ingestion and CLI value types."""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from collections.abc import Callable, Iterable
from pathlib import Path
from typing import TextIO

from segkit.errors import InputError
from segkit.models import Series


def _as_float(cell: str) -> float | None:
    try:
        return float(cell.strip())
    except ValueError:
        return None


def _select(header: list[str] | None, column: str | None) -> int:
    """Resolve a column selector (name or 0-based index) to an index."""
    if column is None:
        return 0
    if column.strip().isdigit():
        return int(column)
    if header is None:
        raise InputError(
            f"column {column!r} selected by name but the file has no header row"
        )
    names = [name.strip() for name in header]
    if column not in names:
        raise InputError(f"no column named {column!r}: header has {', '.join(names)}")
    return names.index(column)


def read_series(stream: TextIO, column: str | None = None) -> Series:
    """Parse one numeric column from CSV text.

    Blank lines are skipped. The first non-blank row is a header when its
    selected cell is not numeric, or when the column is selected by name.
    Decimal parsing is locale independent.

    Args:
        stream: CSV text
        column: Column name or 0-based index; column 0 when None

    Returns:
        Parsed series

    Raises:
        InputError: On a missing column, a non-numeric or non-finite cell
            (reported with its 1-based row number), or an empty series
    """
    reader = csv.reader(stream)
    header: list[str] | None = None
    index: int | None = None
    values: list[float] = []
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        if index is None:
            if column is not None and not column.strip().isdigit():
                header = row
                index = _select(header, column)
                continue
            index = _select(None, column)
            if index < len(row) and _as_float(row[index]) is None:
                header = row
                continue
        if index >= len(row):
            raise InputError(f"row {reader.line_num}: no column {index}")
        value = _as_float(row[index])
        if value is None:
            raise InputError(
                f"row {reader.line_num}: not a number: {row[index].strip()!r}"
            )
        if not math.isfinite(value):
            raise InputError(
                f"row {reader.line_num}: value is not finite: {row[index].strip()!r}"
            )
        values.append(value)

    if not values:
        raise InputError("empty series: no numeric rows found")
    logging.debug(
        "Read %d value(s)%s", len(values), " after a header row" if header else ""
    )
    return Series.of(values)


def ingest(path: Path, column: str | None = None) -> Series:
    """Read a series from a CSV file, or from stdin when path is '-'.

    Raises:
        InputError: If the file cannot be read or does not parse
    """
    if str(path) == "-":
        return read_series(sys.stdin, column)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            return read_series(fh, column)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise InputError(f"cannot decode {path} as UTF-8") from e


def positive_int(text: str) -> int:
    """argparse type for integers >= 1."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"invalid value {text!r}: must be >= 1")
    return value


def non_negative_int(text: str) -> int:
    """argparse type for integers >= 0."""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"invalid value {text!r}: must be >= 0")
    return value


def positive_float(text: str) -> float:
    """argparse type for finite reals > 0."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not math.isfinite(value) or value <= 0:
        raise argparse.ArgumentTypeError(
            f"invalid value {text!r}: must be a finite number > 0"
        )
    return value


def comma_list[T](item: Callable[[str], T]) -> Callable[[str], tuple[T, ...]]:
    """argparse type for comma-separated lists of item."""

    def parse(text: str) -> tuple[T, ...]:
        parts = [part.strip() for part in text.split(",") if part.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("empty list")
        return tuple(item(part) for part in parts)

    return parse


def choice_of(choices: Iterable[str]) -> Callable[[str], str]:
    """argparse type for one of a fixed set of names (usable inside comma_list)."""
    allowed = tuple(choices)

    def parse(text: str) -> str:
        if text not in allowed:
            raise argparse.ArgumentTypeError(
                f"invalid choice {text!r}: choose from {', '.join(allowed)}"
            )
        return text

    return parse
