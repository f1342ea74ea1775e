"""Exact O(m^2 k) dynamic program for Seg and AllSeg, plus a brute-force oracle."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from segkit.errors import (
    ContractViolation,
    EnumerationBudgetExceeded,
    UnsupportedOperation,
)
from segkit.models import FloatArray, IntArray, Segmentation
from segkit.penalty import PenaltySource

DEFAULT_ENUMERATION_BUDGET = 1_000_000


@dataclass(frozen=True, slots=True, eq=False)
class CostTable:
    """Optimal costs o[i, l] for every prefix i in 0..m and level l in 0..k.

    Row 0 is the level-0 sentinel: 0 at prefix 0, infinity elsewhere.
    back[l, i] is the start of the last segment of an optimal l-segmentation
    of prefix i, or None when the table was built without backpointers.
    """

    values: FloatArray
    back: IntArray | None

    @property
    def k(self) -> int:
        return self.values.shape[0] - 1

    @property
    def m(self) -> int:
        return self.values.shape[1] - 1

    def cost(self, i: int, ell: int) -> float:
        self._check(i, ell)
        return float(self.values[ell, i])

    def _check(self, i: int, ell: int) -> None:
        if not (0 <= i <= self.m and 1 <= ell <= self.k):
            raise ContractViolation(
                f"cell ({i}, {ell}) outside table m={self.m}, k={self.k}"
            )


def bellman_all(ps: PenaltySource, k: int) -> CostTable:
    """Solve AllSeg exactly with the classic recurrence.

    o[i, l] = min over j <= i of o[j, l - 1] + p(j, i). Ties go to the
    largest j. Each column i evaluates p(j, i) for all j once and reuses it
    across levels, so the program costs O(m^2) evals and O(m^2 k) time.

    Args:
        ps: Penalty source
        k: Largest number of segments

    Returns:
        Dense table with backpointers

    Raises:
        ContractViolation: If k < 1
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")

    m = ps.m
    values = np.full((k + 1, m + 1), np.inf)
    values[0, 0] = 0.0
    back = np.zeros((k + 1, m + 1), dtype=np.int64)

    for i in range(m + 1):
        starts = np.arange(i + 1, dtype=np.int64)
        last = ps.eval_many_unchecked(starts, np.full_like(starts, i))
        for ell in range(1, k + 1):
            totals = values[ell - 1, : i + 1] + last
            j = i - int(np.argmin(totals[::-1]))
            values[ell, i] = totals[j]
            back[ell, i] = j

    logging.debug("Exact program filled %d x %d table", k, m + 1)
    return CostTable(values=values, back=back)


def reconstruct(table: CostTable, i: int, ell: int) -> Segmentation:
    """Walk backpointers to an optimal ell-segmentation of prefix i.

    Raises:
        UnsupportedOperation: If the table has no backpointers
        ContractViolation: If (i, ell) is outside the table
    """
    if table.back is None:
        raise UnsupportedOperation("cost table was built without backpointers")
    table.cost(i, ell)

    boundaries = [i]
    for level in range(ell, 0, -1):
        boundaries.append(int(table.back[level, boundaries[-1]]))
    boundaries.reverse()
    return Segmentation.of(boundaries)


def placement_count(k: int, i: int) -> int:
    """Number of k-segmentations of prefix i: C(i + k - 1, k - 1)."""
    return math.comb(i + k - 1, k - 1)


def enumerate_segmentations(
    k: int, i: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> Iterator[tuple[int, ...]]:
    """Yield every boundary tuple (0, b_1, ..., b_{k-1}, i).

    Raises:
        ContractViolation: If k < 1 or i < 0
        EnumerationBudgetExceeded: If there are more than budget placements
    """
    if k < 1 or i < 0:
        raise ContractViolation(f"need k >= 1 and i >= 0, got k={k}, i={i}")
    count = placement_count(k, i)
    if count > budget:
        raise EnumerationBudgetExceeded(
            f"{count} boundary placements for k={k}, i={i} "
            f"exceed the budget of {budget}"
        )
    for inner in combinations_with_replacement(range(i + 1), k - 1):
        yield (0, *inner, i)


def brute_force_seg(
    ps: PenaltySource, k: int, i: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> float:
    """Optimal sum-cost of a k-segmentation of prefix i by exhaustive search."""
    best = math.inf
    for bounds in enumerate_segmentations(k, i, budget):
        cost = sum(ps.eval(a, b) for a, b in zip(bounds, bounds[1:], strict=False))
        best = min(best, cost)
    return best
