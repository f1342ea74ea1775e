"""Cumulative solvers: every prefix i and every level l <= k in one sweep.

all_dp approximates AllSeg within (1 + epsilon l / k) in O(m k^2 / epsilon)
evals by keeping a sparse candidate set of last-segment starts. all_ms
solves AllMaxSeg exactly in O(m k log k) by moving k boundaries rightwards,
always the one whose next step is cheapest. Both hot loops are compiled
(see segkit.kernels).
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from segkit.errors import ContractViolation, UnsupportedOperation
from segkit.kernels import all_dp_levels, all_ms_sweep, sparsify_prefix
from segkit.models import FloatArray, IntArray, Segmentation
from segkit.penalty import PenaltySource

CandidateSet = list[int]

TRIPLET = 3


@dataclass(frozen=True, slots=True, eq=False)
class CumulativeTable:
    """Costs s[l, i] for prefixes 0..m and levels 0..k (row 0 is a sentinel).

    Attributes:
        values: (k + 1) x (m + 1) cost table
        back: Last-segment starts (all_dp only)
        objective: "sum" for all_dp, "max" for all_ms
        increments: Boundary moves performed (all_ms only)
        max_candidates: Largest candidate set seen (all_dp only)
    """

    values: FloatArray
    back: IntArray | None
    objective: Literal["sum", "max"]
    increments: int = 0
    max_candidates: int = 0

    @property
    def k(self) -> int:
        return self.values.shape[0] - 1

    @property
    def m(self) -> int:
        return self.values.shape[1] - 1

    def cost(self, i: int, ell: int) -> float:
        if not (0 <= i <= self.m and 1 <= ell <= self.k):
            raise ContractViolation(
                f"cell ({i}, {ell}) outside table m={self.m}, k={self.k}"
            )
        return float(self.values[ell, i])

    def row(self, i: int) -> tuple[float, ...]:
        """Costs of prefix i at levels 1..k."""
        return tuple(self.cost(i, ell) for ell in range(1, self.k + 1))


def _sentinel_table(k: int, m: int) -> FloatArray:
    values = np.full((k + 1, m + 1), np.inf)
    values[:, 0] = 0.0
    return values


def candidate_bound(k: int, ell: int, epsilon: float) -> float:
    """Largest candidate-set size sparsify can leave at level ell."""
    return 2 + 2 * (k + ell * epsilon) / epsilon


def sparsify(
    candidates: CandidateSet, delta: float, scores: Sequence[float]
) -> CandidateSet:
    """Drop the middle of every triplet whose outer scores differ by <= delta.

    Scans left to right: while the triplet at the current position qualifies
    its middle is removed and the position stays; otherwise the position
    advances. The first and last candidates always survive. scores is
    indexed by boundary.
    """
    if len(candidates) < TRIPLET:
        return list(candidates)
    kept = np.array(candidates, dtype=np.int64)
    n = sparsify_prefix(kept, delta, np.asarray(scores, dtype=np.float64))
    return kept[:n].tolist()


def all_dp(
    ps: PenaltySource, k: int, epsilon: float, *, check_candidate_bound: bool = False
) -> CumulativeTable:
    """Approximate AllSeg: o[i, l] <= s[i, l] <= (1 + epsilon l / k) o[i, l].

    Level 1 is exact. For each higher level the candidate set A of
    last-segment starts begins at {0}; each prefix i tries A, extends A
    past its maximum while the previous level's score does not exceed the
    current best, then sparsifies A with delta = s[i, l] epsilon / (k + l epsilon).
    Ties keep the earliest candidate.

    Args:
        ps: Penalty source
        k: Largest number of segments
        epsilon: Approximation slack, > 0
        check_candidate_bound: Raise if a sparsified candidate set exceeds
            2 + 2 (k + l epsilon) / epsilon

    Raises:
        ContractViolation: If k < 1, epsilon <= 0, or the bound check fails
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    if not epsilon > 0:
        raise ContractViolation(f"epsilon must be > 0, got {epsilon}")

    m = ps.m
    values = _sentinel_table(k, m)
    back = np.zeros((k + 1, m + 1), dtype=np.int64)
    values[1] = ps.eval_many_unchecked(
        np.zeros(m + 1, dtype=np.int64), np.arange(m + 1)
    )

    bounds: FloatArray | None = None
    if check_candidate_bound:
        bounds = np.array([candidate_bound(k, ell, epsilon) for ell in range(k + 1)])
    evals, largest, ell, i, size = all_dp_levels(
        ps.kernel(), values, back, k, epsilon, bounds
    )
    ps.charge(evals)
    if ell:
        bound = candidate_bound(k, ell, epsilon)
        raise ContractViolation(
            f"candidate set of {size} exceeds bound {bound:.2f} "
            f"at prefix {i}, level {ell}"
        )
    logging.debug("all_dp done, largest candidate set %d", largest)
    return CumulativeTable(
        values=values, back=back, objective="sum", max_candidates=largest
    )


def reconstruct_cumulative(table: CumulativeTable, i: int, ell: int) -> Segmentation:
    """Backpointer walk over an all_dp table; its cost reproduces s[i, l].

    Raises:
        UnsupportedOperation: For all_ms tables, which carry no backpointers
    """
    if table.back is None:
        raise UnsupportedOperation(
            f"{table.objective}-objective table has no backpointers"
        )
    table.cost(i, ell)

    boundaries = [i]
    for level in range(ell, 0, -1):
        boundaries.append(int(table.back[level, boundaries[-1]]))
    boundaries.reverse()
    return Segmentation.of(boundaries)


def all_ms(ps: PenaltySource, k: int) -> CumulativeTable:
    """Solve AllMaxSeg exactly.

    Boundaries b_1..b_k start at 0 under the fixed sentinel b_{k+1} = m.
    Each step advances the eligible boundary (b_j < b_{j+1}) whose grown
    segment p(b_{j-1}, b_j + 1) is cheapest, smallest j on ties; the running
    maximum of those costs is the optimum for the advanced boundary's prefix
    and level. An indexed heap holds the eligible keys; moving b_l only
    touches the keys of l - 1, l and l + 1.

    Raises:
        ContractViolation: If k < 1, or the sweep does not fill every cell
            exactly once in k m increments ending with every boundary at m
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")

    m = ps.m
    values = _sentinel_table(k, m)
    values[1:, 1:] = np.nan
    increments, evals, rewrites, settled = all_ms_sweep(ps.kernel(), values, k)
    ps.charge(evals)

    if rewrites:
        raise ContractViolation(f"all_ms wrote {rewrites} cell(s) more than once")
    if increments != k * m or not settled:
        raise ContractViolation(
            f"all_ms made {increments} increment(s), expected {k * m}"
        )
    logging.debug("all_ms finished after %d increment(s)", increments)
    return CumulativeTable(
        values=values, back=None, objective="max", increments=increments
    )
