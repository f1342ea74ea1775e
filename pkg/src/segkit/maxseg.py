"""MaxSeg: minimise the largest segment penalty in O(k^2 log^2 m) evals."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from segkit.errors import ContractViolation, InfeasibleError
from segkit.exact_dp import DEFAULT_ENUMERATION_BUDGET, enumerate_segmentations
from segkit.models import Segmentation
from segkit.penalty import PenaltySource


@dataclass(frozen=True, slots=True)
class MaxSegResult:
    """Optimal min-max cost, with the segmentation when it was reconstructed."""

    value: float
    boundaries: Segmentation | None = None


def greedy(ps: PenaltySource, b: int, k: int, tau: float) -> int:
    """Largest boundary reachable from b with at most k segments of cost <= tau.

    Each hop jumps to the furthest boundary whose segment still fits the
    budget; a hop costs one binary search.
    """
    if k < 0 or not 0 <= b <= ps.m:
        raise ContractViolation(
            f"greedy needs k >= 0 and 0 <= b <= m, got k={k}, b={b}"
        )
    for _ in range(k):
        if b == ps.m:
            break
        b = ps.furthest(b, tau)
    return b


def ms_fast(ps: PenaltySource, k: int) -> MaxSegResult:
    """Exact MaxSeg optimum over the whole sequence.

    For l = k..1 find the smallest c >= i such that the remaining l - 1
    segments can cover (c, m] within budget p(i, c); keep the best p(i, c)
    seen and restart from c - 1. The predicate is monotone in c because both
    the start point and the budget grow with it.

    Args:
        ps: Penalty source
        k: Number of segments

    Returns:
        MaxSegResult with value only

    Raises:
        ContractViolation: If k < 1
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")

    m = ps.m
    delta = math.inf
    i = 0
    for ell in range(k, 0, -1):
        lo, hi = i, m
        while lo < hi:
            mid = (lo + hi) // 2
            if greedy(ps, mid, ell - 1, ps.eval(i, mid)) == m:
                hi = mid
            else:
                lo = mid + 1
        c = lo
        if greedy(ps, c, ell - 1, ps.eval(i, c)) != m:
            raise ContractViolation(f"no feasible split found from boundary {i}")
        delta = min(delta, ps.eval(i, c))
        logging.debug("MaxSeg level %d: split at %d, best %g", ell, c, delta)
        if i == c:
            return MaxSegResult(value=delta)
        i = c - 1
    return MaxSegResult(value=delta)


def reconstruct_maxseg(ps: PenaltySource, k: int, delta: float) -> Segmentation:
    """Greedy chain at threshold delta: every hop goes as far as delta allows.

    Raises:
        InfeasibleError: If k hops cannot reach m, i.e. delta is below the
            MaxSeg optimum
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    boundaries = [0]
    for _ in range(k):
        boundaries.append(ps.furthest(boundaries[-1], delta))
    if boundaries[-1] != ps.m:
        raise InfeasibleError(
            f"{k} segment(s) of cost <= {delta!r} reach only boundary "
            f"{boundaries[-1]} of {ps.m}"
        )
    return Segmentation.of(boundaries)


def solve_maxseg(ps: PenaltySource, k: int) -> MaxSegResult:
    """ms_fast followed by reconstruct_maxseg."""
    value = ms_fast(ps, k).value
    return MaxSegResult(value=value, boundaries=reconstruct_maxseg(ps, k, value))


def brute_force_maxseg(
    ps: PenaltySource, k: int, i: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> float:
    """Optimal max-cost of a k-segmentation of prefix i by exhaustive search."""
    best = math.inf
    for bounds in enumerate_segmentations(k, i, budget):
        cost = max(ps.eval(a, b) for a, b in zip(bounds, bounds[1:], strict=False))
        best = min(best, cost)
    return best
