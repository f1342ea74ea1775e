"""Strongly polynomial (1 + epsilon)-approximation for Seg.

The pipeline solves MaxSeg first; its optimum brackets the Seg optimum
within a factor k, which bounds the number of estimate rounds by O(log k)
regardless of the magnitude of the data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from segkit.config import AlphaSeed
from segkit.errors import ContractViolation
from segkit.maxseg import ms_fast, reconstruct_maxseg
from segkit.models import IntArray, Segmentation
from segkit.penalty import PenaltySource, ScaledPenalty

DEFAULT_MAX_ESTIMATE_ITERATIONS = 500
DEFAULT_MAX_ORACLE_PAIRS = 10_000_000


@dataclass(frozen=True, slots=True)
class OracleResult:
    """Outcome of a budgeted oracle call; cost is the true recomputed sum."""

    feasible: bool
    segmentation: Segmentation | None = None
    cost: float | None = None


@dataclass(frozen=True, slots=True)
class ApproxOutcome:
    """A (1 + epsilon)-approximate segmentation and how it was found."""

    segmentation: Segmentation
    cost: float
    eta: float
    alpha: float
    estimate_iterations: int
    delta: float


def oracle(
    ps: PenaltySource,
    k: int,
    delta: float,
    u: float,
    *,
    max_pairs: int = DEFAULT_MAX_ORACLE_PAIRS,
) -> OracleResult:
    """Budgeted k-segmentation with cost <= theta + delta whenever theta + delta <= u.

    Segment budgets are quantised to the grid g = delta / k with
    C = ceil(u / g) levels. reach[l][c] is the furthest boundary l segments
    can reach with total budget c * g, each segment jumping as far as its
    share allows. Rounding every optimal segment up to the grid adds at most
    k * g = delta, so the optimum fits in C levels when theta + delta <= u.
    The smallest c reaching m is backtracked. Costs O(k C^2 log m) evals.

    Args:
        ps: Penalty source
        k: Number of segments
        delta: Additive slack, > 0
        u: Cost ceiling, >= delta
        max_pairs: Largest number of (spent, total) budget pairs to tabulate

    Returns:
        Feasible result with the true cost, or an infeasible result when no
        budget level up to C reaches m

    Raises:
        ContractViolation: If k < 1, delta <= 0, u < delta, or the budget grid
            needs more than max_pairs pairs
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    if not delta > 0 or not u >= delta:
        raise ContractViolation(
            f"oracle needs delta > 0 and u >= delta, got delta={delta}, u={u}"
        )

    m = ps.m
    grid = delta / k
    ratio = u / grid
    levels = math.ceil(ratio) if math.isfinite(ratio) else None
    if levels is None or (levels + 1) * (levels + 2) // 2 > max_pairs:
        raise ContractViolation(
            f"oracle budget grid of {ratio:.3g} level(s) exceeds {max_pairs} "
            "budget pairs; "
            "raise epsilon or lower k"
        )
    # every (spent, total) budget pair with spent <= total <= levels
    spent, total = np.triu_indices(levels + 1)
    spent = spent.astype(np.int64)
    total = total.astype(np.int64)
    budgets = (total - spent) * grid

    reach: list[IntArray] = [np.zeros(levels + 1, dtype=np.int64)]
    back: list[IntArray] = [np.zeros(levels + 1, dtype=np.int64)]
    for _ in range(k):
        hops = ps.furthest_many(reach[-1][spent], budgets)
        row = np.full(levels + 1, -1, dtype=np.int64)
        np.maximum.at(row, total, hops)
        best = hops == row[total]
        pred = np.zeros(levels + 1, dtype=np.int64)
        pred[total[best]] = spent[best]
        reach.append(row)
        back.append(pred)

    if reach[k][levels] != m:
        logging.debug(
            "Oracle infeasible: delta=%g, u=%g, %d budget level(s)", delta, u, levels
        )
        return OracleResult(feasible=False)

    c = int(np.argmax(reach[k] == m))
    boundaries = [m]
    for ell in range(k, 0, -1):
        c = int(back[ell][c])
        boundaries.append(int(reach[ell - 1][c]))
    boundaries.reverse()
    segmentation = Segmentation.of(boundaries)
    cost = segmentation.total_cost(ps)
    logging.debug("Oracle feasible at budget level %d of %d, cost %g", c, levels, cost)
    return OracleResult(feasible=True, segmentation=segmentation, cost=cost)


def estimate(
    ps: PenaltySource,
    k: int,
    alpha: float,
    max_iterations: int = DEFAULT_MAX_ESTIMATE_ITERATIONS,
    *,
    max_pairs: int = DEFAULT_MAX_ORACLE_PAIRS,
) -> tuple[float, int]:
    """Find eta with eta <= theta <= 2 eta, given a lower bound alpha <= theta.

    eta grows as alpha * 1.5**t until oracle(eta / 2, 2 eta) returns a
    cost <= 2 eta; an infeasible oracle counts as infinite cost.

    Returns:
        (eta, t)

    Raises:
        ContractViolation: If alpha <= 0, or the loop runs past
            max_iterations (alpha was not a lower bound)
    """
    if not alpha > 0:
        raise ContractViolation(f"alpha must be > 0, got {alpha}")

    t = 0
    while True:
        eta = alpha * 1.5**t
        result = oracle(ps, k, eta / 2, 2 * eta, max_pairs=max_pairs)
        tau = result.cost if result.cost is not None else math.inf
        if tau <= 2 * eta:
            logging.debug("Estimate settled at eta=%g after %d iteration(s)", eta, t)
            return eta, t
        t += 1
        if t > max_iterations:
            raise ContractViolation(
                f"estimate did not settle within {max_iterations} iterations"
            )


def solve_approx(
    ps: PenaltySource,
    k: int,
    epsilon: float,
    *,
    alpha_seed: AlphaSeed = "max",
    max_estimate_iterations: int = DEFAULT_MAX_ESTIMATE_ITERATIONS,
    max_oracle_pairs: int = DEFAULT_MAX_ORACLE_PAIRS,
) -> ApproxOutcome:
    """(1 + epsilon)-approximate Seg, seeded by the MaxSeg optimum.

    With Delta the MaxSeg optimum, Delta <= theta <= k Delta. A zero Delta
    means a zero-cost segmentation exists and is returned directly.
    Otherwise the estimate loop and the final oracle run on p / Delta, so
    their budget comparisons, and the boundaries they pick, do not depend
    on the magnitude of the data.

    Args:
        ps: Penalty source
        k: Number of segments
        epsilon: Approximation slack, > 0
        alpha_seed: "max" seeds with Delta, "sum" with score(B') / k where B'
            is the reconstructed MaxSeg segmentation
        max_estimate_iterations: Safety stop for the estimate loop
        max_oracle_pairs: Budget-pair cap passed to every oracle call

    Raises:
        ContractViolation: If k < 1, epsilon <= 0, or an oracle call would
            exceed max_oracle_pairs
    """
    if k < 1:
        raise ContractViolation(f"k must be >= 1, got {k}")
    if not epsilon > 0:
        raise ContractViolation(f"epsilon must be > 0, got {epsilon}")

    delta = ms_fast(ps, k).value
    if delta == 0:
        segmentation = reconstruct_maxseg(ps, k, 0.0)
        logging.info("MaxSeg optimum is 0; returning a zero-cost segmentation")
        return ApproxOutcome(
            segmentation=segmentation,
            cost=segmentation.total_cost(ps),
            eta=0.0,
            alpha=0.0,
            estimate_iterations=0,
            delta=0.0,
        )

    unit = ScaledPenalty(ps, delta)
    match alpha_seed:
        case "max":
            alpha = 1.0
        case "sum":
            alpha = reconstruct_maxseg(ps, k, delta).total_cost(unit) / k

    eta, iterations = estimate(
        unit, k, alpha, max_estimate_iterations, max_pairs=max_oracle_pairs
    )
    result = oracle(
        unit, k, epsilon * eta, (2 + epsilon) * eta, max_pairs=max_oracle_pairs
    )
    if result.segmentation is None:
        raise ContractViolation(
            f"oracle infeasible at eta={eta * delta!r}; "
            "bracket eta <= theta <= 2 eta broken"
        )
    cost = result.segmentation.total_cost(ps)
    eta *= delta
    alpha *= delta

    logging.info(
        "Approximation: Delta=%g alpha=%g eta=%g after %d estimate iteration(s), "
        "cost %g",
        delta,
        alpha,
        eta,
        iterations,
        cost,
    )
    return ApproxOutcome(
        segmentation=result.segmentation,
        cost=cost,
        eta=eta,
        alpha=alpha,
        estimate_iterations=iterations,
        delta=delta,
    )
