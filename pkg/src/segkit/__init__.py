"""segkit - Exact, approximate and cumulative sequence segmentation."""

from __future__ import annotations

__version__ = "0.1.0"

from segkit.approx_scheme import (
    ApproxOutcome,
    OracleResult,
    estimate,
    oracle,
    solve_approx,
)
from segkit.cumulative import (
    CumulativeTable,
    all_dp,
    all_ms,
    reconstruct_cumulative,
    sparsify,
)
from segkit.errors import (
    ContractViolation,
    EnumerationBudgetExceeded,
    ExitCode,
    InfeasibleError,
    InputError,
    SegkitError,
    UnsupportedOperation,
    UsageError,
)
from segkit.exact_dp import CostTable, bellman_all, brute_force_seg, reconstruct
from segkit.maxseg import (
    MaxSegResult,
    brute_force_maxseg,
    greedy,
    ms_fast,
    reconstruct_maxseg,
)
from segkit.models import RunReport, Segmentation, Series
from segkit.penalty import (
    CountingPenalty,
    L2Penalty,
    PenaltySource,
    RangePenalty,
    ScaledPenalty,
    build,
)

__all__ = [
    "ApproxOutcome",
    "ContractViolation",
    "CostTable",
    "CountingPenalty",
    "CumulativeTable",
    "EnumerationBudgetExceeded",
    "ExitCode",
    "InfeasibleError",
    "InputError",
    "L2Penalty",
    "MaxSegResult",
    "OracleResult",
    "PenaltySource",
    "RangePenalty",
    "RunReport",
    "SegkitError",
    "ScaledPenalty",
    "Segmentation",
    "Series",
    "UnsupportedOperation",
    "UsageError",
    "all_dp",
    "all_ms",
    "bellman_all",
    "brute_force_maxseg",
    "brute_force_seg",
    "build",
    "estimate",
    "greedy",
    "ms_fast",
    "oracle",
    "reconstruct",
    "reconstruct_cumulative",
    "reconstruct_maxseg",
    "solve_approx",
    "sparsify",
]
