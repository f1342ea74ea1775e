"""Monotone segment penalties with constant-time evaluation.

Boundaries are integers 0..m and the segment (a, b] covers points
x_{a+1}..x_b, so p(a, a) = 0 is the empty segment.
"""

from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import ClassVar

import numpy as np
import numpy.typing as npt

from segkit.errors import (
    ContractViolation,
    InputError,
    UnsupportedOperation,
    UsageError,
)
from segkit.kernels import L2_KERNEL, RANGE_KERNEL, PenaltyKernel, floor_log2
from segkit.models import FloatArray, IntArray, PenaltyKind, Series


class PenaltySource(ABC):
    """Strategy interface for segment penalties.

    Implementations must satisfy p(a, a) = 0, p >= 0 and nesting
    monotonicity: a1 <= a2 <= b2 <= b1 implies p(a2, b2) <= p(a1, b1).
    Sources are immutable after construction and safe to share between
    threads.
    """

    kind: ClassVar[str]

    @property
    @abstractmethod
    def m(self) -> int:
        """Number of points; boundaries run 0..m."""

    @abstractmethod
    def eval_unchecked(self, a: int, b: int) -> float:
        """p(a, b) without index validation."""

    @abstractmethod
    def eval_many_unchecked(self, a: IntArray, b: IntArray) -> FloatArray:
        """Element-wise p(a, b) without index validation."""

    def kernel(self) -> PenaltyKernel:
        """Evaluation arrays for the compiled cumulative loops.

        Raises:
            UnsupportedOperation: If the source has no compiled form
        """
        raise UnsupportedOperation(f"{self.kind} penalty has no compiled kernel")

    def charge(self, count: int) -> None:
        """Record evaluations performed inside a compiled kernel."""

    def eval(self, a: int, b: int) -> float:
        """Penalty of the segment (a, b].

        Raises:
            ContractViolation: Unless 0 <= a <= b <= m
        """
        if not 0 <= a <= b <= self.m:
            raise ContractViolation(f"invalid segment ({a}, {b}] for m={self.m}")
        return self.eval_unchecked(a, b)

    def eval_many(self, a: npt.ArrayLike, b: npt.ArrayLike) -> FloatArray:
        """Vectorised eval; results are bit-identical to scalar eval."""
        aa, bb = np.broadcast_arrays(
            np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        )
        if aa.size and (aa.min() < 0 or bb.max() > self.m or np.any(aa > bb)):
            raise ContractViolation(f"invalid segment in batch for m={self.m}")
        return self.eval_many_unchecked(aa, bb)

    def furthest(self, a: int, w: float) -> int:
        """Largest b in [a, m] with p(a, b) <= w, by binary search."""
        if not 0 <= a <= self.m or w < 0:
            raise ContractViolation(
                f"furthest needs 0 <= a <= m and w >= 0, got a={a}, w={w}"
            )
        lo, hi = a, self.m
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.eval_unchecked(a, mid) <= w:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def furthest_many(self, a: IntArray, w: FloatArray) -> IntArray:
        """Vectorised furthest over paired start boundaries and budgets."""
        a, w = np.broadcast_arrays(
            np.asarray(a, dtype=np.int64), np.asarray(w, dtype=np.float64)
        )
        lo = a.copy()
        hi = np.full_like(lo, self.m)
        active = np.flatnonzero(lo < hi)
        while active.size:
            la, ha = lo[active], hi[active]
            mid = (la + ha + 1) // 2
            ok = self.eval_many_unchecked(a[active], mid) <= w[active]
            lo[active] = np.where(ok, mid, la)
            hi[active] = np.where(ok, ha, mid - 1)
            active = active[lo[active] < hi[active]]
        return lo


def check_finite(series: Series) -> None:
    """Reject series holding NaN or infinite values.

    Raises:
        InputError: Naming the first offending 0-based point index
    """
    bad = np.flatnonzero(~np.isfinite(series.points))
    if bad.size:
        index = int(bad[0])
        raise InputError(f"point {index} is not finite: {series.points[index]!r}")


class L2Penalty(PenaltySource):
    """Sum of squared deviations from the segment mean.

    p(a, b) = sum x_i^2 - (sum x_i)^2 / (b - a) over i in (a, b], from prefix
    sums of the mean-centred series. Centring leaves every penalty unchanged
    and keeps the prefix sums small.
    """

    kind = "l2"

    def __init__(self, series: Series) -> None:
        check_finite(series)
        centred = series.points - series.points.mean()
        self._m = series.m
        self._s1 = np.concatenate(([0.0], np.cumsum(centred)))
        self._s2 = np.concatenate(([0.0], np.cumsum(centred * centred)))
        # plain floats keep the scalar path free of numpy boxing
        self._l1: list[float] = self._s1.tolist()
        self._l2: list[float] = self._s2.tolist()
        self._kernel = PenaltyKernel(
            L2_KERNEL,
            self._s1.reshape(1, -1),
            self._s2.reshape(1, -1),
            np.zeros(1, dtype=np.int64),
        )

    @property
    def m(self) -> int:
        return self._m

    def eval_unchecked(self, a: int, b: int) -> float:
        if a == b:
            return 0.0
        s1 = self._l1[b] - self._l1[a]
        v = (self._l2[b] - self._l2[a]) - s1 * s1 / (b - a)
        return v if v > 0.0 else 0.0

    def eval_many_unchecked(self, a: IntArray, b: IntArray) -> FloatArray:
        length = b - a
        s1 = self._s1[b] - self._s1[a]
        with np.errstate(divide="ignore", invalid="ignore"):
            v = (self._s2[b] - self._s2[a]) - s1 * s1 / length
        return np.where(length > 0, np.maximum(v, 0.0), 0.0)

    def kernel(self) -> PenaltyKernel:
        return self._kernel


class RangePenalty(PenaltySource):
    """Half the value range, the optimal L-infinity centre cost.

    p(a, b) = (max - min) / 2 over points (a, b], answered in O(1) from
    sparse tables of running maxima and minima built in O(m log m).
    """

    kind = "range"

    def __init__(self, series: Series) -> None:
        check_finite(series)
        x = series.points
        self._m = m = series.m
        levels = m.bit_length()
        # row j at column i covers points i .. i + 2**j - 1
        self._hi = np.empty((levels, m), dtype=np.float64)
        self._lo = np.empty((levels, m), dtype=np.float64)
        self._hi[0] = x
        self._lo[0] = x
        for j in range(1, levels):
            half = 1 << (j - 1)
            n = m - (1 << j) + 1
            self._hi[j] = self._hi[j - 1]
            self._lo[j] = self._lo[j - 1]
            self._hi[j, :n] = np.maximum(
                self._hi[j - 1, :n], self._hi[j - 1, half : half + n]
            )
            self._lo[j, :n] = np.minimum(
                self._lo[j - 1, :n], self._lo[j - 1, half : half + n]
            )
        self._kernel = PenaltyKernel(RANGE_KERNEL, self._hi, self._lo, floor_log2(m))
        logging.debug(
            "Built range sparse tables: %d level(s) over %d point(s)", levels, m
        )

    @property
    def m(self) -> int:
        return self._m

    def eval_unchecked(self, a: int, b: int) -> float:
        if a == b:
            return 0.0
        j = (b - a).bit_length() - 1
        c = b - (1 << j)
        top = max(self._hi[j, a], self._hi[j, c])
        bottom = min(self._lo[j, a], self._lo[j, c])
        return float(top - bottom) / 2.0

    def eval_many_unchecked(self, a: IntArray, b: IntArray) -> FloatArray:
        length = b - a
        nonempty = length > 0
        j = np.where(
            nonempty, np.frexp(np.maximum(length, 1).astype(np.float64))[1] - 1, 0
        )
        c = np.where(nonempty, b - (np.int64(1) << j), a)
        a = np.minimum(a, self._m - 1)
        c = np.clip(c, 0, self._m - 1)
        top = np.maximum(self._hi[j, a], self._hi[j, c])
        bottom = np.minimum(self._lo[j, a], self._lo[j, c])
        return np.where(nonempty, (top - bottom) / 2.0, 0.0)

    def kernel(self) -> PenaltyKernel:
        return self._kernel


class CountingPenalty(PenaltySource):
    """Wraps a source and counts every evaluated pair.

    Vectorised calls add one per element. The counter is not synchronised;
    give each thread its own wrapper.
    """

    kind = "counting"

    def __init__(self, inner: PenaltySource) -> None:
        self.inner = inner
        self.eval_count = 0

    @property
    def m(self) -> int:
        return self.inner.m

    def reset(self) -> None:
        self.eval_count = 0

    def eval_unchecked(self, a: int, b: int) -> float:
        self.eval_count += 1
        return self.inner.eval_unchecked(a, b)

    def eval_many_unchecked(self, a: IntArray, b: IntArray) -> FloatArray:
        self.eval_count += int(a.size)
        return self.inner.eval_many_unchecked(a, b)

    def kernel(self) -> PenaltyKernel:
        return self.inner.kernel()

    def charge(self, count: int) -> None:
        self.eval_count += count


class ScaledPenalty(PenaltySource):
    """p(a, b) / unit, so costs read in multiples of a reference penalty.

    A segment whose penalty equals unit evaluates to exactly 1.0 whatever
    the magnitude of the data.
    """

    kind = "scaled"

    def __init__(self, inner: PenaltySource, unit: float) -> None:
        if not (unit > 0 and math.isfinite(unit)):
            raise ContractViolation(f"unit must be finite and > 0, got {unit!r}")
        self.inner = inner
        self.unit = unit

    @property
    def m(self) -> int:
        return self.inner.m

    def eval_unchecked(self, a: int, b: int) -> float:
        return self.inner.eval_unchecked(a, b) / self.unit

    def eval_many_unchecked(self, a: IntArray, b: IntArray) -> FloatArray:
        return self.inner.eval_many_unchecked(a, b) / self.unit


def build_l2(series: Series) -> PenaltySource:
    """L2 penalty source: O(m) build, O(1) eval."""
    return L2Penalty(series)


def build_range(series: Series) -> PenaltySource:
    """Range penalty source: O(m log m) build, O(1) eval."""
    return RangePenalty(series)


PENALTIES: dict[str, Callable[[Series], PenaltySource]] = {
    "l2": build_l2,
    "range": build_range,
}


def build(kind: PenaltyKind | str, series: Series) -> PenaltySource:
    """Build the registered penalty source named by kind.

    Raises:
        UsageError: If kind is not registered
        InputError: If the series holds non-finite values
    """
    if kind not in PENALTIES:
        raise UsageError(
            f"unknown penalty '{kind}': choose from {', '.join(PENALTIES)}"
        )
    source = PENALTIES[kind](series)
    logging.debug("Built %s penalty over %d point(s)", kind, source.m)
    return source
