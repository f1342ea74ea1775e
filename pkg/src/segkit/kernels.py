"""Compiled inner loops for the cumulative solvers.

A penalty source hands its evaluation arrays over as a PenaltyKernel; the
compiled _penalty() repeats the source's eval_unchecked arithmetic
operation for operation, so both paths return the same floats.
"""
# pyright: basic

from __future__ import annotations

from typing import NamedTuple

import numba
import numpy as np

from segkit.models import FloatArray, IntArray

L2_KERNEL = 0
RANGE_KERNEL = 1


class PenaltyKernel(NamedTuple):
    """Arrays a compiled loop evaluates p(a, b) from.

    Attributes:
        code: L2_KERNEL or RANGE_KERNEL
        upper: l2: 1 x (m + 1) prefix sums of x; range: max sparse table
        lower: l2: 1 x (m + 1) prefix sums of x^2; range: min sparse table
        log2: range: floor(log2 n) for n in 0..m; l2: unused
    """

    code: int
    upper: FloatArray
    lower: FloatArray
    log2: IntArray


def floor_log2(m: int) -> IntArray:
    """floor(log2 n) for n = 0..m, with 0 at n = 0."""
    n = np.maximum(np.arange(m + 1), 1).astype(np.float64)
    return (np.frexp(n)[1] - 1).astype(np.int64)


@numba.njit(cache=True)
def _penalty(code, upper, lower, log2, a, b):
    if a == b:
        return 0.0
    if code == L2_KERNEL:
        s1 = upper[0, b] - upper[0, a]
        v = (lower[0, b] - lower[0, a]) - s1 * s1 / (b - a)
        return v if v > 0.0 else 0.0
    j = log2[b - a]
    c = b - (1 << j)
    top = max(upper[j, a], upper[j, c])
    bottom = min(lower[j, a], lower[j, c])
    return (top - bottom) / 2.0


@numba.njit(cache=True)
def _sparsify(candidates, n, delta, scores):
    """Sparsify candidates[:n] in place and return the new length."""
    if n < 3:
        return n
    anchor = candidates[0]
    middle = candidates[1]
    kept = 1
    for r in range(2, n):
        x = candidates[r]
        if scores[x] - scores[anchor] <= delta:
            middle = x
        else:
            candidates[kept] = middle
            kept += 1
            anchor = middle
            middle = x
    candidates[kept] = middle
    return kept + 1


@numba.njit(cache=True)
def _all_dp_levels(code, upper, lower, log2, values, back, k, epsilon, bounds):
    """Fill levels 2..k of values and back; level 1 must already be set.

    bounds[l] caps the candidate-set size at level l; an empty bounds
    disables the check. Returns (evals, largest, ell, i, size). A non-zero
    ell reports the first prefix whose candidate set broke its bound.
    """
    m = values.shape[1] - 1
    candidates = np.empty(m + 1, dtype=np.int64)
    evals = 0
    largest = 1
    for ell in range(2, k + 1):
        prev = values[ell - 1]
        shrink = epsilon / (k + ell * epsilon)
        candidates[0] = 0
        n = 1
        for i in range(1, m + 1):
            best = np.inf
            arg = 0
            for r in range(n):
                a = candidates[r]
                v = prev[a] + _penalty(code, upper, lower, log2, a, i)
                if v < best:
                    best = v
                    arg = a
            evals += n
            a = candidates[n - 1] + 1
            while a <= i and prev[a] <= best:
                v = prev[a] + _penalty(code, upper, lower, log2, a, i)
                evals += 1
                if v < best:
                    best = v
                    arg = a
                candidates[n] = a
                n += 1
                a += 1
            values[ell, i] = best
            back[ell, i] = arg
            n = _sparsify(candidates, n, best * shrink, prev)
            largest = max(largest, n)
            if bounds.size and n > bounds[ell]:
                return evals, largest, ell, i, n
    return evals, largest, 0, 0, 0


@numba.njit(cache=True)
def _precedes(key, i, j):
    return key[i] < key[j] or (key[i] == key[j] and i < j)


@numba.njit(cache=True)
def _swap(heap, pos, x, y):
    heap[x], heap[y] = heap[y], heap[x]
    pos[heap[x]] = x
    pos[heap[y]] = y


@numba.njit(cache=True)
def _sift_up(heap, pos, key, x):
    while x > 0:
        parent = (x - 1) // 2
        if not _precedes(key, heap[x], heap[parent]):
            return
        _swap(heap, pos, x, parent)
        x = parent


@numba.njit(cache=True)
def _sift_down(heap, pos, key, x, size):
    while True:
        first = x
        left = 2 * x + 1
        right = left + 1
        if left < size and _precedes(key, heap[left], heap[first]):
            first = left
        if right < size and _precedes(key, heap[right], heap[first]):
            first = right
        if first == x:
            return
        _swap(heap, pos, x, first)
        x = first


@numba.njit(cache=True)
def _set_key(heap, pos, key, j, value, size):
    key[j] = value
    if pos[j] < 0:
        heap[size] = j
        pos[j] = size
        _sift_up(heap, pos, key, size)
        return size + 1
    _sift_up(heap, pos, key, pos[j])
    _sift_down(heap, pos, key, pos[j], size)
    return size


@numba.njit(cache=True)
def _remove(heap, pos, key, j, size):
    x = pos[j]
    if x < 0:
        return size
    size -= 1
    if x != size:
        _swap(heap, pos, x, size)
        moved = heap[x]
        _sift_down(heap, pos, key, x, size)
        _sift_up(heap, pos, key, pos[moved])
    pos[j] = -1
    return size


@numba.njit(cache=True)
def _all_ms_sweep(code, upper, lower, log2, values, k):
    """Boundary sweep over values, whose unsolved cells hold NaN.

    An indexed binary heap keyed by (p(b_{j-1}, b_j + 1), j) holds the
    eligible boundaries b_j < b_{j+1}.

    Returns (increments, evals, rewrites, settled): rewrites counts writes
    to cells already holding a value; settled is true when every boundary
    ends at m.
    """
    m = values.shape[1] - 1
    b = np.zeros(k + 2, dtype=np.int64)
    b[k + 1] = m
    key = np.empty(k + 2, dtype=np.float64)
    heap = np.empty(k, dtype=np.int64)
    pos = np.full(k + 2, -1, dtype=np.int64)
    size = 0
    evals = 0
    for j in range(1, k + 1):
        if b[j] < b[j + 1]:
            grown = _penalty(code, upper, lower, log2, b[j - 1], b[j] + 1)
            size = _set_key(heap, pos, key, j, grown, size)
            evals += 1

    tau = 0.0
    increments = 0
    rewrites = 0
    while size > 0:
        ell = heap[0]
        b[ell] += 1
        increments += 1
        tau = max(tau, key[ell])
        if not np.isnan(values[ell, b[ell]]):
            rewrites += 1
        values[ell, b[ell]] = tau
        for j in range(ell - 1, ell + 2):
            if j < 1 or j > k:
                continue
            if b[j] < b[j + 1]:
                grown = _penalty(code, upper, lower, log2, b[j - 1], b[j] + 1)
                size = _set_key(heap, pos, key, j, grown, size)
                evals += 1
            else:
                size = _remove(heap, pos, key, j, size)

    settled = True
    for j in range(1, k + 1):
        if b[j] != m:
            settled = False
    return increments, evals, rewrites, settled


def sparsify_prefix(candidates: IntArray, delta: float, scores: FloatArray) -> int:
    """Sparsify a candidate array in place; its first n entries survive."""
    return int(_sparsify(candidates, len(candidates), delta, scores))


def all_dp_levels(
    kernel: PenaltyKernel,
    values: FloatArray,
    back: IntArray,
    k: int,
    epsilon: float,
    bounds: FloatArray | None,
) -> tuple[int, int, int, int, int]:
    """Compiled all_dp levels 2..k; see _all_dp_levels for the result."""
    if bounds is None:
        bounds = np.empty(0, dtype=np.float64)
    result = _all_dp_levels(*kernel, values, back, k, epsilon, bounds)
    evals, largest, ell, i, size = result
    return int(evals), int(largest), int(ell), int(i), int(size)


def all_ms_sweep(
    kernel: PenaltyKernel, values: FloatArray, k: int
) -> tuple[int, int, int, bool]:
    """Compiled all_ms sweep; see _all_ms_sweep for the result."""
    increments, evals, rewrites, settled = _all_ms_sweep(*kernel, values, k)
    return int(increments), int(evals), int(rewrites), bool(settled)
