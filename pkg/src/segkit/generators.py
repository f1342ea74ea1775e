"""Reproducible synthetic series for the benchmark harness."""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np

from segkit.errors import UsageError
from segkit.models import FloatArray, Series

PLANTED_LEVELS = 10


def step(rng: np.random.Generator, m: int) -> FloatArray:
    """Piecewise-constant: 10 levels in [-10, 10] at sorted random boundaries.

    Uniform noise in [-1, 1] is added on top.
    """
    levels = rng.uniform(-10.0, 10.0, size=PLANTED_LEVELS)
    cuts = min(PLANTED_LEVELS - 1, m - 1)
    planted = np.empty(0)
    if cuts:
        planted = np.sort(rng.choice(np.arange(1, m), size=cuts, replace=False))
    labels = np.searchsorted(planted, np.arange(m), side="right")
    return levels[labels] + rng.uniform(-1.0, 1.0, size=m)


def walk(rng: np.random.Generator, m: int) -> FloatArray:
    """Random walk of uniform steps in [-1, 1]."""
    return np.cumsum(rng.uniform(-1.0, 1.0, size=m))


def noise(rng: np.random.Generator, m: int) -> FloatArray:
    """Uniform noise in [-1, 1]."""
    return rng.uniform(-1.0, 1.0, size=m)


GENERATORS: dict[str, Callable[[np.random.Generator, int], FloatArray]] = {
    "step": step,
    "walk": walk,
    "noise": noise,
}


def generate(generator: str, m: int, seed: int) -> Series:
    """Draw an m-point series.

    The same (generator, m, seed) always gives the same values.

    Raises:
        UsageError: If the generator is unknown or m < 1
    """
    if generator not in GENERATORS:
        known = ", ".join(GENERATORS)
        raise UsageError(f"unknown generator '{generator}': choose from {known}")
    if m < 1:
        raise UsageError(f"series length must be >= 1, got {m}")
    series = Series.of(GENERATORS[generator](np.random.default_rng(seed), m))
    logging.debug("Generated %s series: m=%d, seed=%d", generator, m, seed)
    return series
