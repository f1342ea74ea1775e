"""Shared fixtures for segkit tests."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import pytest

from segkit.models import Series
from segkit.penalty import PenaltySource, build

SeriesFactory = Callable[[np.random.Generator, int], Series]


def _draw(rng: np.random.Generator, m: int) -> Series:
    # small integers make ties common; scaled normals cover the generic case
    if rng.random() < 0.5:
        return Series.of(rng.integers(-4, 5, size=m).astype(np.float64))
    return Series.of(rng.normal(0.0, rng.uniform(0.5, 10.0), size=m))


@pytest.fixture
def draw_series() -> SeriesFactory:
    """Random series factory: half integer-valued, half scaled Gaussian."""
    return _draw


@pytest.fixture
def l2_1234() -> PenaltySource:
    return build("l2", Series.of([1, 2, 3, 4]))


@pytest.fixture
def l2_step() -> PenaltySource:
    return build("l2", Series.of([0, 0, 0, 9, 9, 9]))
