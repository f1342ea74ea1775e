"""Solver settings, optionally loaded from a TOML file."""

from __future__ import annotations

import logging
import tomllib
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Literal

from segkit.errors import UsageError

AlphaSeed = Literal["max", "sum"]


@dataclass(frozen=True, slots=True)
class Settings:
    """Tunables shared by the CLI, the solvers and the benchmark harness.

    Attributes:
        alpha_seed: "max" seeds the estimate loop with the MaxSeg optimum,
            "sum" with the sum-cost of the MaxSeg segmentation divided by k.
        check_candidate_bound: Assert the candidate-set size bound after
            every sparsify call in all_dp.
        enumeration_budget: Largest boundary-placement count the brute force
            oracles will enumerate.
        exact_cap: Largest m the exact quadratic program is run on.
        max_estimate_iterations: Safety stop for the estimate loop.
        max_oracle_pairs: Largest budget grid, in (spent, total) pairs, an
            oracle call may tabulate; small epsilons need quadratically more.
    """

    alpha_seed: AlphaSeed = "max"
    check_candidate_bound: bool = False
    enumeration_budget: int = 1_000_000
    exact_cap: int = 20_000
    max_estimate_iterations: int = 500
    max_oracle_pairs: int = 10_000_000


def load_settings(path: Path | None) -> Settings:
    """Read the [segkit] table of a TOML file over the defaults.

    Args:
        path: TOML file, or None for defaults

    Returns:
        Settings with any file overrides applied

    Raises:
        UsageError: If the file is unreadable or holds unknown keys or bad types
    """
    settings = Settings()
    if path is None:
        return settings

    try:
        with path.open("rb") as fh:
            document = tomllib.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e.strerror}") from e
    except tomllib.TOMLDecodeError as e:
        raise UsageError(f"invalid config {path}: {e}") from e

    table: dict[str, Any] = document.get("segkit", {})
    known = {f.name: f for f in fields(Settings)}
    overrides: dict[str, Any] = {}
    for key, value in table.items():
        if key not in known:
            raise UsageError(
                f"unknown config key {key!r}: choose from {', '.join(known)}"
            )
        default = getattr(settings, key)
        # bool is an int subclass; keep them apart
        if type(value) is not type(default):
            raise UsageError(
                f"config key {key!r} expects {type(default).__name__}, "
                f"got {type(value).__name__}"
            )
        overrides[key] = value

    if overrides.get("alpha_seed", "max") not in {"max", "sum"}:
        raise UsageError("config key 'alpha_seed' must be 'max' or 'sum'")

    logging.debug("Loaded %d setting override(s) from %s", len(overrides), path)
    return replace(settings, **overrides)
