"""Tests for settings loading."""

from __future__ import annotations

from pathlib import Path

import pytest

from segkit.config import Settings, load_settings
from segkit.errors import UsageError


def _write(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "segkit.toml"
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadSettings:
    """Tests for load_settings() function."""

    def test_defaults(self):
        settings = load_settings(None)
        assert settings == Settings()
        assert settings.alpha_seed == "max"
        assert settings.exact_cap == 20_000
        assert settings.enumeration_budget == 1_000_000
        assert settings.max_estimate_iterations == 500
        assert settings.max_oracle_pairs == 10_000_000
        assert settings.check_candidate_bound is False

    def test_overrides(self, tmp_path: Path):
        path = _write(
            tmp_path,
            '[segkit]\nalpha_seed = "sum"\nexact_cap = 500\n'
            "check_candidate_bound = true\n",
        )
        settings = load_settings(path)
        assert settings.alpha_seed == "sum"
        assert settings.exact_cap == 500
        assert settings.check_candidate_bound is True
        assert settings.max_estimate_iterations == 500

    def test_other_tables_ignored(self, tmp_path: Path):
        path = _write(tmp_path, "[tool]\nexact_cap = 3\n")
        assert load_settings(path) == Settings()

    def test_unknown_key(self, tmp_path: Path):
        path = _write(tmp_path, "[segkit]\nexact_limit = 3\n")
        with pytest.raises(UsageError, match="unknown config key 'exact_limit'"):
            load_settings(path)

    @pytest.mark.parametrize(
        "line",
        [
            'exact_cap = "big"',
            "exact_cap = 1.5",
            "check_candidate_bound = 1",
            "exact_cap = true",
        ],
    )
    def test_wrong_type(self, tmp_path: Path, line: str):
        path = _write(tmp_path, f"[segkit]\n{line}\n")
        with pytest.raises(UsageError, match="expects"):
            load_settings(path)

    def test_bad_alpha_seed(self, tmp_path: Path):
        path = _write(tmp_path, '[segkit]\nalpha_seed = "min"\n')
        with pytest.raises(UsageError, match="alpha_seed"):
            load_settings(path)

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(UsageError, match="cannot read config"):
            load_settings(tmp_path / "absent.toml")

    def test_invalid_toml(self, tmp_path: Path):
        path = _write(tmp_path, "[segkit\n")
        with pytest.raises(UsageError, match="invalid config"):
            load_settings(path)
