"""Tests for the cumulative solvers."""

from __future__ import annotations

import numpy as np
import pytest

from segkit.cumulative import (
    all_dp,
    all_ms,
    candidate_bound,
    reconstruct_cumulative,
    sparsify,
)
from segkit.errors import ContractViolation, UnsupportedOperation
from segkit.exact_dp import bellman_all
from segkit.kernels import all_ms_sweep
from segkit.maxseg import brute_force_maxseg
from segkit.models import Series
from segkit.penalty import PENALTIES, CountingPenalty, build


def _scores(pairs: dict[int, float]) -> list[float]:
    scores = [0.0] * (max(pairs) + 1)
    for boundary, score in pairs.items():
        scores[boundary] = score
    return scores


class TestSparsify:
    """Tests for sparsify()."""

    def test_drops_close_middle(self):
        scores = _scores({0: 0.0, 5: 0.1, 9: 0.15})
        assert sparsify([0, 5, 9], 0.2, scores) == [0, 9]

    def test_zero_delta_keeps_increasing(self):
        scores = [0.0, 0.1, 0.2, 0.3, 0.4]
        assert sparsify([0, 1, 2, 3, 4], 0.0, scores) == [0, 1, 2, 3, 4]

    @pytest.mark.parametrize("candidates", [[], [3], [0, 7]])
    def test_short_sets_unchanged(self, candidates: list[int]):
        assert sparsify(candidates, 100.0, [0.0] * 8) == candidates

    def test_ends_survive(self):
        scores = [0.0] * 10
        assert sparsify(list(range(10)), 1.0, scores) == [0, 9]

    def test_removes_repeatedly_at_same_position(self):
        scores = [0.0, 0.1, 0.2, 0.3, 5.0, 5.1]
        assert sparsify([0, 1, 2, 3, 4, 5], 0.3, scores) == [0, 3, 4, 5]

    def test_density(self):
        rng = np.random.default_rng(7)
        scores = np.sort(rng.uniform(0, 10, size=200)).tolist()
        candidates = list(range(200))
        kept = sparsify(candidates, 0.5, scores)
        assert kept[0] == 0
        assert kept[-1] == 199
        # every dropped candidate sits between kept neighbours at most delta apart
        for left, right in zip(kept, kept[1:], strict=False):
            if right - left > 1:
                assert scores[right] - scores[left] <= 0.5


class TestAllDp:
    """Tests for all_dp()."""

    def test_zero_optimum(self, l2_step):
        assert all_dp(l2_step, 2, 0.5).cost(6, 2) == 0.0

    def test_1234(self, l2_1234):
        assert 1.0 <= all_dp(l2_1234, 2, 0.5).cost(4, 2) <= 1.5

    def test_tiny_epsilon_reconstructs_optimum(self, l2_1234):
        table = all_dp(l2_1234, 2, 0.01)
        assert reconstruct_cumulative(table, 4, 2).boundaries == (0, 2, 4)

    def test_empty_prefix(self, l2_1234):
        table = all_dp(l2_1234, 3, 0.1)
        assert reconstruct_cumulative(table, 0, 3).boundaries == (0, 0, 0, 0)
        assert table.row(0) == (0.0, 0.0, 0.0)

    def test_first_level_is_exact(self):
        ps = build("l2", Series.of([3, 1, 4, 1, 5, 9, 2, 6]))
        table = all_dp(ps, 3, 0.5)
        assert [table.cost(i, 1) for i in range(ps.m + 1)] == [
            ps.eval(0, i) for i in range(ps.m + 1)
        ]

    @pytest.mark.parametrize("epsilon", [0.1, 0.5, 1.0])
    @pytest.mark.parametrize("kind", list(PENALTIES))
    def test_sandwich_and_candidate_bound(self, kind: str, epsilon: float, draw_series):
        rng = np.random.default_rng(int(epsilon * 10) + (0 if kind == "l2" else 100))
        for _ in range(10):
            ps = build(kind, draw_series(rng, int(rng.integers(1, 100))))
            k = int(rng.integers(1, 6))
            exact = bellman_all(ps, k)
            approx = all_dp(ps, k, epsilon, check_candidate_bound=True)
            for ell in range(1, k + 1):
                o = exact.values[ell]
                s = approx.values[ell]
                assert (s >= o - 1e-9 * np.maximum(1.0, o)).all()
                slack = 1e-9 * np.maximum(1.0, o)
                assert (s <= (1 + epsilon * ell / k) * o + slack).all()
            assert approx.max_candidates <= candidate_bound(k, k, epsilon)

    def test_reconstruction_reproduces_cells(self, draw_series):
        rng = np.random.default_rng(5)
        for _ in range(15):
            ps = build("l2", draw_series(rng, int(rng.integers(1, 60))))
            k = int(rng.integers(1, 5))
            table = all_dp(ps, k, 0.2)
            for i in range(0, ps.m + 1, 7):
                for ell in range(1, k + 1):
                    seg = reconstruct_cumulative(table, i, ell)
                    assert seg.end == i
                    assert seg.total_cost(ps) == pytest.approx(
                        table.cost(i, ell), rel=1e-12, abs=1e-12
                    )

    @pytest.mark.parametrize("kind", list(PENALTIES))
    def test_longer_prefixes_never_cost_less(self, kind: str, draw_series):
        rng = np.random.default_rng(9 if kind == "l2" else 10)
        for _ in range(15):
            ps = build(kind, draw_series(rng, int(rng.integers(1, 120))))
            table = all_dp(ps, int(rng.integers(1, 6)), float(rng.uniform(0.05, 1.0)))
            tol = 1e-12 * max(1.0, ps.eval(0, ps.m))
            assert (np.diff(table.values[1:], axis=1) >= -tol).all()

    @pytest.mark.parametrize("kind", list(PENALTIES))
    def test_cells_are_previous_level_plus_last_segment(self, kind: str, draw_series):
        rng = np.random.default_rng(11 if kind == "l2" else 12)
        ps = build(kind, draw_series(rng, 80))
        table = all_dp(ps, 4, 0.3)
        assert table.back is not None
        for ell in range(2, 5):
            for i in range(1, ps.m + 1):
                a = int(table.back[ell, i])
                assert table.cost(i, ell) == table.values[ell - 1, a] + ps.eval(a, i)

    def test_counts_compiled_evaluations(self):
        m, k = 300, 4
        ps = CountingPenalty(
            build("l2", Series.of(np.random.default_rng(1).normal(size=m)))
        )
        all_dp(ps, k, 0.2)
        assert ps.eval_count >= (m + 1) + (k - 1) * m

    def test_bound_violation_raises(self, monkeypatch, l2_1234):
        monkeypatch.setattr(
            "segkit.cumulative.candidate_bound", lambda k, ell, eps: 0.5
        )
        with pytest.raises(ContractViolation, match="exceeds bound"):
            all_dp(l2_1234, 2, 0.1, check_candidate_bound=True)

    @pytest.mark.parametrize("k,epsilon", [(0, 0.1), (2, 0.0), (2, -1.0)])
    def test_invalid(self, l2_1234, k: int, epsilon: float):
        with pytest.raises(ContractViolation):
            all_dp(l2_1234, k, epsilon)


class TestAllMs:
    """Tests for all_ms()."""

    def test_1234(self, l2_1234):
        table = all_ms(l2_1234, 2)
        assert [table.cost(i, 1) for i in range(1, 5)] == [0.0, 0.5, 2.0, 5.0]
        assert [table.cost(i, 2) for i in range(1, 5)] == [0.0, 0.0, 0.5, 0.5]
        assert table.row(3) == (2.0, 0.5)

    @pytest.mark.parametrize("kind", list(PENALTIES))
    def test_matches_brute_force(self, kind: str, draw_series):
        rng = np.random.default_rng(13 if kind == "l2" else 14)
        for _ in range(50):
            ps = build(kind, draw_series(rng, int(rng.integers(1, 11))))
            k = int(rng.integers(1, 5))
            table = all_ms(ps, k)
            assert table.increments == k * ps.m
            assert not np.isnan(table.values).any()
            for i in range(ps.m + 1):
                for ell in range(1, k + 1):
                    assert table.cost(i, ell) == pytest.approx(
                        brute_force_maxseg(ps, ell, i), rel=1e-9, abs=1e-12
                    )

    def test_eval_count(self):
        m, k = 500, 6
        ps = CountingPenalty(
            build("l2", Series.of(np.random.default_rng(0).normal(size=m)))
        )
        all_ms(ps, k)
        assert ps.eval_count <= k + 3 * k * m

    def test_each_cell_written_once(self, draw_series):
        rng = np.random.default_rng(15)
        for _ in range(20):
            ps = build("l2", draw_series(rng, int(rng.integers(1, 200))))
            k = int(rng.integers(1, 8))
            values = np.full((k + 1, ps.m + 1), np.nan)
            increments, _, rewrites, settled = all_ms_sweep(ps.kernel(), values, k)
            assert rewrites == 0
            assert settled
            assert increments == k * ps.m
            assert not np.isnan(values[1:, 1:]).any()

    def test_rewrite_is_detected(self, l2_1234):
        values = np.full((3, 5), np.nan)
        values[2, 3] = 7.0
        _, _, rewrites, _ = all_ms_sweep(l2_1234.kernel(), values, 2)
        assert rewrites == 1

    def test_no_backpointers(self, l2_1234):
        with pytest.raises(UnsupportedOperation, match="no backpointers"):
            reconstruct_cumulative(all_ms(l2_1234, 2), 4, 2)

    def test_invalid_k(self, l2_1234):
        with pytest.raises(ContractViolation):
            all_ms(l2_1234, 0)


class TestCandidateBound:
    """Tests for candidate_bound()."""

    def test_formula(self):
        assert candidate_bound(10, 1, 0.1) == pytest.approx(2 + 2 * 10.1 / 0.1)
