"""Tests for rank correlation, transferability sweeps and the round-count study."""

import itertools

import numpy as np
import pytest

from grash.analysis import (
    CorrelationReport,
    format_table,
    round_count_study,
    spearman,
    transferability_sweep,
)
from grash.errors import CorrelationError, SearchConfigError
from grash.search import SearchParams


def brute_force_spearman(a, b):
    """Average ranks by counting, then Pearson by definition."""

    def ranks(x):
        return [
            1 + sum(y < v for y in x) + (sum(y == v for y in x) - 1) / 2 for v in x
        ]

    ra, rb = ranks(a), ranks(b)
    ma, mb = sum(ra) / len(ra), sum(rb) / len(rb)
    cov = sum((x - ma) * (y - mb) for x, y in zip(ra, rb))
    va = sum((x - ma) ** 2 for x in ra)
    vb = sum((y - mb) ** 2 for y in rb)
    return cov / (va * vb) ** 0.5


class TestSpearman:
    """Test Spearman's rho."""

    def test_identical(self):
        assert spearman([0.1, 0.5, 0.3], [0.1, 0.5, 0.3]) == 1.0

    def test_reversed(self):
        assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0

    @pytest.mark.parametrize("seed", range(100))
    def test_matches_brute_force_with_ties(self, seed):
        """Test small integer vectors with ties against counted average ranks."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 12))
        a = [0, 1] + rng.integers(0, 4, n - 2).tolist()
        b = [1, 0] + rng.integers(0, 4, n - 2).tolist()

        assert spearman(a, b) == pytest.approx(brute_force_spearman(a, b), abs=1e-12)

    def test_symmetric_and_monotone_invariant(self):
        """Test swapping arguments and monotone transforms keep rho."""
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=15), rng.normal(size=15)

        rho = spearman(a, b)

        assert spearman(b, a) == pytest.approx(rho)
        assert spearman(np.exp(a), b**3) == pytest.approx(rho)
        assert -1.0 <= rho <= 1.0

    def test_every_permutation_in_range(self):
        for perm in itertools.permutations(range(4)):
            assert -1.0 <= spearman(range(4), perm) <= 1.0

    @pytest.mark.parametrize(
        "a,b",
        [([1.0], [2.0]), ([1, 2, 3], [1, 2]), ([1, 1, 1], [1, 2, 3])],
    )
    def test_undefined(self, a, b):
        """Test short, mismatched and constant inputs raise."""
        with pytest.raises(CorrelationError):
            spearman(a, b)


class TestFormatTable:
    """Test the budget by technique table."""

    def test_layout(self):
        reports = [
            CorrelationReport(technique="kcore", budget=0.1, rho=0.5, n_configs=4),
            CorrelationReport(technique="epoch", budget=0.1, rho=None, n_configs=4),
            CorrelationReport(technique="kcore", budget=0.05, rho=-0.25, n_configs=4),
        ]

        lines = format_table(reports).splitlines()

        assert lines[0] == "budget\tkcore\tepoch"
        assert lines[1] == "0.05\t-0.250\t-"
        assert lines[2] == "0.1\t0.500\t-"


class TestTransferabilitySweep:
    """Test low- against full-fidelity ranking correlation."""

    @pytest.fixture
    def sweep_params(self):
        return SearchParams(num_configs=4, eta=2, valid_size=50, dim=8, workers=1)

    def test_full_epoch_budget_is_perfect(self, toy_dataset, small_space, sweep_params):
        """Test the epoch technique at budget 1 reproduces the reference ranking."""
        reports = transferability_sweep(
            toy_dataset, small_space, 4, ["epoch"], [1.0], full_epochs=1, params=sweep_params
        )

        assert len(reports) == 1
        assert reports[0].rho == pytest.approx(1.0)
        assert all(low == full for low, full in reports[0].pairs)

    def test_reports_per_cell(self, toy_dataset, small_space, sweep_params):
        """Test one report per technique and budget, technique-major."""
        reports = transferability_sweep(
            toy_dataset,
            small_space,
            4,
            ["triple", "kcore"],
            [0.5, 1.0],
            full_epochs=1,
            params=sweep_params,
        )

        assert [(r.technique, r.budget) for r in reports] == [
            ("triple", 0.5),
            ("triple", 1.0),
            ("kcore", 0.5),
            ("kcore", 1.0),
        ]
        assert reports[0].triple_fraction == pytest.approx(0.5, abs=0.01)
        assert all(r.n_configs == 4 for r in reports)

    def test_untrainable_cell_recorded(self, toy_dataset, small_space, sweep_params):
        """Test a budget too small to keep any triple leaves rho empty and the sweep going."""
        reports = transferability_sweep(
            toy_dataset,
            small_space,
            4,
            ["triple"],
            [1e-5, 1.0],
            full_epochs=1,
            params=sweep_params,
        )

        tiny, full = reports
        assert tiny.rho is None
        assert tiny.n_configs == 0
        assert "no trainable subgraph" in tiny.note
        assert full.n_configs == 4
        assert format_table(reports).splitlines()[1] == "1e-05\t-"

    def test_too_few_configs(self, toy_dataset, small_space):
        with pytest.raises(SearchConfigError, match="at least 3"):
            transferability_sweep(toy_dataset, small_space, 2, ["epoch"], [0.5], 1)

    def test_unknown_technique(self, toy_dataset, small_space):
        with pytest.raises(SearchConfigError, match="Unknown technique"):
            transferability_sweep(toy_dataset, small_space, 4, ["bfs"], [0.5], 1)


class TestRoundCountStudy:
    """Test searches with different round counts."""

    def test_one_result_per_eta(self, toy_dataset, small_space, tiny_params):
        """Test eta = n runs a single round and every winner gets a final MRR."""
        results = round_count_study(toy_dataset, small_space, [2, 4], tiny_params)

        assert [r.eta for r in results] == [2, 4]
        assert [r.rounds for r in results] == [2, 1]
        assert all(r.search_cost <= tiny_params.budget + 1e-12 for r in results)
        assert all(r.final_valid_mrr is not None for r in results)

    def test_needs_eta(self, toy_dataset, small_space, tiny_params):
        with pytest.raises(SearchConfigError):
            round_count_study(toy_dataset, small_space, [], tiny_params)
