"""Closed-form guarantee evaluators and the helper-inequality grid checks."""

import math

import pytest

from onlinepred import bounds


class TestDeterministicBound:
    def test_consistency_side(self):
        assert bounds.det_ski_bound(100, 0.5, 0.0, 100.0) == pytest.approx(1.5)

    def test_robustness_side(self):
        assert bounds.det_ski_bound(100, 0.5, 1e12, 100.0) == pytest.approx(3.0)

    def test_substitution(self):
        assert bounds.det_ski_bound(100, 0.9, 0.0, 50.0) == pytest.approx(1.9)

    def test_rejects_lambda_one(self):
        with pytest.raises(ValueError):
            bounds.det_ski_bound(100, 1.0, 5.0, 10.0)


class TestRandomizedBound:
    def test_consistency_at_ln_three_halves(self):
        lam = math.log(1.5)
        # 1 - e^{-lam} = 1/3 exactly, so consistency is 3*lam
        assert bounds.rand_consistency(lam) == pytest.approx(3.0 * lam, rel=1e-12)
        assert bounds.rand_ski_bound(100, lam, 0.0, 100.0) == pytest.approx(
            1.216395324324493, abs=1e-12
        )

    def test_robustness_at_ln_three_halves(self):
        # corrected robustness at b=100 evaluates near 3.09 (not exactly 3)
        lam = math.log(1.5)
        assert bounds.rand_ski_bound(100, lam, 1e15, 100.0) == pytest.approx(
            3.0921533149298175, abs=1e-12
        )

    def test_limit_recovers_classical_ratio(self):
        assert bounds.rand_robustness(10**9, 1.0) == pytest.approx(
            bounds.E_OVER_E_MINUS_1, abs=1e-6
        )

    def test_rejects_lambda_at_or_below_1_over_b(self):
        with pytest.raises(ValueError):
            bounds.rand_ski_bound(100, 0.01, 0.0, 1.0)
        with pytest.raises(ValueError):
            bounds.rand_ski_bound(100, 0.005, 0.0, 1.0)


class TestSchedulingBounds:
    @pytest.mark.parametrize(
        "n,eta,expected", [(50, 0.0, 1.0), (2, 2.0, 3.0), (50, 25.0, 2.0)]
    )
    def test_spjf(self, n, eta, expected):
        assert bounds.spjf_bound(n, eta) == pytest.approx(expected)

    def test_prr(self):
        assert bounds.prr_bound(10, 0.0, 0.5) == pytest.approx(2.0)
        assert bounds.prr_bound(10, 1e12, 0.5) == pytest.approx(4.0)
        assert bounds.prr_bound(7, 0.0, 2.0 / 3.0) == pytest.approx(1.5)

    def test_prr_perfect(self):
        assert bounds.prr_perfect_bound(0.5) == pytest.approx(1.5)
        assert bounds.prr_perfect_bound(0.25) == pytest.approx(2.5)
        assert bounds.prr_perfect_bound(1.0 - 1e-12) == pytest.approx(1.0, abs=1e-9)


class TestMonotoneInError:
    def test_all_bounds_nondecreasing_in_eta(self):
        etas = [0.0, 0.5, 1.0, 5.0, 100.0, 1e6]
        for lam in (0.1, 0.5, 0.9):
            for lo, hi in zip(etas, etas[1:]):
                assert bounds.det_ski_bound(50, lam, lo, 10.0) <= bounds.det_ski_bound(
                    50, lam, hi, 10.0
                )
                assert bounds.rand_ski_bound(50, lam, lo, 10.0) <= bounds.rand_ski_bound(
                    50, lam, hi, 10.0
                )
                assert bounds.spjf_bound(5, lo) <= bounds.spjf_bound(5, hi)
                assert bounds.prr_bound(5, lo, lam) <= bounds.prr_bound(5, hi, lam)


class TestAppendixLemmas:
    def test_families_pass_on_contract_grid(self):
        reports = bounds.check_appendix_lemmas()
        assert len(reports) == 4
        for report in reports:
            assert report.satisfied, report
            assert report.parameters["violations"] == 0

    def test_helper_equality_at_x_one(self):
        reports = {r.bound_name: r for r in bounds.check_appendix_lemmas(a1_step=1e-2)}
        # parts (i) and (iii) are tight exactly at x = 1
        r1 = reports["lemma-helper-i"]
        assert r1.parameters["x"] == pytest.approx(1.0)
        assert r1.observed_ratio == pytest.approx(1.0, abs=1e-15)
        r3 = reports["lemma-helper-iii"]
        assert r3.parameters["x"] == pytest.approx(1.0)
        assert r3.observed_ratio == pytest.approx(math.exp(-1.0), abs=1e-15)

    def test_transfer_inequality_spot_value(self):
        b, lam = 2, 0.9
        lhs = (1 / lam + 1 / b) / (1 - math.exp(-1 / lam))
        rhs = (1 + 1 / b) / (1 - math.exp(-(lam - 1 / b)))
        assert lhs == pytest.approx(2.40176, abs=1e-4)
        assert rhs == pytest.approx(4.54994, abs=1e-4)
        assert lhs <= rhs

    def test_grid_sizes(self):
        reports = {r.bound_name: r for r in bounds.check_appendix_lemmas()}
        assert reports["lemma-helper-i"].parameters["points"] == 1000
        assert reports["lemma-robustness-transfer"].parameters["points"] == 999 * 100


class TestBoundReport:
    def test_satisfied_uses_slack(self):
        r = bounds.BoundReport("x", {}, bound_value=1.0, observed_ratio=1.0 + 5e-10)
        assert r.satisfied
        r = bounds.BoundReport("x", {}, bound_value=1.0, observed_ratio=1.0 + 5e-9)
        assert not r.satisfied
