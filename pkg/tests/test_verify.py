"""Verification harness: batch estimators, identity checks, MC reports."""

import json
import math

import numpy as np
import pytest

from gammadex.errors import DomainError, SizeError
from gammadex.gamma_forms import GammaParams, debias, expectation, population_value
from gammadex.indices import IndexKind, atkinson, gini, theil_t, vmr
from gammadex.rng import RngStream
from gammadex.verify import (
    McReport,
    VerifyConfig,
    _batch_values,
    _debias_affine,
    abs_2r_minus_1_check,
    beta_ulogu_check,
    dirichlet_product_moment_check,
    format_report_table,
    lukacs_independence_check,
    mc_expectation,
    reports_to_json_obj,
    run_verification,
    two_point_remark_check,
)

SCALAR = {
    IndexKind.GINI: gini,
    IndexKind.THEIL_T: theil_t,
    IndexKind.ATKINSON: atkinson,
    IndexKind.VMR: vmr,
}


class TestBatchEstimators:
    """The vectorized per-replicate estimators must equal the scalar ones."""

    @pytest.mark.parametrize("kind", list(IndexKind))
    @pytest.mark.parametrize("n", [2, 3, 10, 57])
    def test_matches_scalar_definitions(self, kind, n):
        rng = np.random.default_rng(1234 + n)
        y = rng.gamma(1.5, 2.0, size=(200, n)) + 1e-12
        batch = _batch_values(kind, y)
        for i in range(0, 200, 17):
            assert batch[i] == pytest.approx(SCALAR[kind](y[i]), rel=1e-11, abs=1e-12)

    @pytest.mark.parametrize("kind", [IndexKind.THEIL_T, IndexKind.ATKINSON])
    def test_n1_rows_are_zero(self, kind):
        y = np.random.default_rng(5).gamma(2.0, 1.0, size=(50, 1))
        assert np.all(_batch_values(kind, y) == 0.0)


class TestDebiasAffine:
    @pytest.mark.parametrize("kind", list(IndexKind))
    def test_matches_scalar_debias(self, kind):
        p = GammaParams(1.7, 2.0)
        n = 6
        intercept, slope = _debias_affine(kind, p, n)
        for raw in (0.0, 0.1, 0.42, 0.9):
            assert intercept + slope * raw == pytest.approx(
                debias(kind, p, n, raw), rel=1e-12, abs=1e-14
            )


class TestMcExpectation:
    @pytest.mark.parametrize(
        ("kind", "alpha", "rate", "n"),
        [
            (IndexKind.GINI, 2.0, 1.0, 5),
            (IndexKind.THEIL_T, 1.0, 3.0, 2),
            (IndexKind.ATKINSON, 1.0, 1.0, 2),
            (IndexKind.VMR, 1.0, 1.0, 2),
        ],
    )
    def test_small_runs_pass(self, kind, alpha, rate, n):
        r = mc_expectation(
            kind, GammaParams(alpha, rate), n, 20_000, RngStream(42, 1 << 40)
        )
        assert r.passed, r
        assert r.reps == 20_000 and r.n == n
        assert r.mc_stderr > 0.0
        assert r.z_score == pytest.approx((r.mc_mean - r.target) / r.mc_stderr)

    def test_debiased_targets_population(self):
        p = GammaParams(1.0, 1.0)
        r = mc_expectation(
            IndexKind.VMR, p, 2, 20_000, RngStream(42, 2 << 40), debias_values=True
        )
        assert r.target == pytest.approx(1.0)
        assert r.passed

    def test_worker_count_does_not_change_results(self):
        p = GammaParams(2.0, 1.0)
        runs = [
            mc_expectation(IndexKind.GINI, p, 5, 30_000, RngStream(7, 0), workers=w)
            for w in (1, 2, 4)
        ]
        assert runs[0].mc_mean == runs[1].mc_mean == runs[2].mc_mean
        assert runs[0].mc_stderr == runs[1].mc_stderr == runs[2].mc_stderr

    def test_rejects_low_reps(self):
        with pytest.raises(SizeError):
            mc_expectation(IndexKind.GINI, GammaParams(1.0), 5, 100, RngStream(1))

    def test_rejects_small_n(self):
        with pytest.raises(SizeError):
            mc_expectation(IndexKind.GINI, GammaParams(1.0), 1, 20_000, RngStream(1))


class TestLukacs:
    def test_gamma_data_is_uncorrelated(self):
        r = lukacs_independence_check(
            GammaParams(1.0), 2, 20_000, RngStream(42, 3 << 40)
        )
        assert r.passed
        assert r.target == 0.0
        assert r.mc_stderr == pytest.approx(1.0 / math.sqrt(20_000))

    def test_rejects_n1(self):
        with pytest.raises(SizeError):
            lukacs_independence_check(GammaParams(1.0), 1, 20_000, RngStream(1))


class TestDirichletProductMoment:
    def test_flat_simplex_case(self):
        r = dirichlet_product_moment_check(1.0, 2, 50_000, RngStream(42, 4 << 40))
        assert r.target == pytest.approx(math.pi / 8.0, rel=1e-12)
        assert r.passed

    def test_alpha2_n3_case(self):
        r = dirichlet_product_moment_check(2.0, 3, 50_000, RngStream(42, 5 << 40))
        assert r.target == pytest.approx(0.2813127674819672, rel=1e-12)
        assert r.passed

    def test_rejects_n1(self):
        with pytest.raises(SizeError):
            dirichlet_product_moment_check(1.0, 1, 20_000, RngStream(1))


class TestQuadratureIdentities:
    def test_ulogu_uniform_case_is_quarter(self):
        closed, quad = beta_ulogu_check(1.0, 1.0)
        assert closed == pytest.approx(-0.25, abs=1e-13)
        assert quad == pytest.approx(-0.25, abs=1e-8)

    def test_ulogu_symmetric_case(self):
        closed, quad = beta_ulogu_check(2.0, 2.0)
        assert closed == pytest.approx(-7.0 / 24.0, abs=1e-13)
        assert abs(closed - quad) < 1e-8

    @pytest.mark.parametrize(("a", "b"), [(0.5, 4.5), (4.5, 0.5), (0.5, 0.5)])
    def test_ulogu_singular_shapes(self, a, b):
        closed, quad = beta_ulogu_check(a, b)
        assert abs(closed - quad) < 1e-8

    @pytest.mark.parametrize(
        ("alpha", "expected"), [(1.0, 0.5), (2.0, 0.375), (0.5, 2.0 / math.pi)]
    )
    def test_abs_2r_minus_1(self, alpha, expected):
        closed, quad = abs_2r_minus_1_check(alpha)
        assert closed == pytest.approx(expected, rel=1e-12)
        assert abs(closed - quad) < 1e-8

    def test_bad_shapes(self):
        with pytest.raises(DomainError):
            beta_ulogu_check(0.0, 1.0)
        with pytest.raises(DomainError):
            abs_2r_minus_1_check(-1.0)


class TestTwoPointRemark:
    @pytest.mark.parametrize(
        ("a", "b", "expected"), [(1.0, 3.0, 0.25), (2.0, 8.0, 0.3)]
    )
    def test_enumeration_is_exactly_unbiased(self, a, b, expected):
        enumerated, population = two_point_remark_check(a, b)
        assert enumerated == population
        assert enumerated == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize(("a", "b"), [(1.0, 1.0), (3.0, 1.0), (0.0, 1.0)])
    def test_rejects_bad_support(self, a, b):
        with pytest.raises(DomainError):
            two_point_remark_check(a, b)


class TestReports:
    def test_json_schema_keys(self):
        r = McReport("gini[alpha=1,lambda=1]", 5, 10, 0.5, 0.1, 0.5, 0.0, True, "mc:gini")
        d = r.to_dict()
        assert list(d.keys()) == [
            "kind", "n", "reps", "mc_mean", "mc_stderr", "target", "z_score", "pass",
        ]
        assert d["pass"] is True
        json.dumps(d)  # must be serializable as-is

    def test_table_alignment(self):
        reports = [
            McReport("gini[alpha=1,lambda=1]", 5, 10_000, 0.5, 0.01, 0.5, 0.0, True),
            McReport("two_point_remark[a=1,b=3]", 2, 0, 0.25, 0.0, 0.25, 0.0, True),
        ]
        table = format_report_table(reports)
        lines = table.splitlines()
        assert lines[0].startswith("kind")
        assert len(lines) == 4
        assert len({len(line) for line in lines[2:]}) == 1  # rows equally padded

    def test_reports_to_json_obj(self):
        r = McReport("x", 1, 0, 0.0, 0.0, 0.0, 0.0, True)
        assert reports_to_json_obj([r]) == [r.to_dict()]


class TestRunVerification:
    def test_tiny_grid_passes_and_orders_deterministically(self):
        cfg = VerifyConfig(
            alphas=(1.0,), lambdas=(1.0, 3.0), ns=(2,), reps=10_000,
            lukacs_alphas=(1.0,), lukacs_ns=(2,), lukacs_reps=10_000,
            dirichlet_alphas=(1.0,), dirichlet_ns=(2,), dirichlet_reps=10_000,
            ulogu_shapes=(1.0,), abs2r_alphas=(1.0,),
            two_point_cases=((1.0, 3.0),), seed=11,
        )
        out1 = run_verification(cfg)
        out2 = run_verification(cfg)
        assert out1.passed
        assert [r.to_dict() for r in out1.reports] == [r.to_dict() for r in out2.reports]
        kinds = [r.kind for r in out1.reports]
        # raw cells and debiased companions for the three biased estimators
        assert "gini[alpha=1,lambda=1]" in kinds
        assert "theil_debiased[alpha=1,lambda=3]" in kinds
        assert "lambda_sweep:atkinson[alpha=1,lambda=1vs3]" in kinds
        assert "lukacs[alpha=1,lambda=1]" in kinds
        assert "two_point_remark[a=1,b=3]" in kinds

    def test_impossible_z_max_fails_suite(self):
        cfg = VerifyConfig(
            alphas=(1.0,), lambdas=(1.0,), ns=(2,), reps=10_000,
            lukacs_alphas=(), lukacs_ns=(), dirichlet_alphas=(),
            ulogu_shapes=(), abs2r_alphas=(), two_point_cases=(),
            seed=11, z_max=0.01,
        )
        out = run_verification(cfg)
        assert not out.passed
        assert out.failed_families  # at least one family over its allowance

    def test_restrict_filters_grids(self):
        cfg = VerifyConfig().restrict(alphas=[1.0], lambdas=[1.0], ns=[2])
        assert cfg.alphas == (1.0,)
        assert cfg.lambdas == (1.0,)
        assert cfg.ns == (2,)
        assert cfg.lukacs_alphas == (1.0,)
        assert cfg.dirichlet_ns == (2,)
