"""Tests for the identity and correlation verification use cases."""

import pytest

from skew_aztec_kernels.application.verification_use_case import (
    CheckOutcome,
    CorrelationVerificationRequest,
    CorrelationVerificationUseCase,
    IdentityVerificationRequest,
    IdentityVerificationUseCase,
)
from skew_aztec_kernels.domain.exceptions import DomainError, EnumerationCapError
from skew_aztec_kernels.domain.models import DomainSpec
from skew_aztec_kernels.infrastructure.config import EnumerationConfig, KernelConfig


class TestCheckOutcome:
    """Test cases for residual bookkeeping."""

    def test_pass_and_fail(self):
        assert CheckOutcome.of("x", 1e-9, 1e-8).passed
        assert not CheckOutcome.of("x", 1e-7, 1e-8).passed
        assert not CheckOutcome.of("x", float("nan"), 1e-8).passed


class TestIdentityVerificationUseCase:
    """Test cases for IdentityVerificationUseCase."""

    @pytest.fixture
    def use_case(self):
        return IdentityVerificationUseCase(KernelConfig.get_default_config())

    def test_duality_on_the_middle_row(self, use_case, case1_spec):
        result = use_case.execute(IdentityVerificationRequest(spec=case1_spec, suite="duality"))

        assert result.passed
        assert [c.name for c in result.checks] == [
            "duality_row_2",
        ]
        assert result.checks[0].samples == 25

    def test_all_suites(self, use_case, case1_spec):
        result = use_case.execute(IdentityVerificationRequest(spec=case1_spec, kappas=(1,)))

        assert result.passed, result.checks
        assert result.skipped == []
        names = {c.name for c in result.checks}
        assert {"borodin_okounkov_p2", "blowup_kappa+1_p2", "blowup_kappa-1_p2", "d_phi"} <= names

    def test_symbol_suites_skipped_at_unit_weight(self, use_case, case1_spec):
        result = use_case.execute(IdentityVerificationRequest(spec=case1_spec.with_weight(1.0)))

        assert result.skipped == ["bo", "blowup", "dphi"]
        assert result.passed

    def test_single_symbol_suite_at_unit_weight_raises(self, use_case, unit_spec):
        with pytest.raises(DomainError):
            use_case.execute(
                IdentityVerificationRequest(spec=unit_spec.with_weight(1.0), suite="bo")
            )

    def test_dphi_skipped_for_positive_delta(self, use_case, case2_spec):
        result = use_case.execute(IdentityVerificationRequest(spec=case2_spec, kappas=(1,)))

        assert "dphi" in result.skipped
        assert result.max_residual < 1e-6


class TestCorrelationVerificationUseCase:
    """Test cases for CorrelationVerificationUseCase."""

    @pytest.mark.parametrize("spec_name", ["unit_spec", "case1_spec", "case2_spec"])
    def test_kasteleyn_matches_enumeration(self, spec_name, request):
        spec = request.getfixturevalue(spec_name)

        result = CorrelationVerificationUseCase().execute(
            CorrelationVerificationRequest(spec=spec, pairs=15, seed=4)
        )

        assert result.passed, result.checks
        assert result.max_residual < 1e-8
        assert len(result.checks) == 4

    def test_pairs_are_capped_by_what_exists(self, unit_spec):
        result = CorrelationVerificationUseCase().execute(
            CorrelationVerificationRequest(spec=unit_spec, pairs=1000)
        )
        site_pairs = next(c for c in result.checks if c.name == "red_gap_pairs")

        assert site_pairs.samples == 3

    def test_enumeration_cap(self):
        config = KernelConfig(enumeration=EnumerationConfig(cell_cap=10))

        with pytest.raises(EnumerationCapError):
            CorrelationVerificationUseCase(config).execute(
                CorrelationVerificationRequest(spec=DomainSpec(n=3, m=3, M=2, a=0.5))
            )
