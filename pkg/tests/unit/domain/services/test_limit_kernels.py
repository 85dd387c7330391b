"""Tests for the discrete tacnode kernel and its helpers."""

import math

import pytest

from skew_aztec_kernels.domain.exceptions import (
    DomainError,
    QuadratureError,
    UnsupportedRegimeError,
)
from skew_aztec_kernels.domain.models import TacnodeParams, TacnodePoint, TilingCase, XiEta
from skew_aztec_kernels.domain.services.limit_kernels import (
    TacnodeKernel,
    heaviside,
    lattice_point,
    mirrored,
    reference_spec,
    tacnode_scaling,
)

REFERENCE = TacnodeParams(r=1, rho=2, beta=0.0)


class TestHeaviside:
    """Test cases for the discrete Heaviside function."""

    @pytest.mark.parametrize(
        ("m", "z", "expected"),
        [(1, 0.0, 1.0), (1, 3.0, 1.0), (2, 1.5, 1.5), (3, 2.0, 2.0), (4, 3.0, 4.5)],
    )
    def test_values(self, m, z, expected):
        assert heaviside(m, z) == pytest.approx(expected)

    @pytest.mark.parametrize(("m", "z"), [(0, 1.0), (-2, 1.0), (2, -0.1)])
    def test_vanishes(self, m, z):
        assert heaviside(m, z) == 0.0


class TestReferenceGeometry:
    """Test cases for the domains and lattice points used for convergence."""

    def test_reference_spec(self):
        spec = reference_spec(TacnodeParams(r=1, rho=2, beta=-0.5), 64)

        assert (spec.n, spec.m, spec.M) == (64, 65, 64)
        assert (spec.r, spec.rho) == (1, 2)
        assert spec.case is TilingCase.CASE1
        assert spec.a == pytest.approx(0.9375)

    def test_strip_narrower_than_r_unsupported(self):
        with pytest.raises(UnsupportedRegimeError):
            reference_spec(TacnodeParams(r=3, rho=1, beta=0.0), 64)

    def test_n_too_small(self):
        with pytest.raises(DomainError):
            reference_spec(TacnodeParams(r=5, rho=5, beta=0.0), 3)

    def test_lattice_point(self):
        spec = reference_spec(REFERENCE, 64)

        assert lattice_point(spec, TacnodePoint(tau=1, y=0.5)) == XiEta(128, 67)
        assert lattice_point(spec, TacnodePoint(tau=0, y=0.0)) == XiEta(130, 63)

    def test_scaling_on_the_diagonal(self):
        spec = reference_spec(REFERENCE, 64)
        q = XiEta(128, 67)

        assert tacnode_scaling(spec, q, q) == pytest.approx(4.0)

    def test_mirror(self):
        assert mirrored(REFERENCE, TacnodePoint(tau=0, y=0.5)) == TacnodePoint(tau=2, y=-0.5)


class TestTacnodeKernel:
    """Test cases for TacnodeKernel at the reference parameters."""

    @pytest.fixture(scope="class")
    def kernel(self):
        return TacnodeKernel(REFERENCE, y_max=0.5)

    def test_value_is_real_and_converged(self, kernel):
        result = kernel.terms(TacnodePoint(tau=0, y=0.5), TacnodePoint(tau=0, y=-0.5))

        assert len(result.terms) == 5
        assert abs(result.value.imag) < 1e-8
        assert result.err_estimate < 1e-6

    def test_theta_normalization_is_real(self, kernel):
        norm = kernel.theta_normalization

        assert abs(norm) > 1e-12
        assert abs(norm.imag) < 1e-10 * abs(norm)

    def test_theta_at_equal_arguments_is_normalization(self, kernel):
        """(v - w)/(u - w) = 1 when u = v."""
        assert kernel.theta(3.0, 3.0) == pytest.approx(kernel.theta_normalization)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_theta_pm_at_equal_arguments_is_the_limit(self, kernel, sign):
        at = kernel.theta_pm(sign, 3.0, 3.0)
        near = kernel.theta_pm(sign, 3.0, 3.0 + 1e-6)

        assert at == pytest.approx(near, rel=1e-5, abs=1e-12)

    def test_point_on_the_line_rejected(self, kernel):
        with pytest.raises(QuadratureError):
            kernel.theta(complex(kernel.config.line_abscissa, 0.5), 3.0)

    def test_theta_cap(self):
        with pytest.raises(UnsupportedRegimeError):
            TacnodeKernel(TacnodeParams(r=17, rho=17, beta=0.0))

    def test_zero_r_has_no_fourth_term(self):
        kernel = TacnodeKernel(TacnodeParams(r=0, rho=1, beta=0.0))
        result = kernel.terms(TacnodePoint(tau=0, y=0.0), TacnodePoint(tau=1, y=0.0))

        assert result.terms[3] == 0
        assert math.isfinite(abs(result.value))
