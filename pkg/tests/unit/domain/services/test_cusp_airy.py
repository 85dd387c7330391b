"""Tests for Airy-like functions and the cusp-Airy kernel."""

import pytest
from scipy.special import airy

from skew_aztec_kernels.domain.exceptions import UnsupportedRegimeError
from skew_aztec_kernels.domain.services.cusp_airy import (
    airy_like,
    airy_series,
    cusp_airy,
)

AIRY_TOLERANCE = 1e-8


class TestAiryLike:
    """Test cases for A_tau."""

    @pytest.mark.parametrize("x", [-3.0, -1.0, 0.0, 0.7, 2.5])
    def test_zeroth_function_is_airy(self, x):
        assert airy_like(0, x) == pytest.approx(airy_series(x), abs=AIRY_TOLERANCE)
        assert airy_like(0, x) == pytest.approx(airy(x)[0], abs=AIRY_TOLERANCE)

    @pytest.mark.parametrize("x", [-1.5, 0.0, 1.0])
    def test_first_function_is_airy_derivative(self, x):
        assert airy_like(1, x) == pytest.approx(airy(x)[1], abs=AIRY_TOLERANCE)

    def test_negative_index_integrates(self):
        """d/du A_-1 = A_0."""
        h = 1e-4
        slope = (airy_like(-1, 0.3 + h) - airy_like(-1, 0.3 - h)) / (2 * h)

        assert slope == pytest.approx(airy(0.3)[0], abs=1e-6)

    def test_vectorized(self):
        values = airy_like(0, [0.0, 1.0])

        assert values.shape == (2,)
        assert values[1] == pytest.approx(airy(1.0)[0], abs=AIRY_TOLERANCE)


class TestCuspAiry:
    """Test cases for the cusp-Airy kernel."""

    @pytest.mark.parametrize("x", [0.0, 0.5, -1.0])
    def test_equal_levels_give_airy_kernel(self, x):
        ai, aip, _, _ = airy(x)

        assert cusp_airy(0, x, 0, x) == pytest.approx(aip**2 - x * ai**2, abs=1e-7)

    def test_unsupported_sign_pattern(self):
        with pytest.raises(UnsupportedRegimeError):
            cusp_airy(0, 0.0, -1, 0.0)

    def test_heaviside_term_below_the_diagonal(self):
        """For tau1 > tau2 the kernel carries -H^(tau1 - tau2)(xi1 - xi2)."""
        with_step = cusp_airy(1, 0.5, 0, 0.0)
        without_step = cusp_airy(1, -0.5, 0, 0.0)

        assert with_step != pytest.approx(without_step)
