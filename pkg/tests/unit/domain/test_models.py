"""Tests for the domain models."""

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from skew_aztec_kernels.domain.exceptions import DomainError
from skew_aztec_kernels.domain.models import (
    SU,
    ChainConfig,
    DomainSpec,
    Orientation,
    RenderStyle,
    TilingCase,
    XiEta,
)


class TestDomainSpec:
    """Test cases for DomainSpec."""

    def test_derived_integers_of_the_case1_picture(self):
        """(8, 10, 3) has delta -2, sigma 4, rho 8 and r 6."""
        spec = DomainSpec(n=8, m=10, M=3)

        assert spec.delta == -2
        assert spec.sigma == 4
        assert spec.kappa == 2
        assert spec.rho == 8
        assert spec.r == 6
        assert spec.case is TilingCase.CASE1

    def test_derived_integers_of_the_case2_picture(self):
        """(8, 5, 8) has delta 3, sigma 4, rho 2 and r 3."""
        spec = DomainSpec(n=8, m=5, M=8)

        assert (spec.delta, spec.sigma, spec.rho, spec.r) == (3, 4, 2, 3)
        assert spec.kappa == 0
        assert spec.case is TilingCase.CASE2

    def test_untilable_domain_has_no_case(self):
        assert DomainSpec(n=1, m=3, M=5).case is TilingCase.NONE

    @pytest.mark.parametrize(
        ("n", "m", "M", "a"),
        [(0, 1, 1, 1.0), (1, -1, 1, 1.0), (1, 1, 0, 1.0), (1, 1, 1, 0.0), (1, 1, 1, 1.5)],
    )
    def test_invalid_parameters_rejected(self, n, m, M, a):
        """Invalid parameters raise DomainError through the validator."""
        with pytest.raises(DomainError):
            DomainSpec(n=n, m=m, M=M, a=a)

    def test_with_weight_keeps_geometry(self, case1_spec):
        heavier = case1_spec.with_weight(0.9)

        assert (heavier.n, heavier.m, heavier.M) == (2, 3, 2)
        assert heavier.a == 0.9

    def test_spec_is_frozen(self, unit_spec):
        with pytest.raises(ValidationError):
            unit_spec.n = 4


class TestCoordinates:
    """Test cases for the (xi, eta) and (s, u) systems."""

    def test_blue_centre_conversion(self):
        """Blue cell (2, 0) sits at xi = 2, eta = 1."""
        assert SU(2, 0).to_xi_eta() == XiEta(2, 1)
        assert XiEta(2, 1).to_su() == SU(2, 0)
        assert SU(2, 0).is_blue
        assert not SU(1, 0).is_blue

    @given(s=st.integers(-50, 50), u=st.integers(-50, 50))
    def test_conversion_is_invertible(self, s, u):
        assert SU(s, u).to_xi_eta().to_su() == SU(s, u)


class TestOrientation:
    """Test cases for Orientation."""

    def test_vertical_orientations(self):
        assert Orientation.VU.is_vertical
        assert Orientation.VD.is_vertical
        assert not Orientation.HL.is_vertical
        assert not Orientation.HR.is_vertical

    def test_dual_is_an_involution(self):
        for orientation in Orientation:
            assert orientation.dual.dual is orientation
        assert Orientation.HL.dual is Orientation.HR
        assert Orientation.VU.dual is Orientation.VD


class TestChainConfig:
    """Test cases for ChainConfig."""

    def test_burn_in_longer_than_run_rejected(self):
        with pytest.raises(ValidationError):
            ChainConfig(steps=10, burn_in=20)

    def test_defaults(self):
        config = ChainConfig(steps=100)

        assert config.burn_in == 0
        assert config.seed == 0


class TestRenderStyle:
    """Test cases for RenderStyle."""

    def test_default_palette_has_four_distinct_colours(self):
        style = RenderStyle()

        assert set(style.palette) == set(Orientation)
        assert len(set(style.palette.values())) == 4

    def test_repeated_colour_rejected(self):
        with pytest.raises(ValidationError):
            RenderStyle(palette={o: "#000000" for o in Orientation})
