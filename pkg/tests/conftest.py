"""Shared fixtures: small domains that the enumerator handles in milliseconds."""

import pytest

from skew_aztec_kernels.domain.models import DomainSpec


@pytest.fixture
def unit_spec():
    """n = m = M = 1: three tilings with weights 1, a^2, a^2."""
    return DomainSpec(n=1, m=1, M=1, a=0.5)


@pytest.fixture
def case1_spec():
    """A Case 1 domain with delta < 0."""
    return DomainSpec(n=2, m=3, M=2, a=0.6)


@pytest.fixture
def case2_spec():
    """A Case 2 domain with delta > 0."""
    return DomainSpec(n=2, m=1, M=3, a=0.7)
