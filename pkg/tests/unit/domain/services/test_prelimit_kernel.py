"""Tests for the pre-limit kernel."""

import math
from itertools import combinations

import pytest

from skew_aztec_kernels.domain.exceptions import DomainError, UnsupportedRegimeError
from skew_aztec_kernels.domain.models import SU, DomainSpec, XiEta
from skew_aztec_kernels.domain.services import kasteleyn
from skew_aztec_kernels.domain.services.geometry import cell_graph
from skew_aztec_kernels.domain.services.prelimit_kernel import (
    PreLimitKernel,
    PreLimitKernelParams,
)


class TestParams:
    """Test cases for the scaled coordinates."""

    def test_from_lattice_round_trips_the_cells(self, case1_spec):
        blues = cell_graph(case1_spec).blues
        p1, p2 = blues[0], blues[-1]
        params = PreLimitKernelParams.from_lattice(case1_spec, p1, p2)

        assert params.cells == (p1, p2)
        assert params.x1 == case1_spec.n - p1.to_xi_eta().xi // 2

    def test_unit_domain_heights(self, unit_spec):
        params = PreLimitKernelParams.from_lattice(unit_spec, XiEta(2, 1), XiEta(2, -1))

        assert params.y1 == pytest.approx(1 / math.sqrt(2))
        assert params.y2 == pytest.approx(-1 / math.sqrt(2))
        assert (params.l1, params.l2) == (1, 0)

    def test_white_cell_rejected(self, unit_spec):
        with pytest.raises(DomainError):
            PreLimitKernelParams.from_lattice(unit_spec, XiEta(1, 1), XiEta(2, 1))

    def test_off_lattice_height_rejected(self, unit_spec):
        with pytest.raises(DomainError):
            PreLimitKernelParams(spec=unit_spec, x1=0, y1=0.3, x2=0, y2=0.0)

    def test_case2_domain_unsupported(self, case2_spec):
        with pytest.raises(UnsupportedRegimeError):
            PreLimitKernelParams(spec=case2_spec, x1=0, y1=0.0, x2=0, y2=0.0)


class TestKernel:
    """Test cases for PreLimitKernel against the Kasteleyn inverse."""

    @pytest.mark.parametrize(
        ("a", "expected"),
        [
            (0.5, [1 / 6, 1.0, 5 / 6]),
            (1.0, [1 / 3, 1.0, 2 / 3]),
        ],
    )
    def test_red_density_on_unit_domain(self, a, expected):
        kernel = PreLimitKernel(DomainSpec(n=1, m=1, M=1, a=a))
        cells = [SU(2, 0), SU(2, 1), SU(0, -1)]

        values = [kernel.kred(c, c) for c in cells]

        assert values == [pytest.approx(e, abs=1e-6) for e in expected]

    def test_matches_kasteleyn_up_to_gauge(self, case1_spec):
        kernel = PreLimitKernel(case1_spec)
        sys = kasteleyn.build(case1_spec)
        blues = cell_graph(case1_spec).blues[:5]

        for b in blues:
            assert kernel.kred(b, b) == pytest.approx(kasteleyn.kred(sys, b, b), abs=1e-6)
        for b1, b2 in combinations(blues, 2):
            prelimit = kernel.kred(b1, b2) * kernel.kred(b2, b1)
            exact = kasteleyn.kred(sys, b1, b2) * kasteleyn.kred(sys, b2, b1)
            assert prelimit == pytest.approx(exact, abs=1e-6)

    def test_terms_sum_to_value(self, unit_spec):
        kernel = PreLimitKernel(unit_spec)
        params = PreLimitKernelParams.from_lattice(unit_spec, SU(2, 0), SU(2, 1))
        result = kernel.terms(params)

        assert len(result.terms) == 4
        assert sum(result.terms) == pytest.approx(result.value)
        assert result.err_estimate < 1e-6

    def test_point_of_another_domain_rejected(self, unit_spec, case1_spec):
        blue = cell_graph(case1_spec).blues[0]
        params = PreLimitKernelParams.from_lattice(case1_spec, blue, blue)

        with pytest.raises(DomainError):
            PreLimitKernel(unit_spec).terms(params)

    def test_case2_domain_unsupported(self, case2_spec):
        with pytest.raises(UnsupportedRegimeError):
            PreLimitKernel(case2_spec)

    def test_rcap_enforced(self):
        with pytest.raises(UnsupportedRegimeError):
            PreLimitKernel(DomainSpec(n=8, m=10, M=1), rcap=6)
