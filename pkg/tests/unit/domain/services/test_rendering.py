"""Tests for SVG rendering."""

from skew_aztec_kernels.domain.models import SU, Orientation, PathColor, RenderStyle
from skew_aztec_kernels.domain.services.rendering import render_svg
from skew_aztec_kernels.domain.services.sampler import initial_tiling
from skew_aztec_kernels.domain.services.tiling import from_orientations


class TestRenderSvg:
    """Test cases for render_svg."""

    def test_one_rectangle_per_domino(self, unit_spec):
        t = from_orientations(
            unit_spec,
            {SU(0, -1): Orientation.VD, SU(2, 0): Orientation.VU, SU(2, 1): Orientation.HL},
        )

        svg = render_svg(t)

        assert 'id="dominoes"' in svg
        assert svg.count("<rect") == 3
        assert "paths" not in svg

    def test_path_overlays(self, case1_spec):
        style = RenderStyle(cell_px=8, draw_paths=frozenset({PathColor.RED, PathColor.GREEN}))

        svg = render_svg(initial_tiling(case1_spec), style)

        assert 'id="red-paths"' in svg
        assert 'id="green-paths"' in svg
        assert 'id="blue-paths"' not in svg
        assert svg.count("<polyline") >= case1_spec.M

    def test_output_is_deterministic(self, case2_spec):
        t = initial_tiling(case2_spec)

        assert render_svg(t) == render_svg(t)
