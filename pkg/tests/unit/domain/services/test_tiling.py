"""Tests for tilings, height functions, paths and dots."""

import pytest

from skew_aztec_kernels.domain.exceptions import DomainError
from skew_aztec_kernels.domain.models import (
    SU,
    Domino,
    Orientation,
    PathColor,
    Tiling,
    XiEta,
)
from skew_aztec_kernels.domain.models import DomainSpec
from skew_aztec_kernels.domain.services.geometry import (
    left_height,
    red_dot_profile,
    red_lines,
    right_height,
)
from skew_aztec_kernels.domain.services.oracle import iter_tilings
from skew_aztec_kernels.domain.services.sampler import initial_tiling
from skew_aztec_kernels.domain.services.tiling import (
    dots_of,
    dual_dominoes,
    from_orientations,
    check_height_grid,
    green_rows,
    height_function,
    height_grid,
    orientation_counts,
    paths_of,
    tiling_from_green_rows,
    validate_tiling,
    weight,
)

# the tiling with two vertical dominoes at (0, -1) and (2, 0)
VERTICAL_PAIR = {
    SU(0, -1): Orientation.VD,
    SU(2, 0): Orientation.VU,
    SU(2, 1): Orientation.HL,
}


class TestValidation:
    """Test cases for tiling validation."""

    def test_valid_tiling(self, unit_spec):
        t = from_orientations(unit_spec, VERTICAL_PAIR)

        assert len(t.dominoes) == 3
        assert t.vertical_count == 2
        assert weight(t) == pytest.approx(0.25)

    def test_overlapping_dominoes_rejected(self, unit_spec):
        overlapping = {**VERTICAL_PAIR, SU(2, 1): Orientation.VU}

        with pytest.raises(DomainError, match="overlaps"):
            from_orientations(unit_spec, overlapping)

    def test_domino_leaving_domain_rejected(self, unit_spec):
        leaving = {**VERTICAL_PAIR, SU(2, 1): Orientation.VD}

        with pytest.raises(DomainError, match="leaves"):
            from_orientations(unit_spec, leaving)

    def test_incomplete_cover_rejected(self, unit_spec):
        partial = Tiling(unit_spec, frozenset({Domino(XiEta(0, 1), Orientation.HL)}))

        with pytest.raises(DomainError, match="covers"):
            validate_tiling(partial)

    def test_orientation_counts(self, unit_spec):
        counts = orientation_counts(from_orientations(unit_spec, VERTICAL_PAIR))

        assert counts == {
            Orientation.HL: 1,
            Orientation.HR: 0,
            Orientation.VU: 1,
            Orientation.VD: 1,
        }


class TestDotsAndPaths:
    """Test cases for dot processes and level lines on every tiling."""

    @pytest.fixture(params=["unit_spec", "case1_spec", "case2_spec"])
    def tilings(self, request):
        spec = request.getfixturevalue(request.param)
        return spec, list(iter_tilings(spec))

    def test_red_dots_follow_the_boundary_profile(self, tilings):
        spec, all_tilings = tilings
        profile = red_dot_profile(spec)

        for t in all_tilings:
            dots = dots_of(t, PathColor.RED)
            assert [(xi, dots.count_on_line(xi)) for xi, _ in profile] == profile

    @pytest.mark.parametrize("color", [PathColor.RED, PathColor.BLUE])
    def test_paths_on_lines_are_the_dots(self, tilings, color):
        _, all_tilings = tilings

        for t in all_tilings:
            paths = paths_of(t, color)
            on_lines = [p for path in paths.paths for p in path if p.xi % 2 == 0]
            assert sorted(on_lines) == sorted(dots_of(t, color).dots)

    def test_green_paths_count_is_M(self, tilings):
        spec, all_tilings = tilings

        for t in all_tilings:
            paths = paths_of(t, PathColor.GREEN)
            assert len(paths) == spec.M
            for k, path in enumerate(paths.paths):
                assert path[0] == SU(0, -k)
                assert path[-1] == SU(2 * spec.n + 1, spec.delta - k)

    def test_green_rows_rebuild_the_tiling(self, tilings):
        spec, all_tilings = tilings

        for t in all_tilings:
            assert tiling_from_green_rows(spec, green_rows(t)).dominoes == t.dominoes

    def test_dual_turns_blue_dots_into_green_dots(self, tilings):
        _, all_tilings = tilings

        for t in all_tilings:
            blue = dots_of(t, PathColor.BLUE).dots
            dual = Tiling(t.spec, dual_dominoes(t))
            assert dots_of(dual, PathColor.GREEN).dots == blue

    def test_red_height_drops_by_dot_count(self, case1_spec):
        t = initial_tiling(case1_spec)
        heights = height_function(t, PathColor.RED)

        for xi, count in red_dot_profile(case1_spec):
            top = heights[XiEta(xi, -2)]
            bottom = heights[XiEta(xi, 2 * case1_spec.n)]
            assert top - bottom == count

    def test_green_height_function_not_defined(self, unit_spec):
        with pytest.raises(DomainError):
            height_function(initial_tiling(unit_spec), PathColor.GREEN)


LEVEL_LINE_DOMAINS = [
    (1, 1, 1),
    (1, 2, 2),
    (1, 2, 1),
    (2, 2, 2),
    (2, 3, 2),
    (2, 1, 3),
    (3, 2, 1),
    (2, 0, 2),
]


class TestLevelLines:
    """Test cases for red and blue level lines on every tiling of small domains."""

    @pytest.fixture(params=LEVEL_LINE_DOMAINS, ids=lambda p: "-".join(map(str, p)))
    def tilings(self, request):
        n, m, M = request.param
        spec = DomainSpec(n=n, m=m, M=M, a=0.5)
        all_tilings = list(iter_tilings(spec))
        assert all_tilings
        return spec, all_tilings

    def test_red_and_blue_systems_have_n_plus_m_paths(self, tilings):
        spec, all_tilings = tilings

        for t in all_tilings:
            red = paths_of(t, PathColor.RED)
            blue = paths_of(t, PathColor.BLUE)
            assert len(red) == len(blue) == spec.n + spec.m

    @pytest.mark.parametrize("color", [PathColor.RED, PathColor.BLUE])
    def test_paths_are_disjoint_and_non_empty(self, tilings, color):
        _, all_tilings = tilings

        for t in all_tilings:
            paths = paths_of(t, color).paths
            points = [p for path in paths for p in path]
            assert all(paths)
            assert len(points) == len(set(points))

    @pytest.mark.parametrize("color", [PathColor.RED, PathColor.BLUE])
    def test_consecutive_points_share_a_square(self, tilings, color):
        _, all_tilings = tilings

        for t in all_tilings:
            for path in paths_of(t, color).paths:
                for p, q in zip(path, path[1:], strict=False):
                    assert abs(p.xi - q.xi) + abs(p.eta - q.eta) == 2

    def test_domain_with_an_empty_level(self):
        # the middle level of (1, 2, 2) crosses no line between xi = 2 and xi = 4
        spec = DomainSpec(n=1, m=2, M=2, a=0.5)

        for t in iter_tilings(spec):
            middle = paths_of(t, PathColor.RED).paths[1]
            assert all(p.xi == 3 for p in middle)


class TestHeightFunction:
    """Test cases for height consistency on every tiling of small domains."""

    @pytest.fixture(params=LEVEL_LINE_DOMAINS, ids=lambda p: "-".join(map(str, p)))
    def tilings(self, request):
        n, m, M = request.param
        spec = DomainSpec(n=n, m=m, M=M, a=0.5)
        return spec, list(iter_tilings(spec))

    def test_red_heights_agree_across_shared_edges(self, tilings):
        _, all_tilings = tilings

        for t in all_tilings:
            grid = height_grid(t, PathColor.RED)
            check_height_grid(grid, rising=False)
            for line, following in zip(grid, grid[1:], strict=False):
                steps = {b - a for (_, a), (_, b) in zip(line, following, strict=True)}
                assert steps <= {0, 1}

    def test_blue_heights_agree_across_shared_edges(self, tilings):
        _, all_tilings = tilings

        for t in all_tilings:
            check_height_grid(height_grid(t, PathColor.BLUE), rising=True)

    def test_red_boundary_heights_do_not_depend_on_the_tiling(self, tilings):
        spec, all_tilings = tilings

        for t in all_tilings:
            heights = height_function(t, PathColor.RED)
            for xi in red_lines(spec):
                assert heights[XiEta(xi, -2)] == left_height(spec, xi)
                assert heights[XiEta(xi, 2 * spec.n)] == right_height(spec, xi)

    @pytest.mark.parametrize("color", [PathColor.RED, PathColor.BLUE])
    def test_level_lines_reproduce_paths(self, tilings, color):
        _, all_tilings = tilings

        for t in all_tilings:
            grid = height_grid(t, color)
            paths = paths_of(t, color).paths
            low = min(v for line in grid for _, v in line)
            for h, path in enumerate(paths, start=low):
                crossed = set()
                for line in grid:
                    for (p, a), (q, b) in zip(line, line[1:], strict=False):
                        if min(a, b) <= h < max(a, b):
                            crossed.add(XiEta((p.xi + q.xi) // 2, (p.eta + q.eta) // 2))
                for line, following in zip(grid, grid[1:], strict=False):
                    for (p, a), (q, b) in zip(line, following, strict=True):
                        if min(a, b) <= h < max(a, b):
                            crossed.add(XiEta((p.xi + q.xi) // 2, (p.eta + q.eta) // 2))
                assert set(path) == crossed

    def test_inconsistent_grid_rejected(self):
        grid = [[(XiEta(0, -2), 2), (XiEta(0, 0), 2)], [(XiEta(2, -2), 0), (XiEta(2, 0), 0)]]

        with pytest.raises(DomainError, match="differ"):
            check_height_grid(grid, rising=False)
