"""Tilings, height functions, path systems and dot processes.

Conventions:

* A blue cell carries a red dot when its partner lies on the line xi + 1
  (orientations H_L and V_U).  Along a line xi the red height starts at
  ``left_height`` at the dD_L end and drops by one at every red dot.
* The path of level h + 1/2 is the level line of the height grid: it passes
  through the midpoints of the grid edges whose ends lie on either side of
  h + 1/2.  Midpoints on a line are dots, midpoints between lines are the
  squares in between.  Every level from the lowest to the highest height
  gives a path, so there are n + m of them even where a level crosses no
  line at all.
* A blue cell carries a blue dot when it is matched upwards (H_L, V_D).  Along
  the row s the blue height starts at n - s/2 at the xi-minimal end and rises
  by one at every blue dot.
* Green points are blue cells matched downwards (H_R, V_U) and white cells
  matched upwards.  The M green paths run from the blue cut (0, -k) to the
  white cut (2n+1, delta-k), k = 0 .. M-1.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from itertools import pairwise

from ..exceptions import DomainError
from ..models import (
    SU,
    DomainSpec,
    Domino,
    DotProcess,
    Orientation,
    PathColor,
    PathSystem,
    Tiling,
    XiEta,
)
from .geometry import (
    cell_graph,
    in_domain,
    left_height,
    orientation_between,
    partner,
    red_lines,
    row_cells,
    row_range,
    sites_on_line,
)

logger = logging.getLogger(__name__)

# lines of (point, height), every line ordered the same way
HeightGrid = list[list[tuple[XiEta, int]]]

RED_ORIENTATIONS = frozenset({Orientation.HL, Orientation.VU})
BLUE_ORIENTATIONS = frozenset({Orientation.HL, Orientation.VD})
GREEN_ORIENTATIONS = frozenset({Orientation.HR, Orientation.VU})

_DOT_ORIENTATIONS = {
    PathColor.RED: RED_ORIENTATIONS,
    PathColor.BLUE: BLUE_ORIENTATIONS,
    PathColor.GREEN: GREEN_ORIENTATIONS,
}


def from_orientations(spec: DomainSpec, orientations: Mapping[SU, Orientation]) -> Tiling:
    """Build and validate a tiling from the orientation of every blue cell."""
    dominoes = frozenset(
        Domino(blue.to_xi_eta(), orientation) for blue, orientation in orientations.items()
    )
    tiling = Tiling(spec, dominoes)
    validate_tiling(tiling)
    return tiling


def validate_tiling(t: Tiling) -> None:
    """Check that the dominoes partition the cell set exactly."""
    graph = cell_graph(t.spec)
    covered: set[SU] = set()
    anchors: set[SU] = set()
    for d in t.dominoes:
        blue = d.anchor.to_su()
        if blue not in graph.blue_index:
            raise DomainError(f"Domino anchor {d.anchor} is not a blue cell of the domain")
        white = partner(blue, d.orientation)
        if white not in graph.white_index:
            raise DomainError(f"Domino {d} leaves the domain")
        if blue in anchors or white in covered:
            raise DomainError(f"Domino {d} overlaps another domino")
        anchors.add(blue)
        covered.add(white)
    if len(anchors) != len(graph.blues) or len(covered) != len(graph.whites):
        raise DomainError(
            f"Tiling covers {len(anchors) + len(covered)} of {graph.cell_count} cells"
        )


def weight(t: Tiling) -> float:
    """Weight a^(number of vertical dominoes)."""
    return float(t.spec.a**t.vertical_count)


def orientation_counts(t: Tiling) -> dict[Orientation, int]:
    counts = Counter(d.orientation for d in t.dominoes)
    return {o: counts.get(o, 0) for o in Orientation}


def dots_from_dominoes(dominoes: Iterable[Domino], color: PathColor) -> DotProcess:
    """Dots of one colour read off the blue anchors of a domino set."""
    wanted = _DOT_ORIENTATIONS[color]
    return DotProcess(
        color, frozenset(d.anchor for d in dominoes if d.orientation in wanted)
    )


def dots_of(t: Tiling, color: PathColor) -> DotProcess:
    """Red, blue or green dots of a tiling at blue-square centres."""
    return dots_from_dominoes(t.dominoes, color)


def dual_dominoes(t: Tiling) -> frozenset[Domino]:
    """Relabel every domino H_L<->H_R, V_U<->V_D (blue dots become green dots)."""
    return frozenset(Domino(d.anchor, d.orientation.dual) for d in t.dominoes)


def red_heights(t: Tiling) -> dict[XiEta, int]:
    """Red height at the lattice points (xi, eta), xi even, eta even.

    On line xi the heights sit at eta = -2, 0, ..., 2n between consecutive
    blue centres.
    """
    spec = t.spec
    dots = dots_of(t, PathColor.RED).dots
    heights: dict[XiEta, int] = {}
    for xi in red_lines(spec):
        h = left_height(spec, xi)
        heights[XiEta(xi, -2)] = h
        for site in sites_on_line(spec, xi):
            if site in dots:
                h -= 1
            heights[XiEta(xi, site.eta + 1)] = h
        for eta in range(0, 2 * spec.n + 1, 2):
            # sites cut away at s = 0 leave the height unchanged
            heights.setdefault(XiEta(xi, eta), heights[XiEta(xi, eta - 2)])
    return heights


def blue_heights(t: Tiling) -> dict[XiEta, int]:
    """Blue height at the points (xi, eta), xi odd, eta odd, along every row."""
    spec = t.spec
    dots = dots_of(t, PathColor.BLUE).dots
    heights: dict[XiEta, int] = {}
    for s in range(0, 2 * spec.n + 1, 2):
        h = spec.n - s // 2
        # decreasing u is increasing xi; cut cells leave the height unchanged
        for k, u in enumerate(reversed(row_range(spec, s))):
            p = SU(s, u).to_xi_eta()
            if k == 0:
                heights[XiEta(p.xi - 1, p.eta)] = h
            if p in dots:
                h += 1
            heights[XiEta(p.xi + 1, p.eta)] = h
    return heights


def height_function(t: Tiling, color: PathColor) -> dict[XiEta, int]:
    """Height function of the red or blue level lines.

    Level lines sit at half-integer heights h + 1/2; the green system is
    encoded by the blue one through duality and has no separate height.
    """
    if color is PathColor.RED:
        return red_heights(t)
    if color is PathColor.BLUE:
        return blue_heights(t)
    raise DomainError("Green paths are read off directly, not from a height function")


def _red_grid(t: Tiling) -> HeightGrid:
    heights = red_heights(t)
    etas = range(-2, 2 * t.spec.n + 1, 2)
    return [
        [(XiEta(xi, eta), heights[XiEta(xi, eta)]) for eta in etas]
        for xi in red_lines(t.spec)
    ]


def _blue_grid(t: Tiling) -> HeightGrid:
    heights = blue_heights(t)
    xis = range(-1, 2 * t.spec.width, 2)
    return [
        [(XiEta(xi, s - 1), heights[XiEta(xi, s - 1)]) for xi in xis]
        for s in range(0, 2 * t.spec.n + 1, 2)
    ]


def _midpoint(a: XiEta, b: XiEta) -> XiEta:
    return XiEta((a.xi + b.xi) // 2, (a.eta + b.eta) // 2)


def _level_line(grid: HeightGrid, h: int, rising: bool) -> tuple[XiEta, ...]:
    """Edge midpoints where the height crosses h + 1/2, in path order.

    Along every line the points with height <= h form a suffix (falling
    heights) or a prefix (rising heights), so the level line is a staircase
    crossing at most one edge per line.
    """
    cuts = [sum(1 for _, v in line if (v <= h) == rising) for line in grid]
    path: list[XiEta] = []
    for i, line in enumerate(grid):
        cut = cuts[i]
        if 0 < cut < len(line):
            path.append(_midpoint(line[cut - 1][0], line[cut][0]))
        if i + 1 == len(grid):
            break
        following, nxt = grid[i + 1], cuts[i + 1]
        ks = range(cut, nxt) if cut <= nxt else range(cut - 1, nxt - 1, -1)
        path.extend(_midpoint(line[k][0], following[k][0]) for k in ks)
    return tuple(path)


def check_height_grid(grid: HeightGrid, rising: bool) -> None:
    """Raise unless heights are monotone along lines and step by at most one."""
    for line in grid:
        values = [v for _, v in line]
        steps = [b - a if rising else a - b for a, b in pairwise(values)]
        if any(step not in (0, 1) for step in steps):
            raise DomainError(f"Heights along {line[0][0]} are not monotone")
    for line, following in pairwise(grid):
        for (p, a), (q, b) in zip(line, following, strict=True):
            if abs(a - b) > 1:
                raise DomainError(f"Heights at {p} and {q} differ by {abs(a - b)}")


def _level_lines(grid: HeightGrid, rising: bool) -> tuple[tuple[XiEta, ...], ...]:
    check_height_grid(grid, rising)
    values = [v for line in grid for _, v in line]
    return tuple(_level_line(grid, h, rising) for h in range(min(values), max(values)))


def height_grid(t: Tiling, color: PathColor) -> HeightGrid:
    """Heights of one colour as lines of points, ordered along each line.

    Red lines are the lines xi in 2Z read from dD_L; blue lines are the even
    rows read in increasing xi.
    """
    if color is PathColor.RED:
        return _red_grid(t)
    if color is PathColor.BLUE:
        return _blue_grid(t)
    raise DomainError("Green paths are read off directly, not from a height function")


def green_rows(t: Tiling) -> list[list[int]]:
    """Green u positions on every row s = 0 .. 2n+1, decreasing in u.

    Rows 0 and 2n+1 hold the virtual endpoints in the two cuts.
    """
    spec = t.spec
    rows: list[list[int]] = [[-k for k in range(spec.M)]]
    matched_up: set[SU] = set()
    for blue, orientation in t.orientations.items():
        if orientation in GREEN_ORIENTATIONS:
            matched_up.add(partner(blue, orientation))
    for s in range(1, 2 * spec.n + 1):
        if s % 2 == 0:
            us = [
                c.u for c in row_cells(spec, s) if t.orientations[c] in GREEN_ORIENTATIONS
            ]
        else:
            us = [c.u for c in row_cells(spec, s) if c in matched_up]
        rows.append(sorted(us, reverse=True))
    rows.append([spec.delta - k for k in range(spec.M)])
    return rows


def _green_paths(t: Tiling) -> tuple[tuple[SU, ...], ...]:
    rows = green_rows(t)
    for s, row in enumerate(rows):
        if len(row) != t.spec.M:
            raise DomainError(f"Row {s} carries {len(row)} green points, expected {t.spec.M}")
    return tuple(
        tuple(SU(s, rows[s][k]) for s in range(len(rows))) for k in range(t.spec.M)
    )


def paths_of(t: Tiling, color: PathColor) -> PathSystem:
    """Level lines of the given colour."""
    if color is PathColor.RED:
        return PathSystem(color, _level_lines(_red_grid(t), rising=False))
    if color is PathColor.BLUE:
        return PathSystem(color, _level_lines(_blue_grid(t), rising=True))
    return PathSystem(color, _green_paths(t))


def tiling_from_green_rows(spec: DomainSpec, rows: list[list[int]]) -> Tiling:
    """Rebuild the tiling encoded by the green positions of every row.

    Between an even row s and the odd row s+1 the non-green cells are matched
    in increasing u (offset 0 is H_L, offset 1 is V_D); between an odd row s and
    the even row s+1 the green cells are matched in order (offset 0 is H_R,
    offset 1 is V_U).
    """
    orientations: dict[SU, Orientation] = {}
    for s in range(2 * spec.n + 1):
        here = set(rows[s])
        there = set(rows[s + 1])
        if s % 2 == 0:
            blues = [c for c in row_cells(spec, s) if c.u not in here]
            whites = [c for c in row_cells(spec, s + 1) if c.u not in there]
        else:
            blues = [SU(s + 1, u) for u in sorted(there) if in_domain(spec, SU(s + 1, u))]
            whites = [SU(s, u) for u in sorted(here) if in_domain(spec, SU(s, u))]
        if len(blues) != len(whites):
            raise DomainError(f"Green rows {s} and {s + 1} do not interlace")
        for blue, white in zip(blues, whites, strict=True):
            orientation = orientation_between(blue, white)
            if orientation is None:
                raise DomainError(f"Cells {blue} and {white} are not adjacent")
            orientations[blue] = orientation
    return from_orientations(spec, orientations)
