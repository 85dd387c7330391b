"""SVG rendering of tilings and their level lines."""

import logging

import svgwrite

from ..models import SU, Coord, PathColor, RenderStyle, Tiling, XiEta
from .geometry import partner, picture_coordinates
from .tiling import paths_of

logger = logging.getLogger(__name__)

PATH_COLORS = {
    PathColor.RED: "#b00020",
    PathColor.BLUE: "#0033aa",
    PathColor.GREEN: "#007a33",
}
STROKE = "#222222"


def _su(c: Coord) -> SU:
    return c.to_su() if isinstance(c, XiEta) else c


def _domino_box(blue: SU, white: SU) -> tuple[int, int, int, int]:
    """(x0, y0, width, height) in picture cells."""
    (bx, by), (wx, wy) = picture_coordinates(blue), picture_coordinates(white)
    return min(bx, wx), min(by, wy), abs(bx - wx) + 1, abs(by - wy) + 1


def render_svg(t: Tiling, style: RenderStyle | None = None) -> str:
    """Render one rectangle per domino, coloured by orientation.

    Dominoes are drawn in their serialization order and picture y grows
    upwards, so the output only depends on the tiling and the style.
    """
    style = style or RenderStyle()
    px = style.cell_px
    boxes = []
    for domino in t.sorted_dominoes():
        blue = domino.anchor.to_su()
        boxes.append((_domino_box(blue, partner(blue, domino.orientation)), domino))
    x_min = min(b[0] for b, _ in boxes)
    y_min = min(b[1] for b, _ in boxes)
    x_max = max(b[0] + b[2] for b, _ in boxes)
    y_max = max(b[1] + b[3] for b, _ in boxes)
    width, height = (x_max - x_min) * px, (y_max - y_min) * px

    def to_canvas(x: float, y: float) -> tuple[float, float]:
        return (x - x_min) * px, (y_max - y) * px

    dwg = svgwrite.Drawing(size=(width, height), viewBox=f"0 0 {width} {height}", profile="full")
    tiles = dwg.g(id="dominoes", stroke=STROKE, stroke_width=max(px // 8, 1))
    for (x0, y0, w, h), domino in boxes:
        left, top = to_canvas(x0, y0 + h)
        tiles.add(
            dwg.rect(
                insert=(left, top),
                size=(w * px, h * px),
                fill=style.palette[domino.orientation],
            )
        )
    dwg.add(tiles)

    for color in sorted(style.draw_paths):
        system = paths_of(t, color)
        group = dwg.g(
            id=f"{color.value}-paths",
            fill="none",
            stroke=PATH_COLORS[color],
            stroke_width=max(px // 4, 1),
        )
        for path in system.paths:
            points = []
            for c in path:
                x, y = picture_coordinates(_su(c))
                points.append(to_canvas(x + 0.5, y + 0.5))
            group.add(dwg.polyline(points))
        dwg.add(group)
        logger.debug(f"Overlay of {len(system)} {color.value} paths")

    logger.info(f"Rendered {len(boxes)} dominoes at {px}px per cell")
    return dwg.tostring()
