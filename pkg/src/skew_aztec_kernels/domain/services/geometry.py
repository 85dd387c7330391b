"""Geometry of the skew-Aztec rectangle.

Cells are addressed in the (s, u) system: blue cells on even rows s, white cells
on odd rows, s = 0, ..., 2n+1.  A full row holds m + M cells; the two boundary
cuts remove the M blue cells u = -(M-1), ..., 0 of row 0 and the M white cells
u = n-m-M+1, ..., n-m of row 2n+1.  The (xi, eta) system is xi = s - 2u,
eta = s - 1, so that every red-dot line xi in 2Z is an oblique line of blue
centres.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

from ..exceptions import DomainError
from ..models import (
    SU,
    DerivedParams,
    DomainSpec,
    Orientation,
    TilabilityVerdict,
    TilingCase,
    XiEta,
)

logger = logging.getLogger(__name__)

# white partner offsets (ds, du) of a blue cell, per orientation
PARTNER_OFFSETS: dict[Orientation, tuple[int, int]] = {
    Orientation.HL: (1, 0),
    Orientation.VD: (1, 1),
    Orientation.VU: (-1, -1),
    Orientation.HR: (-1, 0),
}


def check_parameters(n: int, m: int, M: int) -> None:
    """Raise DomainError unless n >= 1, m >= 0, M >= 1."""
    if n < 1 or m < 0 or M < 1:
        raise DomainError(f"Need n >= 1, m >= 0, M >= 1; got ({n}, {m}, {M})")


def derived_params(n: int, m: int, M: int) -> DerivedParams:
    """Delta, sigma, kappa, rho and r of the domain (n, m, M)."""
    check_parameters(n, m, M)
    delta = n - m
    sigma = n - M + delta + 1
    rho = abs(m - (M - 1))
    r = max(n - (M - 1), n - m)
    # both forms of rho and r must agree
    if rho != abs(sigma - 2 * delta) or r != max(sigma - delta, delta):
        raise DomainError(f"Inconsistent derived parameters for ({n}, {m}, {M})")
    return DerivedParams(delta=delta, sigma=sigma, kappa=max(0, -delta), rho=rho, r=r)


def is_tilable(n: int, m: int, M: int) -> TilabilityVerdict:
    """Tilability verdict of the domain (n, m, M)."""
    check_parameters(n, m, M)
    params = derived_params(n, m, M)
    if 1 <= M <= min(m, n + 1):
        case = TilingCase.CASE1
    elif 0 <= m <= min(M - 1, n):
        case = TilingCase.CASE2
    else:
        case = TilingCase.NONE
    return TilabilityVerdict(
        tilable=case is not TilingCase.NONE, case=case, rho=params.rho, r=params.r
    )


def coordinate_bounds(spec: DomainSpec) -> tuple[range, range]:
    """Admissible xi and eta ranges of the (xi, eta) system."""
    return range(-1, 2 * spec.width + 1), range(-2, 2 * spec.n + 2)


def xi_eta_to_su(c: XiEta, spec: DomainSpec) -> SU:
    """Map (xi, eta) to (s, u) = (eta + 1, (eta - xi + 1) / 2)."""
    xi_range, eta_range = coordinate_bounds(spec)
    if c.xi not in xi_range or c.eta not in eta_range:
        raise DomainError(f"Coordinate {c} outside the domain range")
    if (c.eta - c.xi + 1) % 2:
        raise DomainError(f"Coordinate {c} has xi and eta of equal parity")
    return c.to_su()


def su_to_xi_eta(c: SU, spec: DomainSpec) -> XiEta:
    """Inverse of xi_eta_to_su."""
    p = c.to_xi_eta()
    xi_range, eta_range = coordinate_bounds(spec)
    if p.xi not in xi_range or p.eta not in eta_range:
        raise DomainError(f"Coordinate {c} outside the domain range")
    return p


def row_range(spec: DomainSpec, s: int) -> range:
    """Full u range of row s before the cuts are removed."""
    top = s // 2
    return range(top - spec.width + 1, top + 1)


def blue_cut(spec: DomainSpec) -> range:
    return range(-(spec.M - 1), 1)


def white_cut(spec: DomainSpec) -> range:
    return range(spec.delta - spec.M + 1, spec.delta + 1)


def in_domain(spec: DomainSpec, c: SU) -> bool:
    """Whether the cell c belongs to the domain."""
    if not 0 <= c.s <= 2 * spec.n + 1 or c.u not in row_range(spec, c.s):
        return False
    if c.s == 0 and c.u in blue_cut(spec):
        return False
    return not (c.s == 2 * spec.n + 1 and c.u in white_cut(spec))


def row_cells(spec: DomainSpec, s: int) -> list[SU]:
    """Cells of row s in increasing u."""
    return [SU(s, u) for u in row_range(spec, s) if in_domain(spec, SU(s, u))]


def partner(blue: SU, orientation: Orientation) -> SU:
    """White square covered together with a blue cell."""
    ds, du = PARTNER_OFFSETS[orientation]
    return SU(blue.s + ds, blue.u + du)


def orientation_between(blue: SU, white: SU) -> Orientation | None:
    """Orientation of the domino formed by two cells, None if not adjacent."""
    offset = (white.s - blue.s, white.u - blue.u)
    for orientation, delta in PARTNER_OFFSETS.items():
        if delta == offset:
            return orientation
    return None


@dataclass(frozen=True)
class CellGraph:
    """Bipartite adjacency of the domain's cells."""

    spec: DomainSpec

    @cached_property
    def blues(self) -> list[SU]:
        return [c for s in range(0, 2 * self.spec.n + 1, 2) for c in row_cells(self.spec, s)]

    @cached_property
    def whites(self) -> list[SU]:
        return [c for s in range(1, 2 * self.spec.n + 2, 2) for c in row_cells(self.spec, s)]

    @cached_property
    def blue_index(self) -> dict[SU, int]:
        return {c: i for i, c in enumerate(self.blues)}

    @cached_property
    def white_index(self) -> dict[SU, int]:
        return {c: i for i, c in enumerate(self.whites)}

    def edges(self, blue: SU) -> list[tuple[Orientation, SU]]:
        """Admissible dominoes anchored at a blue cell."""
        out = []
        for orientation in Orientation:
            w = partner(blue, orientation)
            if w in self.white_index:
                out.append((orientation, w))
        return out

    @property
    def cell_count(self) -> int:
        return len(self.blues) + len(self.whites)

    @property
    def is_balanced(self) -> bool:
        return len(self.blues) == len(self.whites)


def cell_graph(spec: DomainSpec) -> CellGraph:
    """Build the cell graph and check the colour balance."""
    graph = CellGraph(spec)
    if not graph.is_balanced:
        raise DomainError(
            f"Unbalanced colouring: {len(graph.blues)} blue vs {len(graph.whites)} white"
        )
    logger.debug(f"Cell graph of {spec}: {graph.cell_count} cells")
    return graph


def picture_coordinates(c: SU) -> tuple[int, int]:
    """Rectangular picture coordinates (X, Y); horizontal dominoes differ in X."""
    return c.s - c.u - 1, c.u - 1


def red_lines(spec: DomainSpec) -> range:
    """The lines xi in 2Z that carry blue centres."""
    return range(0, 2 * (spec.width - 1) + 1, 2)


def left_height(spec: DomainSpec, xi: int) -> int:
    """Red height on line xi at the dD_L end."""
    return spec.n + max(0, xi // 2 - spec.M + 1)


def right_height(spec: DomainSpec, xi: int) -> int:
    """Red height on line xi at the dD_R end."""
    return min(xi // 2, spec.m)


def red_dot_profile(spec: DomainSpec) -> list[tuple[int, int]]:
    """Number of red dots carried by every line xi in 2Z.

    The count is the height difference between the two boundary ends of the
    line; it equals r on the rho + 1 lines of the strip and grows by one per
    line on either side, up to n.
    """
    verdict = is_tilable(spec.n, spec.m, spec.M)
    if not verdict.tilable:
        raise DomainError(f"Domain ({spec.n}, {spec.m}, {spec.M}) is not tilable")
    return [
        (xi, left_height(spec, xi) - right_height(spec, xi)) for xi in red_lines(spec)
    ]


def sites_on_line(spec: DomainSpec, xi: int) -> list[XiEta]:
    """Blue centres on the line xi, ordered from dD_L (s = 0) to dD_R."""
    out = []
    for s in range(0, 2 * spec.n + 1, 2):
        c = SU(s, (s - xi) // 2)
        if in_domain(spec, c):
            out.append(c.to_xi_eta())
    return out


def strip_lines(spec: DomainSpec) -> list[int]:
    """Lines of the strip {rho}: the rho + 1 lines carrying exactly r dots."""
    return [xi for xi, count in red_dot_profile(spec) if count == spec.r]


def boundary_profile_table(spec: DomainSpec) -> list[dict[str, int | str]]:
    """Three-region summary: left of the strip, the strip, right of the strip."""
    profile = red_dot_profile(spec)
    strip = [xi for xi, count in profile if count == spec.r]
    lo, hi = min(strip), max(strip)
    rows: list[dict[str, int | str]] = []
    for xi, count in profile:
        region = "left" if xi < lo else "right" if xi > hi else "strip"
        rows.append(
            {
                "xi": xi,
                "region": region,
                "height_left": left_height(spec, xi),
                "height_right": right_height(spec, xi),
                "dots": count,
            }
        )
    return rows
