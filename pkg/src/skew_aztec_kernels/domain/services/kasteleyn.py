"""Kasteleyn matrix of a skew-Aztec rectangle and the kernels read off its inverse.

Gauge: K(b, w) = 1 on horizontal edges and i*a on vertical edges, rows indexed
by blue cells and columns by white cells.  ``Kinv = K^{-1}`` is indexed
[white, blue].  Kernels are quoted in the (xi, eta) gauge

    kblue(B, W) = Kinv(W, B) / G(W, B),
    G(W, B) = i^((p + 2 xi_B - eta_B + xi_W) mod 4),
    p = (xi_W - eta_W + xi_B - eta_B + 2) / 2,

which is a diagonal conjugation of Kinv and leaves every principal minor
unchanged.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from ..exceptions import DomainError
from ..models import SU, Coord, DomainSpec, Domino, XiEta
from .geometry import CellGraph, cell_graph, partner, row_cells, sites_on_line

logger = logging.getLogger(__name__)

SINGULAR_PIVOT = 1e-12

type ComplexMatrix = NDArray[np.complex128]


def _as_su(c: Coord) -> SU:
    return c if isinstance(c, SU) else c.to_su()


def edge_weight(spec: DomainSpec, blue: SU, white: SU) -> complex:
    """Kasteleyn entry of an adjacent pair, 0 if the cells are not adjacent."""
    ds, du = white.s - blue.s, white.u - blue.u
    if (ds, du) in ((1, 0), (-1, 0)):
        return 1.0 + 0.0j
    if (ds, du) in ((1, 1), (-1, -1)):
        return 1j * spec.a
    return 0.0j


def gauge_factor(white: Coord, blue: Coord) -> complex:
    """The factor G(W, B) relating Kinv to the blue kernel.

    Raises:
        DomainError: If the exponent p is not an integer
    """
    w = white.to_xi_eta() if isinstance(white, SU) else white
    b = blue.to_xi_eta() if isinstance(blue, SU) else blue
    twice_p = w.xi - w.eta + b.xi - b.eta + 2
    if twice_p % 2:
        raise DomainError(f"Parity violation in gauge exponent for W={w}, B={b}")
    exponent = (twice_p // 2 + 2 * b.xi - b.eta + w.xi) % 4
    return (1, 1j, -1, -1j)[exponent]


@dataclass(frozen=True)
class KasteleynSystem:
    """Kasteleyn matrix with its determinant and inverse."""

    spec: DomainSpec
    graph: CellGraph
    K: ComplexMatrix
    log_det: complex
    Kinv: ComplexMatrix | None

    @property
    def det(self) -> complex:
        """Determinant of K; |det| is the weighted partition function."""
        if self.Kinv is None:
            return 0.0j
        return complex(np.exp(self.log_det))

    @property
    def is_singular(self) -> bool:
        return self.Kinv is None

    def inverse(self) -> ComplexMatrix:
        if self.Kinv is None:
            raise DomainError(f"Kasteleyn matrix of {self.spec} is singular")
        return self.Kinv

    def white_at(self, c: Coord) -> int | None:
        return self.graph.white_index.get(_as_su(c))

    def blue_at(self, c: Coord) -> int | None:
        return self.graph.blue_index.get(_as_su(c))

    @cached_property
    def identity_residual(self) -> float:
        """max |K Kinv - I|."""
        inv = self.inverse()
        return float(np.max(np.abs(self.K @ inv - np.eye(len(self.K)))))


def build(spec: DomainSpec) -> KasteleynSystem:
    """Assemble K, factorize it and invert it when it is non-singular."""
    graph = cell_graph(spec)
    size = len(graph.blues)
    K = np.zeros((size, size), dtype=np.complex128)
    for i, b in enumerate(graph.blues):
        for _, w in graph.edges(b):
            K[i, graph.white_index[w]] = edge_weight(spec, b, w)
    if size == 0:
        return KasteleynSystem(spec, graph, K, 0.0j, K.copy())
    lu, piv = scipy.linalg.lu_factor(K)
    pivots = np.diag(lu)
    scale = float(np.max(np.abs(pivots)))
    if float(np.min(np.abs(pivots))) <= SINGULAR_PIVOT * max(scale, 1.0):
        logger.info(f"Kasteleyn matrix of {spec} is singular (no tilings)")
        return KasteleynSystem(spec, graph, K, complex(-np.inf), None)
    swaps = int(np.sum(piv != np.arange(size)))
    log_det = complex(np.sum(np.log(pivots.astype(np.complex128))))
    if swaps % 2:
        log_det += 1j * np.pi
    Kinv = scipy.linalg.lu_solve((lu, piv), np.eye(size, dtype=np.complex128))
    logger.info(f"Built Kasteleyn system of {spec}: size {size}")
    return KasteleynSystem(spec, graph, K, log_det, Kinv)


def kinv_entry(sys: KasteleynSystem, white: Coord, blue: Coord) -> complex:
    """Kinv(W, B), zero when either cell lies outside the domain."""
    wi, bi = sys.white_at(white), sys.blue_at(blue)
    if wi is None or bi is None:
        return 0.0j
    return complex(sys.inverse()[wi, bi])


def kblue(sys: KasteleynSystem, b: Coord, w: Coord) -> complex:
    """Blue kernel K^blue(B, W) in the (xi, eta) gauge."""
    blue, white = _as_su(b), _as_su(w)
    if not blue.is_blue or white.is_blue:
        raise DomainError(f"Expected a blue and a white cell, got {blue} and {white}")
    return kinv_entry(sys, white, blue) / gauge_factor(white, blue)


def kred(sys: KasteleynSystem, p1: Coord, p2: Coord) -> complex:
    """Red-dot kernel K^red(p1; p2) for two blue centres.

    K^red = kblue(B2, W1) - a * kblue(B2, W1') with W1 = (s1+1, u1) and
    W1' = (s1-1, u1-1); terms with a cell outside the domain vanish.
    """
    b1, b2 = _as_su(p1), _as_su(p2)
    if not (b1.is_blue and b2.is_blue):
        raise DomainError(f"K^red needs blue centres, got {b1} and {b2}")
    w1 = SU(b1.s + 1, b1.u)
    w1p = SU(b1.s - 1, b1.u - 1)
    value = 0.0j
    if sys.white_at(w1) is not None and sys.blue_at(b2) is not None:
        value += kblue(sys, b2, w1)
    if sys.white_at(w1p) is not None and sys.blue_at(b2) is not None:
        value -= sys.spec.a * kblue(sys, b2, w1p)
    return value


def kred_matrix(sys: KasteleynSystem, points: Sequence[Coord]) -> ComplexMatrix:
    """[K^red(p_i; p_j)] over a list of blue centres."""
    return np.array(
        [[kred(sys, p, q) for q in points] for p in points], dtype=np.complex128
    )


def red_gap_probability(sys: KasteleynSystem, points: Sequence[Coord]) -> float:
    """det(I - K^red) over the sites: probability that none carries a red dot."""
    if not points:
        return 1.0
    k = kred_matrix(sys, points)
    return float(np.linalg.det(np.eye(len(points)) - k).real)


def kenyon_probability(sys: KasteleynSystem, dominoes: Iterable[Domino]) -> float:
    """Probability that all the dominoes are present.

    P = prod_i K(b_i, w_i) * det[Kinv(w_i, b_j)].
    """
    pairs = []
    for d in dominoes:
        b = d.anchor.to_su()
        pairs.append((b, partner(b, d.orientation)))
    if not pairs:
        return 1.0
    for b, w in pairs:
        if sys.blue_at(b) is None or sys.white_at(w) is None:
            return 0.0
    inv = sys.inverse()
    prefactor = np.prod([edge_weight(sys.spec, b, w) for b, w in pairs])
    bi = [sys.graph.blue_index[b] for b, _ in pairs]
    wi = [sys.graph.white_index[w] for _, w in pairs]
    minor = inv[np.ix_(wi, bi)]
    return float((prefactor * np.linalg.det(minor)).real)


def _down_neighbours(spec: DomainSpec, blue: SU) -> list[tuple[SU, complex]]:
    return [(SU(blue.s - 1, blue.u), 1.0 + 0.0j), (SU(blue.s - 1, blue.u - 1), 1j * spec.a)]


def _up_neighbours(spec: DomainSpec, white: SU) -> list[tuple[SU, complex]]:
    return [(SU(white.s + 1, white.u), 1.0 + 0.0j), (SU(white.s + 1, white.u + 1), 1j * spec.a)]


def green_kernel_equal_level(
    sys: KasteleynSystem, s: int
) -> tuple[list[SU], ComplexMatrix]:
    """Green-point kernel on row s, read off Kinv.

    On a blue row the green points are cells matched downwards; on a white row
    they are cells matched upwards.  Entry [i, j] pairs cell i with cell j and
    the diagonal is the green density.
    """
    spec = sys.spec
    if not 0 < s < 2 * spec.n + 1:
        raise DomainError(f"Row {s} is not an interior row")
    cells = row_cells(spec, s)
    size = len(cells)
    out = np.zeros((size, size), dtype=np.complex128)
    for i, ci in enumerate(cells):
        for j, cj in enumerate(cells):
            if s % 2 == 0:
                total = sum(
                    (k * kinv_entry(sys, w, cj) for w, k in _down_neighbours(spec, ci)),
                    0.0j,
                )
                g = gauge_factor(SU(ci.s - 1, ci.u), cj)
            else:
                total = sum(
                    (kinv_entry(sys, ci, b) * k for b, k in _up_neighbours(spec, cj)),
                    0.0j,
                )
                g = gauge_factor(ci, SU(cj.s + 1, cj.u))
            out[j, i] = total / (-g)
    return cells, out


def blue_kernel_equal_level(
    sys: KasteleynSystem, s: int
) -> tuple[list[SU], ComplexMatrix]:
    """Complement I - K^green on row s: the kernel of the non-green cells."""
    cells, green = green_kernel_equal_level(sys, s)
    return cells, np.eye(len(cells)) - green


def red_density_on_line(sys: KasteleynSystem, xi: int) -> float:
    """Expected number of red dots on line xi, the trace of K^red."""
    return float(
        sum(kred(sys, p, p) for p in sites_on_line(sys.spec, xi)).real
    )


def gauge_conjugate(values: ComplexMatrix, points: Sequence[XiEta], a: float) -> ComplexMatrix:
    """Conjugate a kernel matrix by f(p1)/f(p2) with f = a^u."""
    f = np.array([a ** p.to_su().u for p in points])
    return values * f[:, None] / f[None, :]
