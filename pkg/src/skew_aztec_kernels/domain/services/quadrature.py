"""Contour quadrature for the kernel formulas.

Every rule returns nodes z_k and weights w_k such that

    sum_k w_k f(z_k) ~ (1 / 2 pi i) * integral of f(z) dz

along the contour in its stated orientation: circles counterclockwise
(trapezoid rule), vertical lines upward (composite Gauss-Legendre panels), the
closed right semicircle counterclockwise (segment downward, then the arc).
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import DomainError, QuadratureError

logger = logging.getLogger(__name__)

type ComplexArray = NDArray[np.complex128]
type Integrand = Callable[[ComplexArray], ComplexArray]


class QuadratureConfig(BaseModel):
    """Node counts, contour placement and tolerances of all kernel integrals."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    circle_nodes: int = Field(default=256, ge=16)
    line_nodes_per_unit: int = Field(default=400, ge=1)
    line_nodes_cap: int = Field(default=4096, ge=16)
    gamma0_radius: float = Field(default=0.5, gt=0.0)
    line_abscissa: float = Field(default=1.0, gt=0.0)
    truncation_base: float = Field(default=6.0, gt=0.0)
    gl_order: int = Field(default=16, ge=2)
    segment_panels: int = Field(default=24, ge=2)
    arc_panels: int = Field(default=24, ge=2)
    tolerance: float = Field(default=1e-8, gt=0.0)
    prune_margin: float = Field(default=45.0, gt=0.0)
    ladder: list[float] | None = None

    @model_validator(mode="after")
    def check_contours(self) -> "QuadratureConfig":
        """Gamma_0 must lie strictly left of the vertical line."""
        if self.gamma0_radius >= self.line_abscissa:
            raise ValueError(
                f"Gamma_0 radius {self.gamma0_radius} must be smaller than the "
                f"line abscissa {self.line_abscissa}"
            )
        return self


class ContourKind(StrEnum):
    CIRCLE = "circle"
    VERTICAL_LINE = "vertical_line"
    SEMICIRCLE_RIGHT = "semicircle_right"


class ContourSpec(BaseModel):
    """A closed circle, a truncated upgoing line or the closed right semicircle.

    ``radius`` is the circle or arc radius, ``abscissa`` the real part of the
    line or of the semicircle's straight side.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ContourKind
    nodes: int = Field(default=256, ge=16)
    center: complex = 0j
    radius: float = 1.0
    abscissa: float = 0.0
    half_height: float = 1.0

    @model_validator(mode="after")
    def check_geometry(self) -> "ContourSpec":
        if self.nodes % 2:
            raise ValueError(f"Node count must be even, got {self.nodes}")
        if self.kind is not ContourKind.VERTICAL_LINE and self.radius <= 0:
            raise ValueError(f"Radius must be positive, got {self.radius}")
        if self.kind is ContourKind.VERTICAL_LINE and self.half_height <= 0:
            raise ValueError(f"Half height must be positive, got {self.half_height}")
        return self

    def with_nodes(self, nodes: int) -> "ContourSpec":
        return self.model_copy(update={"nodes": nodes})

    def shifted(self, dx: float) -> "ContourSpec":
        """Same contour moved horizontally by dx."""
        return self.model_copy(
            update={"abscissa": self.abscissa + dx, "center": self.center + dx}
        )


class QuadResult(BaseModel):
    """Quadrature value with its node-halving error estimate."""

    model_config = ConfigDict(frozen=True)

    value: complex
    err_estimate: float = Field(ge=0.0)


class RadiiLadder(BaseModel):
    """Strictly nested circle radii a < rho0 < rho1 < sigma1 < sigma2 < R < rho2 < rho3 < 1/a."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: float
    rho0: float
    rho1: float
    sigma1: float
    sigma2: float
    R: float
    rho2: float
    rho3: float

    @model_validator(mode="after")
    def check_order(self) -> "RadiiLadder":
        chain = [self.a, *self.radii, 1.0 / self.a]
        if any(x >= y for x, y in zip(chain, chain[1:], strict=False)):
            raise ValueError(f"Radii are not strictly increasing inside (a, 1/a): {chain}")
        return self

    @property
    def radii(self) -> list[float]:
        return [self.rho0, self.rho1, self.sigma1, self.sigma2, self.R, self.rho2, self.rho3]

    def perturbed(self, eps: float) -> "RadiiLadder":
        """Scale every log-radius by 1 + eps; ordering is preserved."""
        scaled = [math.exp(math.log(r) * (1.0 + eps)) for r in self.radii]
        return RadiiLadder(a=self.a, **dict(zip(_LADDER_NAMES, scaled, strict=True)))


_LADDER_NAMES = ("rho0", "rho1", "sigma1", "sigma2", "R", "rho2", "rho3")


def default_ladder(a: float, radii: list[float] | None = None) -> RadiiLadder:
    """Geometrically spaced radii strictly inside (a, 1/a).

    Raises:
        DomainError: If a = 1, where the annulus is empty
    """
    if not 0.0 < a < 1.0:
        raise DomainError(f"Radii ladder needs 0 < a < 1, got a={a}")
    if radii is None:
        logs = np.linspace(math.log(a), -math.log(a), 9)[1:]
        radii = [float(math.exp(x)) for x in logs]
    return RadiiLadder(a=a, **dict(zip(_LADDER_NAMES, radii[:7], strict=True)))


def circle(radius: float, nodes: int = 256, center: complex = 0j) -> ContourSpec:
    return ContourSpec(kind=ContourKind.CIRCLE, radius=radius, nodes=nodes, center=center)


def vertical_line(
    abscissa: float, half_height: float, config: QuadratureConfig | None = None
) -> ContourSpec:
    """Upgoing line Re z = abscissa truncated at |Im z| <= half_height."""
    config = config or QuadratureConfig()
    order = config.gl_order
    wanted = min(config.line_nodes_cap, math.ceil(config.line_nodes_per_unit * 2 * half_height))
    nodes = max(2 * order, order * math.ceil(wanted / order))
    return ContourSpec(
        kind=ContourKind.VERTICAL_LINE,
        abscissa=abscissa,
        half_height=half_height,
        nodes=nodes + nodes % 2,
    )


def semicircle_right(abscissa: float, radius: float, nodes: int = 768) -> ContourSpec:
    return ContourSpec(
        kind=ContourKind.SEMICIRCLE_RIGHT, abscissa=abscissa, radius=radius, nodes=nodes
    )


def _gauss_panels(
    breakpoints: NDArray[np.float64], order: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    x, w = np.polynomial.legendre.leggauss(order)
    left, right = breakpoints[:-1], breakpoints[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def nodes_weights(
    contour: ContourSpec, nodes: int | None = None, gl_order: int = 16
) -> tuple[ComplexArray, ComplexArray]:
    """Nodes and weights (including 1/(2 pi i)) of a contour rule."""
    n = nodes or contour.nodes
    if contour.kind is ContourKind.CIRCLE:
        theta = 2.0 * np.pi * np.arange(n) / n
        e = np.exp(1j * theta)
        return contour.center + contour.radius * e, contour.radius * e / n
    if contour.kind is ContourKind.VERTICAL_LINE:
        panels = max(1, n // gl_order)
        bps = np.linspace(-contour.half_height, contour.half_height, panels + 1)
        y, w = _gauss_panels(bps, gl_order)
        return contour.abscissa + 1j * y, (w / (2.0 * np.pi)).astype(np.complex128)
    return _semicircle_rule(contour, n, gl_order)


def _semicircle_rule(
    contour: ContourSpec, n: int, gl_order: int
) -> tuple[ComplexArray, ComplexArray]:
    c, radius = contour.abscissa, contour.radius
    per_side = max(1, n // (4 * gl_order))
    # segment panels grow geometrically away from the real axis
    h0 = min(0.25 * c, radius / 8.0)
    ys = np.concatenate([[0.0], np.geomspace(h0, radius, per_side)])
    bps = np.concatenate([-ys[::-1], ys[1:]])
    y, wy = _gauss_panels(bps, gl_order)
    seg_z = c + 1j * y
    seg_w = -wy / (2.0 * np.pi)
    arc_bps = np.linspace(-np.pi / 2, np.pi / 2, 2 * per_side + 1)
    th, wt = _gauss_panels(arc_bps, gl_order)
    e = np.exp(1j * th)
    arc_z = c + radius * e
    arc_w = radius * e * wt / (2.0 * np.pi)
    return np.concatenate([seg_z, arc_z]), np.concatenate([seg_w, arc_w]).astype(np.complex128)


def _rule_sum(contour: ContourSpec, f: Integrand, n: int, gl_order: int) -> complex:
    z, w = nodes_weights(contour, n, gl_order)
    values = np.asarray(f(z), dtype=np.complex128)
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"Non-finite integrand sample on {contour.kind} contour")
    return complex(np.sum(w * values))


def integrate(contour: ContourSpec, f: Integrand, gl_order: int = 16) -> QuadResult:
    """Integrate a vectorized f along the contour, normalized by 1/(2 pi i).

    The error estimate is the difference with the rule on half the nodes.
    """
    full = _rule_sum(contour, f, contour.nodes, gl_order)
    half = _rule_sum(contour, f, max(contour.nodes // 2, 2 * gl_order), gl_order)
    err = abs(full - half)
    logger.debug(f"{contour.kind} integral with {contour.nodes} nodes: err {err:.2e}")
    return QuadResult(value=full, err_estimate=err)


def double_integrate(
    cu: ContourSpec,
    cv: ContourSpec,
    f: Callable[[ComplexArray, ComplexArray], ComplexArray],
    gl_order: int = 16,
) -> QuadResult:
    """Nested integral over u in cu and v in cv of a vectorized f(u[:, None], v[None, :])."""

    def total(nu: int, nv: int) -> complex:
        u, wu = nodes_weights(cu, nu, gl_order)
        v, wv = nodes_weights(cv, nv, gl_order)
        values = np.asarray(f(u[:, None], v[None, :]), dtype=np.complex128)
        if not np.all(np.isfinite(values)):
            raise QuadratureError("Non-finite integrand sample in a double integral")
        return complex(wu @ values @ wv)

    full = total(cu.nodes, cv.nodes)
    half = total(max(cu.nodes // 2, 2 * gl_order), max(cv.nodes // 2, 2 * gl_order))
    return QuadResult(value=full, err_estimate=abs(full - half))


def moment_matrix(
    contour: ContourSpec, weight: Integrand, size: int, gl_order: int = 16
) -> NDArray[np.complex128]:
    """Hankel matrix of moments c_{i+j} = integral of w^(i+j) weight(w) dw/(2 pi i)."""
    z, w = nodes_weights(contour, None, gl_order)
    base = w * np.asarray(weight(z), dtype=np.complex128)
    powers = np.vander(z, 2 * size - 1 if size else 1, increasing=True)
    moments = base @ powers
    idx = np.add.outer(np.arange(size), np.arange(size))
    return moments[idx] if size else np.zeros((0, 0), dtype=np.complex128)


def andreief_det(moment: Callable[[int, int], complex] | NDArray[np.complex128], r: int) -> complex:
    """det of the r x r matrix of single-contour moments; 1 when r = 0.

    By the Andreief identity this equals (1/r!) times the r-fold integral of
    prod mu(w_k) times the squared Vandermonde of the w_k.
    """
    if r < 0:
        raise DomainError(f"Determinant size must be non-negative, got {r}")
    if r == 0:
        return 1.0 + 0.0j
    if callable(moment):
        matrix = np.array([[moment(i, j) for j in range(r)] for i in range(r)], dtype=np.complex128)
    else:
        matrix = np.asarray(moment, dtype=np.complex128)[:r, :r]
    return complex(np.linalg.det(matrix))


@dataclass(frozen=True)
class ScaledContours:
    """Contours of the rescaled kernels at t = 1/sqrt(n).

    ``gamma0`` is a small circle about 0, ``gamma_tilde`` the closed right
    semicircle through Re z = c containing 1/t, ``line`` the upgoing line
    right of gamma0.
    """

    t: float
    beta: float
    gamma0: ContourSpec
    gamma_tilde: ContourSpec
    line: ContourSpec


def scaled_contours(
    t: float, beta: float, config: QuadratureConfig | None = None
) -> ScaledContours:
    """Contour set used by the pre-limit kernel at scale t.

    Raises:
        DomainError: If t is not positive
    """
    if t <= 0:
        raise DomainError(f"Scale t must be positive, got {t}")
    config = config or QuadratureConfig()
    c = min(1.0, 0.5 / t)
    radius = max(1.0 / t**2, 2.0 / t)
    nodes = 2 * config.gl_order * (config.segment_panels + config.arc_panels)
    half_height = config.truncation_base + 2.0 * abs(beta)
    return ScaledContours(
        t=t,
        beta=beta,
        gamma0=circle(c / 2.0, config.circle_nodes),
        gamma_tilde=semicircle_right(c, radius, nodes),
        line=vertical_line(config.line_abscissa, half_height, config),
    )


def line_truncation(config: QuadratureConfig, beta: float, degree: int, y_max: float = 0.0) -> float:
    """Half height T = base + 2|beta| + sqrt(2 * degree) + max |y|."""
    return config.truncation_base + 2.0 * abs(beta) + math.sqrt(2.0 * max(degree, 0)) + y_max
