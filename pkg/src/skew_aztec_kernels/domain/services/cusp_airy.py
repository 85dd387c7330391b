"""Airy-like functions and the cusp-Airy kernel.

    A_tau(u) = int z^tau exp(-z^3/3 + u z) dz/(2 pi i)

along two rays leaving a vertex on the negative axis at angles 4 pi/3 (incoming)
and 2 pi/3 (outgoing).  The vertex sits left of 0, so A_tau decays for
u -> +infinity for every integer tau, and A_0 is the Airy function.
"""

import logging
import math

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from ..exceptions import QuadratureError, UnsupportedRegimeError
from ..models import TacnodeParams, TacnodePoint
from .limit_kernels import TacnodeKernel, heaviside
from .quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

type FloatArray = NDArray[np.float64]

RAY_PANELS = 24
GL_ORDER = 16
LAMBDA_PANEL = 2.0
LAMBDA_MAX = 200.0
DECAY_FLOOR = 1e-12
SERIES_TERMS = 80

_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
_AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))


def airy_series(x: float) -> float:
    """Ai(x) from its Maclaurin series; accurate for |x| <= 5."""
    f, g = 1.0, x
    term_f, term_g = 1.0, x
    x3 = x**3
    for k in range(1, SERIES_TERMS):
        term_f *= x3 / ((3 * k - 1) * (3 * k))
        term_g *= x3 / ((3 * k) * (3 * k + 1))
        f += term_f
        g += term_g
        if abs(term_f) + abs(term_g) < 1e-18 * (abs(f) + abs(g)):
            break
    return _AI0 * f + _AIP0 * g


def _ray_rule(length: float) -> tuple[FloatArray, FloatArray]:
    x, w = np.polynomial.legendre.leggauss(GL_ORDER)
    bps = np.linspace(0.0, length, RAY_PANELS + 1)
    half = 0.5 * np.diff(bps)
    mid = 0.5 * (bps[1:] + bps[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def airy_like(tau: int, u: float | FloatArray) -> float | FloatArray:
    """A_tau(u), real for real u."""
    us = np.atleast_1d(np.asarray(u, dtype=np.float64))
    out = np.empty_like(us)
    for i, ui in enumerate(us):
        vertex = -max(1.0, math.sqrt(max(ui, 0.0)))
        length = 6.0 + math.sqrt(2.0 * abs(ui)) + abs(tau) ** 0.5
        s, w = _ray_rule(length)
        total = 0.0j
        for angle, direction in ((2 * np.pi / 3, 1.0), (4 * np.pi / 3, -1.0)):
            e = np.exp(1j * angle)
            z = vertex + s * e
            values = z**tau * np.exp(-(z**3) / 3 + ui * z)
            total += direction * e * np.sum(w * values)
        out[i] = (total / (2j * np.pi)).real
    return out if np.ndim(u) else float(out[0])


def _lambda_integral(tau1: int, xi1: float, tau2: int, xi2: float) -> float:
    """int_0^inf A_-tau1(xi1 + l) A_tau2(xi2 + l) dl, cut where the integrand is negligible."""
    x, w = np.polynomial.legendre.leggauss(GL_ORDER)
    total, start = 0.0, 0.0
    while True:
        lam = start + LAMBDA_PANEL * 0.5 * (x + 1.0)
        values = airy_like(-tau1, xi1 + lam) * airy_like(tau2, xi2 + lam)
        total += LAMBDA_PANEL * 0.5 * float(np.sum(w * values))
        start += LAMBDA_PANEL
        if start > 4.0 and float(np.max(np.abs(values))) < DECAY_FLOOR:
            return total
        if start > LAMBDA_MAX:
            raise QuadratureError(f"Airy product does not decay by lambda = {LAMBDA_MAX}")


def cusp_airy(tau1: int, xi1: float, tau2: int, xi2: float) -> float:
    """L^cusp-Airy(tau1, xi1; tau2, xi2).

    Raises:
        UnsupportedRegimeError: For tau1 >= 0 and tau2 < 0
    """
    if tau1 >= 0 and tau2 < 0:
        raise UnsupportedRegimeError(
            f"Cusp-Airy kernel is not available for tau1={tau1} >= 0 and tau2={tau2} < 0"
        )
    sign = -1.0 if tau2 % 2 else 1.0
    return -heaviside(tau1 - tau2, xi1 - xi2) + sign * _lambda_integral(tau1, xi1, tau2, xi2)


class CuspRow(BaseModel):
    """Rescaled tacnode kernel against the cusp-Airy kernel at one r."""

    model_config = ConfigDict(frozen=True)

    r: int
    scaled_tacnode: complex
    cusp_airy: float
    err_estimate: float

    @property
    def discrepancy(self) -> float:
        return abs(self.scaled_tacnode - self.cusp_airy)


def scaled_tacnode(
    kernel: TacnodeKernel, tau1: int, xi1: float, tau2: int, xi2: float
) -> tuple[complex, float]:
    """Tacnode kernel in the cusp scaling, with its error estimate.

    r^((tau1 - tau2 - 1)/6) (sqrt 2)^(tau1 - tau2 - 1) L^dTac(tau1, y1; tau2, y2)
    at y_i = -(2 sqrt(r) + xi_i / r^(1/6)) / sqrt(2), so that the diagonal is a
    density in xi.
    """
    r = kernel.params.r
    root6 = r ** (1.0 / 6.0)
    ys = [-(2.0 * math.sqrt(r) + xi / root6) / math.sqrt(2.0) for xi in (xi1, xi2)]
    result = kernel.terms(TacnodePoint(tau=tau1, y=ys[0]), TacnodePoint(tau=tau2, y=ys[1]))
    factor = root6 ** (tau1 - tau2 - 1) * math.sqrt(2.0) ** (tau1 - tau2 - 1)
    return factor * result.value, factor * result.err_estimate


def cusp_limit_check(
    rs: list[int],
    tau1: int = 0,
    xi1: float = 0.0,
    tau2: int = 0,
    xi2: float = 0.0,
    config: QuadratureConfig | None = None,
    theta_rcap: int = 16,
) -> list[CuspRow]:
    """Discrepancy between the rescaled tacnode kernel (rho = beta = 0) and cusp-Airy."""
    target = cusp_airy(tau1, xi1, tau2, xi2)
    rows = []
    for r in rs:
        y_max = (2.0 * math.sqrt(r) + max(abs(xi1), abs(xi2)) / r ** (1 / 6)) / math.sqrt(2.0)
        kernel = TacnodeKernel(TacnodeParams(r=r, rho=0, beta=0.0), config, y_max, theta_rcap)
        value, err = scaled_tacnode(kernel, tau1, xi1, tau2, xi2)
        rows.append(CuspRow(r=r, scaled_tacnode=value, cusp_airy=target, err_estimate=err))
        logger.info(f"r={r}: cusp-Airy discrepancy {rows[-1].discrepancy:.3e}")
    return rows
