"""Rescaled pre-limit kernel of a Case 1 domain with delta <= 0.

With t = 1/sqrt(n), a = 1 + beta t and a blue centre (xi, eta) written as

    x = n - xi/2,   l = (eta + 1)/2,   y = (2 l - n) t / sqrt(2),

the red kernel factors as

    K^red(p1; p2) = (-1)^(l2 - l1) a^(u2 - u1) t^(x2 - x1 + 1) (1 + a^2) L(p1; p2)

and L = -L0' + L12' + L3' + L4' is a sum of contour integrals about a small
circle Gamma_0 around 0 and the closed right semicircle Gamma~ around 1/t.
The r-fold integrals Omega, Omega+ and Omega- over Gamma~ are reduced to
moment determinants by ``MomentEnsemble``.  Every contour runs
counterclockwise, so the straight side of Gamma~ is traversed downward.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from ..exceptions import DomainError, QuadratureError, UnsupportedRegimeError
from ..models import SU, Coord, DomainSpec, KernelValue, TilingCase, XiEta
from .moment_ensemble import MomentEnsemble, WeightedNodes, bilinear_form, ensemble_from_rule
from .quadrature import (
    QuadratureConfig,
    ScaledContours,
    circle,
    nodes_weights,
    scaled_contours,
    semicircle_right,
)

logger = logging.getLogger(__name__)

type ComplexArray = NDArray[np.complex128]

DEFAULT_RCAP = 6
LATTICE_TOL = 1e-9

# second copies of the contours for integrals whose two variables share a contour
_INNER_CIRCLE = 0.7
_OUTER_ABSCISSA = 0.8
_OUTER_RADIUS = 1.25


def _log(z: ComplexArray) -> ComplexArray:
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(z, dtype=np.complex128))


@dataclass(frozen=True)
class ScaledFunctions:
    """The polynomials h, h0 and the functions F, G in the scaled variable.

    h(z) = (1 + a^2 t z)^n (1 - t z)^(n+1) = h0(z) * psi * (1 + a^2 t z)^n
    F(v) = v^-x1 (1 + a^2 t v)^(l1 - 1) (1 - t v)^(n - l1)
    G(z) = z^(-x2 - kappa) (1 + a^2 t z)^l2 (1 - t z)^(n + 1 - l2)
    """

    n: int
    a: float
    kappa: int
    r: int

    @classmethod
    def from_spec(cls, spec: DomainSpec) -> "ScaledFunctions":
        return cls(n=spec.n, a=spec.a, kappa=spec.kappa, r=spec.r)

    @property
    def t(self) -> float:
        return 1.0 / math.sqrt(self.n)

    @property
    def beta(self) -> float:
        """beta with a = 1 + beta t."""
        return (self.a - 1.0) / self.t

    @property
    def rho(self) -> int:
        return self.kappa + self.r

    @property
    def psi(self) -> float:
        """Coefficient of z^r in (1 - t z)^(n+1)."""
        return math.comb(self.n + 1, self.r) * (-self.t) ** self.r

    def log_h(self, z: ComplexArray) -> ComplexArray:
        a2t = self.a**2 * self.t
        return self.n * _log(1 + a2t * z) + (self.n + 1) * _log(1 - self.t * z)

    def h(self, z: ComplexArray) -> ComplexArray:
        return np.exp(self.log_h(z))

    def h0(self, z: ComplexArray) -> ComplexArray:
        return (1 - self.t * np.asarray(z)) ** (self.n + 1) / self.psi

    def weight_rho(self, w: ComplexArray) -> ComplexArray:
        """The end weight rho(w) = (1 + a w)^n (1 - a/w)^(n+1), unscaled."""
        w = np.asarray(w, dtype=np.complex128)
        return (1 + self.a * w) ** self.n * (1 - self.a / w) ** (self.n + 1)

    def limit_h(self, z: ComplexArray) -> ComplexArray:
        """Large-n limit exp(-z^2 + 2 beta z) of h."""
        z = np.asarray(z, dtype=np.complex128)
        return np.exp(-(z**2) + 2 * self.beta * z)

    def log_F(self, z: ComplexArray, x: int, l: int) -> ComplexArray:
        a2t = self.a**2 * self.t
        return -x * _log(z) + (l - 1) * _log(1 + a2t * z) + (self.n - l) * _log(1 - self.t * z)

    def log_G(self, z: ComplexArray, x: int, l: int) -> ComplexArray:
        a2t = self.a**2 * self.t
        return (
            -(x + self.kappa) * _log(z)
            + l * _log(1 + a2t * z)
            + (self.n + 1 - l) * _log(1 - self.t * z)
        )

    def F(self, z: ComplexArray, x: int, l: int) -> ComplexArray:
        return np.exp(self.log_F(z, x, l))

    def G(self, z: ComplexArray, x: int, l: int) -> ComplexArray:
        return np.exp(self.log_G(z, x, l))

    def Phi(
        self, v: ComplexArray, x: int, l: int, radius: float | None = None, nodes: int = 256
    ) -> ComplexArray:
        """Phi(v) = int h(u) / (G(u) (v - u)) du/(2 pi i) on |u| = radius > |v|."""
        v = np.asarray(v, dtype=np.complex128)
        radius = radius or 2.0 / self.t
        if np.any(np.abs(v) >= radius):
            raise DomainError(f"Phi needs |v| < {radius}")
        u, w = nodes_weights(circle(radius, nodes))
        weighted = w * np.exp(self.log_h(u) - self.log_G(u, x, l))
        flat = np.atleast_1d(v)
        out = np.sum(weighted[None, :] / (flat[:, None] - u[None, :]), axis=1)
        return out.reshape(v.shape)


class PreLimitKernelParams(BaseModel):
    """Two points (x_i, y_i) of the scaled lattice of ``spec``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    spec: DomainSpec
    x1: int
    y1: float
    x2: int
    y2: float

    @model_validator(mode="after")
    def check_points(self) -> "PreLimitKernelParams":
        """Require Case 1 with delta <= 0 and y on the lattice l = 0..n."""
        if self.spec.case is not TilingCase.CASE1 or self.spec.delta > 0:
            raise UnsupportedRegimeError(
                f"Pre-limit kernel needs Case 1 with delta <= 0, got {self.spec}"
            )
        for y in (self.y1, self.y2):
            level = self._level(y)
            if abs(level - round(level)) > LATTICE_TOL or not 0 <= round(level) <= self.spec.n:
                raise DomainError(f"y = {y} is not a lattice height of n = {self.spec.n}")
        return self

    def _level(self, y: float) -> float:
        n = self.spec.n
        return 0.5 * (n + y * math.sqrt(2.0 * n))

    @property
    def l1(self) -> int:
        return round(self._level(self.y1))

    @property
    def l2(self) -> int:
        return round(self._level(self.y2))

    @property
    def cells(self) -> tuple[SU, SU]:
        """The two blue cells (2 l, x - n + l)."""
        n = self.spec.n
        return (
            SU(2 * self.l1, self.x1 - n + self.l1),
            SU(2 * self.l2, self.x2 - n + self.l2),
        )

    @classmethod
    def from_lattice(cls, spec: DomainSpec, p1: Coord, p2: Coord) -> "PreLimitKernelParams":
        """Scaled coordinates of two blue centres."""
        t = 1.0 / math.sqrt(spec.n)
        coords = []
        for p in (p1, p2):
            q = p if isinstance(p, XiEta) else p.to_xi_eta()
            if q.xi % 2 or q.eta % 2 == 0:
                raise DomainError(f"{q} is not a blue centre")
            level = (q.eta + 1) // 2
            coords += [spec.n - q.xi // 2, (2 * level - spec.n) * t / math.sqrt(2.0)]
        return cls(spec=spec, x1=coords[0], y1=coords[1], x2=coords[2], y2=coords[3])


def prelimit_to_kred(params: PreLimitKernelParams) -> float:
    """Factor f with K^red(p1; p2) = f * L(x1, y1; x2, y2)."""
    spec = params.spec
    t = 1.0 / math.sqrt(spec.n)
    (c1, c2) = params.cells
    sign = -1.0 if (params.l2 - params.l1) % 2 else 1.0
    return (
        sign
        * spec.a ** (c2.u - c1.u)
        * t ** (params.x2 - params.x1 + 1)
        * (1 + spec.a**2)
    )


@dataclass(frozen=True)
class _Rules:
    gamma0: tuple[ComplexArray, ComplexArray]
    gamma0_inner: tuple[ComplexArray, ComplexArray]
    tilde: tuple[ComplexArray, ComplexArray]
    tilde_outer: tuple[ComplexArray, ComplexArray]
    ensemble: MomentEnsemble


class PreLimitKernel:
    """Evaluator of L for one domain; contours and ensembles are built once.

    Args:
        spec: Case 1 domain with delta <= 0
        config: Quadrature configuration
        rcap: Largest supported r
        strict: Raise instead of warning when the error estimate exceeds
            the configured tolerance
    """

    def __init__(
        self,
        spec: DomainSpec,
        config: QuadratureConfig | None = None,
        rcap: int = DEFAULT_RCAP,
        strict: bool = False,
    ) -> None:
        if spec.case is not TilingCase.CASE1 or spec.delta > 0:
            raise UnsupportedRegimeError(
                f"Pre-limit kernel needs Case 1 with delta <= 0, got {spec}"
            )
        if spec.r > rcap:
            raise UnsupportedRegimeError(f"r = {spec.r} exceeds the determinant cap {rcap}")
        self.spec = spec
        self.config = config or QuadratureConfig()
        self.strict = strict
        self.fn = ScaledFunctions.from_spec(spec)
        self.contours: ScaledContours = scaled_contours(self.fn.t, self.fn.beta, self.config)

    def _rules(self, divisor: int) -> _Rules:
        cs, gl = self.contours, self.config.gl_order
        g0 = cs.gamma0
        tilde = cs.gamma_tilde
        outer = semicircle_right(
            _OUTER_ABSCISSA * tilde.abscissa, _OUTER_RADIUS * tilde.radius, tilde.nodes
        )
        n0 = max(g0.nodes // divisor, 16)
        nt = max(tilde.nodes // divisor, 4 * gl)
        tilde_rule = nodes_weights(tilde, nt, gl)
        z = tilde_rule[0]
        fn = self.fn
        ensemble = ensemble_from_rule(
            z,
            tilde_rule[1],
            -fn.rho * _log(z) - fn.log_h(z),
            fn.r,
            self.config.prune_margin,
        )
        return _Rules(
            gamma0=nodes_weights(g0, n0),
            gamma0_inner=nodes_weights(circle(_INNER_CIRCLE * g0.radius, n0)),
            tilde=tilde_rule,
            tilde_outer=nodes_weights(outer, nt, gl),
            ensemble=ensemble,
        )

    @cached_property
    def _levels(self) -> tuple[_Rules, _Rules]:
        full, half = self._rules(1), self._rules(2)
        logger.debug(
            f"Pre-limit contours for n={self.spec.n}: {len(full.tilde[0])} nodes on "
            f"Gamma~, {len(full.ensemble.nodes)} kept by the ensemble"
        )
        return full, half

    @property
    def omega_normalization(self) -> complex:
        """Omega(0, 0) = (-1)^(r(r-1)/2) det_r[int w^(i+j) dw / (w^rho h(w))]."""
        r = self.fn.r
        sign = -1.0 if (r * (r - 1) // 2) % 2 else 1.0
        return sign * complex(np.exp(self._levels[0].ensemble.log_moment_det))

    def _terms(self, p: PreLimitKernelParams, rules: _Rules) -> tuple[complex, ...]:
        fn, margin = self.fn, self.config.prune_margin
        x1, l1, x2, l2 = p.x1, p.l1, p.x2, p.l2
        kappa, r, rho = fn.kappa, fn.r, fn.rho
        ens = rules.ensemble

        def side(rule: tuple[ComplexArray, ComplexArray], log_f: ComplexArray) -> WeightedNodes:
            return WeightedNodes.of(rule, log_f, margin)

        def resolvent(u: ComplexArray, v: ComplexArray) -> ComplexArray:
            return ens.ratio(u, v) / (u[:, None] - v[None, :])

        minus_l0 = 0.0j
        if x1 > x2 and l1 >= l2:
            z, w = rules.gamma0
            integrand = np.exp(fn.log_F(z, x1, l1) - kappa * _log(z) - fn.log_G(z, x2, l2))
            minus_l0 -= complex(np.sum(w * integrand))
            if l1 == l2:
                a2 = fn.a**2
                minus_l0 -= (-a2 * fn.t) ** (x1 - x2 - 1) / (1 + 1 / a2)

        u0, ui = rules.gamma0[0], rules.gamma0_inner[0]
        vt, vo = rules.tilde[0], rules.tilde_outer[0]
        u_pole = r * _log(u0) + fn.log_F(u0, x1, l1)

        l12 = bilinear_form(
            side(rules.gamma0, u_pole),
            side(rules.tilde, -rho * _log(vt) - fn.log_G(vt, x2, l2)),
            resolvent,
        ) + bilinear_form(
            side(rules.gamma0, fn.log_h(u0) - fn.log_G(u0, x2, l2)),
            side(rules.tilde, fn.log_F(vt, x1, l1) - kappa * _log(vt) - fn.log_h(vt)),
            resolvent,
        )

        l3 = 0.0j
        if r > 0:
            l3 = -bilinear_form(
                side(rules.tilde, fn.log_F(vt, x1, l1) - kappa * _log(vt) - fn.log_h(vt)),
                side(rules.tilde_outer, -rho * _log(vo) - fn.log_G(vo, x2, l2)),
                ens.plus_ratio,
            )

        l4 = bilinear_form(
            side(rules.gamma0, u_pole),
            side(rules.gamma0_inner, fn.log_h(ui) - fn.log_G(ui, x2, l2)),
            ens.minus_ratio,
        )
        return minus_l0, l12, l3, l4

    def terms(self, p: PreLimitKernelParams) -> KernelValue:
        """L with its terms (-L0', L12', L3', L4') and a node-halving error estimate."""
        if p.spec != self.spec:
            raise DomainError("Point belongs to another domain")
        full_rules, half_rules = self._levels
        full = self._terms(p, full_rules)
        half = self._terms(p, half_rules)
        value = sum(full, 0.0j)
        err = float(sum(abs(f - h) for f, h in zip(full, half, strict=True)))
        logger.debug(f"L({p.x1},{p.l1};{p.x2},{p.l2}) = {value:.10g} (err {err:.1e})")
        if err > self.config.tolerance * max(1.0, abs(value)):
            message = f"Pre-limit error estimate {err:.2e} above tolerance at {p}"
            if self.strict:
                raise QuadratureError(message)
            logger.warning(message)
        return KernelValue(value=value, err_estimate=err, terms=full)

    def __call__(self, p: PreLimitKernelParams) -> complex:
        return self.terms(p).value

    def kred(self, p1: Coord, p2: Coord) -> complex:
        """K^red at two blue centres through the pre-limit kernel."""
        params = PreLimitKernelParams.from_lattice(self.spec, p1, p2)
        return prelimit_to_kred(params) * self(params)


def prelimit_terms(
    params: PreLimitKernelParams,
    config: QuadratureConfig | None = None,
    rcap: int = DEFAULT_RCAP,
) -> KernelValue:
    return PreLimitKernel(params.spec, config, rcap).terms(params)


def prelimit_L(
    params: PreLimitKernelParams,
    config: QuadratureConfig | None = None,
    rcap: int = DEFAULT_RCAP,
) -> complex:
    """The pre-limit kernel L(x1, y1; x2, y2) of ``params.spec``."""
    return prelimit_terms(params, config, rcap).value
