"""The discrete tacnode kernel and its comparison with the finite-n kernels.

    L^dTac(tau1, y1; tau2, y2) = -H^(tau1 - tau2)(y1 - y2) + T2 + T3 + T4 + T5

where T2, T3 pair u on a small circle Gamma_0 with v on the upgoing line L,
T4 pairs two copies of L and T5 two circles about 0.  The Theta functions are
r-fold integrals over L against e^(w^2 - 2 beta w) w^-rho dw/(2 pi i) and are
evaluated as moment determinants.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict

from ..exceptions import DomainError, QuadratureError, UnsupportedRegimeError
from ..models import DomainSpec, KernelValue, TacnodeParams, TacnodePoint, XiEta
from .moment_ensemble import MomentEnsemble, WeightedNodes, bilinear_form, ensemble_from_rule
from .prelimit_kernel import PreLimitKernel, PreLimitKernelParams
from .quadrature import (
    QuadratureConfig,
    circle,
    line_truncation,
    nodes_weights,
    vertical_line,
)

logger = logging.getLogger(__name__)

type ComplexArray = NDArray[np.complex128]

DEFAULT_THETA_RCAP = 16
NORMALIZATION_FLOOR = 1e-12
ON_LINE_TOL = 1e-9

# T4 needs two distinct copies of L, T5 two distinct circles
_LINE_OFFSET = 0.2
_INNER_CIRCLE = 0.7


def heaviside(m: int, z: float) -> float:
    """H^m(z) = z^(m-1)/(m-1)! for z >= 0 and m >= 1, else 0."""
    if m < 1 or z < 0:
        return 0.0
    return z ** (m - 1) / math.factorial(m - 1)


def _log(z: ComplexArray) -> ComplexArray:
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(z, dtype=np.complex128))


@dataclass(frozen=True)
class _Rules:
    gamma0: tuple[ComplexArray, ComplexArray]
    gamma0_inner: tuple[ComplexArray, ComplexArray]
    line: tuple[ComplexArray, ComplexArray]
    line_shifted: tuple[ComplexArray, ComplexArray]
    ensemble: MomentEnsemble


class TacnodeKernel:
    """Evaluator of L^dTac for fixed (r, rho, beta).

    Args:
        params: Geometric parameters and weight scaling
        config: Quadrature configuration
        y_max: Largest |y| the kernel will be evaluated at; widens the line
        theta_rcap: Largest supported r
    """

    def __init__(
        self,
        params: TacnodeParams,
        config: QuadratureConfig | None = None,
        y_max: float = 0.0,
        theta_rcap: int = DEFAULT_THETA_RCAP,
    ) -> None:
        if params.r > theta_rcap:
            raise UnsupportedRegimeError(
                f"r = {params.r} exceeds the Theta determinant cap {theta_rcap}"
            )
        self.params = params
        self.config = config or QuadratureConfig()
        self.y_max = y_max
        self.half_height = line_truncation(self.config, params.beta, params.r + 2, y_max)

    def _rules(self, divisor: int) -> _Rules:
        cfg, p = self.config, self.params
        line = vertical_line(cfg.line_abscissa, self.half_height, cfg)
        nl = max(line.nodes // divisor, 2 * cfg.gl_order)
        n0 = max(cfg.circle_nodes // divisor, 16)
        line_rule = nodes_weights(line, nl, cfg.gl_order)
        w = line_rule[0]
        ensemble = ensemble_from_rule(
            w, line_rule[1], w**2 - 2 * p.beta * w - p.rho * _log(w), p.r, cfg.prune_margin
        )
        return _Rules(
            gamma0=nodes_weights(circle(cfg.gamma0_radius, n0)),
            gamma0_inner=nodes_weights(circle(_INNER_CIRCLE * cfg.gamma0_radius, n0)),
            line=line_rule,
            line_shifted=nodes_weights(line.shifted(_LINE_OFFSET), nl, cfg.gl_order),
            ensemble=ensemble,
        )

    @cached_property
    def _levels(self) -> tuple[_Rules, _Rules]:
        full, half = self._rules(1), self._rules(2)
        norm = full.ensemble.log_moment_det.real
        if norm < math.log(NORMALIZATION_FLOOR):
            raise QuadratureError(
                f"Theta_{self.params.r}(0,0) = {math.exp(norm):.2e} is below the floor"
            )
        logger.debug(
            f"Tacnode contours for {self.params}: line |Im w| <= {self.half_height:.2f}, "
            f"{len(full.line[0])} line nodes"
        )
        return full, half

    @property
    def theta_normalization(self) -> complex:
        """Theta_r(0, 0)."""
        return complex(np.exp(self._levels[0].ensemble.log_moment_det))

    def _check_off_line(self, *points: complex) -> None:
        a = self.config.line_abscissa
        for z in points:
            if abs(z.real - a) < ON_LINE_TOL and abs(z.imag) <= self.half_height:
                raise QuadratureError(f"Point {z} lies on the integration line")

    def theta(self, u: complex, v: complex) -> complex:
        """Theta_r(u, v) for u off the line."""
        self._check_off_line(u)
        ens = self._levels[0].ensemble
        ratio = ens.ratio(np.array([u]), np.array([v]))[0, 0]
        return complex(ratio) * self.theta_normalization

    def theta_pm(self, sign: int, u: complex, v: complex) -> complex:
        """Theta^+_{r-1}(u, v) for sign = +1, Theta^-_{r+1}(u, v) for sign = -1."""
        ens = self._levels[0].ensemble
        uu, vv = np.array([u]), np.array([v])
        if sign > 0:
            if u == v:
                ratio = ens.plus_ratio_coincident(uu)[0]
            else:
                ratio = ens.plus_ratio(uu, vv)[0, 0]
        else:
            self._check_off_line(u, v)
            if u == v:
                ratio = ens.minus_ratio_coincident(uu)[0]
            else:
                ratio = ens.minus_ratio(uu, vv)[0, 0]
        return complex(ratio) * self.theta_normalization

    def _terms(self, p1: TacnodePoint, p2: TacnodePoint, rules: _Rules) -> tuple[complex, ...]:
        prm, margin = self.params, self.config.prune_margin
        rho, beta = prm.rho, prm.beta
        t1, y1, t2, y2 = p1.tau, p1.y, p2.tau, p2.y
        ens = rules.ensemble

        def side(rule: tuple[ComplexArray, ComplexArray], log_f: ComplexArray) -> WeightedNodes:
            return WeightedNodes.of(rule, log_f, margin)

        def resolvent(u: ComplexArray, v: ComplexArray) -> ComplexArray:
            return ens.ratio(u, v) / (v[None, :] - u[:, None])

        u, ui = rules.gamma0[0], rules.gamma0_inner[0]
        v, vs = rules.line[0], rules.line_shifted[0]

        t_heaviside = -heaviside(t1 - t2, y1 - y2) + 0.0j
        u_first = (rho - t1) * _log(u) - u**2 / 2 + (beta + y1) * u
        t_second = bilinear_form(
            side(rules.gamma0, u_first),
            side(rules.line, -(rho - t2) * _log(v) + v**2 / 2 - (beta + y2) * v),
            resolvent,
        )
        t_third = bilinear_form(
            side(rules.gamma0, t2 * _log(u) - u**2 / 2 + (beta - y2) * u),
            side(rules.line, -t1 * _log(v) + v**2 / 2 - (beta - y1) * v),
            resolvent,
        )
        t_fourth = 0.0j
        if prm.r > 0:
            t_fourth = bilinear_form(
                side(rules.line_shifted, -t1 * _log(vs) + vs**2 / 2 - (beta - y1) * vs),
                side(rules.line, -(rho - t2) * _log(v) + v**2 / 2 - (beta + y2) * v),
                ens.plus_ratio,
            )
        t_fifth = -bilinear_form(
            side(rules.gamma0, u_first),
            side(rules.gamma0_inner, t2 * _log(ui) - ui**2 / 2 + (beta - y2) * ui),
            ens.minus_ratio,
        )
        return t_heaviside, t_second, t_third, t_fourth, t_fifth

    def terms(self, p1: TacnodePoint, p2: TacnodePoint) -> KernelValue:
        """L^dTac with its five terms and a node-halving error estimate."""
        full_rules, half_rules = self._levels
        full = self._terms(p1, p2, full_rules)
        half = self._terms(p1, p2, half_rules)
        value = sum(full, 0.0j)
        err = float(sum(abs(f - h) for f, h in zip(full, half, strict=True)))
        logger.debug(f"L^dTac({p1.tau},{p1.y};{p2.tau},{p2.y}) = {value:.10g} (err {err:.1e})")
        if err > self.config.tolerance * max(1.0, abs(value)):
            logger.warning(f"Tacnode error estimate {err:.2e} above tolerance")
        return KernelValue(value=value, err_estimate=err, terms=full)

    def __call__(self, p1: TacnodePoint, p2: TacnodePoint) -> complex:
        return self.terms(p1, p2).value


def theta(
    params: TacnodeParams, u: complex, v: complex, config: QuadratureConfig | None = None
) -> complex:
    return TacnodeKernel(params, config).theta(u, v)


def theta_pm(
    params: TacnodeParams,
    sign: int,
    u: complex,
    v: complex,
    config: QuadratureConfig | None = None,
) -> complex:
    return TacnodeKernel(params, config).theta_pm(sign, u, v)


def dtac_terms(
    params: TacnodeParams,
    p1: TacnodePoint,
    p2: TacnodePoint,
    config: QuadratureConfig | None = None,
) -> KernelValue:
    y_max = max(abs(p1.y), abs(p2.y))
    return TacnodeKernel(params, config, y_max=y_max).terms(p1, p2)


def dtac(
    params: TacnodeParams,
    p1: TacnodePoint,
    p2: TacnodePoint,
    config: QuadratureConfig | None = None,
) -> complex:
    """The discrete tacnode kernel L^dTac_{r,rho,beta}(tau1, y1; tau2, y2)."""
    return dtac_terms(params, p1, p2, config).value


def mirrored(params: TacnodeParams, p: TacnodePoint) -> TacnodePoint:
    """(tau, y) -> (rho - tau, -y)."""
    return TacnodePoint(tau=params.rho - p.tau, y=-p.y)


class SymmetryReport(BaseModel):
    """L(p1; p2) against L(p2'; p1') under (tau, y) -> (rho - tau, -y)."""

    model_config = ConfigDict(frozen=True)

    params: TacnodeParams
    p1: TacnodePoint
    p2: TacnodePoint
    value: complex
    mirrored_value: complex
    err_estimate: float

    @property
    def residual(self) -> float:
        return abs(self.value - self.mirrored_value)


def symmetry_report(
    params: TacnodeParams,
    p1: TacnodePoint,
    p2: TacnodePoint,
    config: QuadratureConfig | None = None,
) -> SymmetryReport:
    """Measure the transposition symmetry; the residual is reported, never asserted."""
    q1, q2 = mirrored(params, p2), mirrored(params, p1)
    y_max = max(abs(p1.y), abs(p2.y))
    kernel = TacnodeKernel(params, config, y_max=y_max)
    direct = kernel.terms(p1, p2)
    swapped = kernel.terms(q1, q2)
    report = SymmetryReport(
        params=params,
        p1=p1,
        p2=p2,
        value=direct.value,
        mirrored_value=swapped.value,
        err_estimate=direct.err_estimate + swapped.err_estimate,
    )
    logger.info(f"Symmetry residual for {params}: {report.residual:.3e}")
    return report


class ConvergenceRow(BaseModel):
    """Pre-limit and limit kernels at one n."""

    model_config = ConfigDict(frozen=True)

    n: int
    prelimit: complex
    limit: complex
    err_estimate: float

    @property
    def discrepancy(self) -> float:
        return abs(self.prelimit - self.limit)


def reference_spec(params: TacnodeParams, n: int) -> DomainSpec:
    """Case 1 domain with M = n - r + 1, m = rho + M - 1 and a = 1 + beta/sqrt(n)."""
    if params.rho < params.r:
        raise UnsupportedRegimeError(
            f"Case 1 with delta <= 0 needs rho >= r, got rho={params.rho}, r={params.r}"
        )
    M = n - params.r + 1
    if M < 1:
        raise DomainError(f"n = {n} is too small for r = {params.r}")
    return DomainSpec(n=n, m=params.rho + M - 1, M=M, a=1.0 + params.beta / math.sqrt(n))


def convergence_table(
    params: TacnodeParams,
    p1: TacnodePoint,
    p2: TacnodePoint,
    ns: list[int],
    config: QuadratureConfig | None = None,
    rcap: int = 6,
) -> list[ConvergenceRow]:
    """|L_n(tau - kappa, y/sqrt(2)) - L^dTac(tau, y)| for every n.

    The pre-limit points must sit on the lattice of each n, so y sqrt(n) must
    be an integer of the parity of n.
    """
    kappa = params.rho - params.r
    limit = dtac_terms(params, p1, p2, config)
    rows = []
    for n in ns:
        spec = reference_spec(params, n)
        point = PreLimitKernelParams(
            spec=spec,
            x1=p1.tau - kappa,
            y1=p1.y / math.sqrt(2.0),
            x2=p2.tau - kappa,
            y2=p2.y / math.sqrt(2.0),
        )
        pre = PreLimitKernel(spec, config, rcap).terms(point)
        rows.append(
            ConvergenceRow(
                n=n,
                prelimit=pre.value,
                limit=limit.value,
                err_estimate=pre.err_estimate + limit.err_estimate,
            )
        )
        logger.info(f"n={n}: discrepancy {rows[-1].discrepancy:.3e}")
    return rows


def lattice_point(spec: DomainSpec, p: TacnodePoint) -> XiEta:
    """Blue centre nearest to (xi, eta) = (2m - 2 tau, n - 1 + y sqrt(n))."""
    eta = spec.n - 1 + p.y * math.sqrt(spec.n)
    odd = 2 * math.floor(eta / 2) + 1
    return XiEta(2 * spec.m - 2 * p.tau, odd)


def tacnode_scaling(spec: DomainSpec, q1: XiEta, q2: XiEta) -> float:
    """Factor f with f * K^red(q1; q2) -> L^dTac(tau1, y1; tau2, y2).

    f = 2 (-a)^((eta1 - eta2)/2) / (1 + a^2) * (a/sqrt(n))^((xi2 - xi1)/2) * sqrt(n)/2,
    the last factor turning the lattice step into the density in y.
    """
    a, root = spec.a, math.sqrt(spec.n)
    half_eta = (q1.eta - q2.eta) // 2
    sign = -1.0 if half_eta % 2 else 1.0
    return (
        2.0
        * sign
        * a**half_eta
        / (1 + a**2)
        * (a / root) ** ((q2.xi - q1.xi) // 2)
        * root
        / 2.0
    )
