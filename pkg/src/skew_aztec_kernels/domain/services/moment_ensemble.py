"""Stabilized moment determinants of a weight on a contour.

For a weight mu discretized as nodes w_k with complex weights omega_k, the
Andreief identity turns the r-fold integrals

    (1/N!) int prod f(w_a) Delta_N(w)^2 dmu(w_1) ... dmu(w_N)

into N x N determinants of moments det[int w^(i+j) f(w) dmu].  Monomial
moments are hopelessly ill conditioned, so every determinant is evaluated in
a polynomial basis p_k orthonormal for |omega| (a QR factorization of the
weighted Vandermonde matrix) and the change of basis is tracked in log form.

Only ratios against the normalization det_r[int w^(i+j) dmu] are returned:

* ``ratio``: f(w) = (v - w)/(u - w), size r,
* ``plus_ratio``: f(w) = (u - w)(v - w), size r - 1,
* ``minus_ratio``: f(w) = 1/((u - w)(v - w)), size r + 1.

The ``_coincident`` variants give the plus and minus ratios at v = u.
"""

import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from ..exceptions import QuadratureError

logger = logging.getLogger(__name__)

type ComplexArray = NDArray[np.complex128]

NORMALIZATION_FLOOR = 1e-12
_CHUNK = 64


def _log_det(matrix: ComplexArray) -> complex:
    sign, logabs = np.linalg.slogdet(matrix)
    if sign == 0:
        return complex(-np.inf)
    return complex(np.log(sign) + logabs)


def _chunks(count: int) -> Iterator[slice]:
    for start in range(0, count, _CHUNK):
        yield slice(start, min(start + _CHUNK, count))


@dataclass
class MomentEnsemble:
    """Moment determinants of an r-point ensemble on a discretized contour.

    Args:
        nodes: Quadrature nodes w_k
        log_weights: log of (quadrature weight * weight function) at the nodes
        r: Size of the normalizing determinant
        margin: Nodes whose log-magnitude, enlarged by the polynomial growth,
            falls more than ``margin`` below the maximum are dropped
    """

    nodes: ComplexArray
    log_weights: ComplexArray
    r: int
    margin: float = 45.0
    scale: float = field(init=False)
    shift: float = field(init=False)

    def __post_init__(self) -> None:
        if self.r < 0:
            raise QuadratureError(f"Ensemble size must be non-negative, got {self.r}")
        w = np.asarray(self.nodes, dtype=np.complex128)
        logw = np.asarray(self.log_weights, dtype=np.complex128)
        if np.any(np.isnan(logw)) or np.any(logw.real == np.inf):
            raise QuadratureError("Non-finite weight sample")
        growth = logw.real + 2 * (self.r + 1) * np.log1p(np.abs(w))
        keep = growth >= np.max(growth) - self.margin
        self.nodes, logw = w[keep], logw[keep]
        self.shift = float(np.max(logw.real))
        self.omega = np.exp(logw - self.shift)
        mags = np.abs(self.omega)
        self.scale = float(np.sqrt(np.sum(mags * np.abs(self.nodes) ** 2) / np.sum(mags)))
        self.degree = min(self.r + 2, len(self.nodes))
        vander = np.vander(self.nodes / self.scale, self.degree, increasing=True)
        _, R = np.linalg.qr(np.sqrt(mags)[:, None] * vander)
        self.R = R
        self.basis_at_nodes = scipy.linalg.solve_triangular(R.T, vander.T, lower=True).T
        self.log_norm = self._log_monomial_det(self.gram(self.r), self.r)
        logger.debug(
            f"Ensemble r={self.r}: {len(self.nodes)} nodes kept, scale {self.scale:.3g}"
        )
        if self.r and abs(np.exp(_log_det(self.gram(self.r)))) < NORMALIZATION_FLOOR:
            raise QuadratureError(f"Normalization determinant of size {self.r} vanishes")

    def correction(self, k: int) -> complex:
        """-log of det of the basis change on the first k monomials."""
        diag = np.diag(self.R)[:k].astype(np.complex128)
        return complex(-np.sum(np.log(diag)) - k * (k - 1) / 2 * math.log(self.scale))

    def _log_monomial_det(self, gram: ComplexArray, k: int) -> complex:
        if k == 0:
            return 0.0j
        return _log_det(gram) - 2 * self.correction(k) + k * self.shift

    def basis(self, z: ComplexArray, size: int) -> ComplexArray:
        """Values p_0(z) ... p_{size-1}(z), shape (len(z), size)."""
        vander = np.vander(np.asarray(z) / self.scale, self.degree, increasing=True)
        values = scipy.linalg.solve_triangular(self.R.T, vander.T, lower=True).T
        return values[:, :size]

    def basis_derivative(self, z: ComplexArray, size: int) -> ComplexArray:
        """Values p_0'(z) ... p_{size-1}'(z), shape (len(z), size)."""
        x = np.asarray(z, dtype=np.complex128) / self.scale
        dvander = np.zeros((len(x), self.degree), dtype=np.complex128)
        if self.degree > 1:
            powers = np.arange(1, self.degree)
            dvander[:, 1:] = powers * np.vander(x, self.degree - 1, increasing=True)
        values = scipy.linalg.solve_triangular(self.R.T, dvander.T, lower=True).T
        return values[:, :size] / self.scale

    def gram(self, rows: int, cols: int | None = None) -> ComplexArray:
        """[int p_i p_j domega] for i < rows, j < cols."""
        cols = rows if cols is None else cols
        P = self.basis_at_nodes
        return P[:, :rows].T @ (self.omega[:, None] * P[:, :cols])

    def b_matrices(self, u: ComplexArray, size: int, power: int = 1) -> ComplexArray:
        """[int p_i p_j / (u - w)^power domega] for every u, shape (len(u), size, size)."""
        P = self.basis_at_nodes[:, :size]
        kernel = self.omega[None, :] / (np.asarray(u)[:, None] - self.nodes[None, :]) ** power
        return np.einsum("uk,ki,kj->uij", kernel, P, P)

    @property
    def log_moment_det(self) -> complex:
        """log det_r[int w^(i+j) dmu]."""
        return self.log_norm

    def ratio(self, u: ComplexArray, v: ComplexArray) -> ComplexArray:
        """Grid of det_r[int w^(i+j)(v-w)/(u-w) dmu] / det_r[int w^(i+j) dmu]."""
        u, v = np.asarray(u), np.asarray(v)
        if self.r == 0:
            return np.ones((len(u), len(v)), dtype=np.complex128)
        g_inv = np.linalg.inv(self.gram(self.r))
        mu = np.linalg.eigvals(g_inv[None, :, :] @ self.b_matrices(u, self.r))
        shift = v[None, :, None] - u[:, None, None]
        return np.prod(1.0 + shift * mu[:, None, :], axis=-1)

    def plus_ratio(self, u: ComplexArray, v: ComplexArray) -> ComplexArray:
        """Grid of det_{r-1}[int w^(i+j)(u-w)(v-w) dmu] / det_r[int w^(i+j) dmu]."""
        u, v = np.asarray(u), np.asarray(v)
        if self.r == 0:
            return np.zeros((len(u), len(v)), dtype=np.complex128)
        cofactor, log_factor = self._plus_cofactor()
        size = len(cofactor)
        bordered = self.basis(u, size) @ cofactor @ self.basis(v, size).T
        return bordered / (v[None, :] - u[:, None]) * np.exp(log_factor)

    def plus_ratio_coincident(self, u: ComplexArray) -> ComplexArray:
        """plus_ratio at v = u, the v-derivative of the vanishing bordered form."""
        u = np.asarray(u)
        if self.r == 0:
            return np.zeros(len(u), dtype=np.complex128)
        cofactor, log_factor = self._plus_cofactor()
        size = len(cofactor)
        left = self.basis(u, size) @ cofactor
        return np.sum(left * self.basis_derivative(u, size), axis=1) * np.exp(log_factor)

    def _plus_cofactor(self) -> tuple[ComplexArray, complex]:
        """Antisymmetric border of det_{r-1} and its log normalization."""
        size = self.r - 1
        wide = self.gram(size, size + 2)
        cofactor = np.zeros((size + 2, size + 2), dtype=np.complex128)
        for l1, l2 in combinations(range(size + 2), 2):
            cols = [c for c in range(size + 2) if c not in (l1, l2)]
            minor = np.linalg.det(wide[:, cols]) if size else 1.0
            value = (-1) ** (1 + l1 + l2) * minor
            cofactor[l1, l2] = value
            cofactor[l2, l1] = -value
        log_factor = (
            -self.correction(size)
            - self.correction(size + 2)
            + size * self.shift
            - self.log_norm
        )
        return cofactor, log_factor

    def minus_ratio(self, u: ComplexArray, v: ComplexArray) -> ComplexArray:
        """Grid of det_{r+1}[int w^(i+j)/((u-w)(v-w)) dmu] / det_r[int w^(i+j) dmu]."""
        u, v = np.asarray(u), np.asarray(v)
        size = self.r + 1
        bu = self.b_matrices(u, size)
        bv = self.b_matrices(v, size)
        out = np.empty((len(u), len(v)), dtype=np.complex128)
        for rows in _chunks(len(u)):
            diff = bu[rows, None, :, :] - bv[None, :, :, :]
            gap = v[None, :] - u[rows, None]
            out[rows] = np.linalg.det(diff / gap[:, :, None, None])
        log_factor = -2 * self.correction(size) + size * self.shift - self.log_norm
        return out * np.exp(log_factor)

    def minus_ratio_coincident(self, u: ComplexArray) -> ComplexArray:
        """minus_ratio at v = u, with f(w) = 1/(u - w)^2."""
        u = np.asarray(u)
        size = self.r + 1
        out = np.linalg.det(self.b_matrices(u, size, power=2))
        log_factor = -2 * self.correction(size) + size * self.shift - self.log_norm
        return out * np.exp(log_factor)


def ensemble_from_rule(
    nodes: ComplexArray,
    weights: ComplexArray,
    log_density: ComplexArray,
    r: int,
    margin: float = 45.0,
) -> MomentEnsemble:
    """Ensemble from quadrature nodes, weights and the log of the weight function."""
    with np.errstate(divide="ignore"):
        log_weights = np.log(weights.astype(np.complex128)) + log_density
    return MomentEnsemble(nodes, log_weights, r, margin)


type PairKernel = Callable[[ComplexArray, ComplexArray], ComplexArray]

_MAX_LOG_SCALE = 700.0


@dataclass(frozen=True)
class WeightedNodes:
    """Nodes of one integration variable with weight times integrand, pruned.

    ``values`` are scaled by exp(-log_scale) so that the largest has modulus 1.
    """

    nodes: ComplexArray
    values: ComplexArray
    log_scale: float

    @classmethod
    def of(
        cls,
        rule: tuple[ComplexArray, ComplexArray],
        log_f: ComplexArray,
        margin: float = 45.0,
    ) -> "WeightedNodes":
        nodes, weights = rule
        with np.errstate(divide="ignore"):
            logs = np.log(weights.astype(np.complex128)) + log_f
        if np.any(np.isnan(logs)) or np.any(logs.real == np.inf):
            raise QuadratureError("Non-finite integrand sample")
        top = float(np.max(logs.real))
        keep = logs.real >= top - margin
        return cls(nodes[keep], np.exp(logs[keep] - top), top)


def bilinear_form(left: WeightedNodes, right: WeightedNodes, kernel: PairKernel) -> complex:
    """sum_jk left_j kernel(u_j, v_k) right_k, evaluated in row chunks."""
    scale = left.log_scale + right.log_scale
    if scale > _MAX_LOG_SCALE:
        raise QuadratureError(f"Double integral overflows (log scale {scale:.1f})")
    total = 0.0j
    for rows in _chunks(len(left.nodes)):
        grid = kernel(left.nodes[rows], right.nodes)
        total += complex(left.values[rows] @ grid @ right.values)
    value = total * math.exp(scale)
    if not np.isfinite(value):
        raise QuadratureError("Non-finite double integral")
    return value
