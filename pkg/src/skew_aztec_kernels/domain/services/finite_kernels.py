"""Finite-n kernels from the path transition symbols.

The green paths step between consecutive rows with the symbols (1 + a z) and
(1 - a/z)^-1, so the transition from row s1 to row s2 is

    phi_{s1,s2}(z) = (1 + a z)^p / (1 - a/z)^q,
    p = floor(s2/2) - floor(s1/2),  q = ceil(s2/2) - ceil(s1/2).

Its Fourier coefficients are finite binomial convolutions.  The module also
holds the Toeplitz determinant machinery used to cross-check the
Borodin-Okounkov and blow-up identities on small cases.
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np
import scipy.linalg
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, model_validator

from ..exceptions import DomainError, QuadratureError
from ..models import DomainSpec
from .quadrature import default_ladder

logger = logging.getLogger(__name__)

type ComplexArray = NDArray[np.complex128]
type Symbol = Callable[[ComplexArray], ComplexArray]

DEFAULT_FFT_NODES = 2048


class SymbolParams(BaseModel):
    """Rows s1 <= s2 of a transition symbol on the domain ``spec``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    spec: DomainSpec
    s1: int
    s2: int

    @model_validator(mode="after")
    def check_rows(self) -> "SymbolParams":
        last = 2 * self.spec.n + 1
        if not 0 <= self.s1 <= last or not 0 <= self.s2 <= last:
            raise DomainError(f"Rows must lie in [0, {last}], got {self.s1}, {self.s2}")
        if self.s1 > self.s2:
            raise DomainError(f"Transition needs s1 <= s2, got {self.s1} > {self.s2}")
        return self

    @property
    def exponents(self) -> tuple[int, int]:
        """(p, q) of (1 + a z)^p (1 - a/z)^-q."""
        p = self.s2 // 2 - self.s1 // 2
        q = (self.s2 - self.s2 // 2) - (self.s1 - self.s1 // 2)
        return p, q


def phi(sp: SymbolParams, z: complex | ComplexArray) -> complex | ComplexArray:
    """Transition symbol phi_{s1,s2}(z) for |z| > a."""
    p, q = sp.exponents
    a = sp.spec.a
    return (1 + a * z) ** p / (1 - a / z) ** q


def _phi_hat(a: float, p: int, q: int, d: int) -> float:
    """Coefficient of z^d in (1 + a z)^p (1 - a/z)^-q."""
    if q == 0:
        return math.comb(p, d) * a**d if 0 <= d <= p else 0.0
    total = 0.0
    for k in range(max(0, d), p + 1):
        j = k - d
        total += math.comb(p, k) * math.comb(q + j - 1, j) * a ** (k + j)
    return total


def phi_hat(sp: SymbolParams, u1: int, u2: int) -> float:
    """Fourier coefficient phi^_{s1,s2}(u1, u2), the coefficient of z^(u2-u1).

    Vanishes unless u2 - u1 <= p; equals the Kronecker delta when s1 = s2.
    """
    p, q = sp.exponents
    return _phi_hat(sp.spec.a, p, q, u2 - u1)


@dataclass(frozen=True)
class GreenKernel:
    """LGV kernel of the M green paths from (0, 1-i) to (2n+1, 1-j+delta)."""

    spec: DomainSpec

    def _hat(self, s1: int, s2: int, u1: int, u2: int) -> float:
        return phi_hat(SymbolParams(spec=self.spec, s1=s1, s2=s2), u1, u2)

    @cached_property
    def endpoint_matrix(self) -> NDArray[np.float64]:
        """A_ij = phi^_{0,2n+1}(0, i - j + delta), i, j = 1..M."""
        last = 2 * self.spec.n + 1
        M = self.spec.M
        return np.array(
            [
                [self._hat(0, last, 0, i - j + self.spec.delta) for j in range(1, M + 1)]
                for i in range(1, M + 1)
            ]
        )

    @cached_property
    def endpoint_inverse(self) -> NDArray[np.float64]:
        A = self.endpoint_matrix
        lu, piv = scipy.linalg.lu_factor(A)
        pivots = np.abs(np.diag(lu))
        if float(np.min(pivots)) <= 1e-14 * max(float(np.max(pivots)), 1.0):
            raise DomainError(f"Endpoint matrix of {self.spec} is singular")
        return scipy.linalg.lu_solve((lu, piv), np.eye(len(A)))

    def __call__(self, s1: int, u1: int, s2: int, u2: int) -> float:
        """K^green(s1, u1; s2, u2) for interior rows 0 < s1, s2 < 2n+1."""
        last = 2 * self.spec.n + 1
        if not (0 < s1 < last and 0 < s2 < last):
            raise DomainError(f"Rows must be interior, got s1={s1}, s2={s2}")
        M, delta = self.spec.M, self.spec.delta
        left = np.array([self._hat(s1, last, u1, 1 - i + delta) for i in range(1, M + 1)])
        right = np.array([self._hat(0, s2, 1 - j, u2) for j in range(1, M + 1)])
        value = float(left @ self.endpoint_inverse @ right)
        if s1 < s2:
            value -= self._hat(s1, s2, u1, u2)
        return value

    def matrix(self, s: int, us: list[int]) -> NDArray[np.float64]:
        """[K^green(s, u_i; s, u_j)] on one row."""
        return np.array([[self(s, ui, s, uj) for uj in us] for ui in us])


def kgreen(spec: DomainSpec, s1: int, u1: int, s2: int, u2: int) -> float:
    """Green-path kernel by the LGV formula."""
    return GreenKernel(spec)(s1, u1, s2, u2)


@dataclass(frozen=True)
class LaurentCoefficients:
    """Laurent coefficients f^_k for k in [-half, half]."""

    values: ComplexArray
    half: int

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.half:
            return 0.0j
        return complex(self.values[k + self.half])

    def shifted(self, k: int) -> "LaurentCoefficients":
        """Coefficients of z^k f(z)."""
        out = np.zeros_like(self.values)
        for j in range(-self.half, self.half + 1):
            out[j + self.half] = self[j - k]
        return LaurentCoefficients(out, self.half)


def fourier_coefficients(
    f: Symbol, radius: float = 1.0, half: int = 64, nodes: int = DEFAULT_FFT_NODES
) -> LaurentCoefficients:
    """f^_k = (1/2 pi i) int f(z) z^(-k-1) dz on the circle |z| = radius, by FFT."""
    if nodes < 2 * half + 1:
        raise QuadratureError(f"{nodes} FFT nodes cannot resolve {2 * half + 1} coefficients")
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    samples = np.asarray(f(radius * np.exp(1j * theta)), dtype=np.complex128)
    if not np.all(np.isfinite(samples)):
        raise QuadratureError("Non-finite symbol sample on the FFT circle")
    spectrum = np.fft.fft(samples) / nodes
    ks = np.arange(-half, half + 1)
    return LaurentCoefficients(spectrum[ks % nodes] * radius ** (-ks.astype(float)), half)


def toeplitz_det(
    f: Symbol | LaurentCoefficients, p: int, radius: float = 1.0
) -> complex:
    """D_p(f) = det[f^_{i-j}], i, j = 1..p; D_0 = 1."""
    if p < 0:
        raise DomainError(f"Toeplitz size must be non-negative, got {p}")
    if p == 0:
        return 1.0 + 0.0j
    coeffs = f if isinstance(f, LaurentCoefficients) else fourier_coefficients(
        f, radius, half=max(64, 2 * p)
    )
    matrix = np.array([[coeffs[i - j] for j in range(p)] for i in range(p)])
    return complex(np.linalg.det(matrix))


def end_symbol(spec: DomainSpec) -> Symbol:
    """phi_{0,2n+1}(z) = (1 + a z)^n / (1 - a/z)^(n+1)."""
    n, a = spec.n, spec.a
    return lambda z: (1 + a * z) ** n / (1 - a / z) ** (n + 1)


def weight_rho(spec: DomainSpec) -> Symbol:
    """rho(u) = (1 + a u)^n (1 - a/u)^(n+1)."""
    n, a = spec.n, spec.a
    return lambda u: (1 + a * u) ** n * (1 - a / u) ** (n + 1)


def partition_constant(spec: DomainSpec) -> float:
    """g_a = (1 + a^2)^(n(n+1))."""
    return (1 + spec.a**2) ** (spec.n * (spec.n + 1))


def _bo_block(
    c: LaurentCoefficients, d: LaurentCoefficients, lo: int, hi: int
) -> ComplexArray:
    """K_{k,l} = sum_{m>=0} d_{k+m+1} c_{-l-m-1} on k, l in [lo, hi]."""
    size = max(0, hi - lo + 1)
    out = np.zeros((size, size), dtype=np.complex128)
    for a_idx, k in enumerate(range(lo, hi + 1)):
        for b_idx, l in enumerate(range(lo, hi + 1)):
            out[a_idx, b_idx] = sum(
                (d[k + m + 1] * c[-l - m - 1] for m in range(0, hi - l + 1)), 0.0j
            )
    return out


def fredholm_det_bo(spec: DomainSpec, p: int, rho: Symbol | None = None, radius: float = 1.0) -> complex:
    """det(I - K_BO)_{>= p}; the kernel vanishes beyond index n."""
    rho = rho or weight_rho(spec)
    half = 4 * spec.n + 64
    c = fourier_coefficients(rho, radius, half)
    d = fourier_coefficients(lambda u: 1.0 / rho(u), radius, half)
    block = _bo_block(c, d, p, spec.n)
    if len(block) == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(np.eye(len(block)) - block))


def bo_check(spec: DomainSpec, p: int) -> float:
    """|D_p[phi_{0,2n+1}] - g_a det(I - K_BO)_{>= p}|."""
    lhs = toeplitz_det(end_symbol(spec), p)
    rhs = partition_constant(spec) * fredholm_det_bo(spec, p)
    residual = abs(lhs - rhs)
    logger.debug(f"BO check n={spec.n} p={p}: |{lhs:.6g} - {rhs:.6g}| = {residual:.2e}")
    return residual


def _elementary_symmetric(xs: tuple[complex, ...]) -> list[complex]:
    e = [1.0 + 0.0j]
    for x in xs:
        e = [*(e[k] + (x * e[k - 1] if k else 0) for k in range(len(e))), x * e[-1]]
    return e


def blowup_check(spec: DomainSpec, kappa: int, p: int, sign: int = 1) -> float:
    """|LHS - RHS| of the blow-up identity for D_p[z^(+-kappa) f], f = phi_{0,2n+1}.

    The lambda integrals are exact by the trapezoid rule on 2p + 2 nodes since
    the integrand is a Laurent polynomial in each lambda_j.
    """
    if sign not in (1, -1) or kappa < 0:
        raise DomainError(f"Need sign = +-1 and kappa >= 0, got {sign}, {kappa}")
    coeffs = fourier_coefficients(end_symbol(spec), 1.0, half=4 * spec.n + 8 + p + kappa)
    lhs = toeplitz_det(coeffs.shifted(sign * kappa), p)
    nodes = 2 * p + 2
    circle = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    total = 0.0j
    for lam in product(circle, repeat=kappa):
        e = _elementary_symmetric(tuple(1.0 / x for x in lam))
        matrix = np.array(
            [
                [
                    sum((-1) ** k * e[k] * coeffs[i - j - sign * k] for k in range(kappa + 1))
                    for j in range(p)
                ]
                for i in range(p)
            ]
        )
        total += np.prod(np.array(lam) ** p) * np.linalg.det(matrix) / nodes**kappa
    rhs = (-1) ** (kappa * p) * total
    return abs(lhs - rhs)


@dataclass(frozen=True)
class DphiResult:
    """Both sides of D_M[psi_{0,2n+1}] = (-1)^(kappa M) L~(1)."""

    toeplitz: complex
    contour: complex

    @property
    def residual(self) -> float:
        return abs(self.toeplitz - self.contour)


def dphi_check(spec: DomainSpec, lambda_nodes: int = 64) -> DphiResult:
    """Compare D_M[z^kappa phi_{0,2n+1}] with the lambda-integrated Fredholm side.

    L~(1) = int g_a prod (lambda_j - a)^(n+1) / lambda_j^(r+1)
            det(I - K^(lambda))_{>= M} dlambda_j / (2 pi i),
    where K^(lambda) is the BO kernel of rho(u) prod (1 - u/lambda_j) with
    the 1/rho_lambda coefficients taken on |u| = sigma_2 < |lambda| = R.
    """
    if spec.delta > 0:
        raise DomainError(f"Blow-up identity needs delta <= 0, got {spec.delta}")
    kappa, M, n, a = spec.kappa, spec.M, spec.n, spec.a
    r = n - M + 1
    ladder = default_ladder(a)
    coeffs = fourier_coefficients(end_symbol(spec), 1.0, half=4 * n + 8 + M + kappa)
    toeplitz = toeplitz_det(coeffs.shifted(kappa), M)
    rho = weight_rho(spec)
    g = partition_constant(spec)
    circle = ladder.R * np.exp(2j * np.pi * np.arange(lambda_nodes) / lambda_nodes)
    total = 0.0j
    for lam in product(circle, repeat=kappa):
        lam_arr = np.array(lam)

        def rho_lam(u: ComplexArray, lam_arr: ComplexArray = lam_arr) -> ComplexArray:
            return rho(u) * np.prod([1 - u / x for x in lam_arr], axis=0)

        half = 4 * n + 64
        c = fourier_coefficients(rho_lam, ladder.sigma2, half)
        d = fourier_coefficients(lambda u, f=rho_lam: 1.0 / f(u), ladder.sigma2, half)
        block = _bo_block(c, d, M, n)
        fred = np.linalg.det(np.eye(len(block)) - block) if len(block) else 1.0
        # dlambda/(2 pi i) on the circle is lambda dtheta/(2 pi)
        measure = np.prod((lam_arr - a) ** (n + 1) / lam_arr ** (r + 1) * lam_arr)
        total += g * measure * fred / lambda_nodes**kappa
    contour = (-1) ** (kappa * M) * total
    logger.info(f"D_phi check n={n} kappa={kappa} M={M}: residual {abs(toeplitz - contour):.2e}")
    return DphiResult(toeplitz=toeplitz, contour=complex(contour))

