"""Verification use cases: finite-n identities and determinantal correlations."""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..domain.exceptions import DomainError
from ..domain.models import DomainSpec, Domino, XiEta
from ..domain.services import kasteleyn
from ..domain.services.finite_kernels import (
    GreenKernel,
    blowup_check,
    bo_check,
    dphi_check,
)
from ..domain.services.geometry import cell_graph
from ..domain.services.oracle import TilingOracle
from ..infrastructure.config import KernelConfig

logger = logging.getLogger(__name__)

IdentitySuite = Literal["duality", "bo", "blowup", "dphi", "all"]

DUALITY_TOLERANCE = 1e-8
IDENTITY_TOLERANCE = 1e-6
CORRELATION_TOLERANCE = 1e-8


class CheckOutcome(BaseModel):
    """One named residual against its tolerance."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    residual: float
    tolerance: float
    passed: bool
    samples: int = 1

    @classmethod
    def of(cls, name: str, residual: float, tolerance: float, samples: int = 1) -> "CheckOutcome":
        passed = bool(np.isfinite(residual)) and residual <= tolerance
        return cls(
            name=name, residual=residual, tolerance=tolerance, passed=passed, samples=samples
        )


class VerificationResult(BaseModel):
    """Outcome of a verification suite."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    suite: str
    spec: DomainSpec
    checks: list[CheckOutcome]
    skipped: list[str] = []

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)


@dataclass
class IdentityVerificationRequest:
    """Request for the finite-n identity suites."""

    spec: DomainSpec
    suite: IdentitySuite = "all"
    p: int | None = None
    kappas: tuple[int, ...] = (1, 2)
    level: int | None = None


class IdentityVerificationUseCase:
    """Duality of the green and blue kernels and the Toeplitz identities."""

    def __init__(self, config: KernelConfig | None = None):
        """Initialize the identity verification use case.

        Args:
            config: Kernel configuration
        """
        self.config = config or KernelConfig()

    def execute(self, request: IdentityVerificationRequest) -> VerificationResult:
        """Run the requested suite.

        Args:
            request: Identity verification request

        Returns:
            VerificationResult with one outcome per identity evaluated

        Raises:
            DomainError: If a single symbol suite is requested at a = 1, where
                the end symbol has its pole on the unit circle
        """
        spec = request.spec
        wanted = (
            ["duality", "bo", "blowup", "dphi"] if request.suite == "all" else [request.suite]
        )
        checks: list[CheckOutcome] = []
        skipped: list[str] = []
        for suite in wanted:
            reason = self._skip_reason(spec, suite)
            if reason:
                if request.suite != "all":
                    raise DomainError(reason)
                logger.warning(f"Skipping {suite}: {reason}")
                skipped.append(suite)
                continue
            checks.extend(getattr(self, f"_{suite}")(request))
        result = VerificationResult(
            suite=request.suite, spec=spec, checks=checks, skipped=skipped
        )
        logger.info(
            f"Identity suite {request.suite} on {spec}: "
            f"{'passed' if result.passed else 'FAILED'}, max residual {result.max_residual:.3e}"
        )
        return result

    def _skip_reason(self, spec: DomainSpec, suite: str) -> str | None:
        if suite in ("bo", "blowup", "dphi") and spec.a >= 1.0:
            return "the end symbol has a pole on the unit circle at a = 1; use a < 1"
        if suite == "dphi" and (spec.delta > 0 or spec.kappa > 2):
            return f"the D_phi identity needs delta <= 0 and kappa <= 2, got delta={spec.delta}"
        return None

    def _duality(self, request: IdentityVerificationRequest) -> list[CheckOutcome]:
        """Entrywise residual of 1_{u1=u2} - K^green - K^blue on one row.

        K^green comes from the LGV formula and K^blue from Kinv, in the same
        gauge, so no conjugation is allowed between them.
        """
        spec = request.spec
        s = request.level if request.level is not None else spec.n
        sys = kasteleyn.build(spec)
        cells, blue = kasteleyn.blue_kernel_equal_level(sys, s)
        us = [c.u for c in cells]
        green = GreenKernel(spec).matrix(s, us)
        size = len(us)
        residual = float(np.max(np.abs(np.eye(size) - green - blue))) if size else 0.0
        logger.debug(f"Duality on row {s}: max entry residual {residual:.2e}")
        return [
            CheckOutcome.of(f"duality_row_{s}", residual, DUALITY_TOLERANCE, size * size)
        ]

    def _bo(self, request: IdentityVerificationRequest) -> list[CheckOutcome]:
        p = request.p or request.spec.M
        return [CheckOutcome.of(f"borodin_okounkov_p{p}", bo_check(request.spec, p), IDENTITY_TOLERANCE)]

    def _blowup(self, request: IdentityVerificationRequest) -> list[CheckOutcome]:
        p = request.p or request.spec.M
        out = []
        for kappa in request.kappas:
            for sign in (1, -1):
                residual = blowup_check(request.spec, kappa, p, sign)
                label = "+" if sign > 0 else "-"
                out.append(
                    CheckOutcome.of(f"blowup_kappa{label}{kappa}_p{p}", residual, IDENTITY_TOLERANCE)
                )
        return out

    def _dphi(self, request: IdentityVerificationRequest) -> list[CheckOutcome]:
        result = dphi_check(request.spec)
        return [CheckOutcome.of("d_phi", result.residual, IDENTITY_TOLERANCE)]


@dataclass
class CorrelationVerificationRequest:
    """Request for the determinantal correlation check against the oracle."""

    spec: DomainSpec
    pairs: int = 20
    seed: int = 0


class CorrelationVerificationUseCase:
    """Kenyon and red-kernel probabilities against exhaustive enumeration."""

    def __init__(self, config: KernelConfig | None = None):
        """Initialize the correlation verification use case.

        Args:
            config: Kernel configuration; its enumeration cap bounds the oracle
        """
        self.config = config or KernelConfig()

    def execute(self, request: CorrelationVerificationRequest) -> VerificationResult:
        """Compare every singleton and ``pairs`` random pairs.

        Args:
            request: Correlation verification request

        Returns:
            VerificationResult with domino and red-dot outcomes

        Raises:
            EnumerationCapError: If the domain exceeds the oracle cell cap
            DomainError: If the domain has no tiling
        """
        spec = request.spec
        oracle = TilingOracle(spec, self.config.enumeration.cell_cap)
        sys = kasteleyn.build(spec)
        graph = cell_graph(spec)
        dominoes = [
            Domino(b.to_xi_eta(), orientation)
            for b in graph.blues
            for orientation, _ in graph.edges(b)
        ]
        sites = [b.to_xi_eta() for b in graph.blues]
        rng = np.random.default_rng(request.seed)

        def domino_residual(group: list[Domino]) -> float:
            return abs(kasteleyn.kenyon_probability(sys, group) - float(oracle.correlation(group)))

        def red_residual(group: list[XiEta]) -> float:
            exact = float(oracle.red_gap_probability(group))
            return abs(kasteleyn.red_gap_probability(sys, group) - exact)

        domino_pairs = self._random_pairs(rng, len(dominoes), request.pairs)
        site_pairs = self._random_pairs(rng, len(sites), request.pairs)
        checks = [
            CheckOutcome.of(
                "kenyon_singletons",
                max(domino_residual([d]) for d in dominoes),
                CORRELATION_TOLERANCE,
                len(dominoes),
            ),
            CheckOutcome.of(
                "kenyon_pairs",
                max((domino_residual([dominoes[i], dominoes[j]]) for i, j in domino_pairs), default=0.0),
                CORRELATION_TOLERANCE,
                len(domino_pairs),
            ),
            CheckOutcome.of(
                "red_gap_singletons",
                max(red_residual([p]) for p in sites),
                CORRELATION_TOLERANCE,
                len(sites),
            ),
            CheckOutcome.of(
                "red_gap_pairs",
                max((red_residual([sites[i], sites[j]]) for i, j in site_pairs), default=0.0),
                CORRELATION_TOLERANCE,
                len(site_pairs),
            ),
        ]
        result = VerificationResult(suite="correlations", spec=spec, checks=checks)
        logger.info(
            f"Correlation check on {spec}: {'passed' if result.passed else 'FAILED'}, "
            f"max residual {result.max_residual:.3e}"
        )
        return result

    def _random_pairs(
        self, rng: np.random.Generator, size: int, count: int
    ) -> list[tuple[int, int]]:
        """Distinct index pairs; all of them when there are fewer than ``count``."""
        every = list(combinations(range(size), 2))
        if len(every) <= count:
            return every
        picked = rng.choice(len(every), size=count, replace=False)
        return [every[k] for k in sorted(picked)]
