"""Convergence experiments: pre-limit to tacnode, tacnode to cusp-Airy."""

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

from pydantic import BaseModel, ConfigDict

from ..domain.exceptions import DomainError
from ..domain.models import DomainSpec, TacnodeParams, TacnodePoint
from ..domain.services import kasteleyn
from ..domain.services.cusp_airy import CuspRow, airy_like, airy_series, cusp_limit_check
from ..domain.services.geometry import in_domain
from ..domain.services.limit_kernels import (
    ConvergenceRow,
    SymmetryReport,
    TacnodeKernel,
    convergence_table,
    lattice_point,
    symmetry_report,
    tacnode_scaling,
)
from ..infrastructure.config import KernelConfig

logger = logging.getLogger(__name__)

Theorem = Literal["main", "cusp", "symmetry", "exploratory"]

REFERENCE_PARAMS = TacnodeParams(r=1, rho=2, beta=0.0)
REFERENCE_POINTS = (TacnodePoint(tau=0, y=0.5), TacnodePoint(tau=0, y=-0.5))
REFERENCE_NS = (64, 256, 1024)
REFERENCE_RS = (4, 8, 16)
RATIO_RANGE = (0.3, 0.8)
AIRY_TOLERANCE = 1e-8


class ExploratoryRow(BaseModel):
    """Rescaled finite-n red density next to the tacnode diagonal."""

    model_config = ConfigDict(frozen=True)

    tau: int
    y: float
    xi: int
    eta: int
    finite: float
    limit: complex
    err_estimate: float


class ConvergenceResult(BaseModel):
    """Outcome of one convergence experiment."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    theorem: str
    params: TacnodeParams
    main_rows: list[ConvergenceRow] = []
    cusp_rows: list[CuspRow] = []
    symmetry: SymmetryReport | None = None
    exploratory_rows: list[ExploratoryRow] = []
    ratios: list[float] = []
    airy_residual: float | None = None
    asserted: bool = True
    passed: bool = True
    notes: list[str] = []


@dataclass
class ConvergenceRequest:
    """Request for a convergence experiment.

    ``ns`` drive the pre-limit sequence, ``rs`` the cusp sequence; ``spec`` is
    the finite domain of the exploratory table.
    """

    theorem: Theorem = "main"
    params: TacnodeParams = REFERENCE_PARAMS
    p1: TacnodePoint = REFERENCE_POINTS[0]
    p2: TacnodePoint = REFERENCE_POINTS[1]
    ns: list[int] = field(default_factory=lambda: list(REFERENCE_NS))
    rs: list[int] = field(default_factory=lambda: list(REFERENCE_RS))
    xi1: float = 0.0
    xi2: float = 0.0
    spec: DomainSpec | None = None
    taus: list[int] = field(default_factory=lambda: [0])
    ys: list[float] = field(default_factory=lambda: [-1.0, -0.5, 0.0, 0.5, 1.0])


class ConvergenceUseCase:
    """Use case for the limit-theorem experiments."""

    def __init__(self, config: KernelConfig | None = None):
        """Initialize the convergence use case.

        Args:
            config: Kernel configuration (quadrature and determinant caps)
        """
        self.config = config or KernelConfig()

    def execute(self, request: ConvergenceRequest) -> ConvergenceResult:
        """Run the requested experiment.

        Args:
            request: Convergence request

        Returns:
            ConvergenceResult; ``passed`` is only meaningful when ``asserted``
        """
        handler = {
            "main": self._main,
            "cusp": self._cusp,
            "symmetry": self._symmetry,
            "exploratory": self._exploratory,
        }[request.theorem]
        result = handler(request)
        logger.info(
            f"Convergence experiment {request.theorem}: "
            f"{'passed' if result.passed else 'FAILED'}"
        )
        return result

    def _main(self, request: ConvergenceRequest) -> ConvergenceResult:
        """Discrepancy must decrease strictly with successive ratios in range."""
        rows = convergence_table(
            request.params,
            request.p1,
            request.p2,
            request.ns,
            self.config.quadrature,
            self.config.rcap,
        )
        gaps = [row.discrepancy for row in rows]
        ratios = [b / a for a, b in zip(gaps, gaps[1:], strict=False) if a > 0]
        lo, hi = RATIO_RANGE
        passed = len(ratios) == len(gaps) - 1 and all(lo <= q <= hi for q in ratios)
        return ConvergenceResult(
            theorem="main",
            params=request.params,
            main_rows=rows,
            ratios=ratios,
            passed=passed,
        )

    def _cusp(self, request: ConvergenceRequest) -> ConvergenceResult:
        """Discrepancy must decrease in r, and A_0 must match the Airy series."""
        rows = cusp_limit_check(
            request.rs,
            request.p1.tau,
            request.xi1,
            request.p2.tau,
            request.xi2,
            self.config.quadrature,
            self.config.theta_rcap,
        )
        gaps = [row.discrepancy for row in rows]
        decreasing = all(b < a for a, b in zip(gaps, gaps[1:], strict=False))
        airy_residual = max(
            abs(float(airy_like(0, x)) - airy_series(x)) for x in (-2.0, 0.0, 1.5)
        )
        return ConvergenceResult(
            theorem="cusp",
            params=TacnodeParams(r=request.rs[-1], rho=0, beta=0.0),
            cusp_rows=rows,
            ratios=[b / a for a, b in zip(gaps, gaps[1:], strict=False) if a > 0],
            airy_residual=airy_residual,
            passed=decreasing and airy_residual <= AIRY_TOLERANCE,
        )

    def _symmetry(self, request: ConvergenceRequest) -> ConvergenceResult:
        report = symmetry_report(request.params, request.p1, request.p2, self.config.quadrature)
        return ConvergenceResult(
            theorem="symmetry",
            params=request.params,
            symmetry=report,
            asserted=False,
            notes=[f"transposition residual {report.residual:.3e}, reported only"],
        )

    def _exploratory(self, request: ConvergenceRequest) -> ConvergenceResult:
        """Finite-n red density, rescaled, next to the tacnode diagonal.

        Meant for Case 1 with delta > 0 and Case 2, where no limit is proved;
        nothing is asserted.
        """
        spec = request.spec
        if spec is None:
            raise DomainError("The exploratory table needs a domain")
        beta = (spec.a - 1.0) * math.sqrt(spec.n)
        params = TacnodeParams(r=spec.r, rho=spec.rho, beta=beta)
        sys = kasteleyn.build(spec)
        targets = []
        for tau in request.taus:
            for y in request.ys:
                q = lattice_point(spec, TacnodePoint(tau=tau, y=y))
                if not in_domain(spec, q.to_su()):
                    logger.debug(f"({tau}, {y}) maps outside the domain to {q}")
                    continue
                targets.append((tau, q))
        y_of = {q: (q.eta - spec.n + 1) / math.sqrt(spec.n) for _, q in targets}
        y_max = max((abs(y) for y in y_of.values()), default=0.0)
        kernel = TacnodeKernel(params, self.config.quadrature, y_max, self.config.theta_rcap)
        rows = []
        for tau, q in targets:
            p = TacnodePoint(tau=tau, y=y_of[q])
            finite = tacnode_scaling(spec, q, q) * kasteleyn.kred(sys, q, q)
            limit = kernel.terms(p, p)
            rows.append(
                ExploratoryRow(
                    tau=tau,
                    y=p.y,
                    xi=q.xi,
                    eta=q.eta,
                    finite=finite.real,
                    limit=limit.value,
                    err_estimate=limit.err_estimate,
                )
            )
        return ConvergenceResult(
            theorem="exploratory",
            params=params,
            exploratory_rows=rows,
            asserted=False,
            notes=[f"{spec.case.value} with delta={spec.delta}: tabulated, not asserted"],
        )
