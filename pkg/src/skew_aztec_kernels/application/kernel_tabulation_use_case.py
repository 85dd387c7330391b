"""Kernel tabulation use case: evaluate one kernel on a list of point pairs."""

import logging
from dataclasses import dataclass
from typing import Literal

from pydantic import BaseModel, ConfigDict

from ..domain.exceptions import DomainError
from ..domain.models import DomainSpec, TacnodeParams, TacnodePoint, XiEta
from ..domain.services import kasteleyn
from ..domain.services.cusp_airy import cusp_airy
from ..domain.services.limit_kernels import TacnodeKernel
from ..domain.services.prelimit_kernel import (
    PreLimitKernel,
    PreLimitKernelParams,
    prelimit_to_kred,
)
from ..infrastructure.config import KernelConfig
from ..infrastructure.results_repository import kernel_row

logger = logging.getLogger(__name__)

KernelKind = Literal["finite", "prelimit", "tacnode", "cusp-airy"]

type PointPair = tuple[tuple[float, float], tuple[float, float]]

_INPUT_NAMES: dict[str, tuple[str, str]] = {
    "finite": ("xi", "eta"),
    "prelimit": ("x", "y"),
    "tacnode": ("tau", "y"),
    "cusp-airy": ("tau", "xi"),
}


class KernelTable(BaseModel):
    """Rows (inputs..., re, im, err_estimate) of one kernel."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    kind: str
    rows: list[dict[str, str]]
    max_err_estimate: float = 0.0


@dataclass
class KernelTabulationRequest:
    """Request for a kernel table.

    Points are read as (xi, eta) lattice centres for ``finite``, scaled
    (x, y) for ``prelimit``, (tau, y) for ``tacnode`` and (tau, xi) for
    ``cusp-airy``.
    """

    kind: KernelKind
    pairs: list[PointPair]
    spec: DomainSpec | None = None
    params: TacnodeParams | None = None
    with_kred: bool = False


def _integer(value: float, name: str) -> int:
    if value != int(value):
        raise DomainError(f"{name} must be an integer, got {value}")
    return int(value)


class KernelTabulationUseCase:
    """Use case for tabulating finite, pre-limit and limit kernels."""

    def __init__(self, config: KernelConfig | None = None):
        """Initialize the kernel tabulation use case.

        Args:
            config: Kernel configuration
        """
        self.config = config or KernelConfig()

    def execute(self, request: KernelTabulationRequest) -> KernelTable:
        """Evaluate the kernel at every pair.

        Args:
            request: Kernel tabulation request

        Returns:
            KernelTable ready for CSV output

        Raises:
            DomainError: If a needed spec or parameter set is missing, or a
                coordinate that must be integral is not
            UnsupportedRegimeError: Outside the regime of the chosen kernel
        """
        evaluate = {
            "finite": self._finite,
            "prelimit": self._prelimit,
            "tacnode": self._tacnode,
            "cusp-airy": self._cusp_airy,
        }[request.kind]
        rows, worst = evaluate(request)
        logger.info(f"Tabulated {len(rows)} {request.kind} kernel values")
        return KernelTable(kind=request.kind, rows=rows, max_err_estimate=worst)

    def _inputs(self, kind: str, pair: PointPair) -> dict[str, float | int]:
        first, second = _INPUT_NAMES[kind]
        (a1, b1), (a2, b2) = pair
        return {f"{first}1": a1, f"{second}1": b1, f"{first}2": a2, f"{second}2": b2}

    def _require_spec(self, request: KernelTabulationRequest) -> DomainSpec:
        if request.spec is None:
            raise DomainError(f"The {request.kind} kernel needs a domain spec")
        return request.spec

    def _finite(self, request: KernelTabulationRequest) -> tuple[list[dict[str, str]], float]:
        spec = self._require_spec(request)
        sys = kasteleyn.build(spec)
        rows = []
        for pair in request.pairs:
            (x1, e1), (x2, e2) = pair
            p1 = XiEta(_integer(x1, "xi"), _integer(e1, "eta"))
            p2 = XiEta(_integer(x2, "xi"), _integer(e2, "eta"))
            rows.append(kernel_row(self._inputs("finite", pair), kasteleyn.kred(sys, p1, p2), 0.0))
        return rows, 0.0

    def _prelimit(self, request: KernelTabulationRequest) -> tuple[list[dict[str, str]], float]:
        spec = self._require_spec(request)
        kernel = PreLimitKernel(
            spec, self.config.quadrature, self.config.rcap, self.config.strict
        )
        rows, worst = [], 0.0
        for pair in request.pairs:
            (x1, y1), (x2, y2) = pair
            params = PreLimitKernelParams(
                spec=spec, x1=_integer(x1, "x"), y1=y1, x2=_integer(x2, "x"), y2=y2
            )
            result = kernel.terms(params)
            value, err = result.value, result.err_estimate
            if request.with_kred:
                factor = prelimit_to_kred(params)
                value, err = factor * value, abs(factor) * err
            rows.append(kernel_row(self._inputs("prelimit", pair), value, err))
            worst = max(worst, err)
        return rows, worst

    def _tacnode(self, request: KernelTabulationRequest) -> tuple[list[dict[str, str]], float]:
        if request.params is None:
            raise DomainError("The tacnode kernel needs (r, rho, beta)")
        y_max = max((abs(p[1]) for pair in request.pairs for p in pair), default=0.0)
        kernel = TacnodeKernel(
            request.params, self.config.quadrature, y_max, self.config.theta_rcap
        )
        rows, worst = [], 0.0
        for pair in request.pairs:
            (t1, y1), (t2, y2) = pair
            result = kernel.terms(
                TacnodePoint(tau=_integer(t1, "tau"), y=y1),
                TacnodePoint(tau=_integer(t2, "tau"), y=y2),
            )
            rows.append(kernel_row(self._inputs("tacnode", pair), result.value, result.err_estimate))
            worst = max(worst, result.err_estimate)
        return rows, worst

    def _cusp_airy(self, request: KernelTabulationRequest) -> tuple[list[dict[str, str]], float]:
        rows = []
        for pair in request.pairs:
            (t1, xi1), (t2, xi2) = pair
            value = cusp_airy(_integer(t1, "tau"), xi1, _integer(t2, "tau"), xi2)
            rows.append(kernel_row(self._inputs("cusp-airy", pair), complex(value), 0.0))
        return rows, 0.0
