"""Sampling use case: run the flip chain, write the picture and statistics."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.stats
from pydantic import BaseModel, ConfigDict

from ..domain.exceptions import DomainError
from ..domain.models import ChainConfig, DomainSpec, RenderStyle
from ..domain.services.geometry import red_dot_profile
from ..domain.services.oracle import TilingOracle
from ..domain.services.rendering import render_svg
from ..domain.services.sampler import (
    empirical_distribution,
    flip_blocks,
    sample,
    state_key,
    total_variation,
)
from ..infrastructure.config import KernelConfig
from ..infrastructure.results_repository import ResultsRepository

logger = logging.getLogger(__name__)

# 3 sigma two-sided
CHI_SQUARE_LEVEL = 0.0027


class ExactComparison(BaseModel):
    """Empirical chain distribution against the exact one at one chain length."""

    model_config = ConfigDict(frozen=True)

    steps: int
    visits: int
    total_variation: float
    chi_square: float
    dof: int
    p_value: float

    @property
    def passed(self) -> bool:
        return self.p_value >= CHI_SQUARE_LEVEL


class SamplingResult(BaseModel):
    """Result of a sampling run."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    spec: DomainSpec
    steps: int
    burn_in: int = 0
    proposals: int = 0
    seed: int
    acceptance_rate: float
    red_counts: dict[int, int]
    profile_matches: bool
    orientation_counts: dict[str, int]
    vertical_fraction: float
    comparisons: list[ExactComparison] = []
    svg_path: str | None = None
    stats_path: str | None = None
    tiling_path: str | None = None


@dataclass
class SamplingRequest:
    """Request for a sampling run.

    ``exact_lengths`` lists chain lengths at which the visit frequencies are
    compared with exhaustive enumeration; only for enumerable domains.
    """

    spec: DomainSpec
    chain: ChainConfig
    svg_path: Path | None = None
    stats_path: Path | None = None
    tiling_path: Path | None = None
    style: RenderStyle = field(default_factory=RenderStyle)
    exact_lengths: list[int] = field(default_factory=list)
    thin: int | None = None


class SamplingUseCase:
    """Use case for sampling tilings."""

    def __init__(self, repository: ResultsRepository, config: KernelConfig | None = None):
        """Initialize the sampling use case.

        Args:
            repository: Writer for the SVG, the statistics file and the final tiling
            config: Kernel configuration; its enumeration cap bounds exact comparisons
        """
        self.repository = repository
        self.config = config or KernelConfig()

    def execute(self, request: SamplingRequest) -> SamplingResult:
        """Sample one tiling and optionally compare with the exact law.

        Args:
            request: Sampling request

        Returns:
            SamplingResult with the final-state statistics

        Raises:
            DomainError: If the domain is not tilable or the profile drifts
            EnumerationCapError: If exact comparisons exceed the oracle cap
        """
        spec = request.spec
        report = sample(spec, request.chain)
        counts = report.orientation_counts
        total = sum(counts.values())
        vertical = sum(c for o, c in counts.items() if o.is_vertical)

        if request.svg_path:
            self.repository.write_text(render_svg(report.tiling, request.style), request.svg_path)
        if request.stats_path:
            rows = [
                {"xi": xi, "red_dots": report.red_counts[xi], "expected": expected}
                for xi, expected in red_dot_profile(spec)
            ]
            self.repository.write_csv(rows, request.stats_path)
        if request.tiling_path:
            self.repository.save_tiling(report.tiling, request.tiling_path)

        comparisons = [
            self.compare_with_exact(spec, steps, request.chain.seed, request.thin)
            for steps in request.exact_lengths
        ]
        return SamplingResult(
            spec=spec,
            steps=request.chain.steps,
            burn_in=request.chain.burn_in,
            proposals=report.proposals,
            seed=request.chain.seed,
            acceptance_rate=report.acceptance_rate,
            red_counts=report.red_counts,
            profile_matches=report.red_counts == dict(red_dot_profile(spec)),
            orientation_counts={o.value: c for o, c in counts.items()},
            vertical_fraction=vertical / total if total else 0.0,
            comparisons=comparisons,
            svg_path=str(request.svg_path) if request.svg_path else None,
            stats_path=str(request.stats_path) if request.stats_path else None,
            tiling_path=str(request.tiling_path) if request.tiling_path else None,
        )

    def compare_with_exact(
        self, spec: DomainSpec, steps: int, seed: int = 0, thin: int | None = None
    ) -> ExactComparison:
        """Total variation and a chi-square test of thinned chain visits.

        The default thinning is ten proposals per flip block, so consecutive
        visits are close to independent on enumerable domains.

        Raises:
            DomainError: If the chain visits a state the enumeration does not list
        """
        oracle = TilingOracle(spec, self.config.enumeration.cell_cap)
        exact = {state_key(spec, state): float(p) for state, p in oracle.distribution()}
        thin = thin or 10 * max(1, len(flip_blocks(spec)))
        burn_in = 10 * len(exact) * thin
        empirical = empirical_distribution(spec, steps, seed=seed, thin=thin, burn_in=burn_in)
        foreign = set(empirical) - set(exact)
        if foreign:
            mass = sum(empirical[k] for k in foreign)
            raise DomainError(
                f"Chain visited {len(foreign)} states outside the enumeration "
                f"(mass {mass:.3g})"
            )
        visits = max(1, steps // thin)
        keys = sorted(exact)
        observed = np.array([empirical.get(k, 0.0) * visits for k in keys])
        expected = np.array([exact[k] * visits for k in keys])
        # rounding of the frequencies must not break the equal-sum requirement
        observed *= expected.sum() / observed.sum()
        if len(keys) > 1:
            stat, p_value = scipy.stats.chisquare(observed, expected)
        else:
            stat, p_value = 0.0, 1.0
        comparison = ExactComparison(
            steps=steps,
            visits=visits,
            total_variation=total_variation(empirical, exact),
            chi_square=float(stat),
            dof=len(keys) - 1,
            p_value=float(p_value),
        )
        logger.info(
            f"{steps} steps: TV {comparison.total_variation:.3e}, "
            f"chi-square p = {comparison.p_value:.3g}"
        )
        return comparison
