"""Metropolis flip dynamics on tilings.

The chain state is a flat int8 array holding the orientation code of every
blue cell.  A move picks one of the 2x2 blocks of the domain uniformly; when
the block is covered by two parallel dominoes it proposes the rotation and
accepts with probability min(1, a^2) (horizontal to vertical) or
min(1, a^-2) (vertical to horizontal).
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from numpy.typing import NDArray

from ..exceptions import DomainError
from ..models import SU, ChainConfig, DomainSpec, Orientation, PathColor, Tiling
from .geometry import cell_graph, is_tilable, red_dot_profile, row_range
from .tiling import (
    dots_of,
    from_orientations,
    orientation_counts,
    tiling_from_green_rows,
)

logger = logging.getLogger(__name__)

CODES: dict[Orientation, int] = {o: i for i, o in enumerate(Orientation)}
ORIENTATIONS: tuple[Orientation, ...] = tuple(Orientation)

_BATCH = 4096


def _green_bounds(spec: DomainSpec, s: int, upper: list[int] | None) -> tuple[int, int]:
    """Row bounds of a green point, below the path above it when there is one."""
    rng = row_range(spec, s)
    lo, hi = rng.start, rng.stop - 1
    if upper is not None:
        hi = min(hi, upper[s] - 1)
        if s % 2 == 0 and s + 1 < len(upper):
            hi = min(hi, upper[s + 1] - 1)
    return lo, hi


def _maximal_green_path(spec: DomainSpec, k: int, upper: list[int] | None) -> list[int]:
    """Highest green path from (0, -k) to (2n+1, delta-k) below ``upper``.

    From an even row the path moves to u' <= u on the next row; from an odd row
    it moves to u or u+1.  Feasible sets are intervals, computed backwards.
    """
    last = 2 * spec.n + 1
    feasible: list[tuple[int, int]] = [(0, -1)] * (last + 1)
    end = spec.delta - k
    feasible[last] = (end, end)
    for s in range(last - 1, -1, -1):
        lo, hi = _green_bounds(spec, s, upper)
        nlo, nhi = feasible[s + 1]
        if s % 2 == 0:
            lo = max(lo, nlo)
        else:
            lo, hi = max(lo, nlo - 1), min(hi, nhi)
        feasible[s] = (lo, hi)
        if lo > hi:
            raise DomainError(f"No green path {k} through row {s}")
    if not feasible[0][0] <= -k <= feasible[0][1]:
        raise DomainError(f"Green path {k} cannot start at (0, {-k})")
    path = [-k]
    for s in range(last):
        u = path[-1]
        nlo, nhi = feasible[s + 1]
        if s % 2 == 0:
            path.append(min(u, nhi))
        else:
            path.append(u + 1 if nlo <= u + 1 <= nhi else u)
    return path


def initial_tiling(spec: DomainSpec) -> Tiling:
    """Deterministic tiling from the maximal family of non-intersecting green paths."""
    if not is_tilable(spec.n, spec.m, spec.M).tilable:
        raise DomainError(f"Domain ({spec.n}, {spec.m}, {spec.M}) is not tilable")
    paths: list[list[int]] = []
    for k in range(spec.M):
        paths.append(_maximal_green_path(spec, k, paths[-1] if paths else None))
    rows = [[p[s] for p in paths] for s in range(2 * spec.n + 2)]
    return tiling_from_green_rows(spec, rows)


@dataclass(frozen=True)
class FlipBlocks:
    """All 2x2 blocks of a domain as index arrays into the chain state.

    A block is two blue cells b1, b2 and the two whites adjacent to both.  Its
    horizontal and vertical coverings are given by the codes (h1, h2), (v1, v2).
    """

    b1: NDArray[np.intp]
    b2: NDArray[np.intp]
    h1: NDArray[np.int8]
    h2: NDArray[np.int8]
    v1: NDArray[np.int8]
    v2: NDArray[np.int8]

    def __len__(self) -> int:
        return len(self.b1)


@lru_cache(maxsize=32)
def flip_blocks(spec: DomainSpec) -> FlipBlocks:
    """Enumerate both kinds of 2x2 blocks lying inside the domain.

    Tables are cached per spec and shared, so their arrays are read-only.
    """
    graph = cell_graph(spec)
    index = graph.blue_index
    whites = graph.white_index
    rows: list[tuple[int, int, int, int, int, int]] = []
    for b in graph.blues:
        s, u = b.s, b.u
        # kind A: b2 two rows up, whites (s+1, u) and (s+1, u+1)
        b2 = SU(s + 2, u + 1)
        if b2 in index and SU(s + 1, u) in whites and SU(s + 1, u + 1) in whites:
            rows.append(
                (
                    index[b],
                    index[b2],
                    CODES[Orientation.HL],
                    CODES[Orientation.HR],
                    CODES[Orientation.VD],
                    CODES[Orientation.VU],
                )
            )
        # kind B: b2 on the same row, whites (s+1, u+1) and (s-1, u)
        b2 = SU(s, u + 1)
        if b2 in index and SU(s + 1, u + 1) in whites and SU(s - 1, u) in whites:
            rows.append(
                (
                    index[b],
                    index[b2],
                    CODES[Orientation.HR],
                    CODES[Orientation.HL],
                    CODES[Orientation.VD],
                    CODES[Orientation.VU],
                )
            )
    table = np.array(rows, dtype=np.intp).reshape(-1, 6)
    table.setflags(write=False)
    return FlipBlocks(
        b1=table[:, 0],
        b2=table[:, 1],
        h1=table[:, 2].astype(np.int8),
        h2=table[:, 3].astype(np.int8),
        v1=table[:, 4].astype(np.int8),
        v2=table[:, 5].astype(np.int8),
    )


@lru_cache(maxsize=32)
def _blue_cells(spec: DomainSpec) -> tuple[SU, ...]:
    return tuple(cell_graph(spec).blues)


@dataclass
class TilingChain:
    """A single flip chain owning its state and random generator.

    ``picks`` counts every block drawn; ``proposed`` only the draws that found
    a flippable block, which is the denominator of the acceptance rate.
    """

    spec: DomainSpec
    seed: int = 0
    start: Tiling | None = None
    state: NDArray[np.int8] = field(init=False)
    accepted: int = field(default=0, init=False)
    proposed: int = field(default=0, init=False)
    picks: int = field(default=0, init=False)

    def __post_init__(self) -> None:
        self.rng = np.random.default_rng(self.seed)
        if self.start is None:
            self.start = initial_tiling(self.spec)
        self.set_tiling(self.start)

    @property
    def blues(self) -> tuple[SU, ...]:
        return _blue_cells(self.spec)

    @cached_property
    def blocks(self) -> FlipBlocks:
        return flip_blocks(self.spec)

    def encode(self, t: Tiling) -> NDArray[np.int8]:
        return np.array([CODES[t.orientation_at(b)] for b in self.blues], dtype=np.int8)

    def set_tiling(self, t: Tiling) -> None:
        if t.spec != self.spec:
            raise DomainError("Tiling belongs to another domain")
        self.state = self.encode(t)

    @property
    def tiling(self) -> Tiling:
        """Current state as a validated Tiling."""
        return from_orientations(
            self.spec,
            {b: ORIENTATIONS[c] for b, c in zip(self.blues, self.state, strict=True)},
        )

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else 0.0

    def apply(self, block: int, u: float) -> bool:
        """Try to rotate one block with uniform variate u; return whether it moved."""
        blk = self.blocks
        i, j = blk.b1[block], blk.b2[block]
        x1, x2 = self.state[i], self.state[j]
        a2 = self.spec.a**2
        if x1 == blk.h1[block] and x2 == blk.h2[block]:
            self.proposed += 1
            if u < a2:
                self.state[i], self.state[j] = blk.v1[block], blk.v2[block]
                self.accepted += 1
                return True
        elif x1 == blk.v1[block] and x2 == blk.v2[block]:
            self.proposed += 1
            if a2 >= 1.0 or u < 1.0 / a2:
                self.state[i], self.state[j] = blk.h1[block], blk.h2[block]
                self.accepted += 1
                return True
        return False

    def run(self, steps: int) -> None:
        """Advance the chain by ``steps`` block proposals."""
        done = 0
        count = len(self.blocks)
        if count == 0:
            return
        while done < steps:
            size = min(_BATCH, steps - done)
            drawn = self.rng.integers(0, count, size=size)
            variates = self.rng.random(size)
            for block, u in zip(drawn, variates, strict=True):
                self.apply(int(block), float(u))
            done += size
            self.picks += size


def step(t: Tiling, rng: np.random.Generator) -> Tiling:
    """One Metropolis flip proposal on a tiling."""
    chain = TilingChain(t.spec, start=t)
    chain.rng = rng
    chain.run(1)
    return chain.tiling


@dataclass(frozen=True)
class SampleReport:
    """Outcome of a chain run."""

    tiling: Tiling
    red_counts: dict[int, int]
    acceptance_rate: float
    orientation_counts: dict[Orientation, int]
    trajectory: list[dict[int, int]] = field(default_factory=list)
    proposals: int = 0


def red_counts_per_line(t: Tiling) -> dict[int, int]:
    """Number of red dots on every line xi of the domain."""
    dots = dots_of(t, PathColor.RED)
    return {xi: dots.count_on_line(xi) for xi, _ in red_dot_profile(t.spec)}


def sample(spec: DomainSpec, config: ChainConfig) -> SampleReport:
    """Run burn_in proposals, then steps more from where the burn-in ended.

    The trajectory records the red-dot counts every ``report_every`` proposals
    after the burn-in.

    Raises:
        DomainError: If the red-dot profile of a recorded state differs from
            the geometric profile
    """
    chain = TilingChain(spec, seed=config.seed)
    chain.run(config.burn_in)
    expected = dict(red_dot_profile(spec))
    trajectory: list[dict[int, int]] = []
    remaining = config.steps
    chunk = config.report_every or remaining
    while remaining > 0:
        n_steps = min(chunk, remaining)
        chain.run(n_steps)
        remaining -= n_steps
        if config.report_every:
            counts = red_counts_per_line(chain.tiling)
            if counts != expected:
                raise DomainError(f"Red-dot profile drifted: {counts} != {expected}")
            trajectory.append(counts)
    final = chain.tiling
    counts = red_counts_per_line(final)
    if counts != expected:
        raise DomainError(f"Red-dot profile drifted: {counts} != {expected}")
    logger.info(
        f"Chain finished after {config.burn_in} + {config.steps} proposals, "
        f"acceptance {chain.acceptance_rate:.3f}"
    )
    return SampleReport(
        tiling=final,
        red_counts=counts,
        acceptance_rate=chain.acceptance_rate,
        orientation_counts=orientation_counts(final),
        trajectory=trajectory,
        proposals=chain.picks,
    )


def empirical_distribution(
    spec: DomainSpec, steps: int, seed: int = 0, thin: int = 1, burn_in: int = 0
) -> dict[bytes, float]:
    """Visit frequencies of chain states, keyed by the raw state bytes."""
    chain = TilingChain(spec, seed=seed)
    chain.run(burn_in)
    counts: dict[bytes, int] = {}
    visits = 0
    for _ in range(max(1, steps // thin)):
        chain.run(thin)
        key = chain.state.tobytes()
        counts[key] = counts.get(key, 0) + 1
        visits += 1
    return {k: c / visits for k, c in counts.items()}


def state_key(spec: DomainSpec, orientations: dict[SU, Orientation]) -> bytes:
    """Key of an oracle tiling in the chain's state encoding."""
    blues = cell_graph(spec).blues
    return np.array([CODES[orientations[b]] for b in blues], dtype=np.int8).tobytes()


def total_variation(empirical: dict[bytes, float], exact: dict[bytes, float]) -> float:
    """Total-variation distance between two distributions on chain states."""
    keys = set(empirical) | set(exact)
    return 0.5 * sum(abs(empirical.get(k, 0.0) - exact.get(k, 0.0)) for k in keys)
