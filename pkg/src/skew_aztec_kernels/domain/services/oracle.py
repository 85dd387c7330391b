"""Exhaustive enumeration of tilings of small domains.

The enumerator is the ground truth for partition functions, domino
correlations and red gap probabilities.  Weights are polynomials in a with
integer coefficients; evaluation is exact whenever a is given as a decimal.
"""

import logging
from collections import Counter
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from ..exceptions import DomainError, EnumerationCapError
from ..models import SU, DomainSpec, Domino, Orientation, PathColor, Tiling, XiEta
from .geometry import cell_graph, in_domain, partner, row_range
from .tiling import (
    BLUE_ORIENTATIONS,
    GREEN_ORIENTATIONS,
    RED_ORIENTATIONS,
    from_orientations,
)

logger = logging.getLogger(__name__)

DEFAULT_CELL_CAP = 60

Branching = Literal["first", "fewest"]

type StatePredicate = Callable[[dict[SU, Orientation]], bool]


def exact_weight(a: float | Fraction) -> Fraction:
    """Exact rational value of a weight given as a decimal."""
    if isinstance(a, Fraction):
        return a
    return Fraction(str(a))


def evaluate_polynomial(coefficients: tuple[int, ...], a: float | Fraction) -> Fraction:
    """Horner evaluation of sum_k c_k a^k in exact arithmetic."""
    x = exact_weight(a)
    total = Fraction(0)
    for c in reversed(coefficients):
        total = total * x + c
    return total


def _as_coefficients(counts: Counter[int]) -> tuple[int, ...]:
    if not counts:
        return ()
    top = max(counts)
    return tuple(counts.get(k, 0) for k in range(top + 1))


@dataclass(frozen=True)
class MatchingProblem:
    """Bipartite cell graph handed to the enumerator."""

    blues: list[SU]
    whites: list[SU]
    adjacency: list[list[tuple[int, Orientation]]]

    @classmethod
    def from_cells(cls, blues: list[SU], whites: list[SU]) -> "MatchingProblem":
        white_index = {w: i for i, w in enumerate(whites)}
        adjacency = []
        for b in blues:
            row = []
            for orientation in Orientation:
                w = partner(b, orientation)
                if w in white_index:
                    row.append((white_index[w], orientation))
            adjacency.append(row)
        return cls(blues, whites, adjacency)

    @classmethod
    def from_spec(cls, spec: DomainSpec) -> "MatchingProblem":
        graph = cell_graph(spec)
        return cls.from_cells(graph.blues, graph.whites)

    @property
    def cell_count(self) -> int:
        return len(self.blues) + len(self.whites)


@dataclass
class EnumerationResult:
    """Count, weight polynomial and (optionally) the tilings of a domain."""

    count: int
    coefficients: tuple[int, ...]
    a: Fraction = Fraction(1)
    tilings: list[dict[SU, Orientation]] | None = field(default=None, repr=False)

    @property
    def partition_function(self) -> Fraction:
        """Partition function at the domain's weight a."""
        return evaluate_polynomial(self.coefficients, self.a)

    def partition_at(self, a: float | Fraction) -> Fraction:
        return evaluate_polynomial(self.coefficients, a)


def _search(
    problem: MatchingProblem, emit: bool, branching: Branching
) -> tuple[Counter[int], list[dict[SU, Orientation]]]:
    nb = len(problem.blues)
    used = [False] * len(problem.whites)
    assigned: list[Orientation | None] = [None] * nb
    counts: Counter[int] = Counter()
    found: list[dict[SU, Orientation]] = []

    def pick() -> int:
        if branching == "first":
            return next(i for i in range(nb) if assigned[i] is None)
        best, best_free = -1, 5
        for i in range(nb):
            if assigned[i] is None:
                free = sum(1 for w, _ in problem.adjacency[i] if not used[w])
                if free < best_free:
                    best, best_free = i, free
        return best

    def recurse(depth: int, vertical: int) -> None:
        if depth == nb:
            counts[vertical] += 1
            if emit:
                found.append(
                    {problem.blues[i]: o for i, o in enumerate(assigned) if o is not None}
                )
            return
        i = pick()
        for w, orientation in problem.adjacency[i]:
            if used[w]:
                continue
            used[w] = True
            assigned[i] = orientation
            recurse(depth + 1, vertical + orientation.is_vertical)
            used[w] = False
            assigned[i] = None

    if len(problem.blues) == len(problem.whites):
        recurse(0, 0)
    return counts, found


def enumerate_matchings(
    problem: MatchingProblem,
    emit: bool = False,
    cap: int = DEFAULT_CELL_CAP,
    branching: Branching = "first",
) -> EnumerationResult:
    """Depth-first enumeration of all perfect matchings of a cell graph."""
    if problem.cell_count > cap:
        raise EnumerationCapError(
            f"{problem.cell_count} cells exceed the enumeration cap of {cap}"
        )
    counts, found = _search(problem, emit, branching)
    return EnumerationResult(
        count=sum(counts.values()),
        coefficients=_as_coefficients(counts),
        tilings=found if emit else None,
    )


def enumerate_tilings(
    spec: DomainSpec,
    emit: bool = False,
    cap: int = DEFAULT_CELL_CAP,
    branching: Branching = "first",
) -> EnumerationResult:
    """Exact count and weight polynomial of the tilings of a domain."""
    result = enumerate_matchings(MatchingProblem.from_spec(spec), emit, cap, branching)
    result.a = exact_weight(spec.a)
    logger.info(
        f"Enumerated ({spec.n}, {spec.m}, {spec.M}): {result.count} tilings"
    )
    return result


def iter_tilings(spec: DomainSpec, cap: int = DEFAULT_CELL_CAP) -> Iterator[Tiling]:
    """Validated Tiling objects of a small domain."""
    result = enumerate_tilings(spec, emit=True, cap=cap)
    for orientations in result.tilings or []:
        yield from_orientations(spec, orientations)


def transfer_count(spec: DomainSpec) -> tuple[int, ...]:
    """Weight polynomial by row-to-row transfer dynamic programming.

    The state after row s is the set of cells of row s+1 already covered by
    dominoes reaching down to row s.  Independent of the depth-first search.
    """
    last = 2 * spec.n + 1
    states: dict[int, Counter[int]] = {0: Counter({0: 1})}
    for s in range(last + 1):
        here = row_range(spec, s)
        there = row_range(spec, s + 1) if s < last else range(0)
        next_states: dict[int, Counter[int]] = {}
        for mask, poly in states.items():
            free = [
                u
                for u in here
                if in_domain(spec, SU(s, u)) and not mask >> (u - here.start) & 1
            ]
            for new_mask, vertical in _row_transitions(spec, s, free, there):
                bucket = next_states.setdefault(new_mask, Counter())
                for k, c in poly.items():
                    bucket[k + vertical] += c
        states = next_states
    return _as_coefficients(states.get(0, Counter()))


def _row_transitions(
    spec: DomainSpec, s: int, free: list[int], there: range
) -> Iterator[tuple[int, int]]:
    """Cover every free cell of row s by a domino into row s+1."""

    def recurse(k: int, mask: int, vertical: int) -> Iterator[tuple[int, int]]:
        if k == len(free):
            yield mask, vertical
            return
        u = free[k]
        # offset 0 is horizontal, offset 1 vertical, for either colour of row s
        for offset in (0, 1):
            target = u + offset
            if target not in there or not in_domain(spec, SU(s + 1, target)):
                continue
            bit = 1 << (target - there.start)
            if mask & bit:
                continue
            yield from recurse(k + 1, mask | bit, vertical + offset)

    if not free:
        yield 0, 0
        return
    if not there:
        return
    yield from recurse(0, 0, 0)


class TilingOracle:
    """Exact weighted statistics over all tilings of a small domain."""

    def __init__(self, spec: DomainSpec, cap: int = DEFAULT_CELL_CAP):
        """Enumerate the domain once and keep every tiling with its weight.

        Args:
            spec: Domain and vertical weight
            cap: Maximal number of cells accepted by the enumerator
        """
        self.spec = spec
        self.result = enumerate_tilings(spec, emit=True, cap=cap)
        self.states = self.result.tilings or []
        a = exact_weight(spec.a)
        self.weights = [
            a ** sum(o.is_vertical for o in state.values()) for state in self.states
        ]
        self.partition_function = sum(self.weights, Fraction(0))

    def _probability(self, predicate: StatePredicate) -> Fraction:
        if not self.states:
            raise DomainError("Domain has no tilings")
        hit = sum(
            (w for state, w in zip(self.states, self.weights, strict=True) if predicate(state)),
            Fraction(0),
        )
        return hit / self.partition_function

    def correlation(self, dominoes: Iterable[Domino]) -> Fraction:
        """Probability that every given domino is present."""
        wanted = [(d.anchor.to_su(), d.orientation) for d in dominoes]
        return self._probability(lambda st: all(st.get(b) is o for b, o in wanted))

    def red_gap_probability(self, sites: Iterable[XiEta]) -> Fraction:
        """Probability that no red dot occupies any of the sites."""
        cells = [p.to_su() for p in sites]
        return self._probability(
            lambda st: all(st.get(c) not in RED_ORIENTATIONS for c in cells)
        )

    def dot_density(self, site: XiEta, color: PathColor) -> Fraction:
        wanted = {
            PathColor.RED: RED_ORIENTATIONS,
            PathColor.BLUE: BLUE_ORIENTATIONS,
            PathColor.GREEN: GREEN_ORIENTATIONS,
        }[color]
        cell = site.to_su()
        return self._probability(lambda st: st.get(cell) in wanted)

    def distribution(self) -> list[tuple[dict[SU, Orientation], Fraction]]:
        """Every tiling with its exact probability."""
        return [
            (state, w / self.partition_function)
            for state, w in zip(self.states, self.weights, strict=True)
        ]


def correlation(
    spec: DomainSpec, dominoes: Iterable[Domino], cap: int = DEFAULT_CELL_CAP
) -> Fraction:
    """Weighted fraction of tilings containing all the given dominoes."""
    return TilingOracle(spec, cap).correlation(dominoes)


def red_gap_probability(
    spec: DomainSpec, sites: Iterable[XiEta], cap: int = DEFAULT_CELL_CAP
) -> Fraction:
    """Probability that the sites carry no red dot."""
    return TilingOracle(spec, cap).red_gap_probability(sites)

