"""Domain models for skew-Aztec rectangle tilings."""

from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import DomainError

# default colour of each domino orientation
DEFAULT_PALETTE = {
    "HL": "#2e8b57",
    "VU": "#d62728",
    "HR": "#f2c80f",
    "VD": "#1f5fbf",
}


class Orientation(StrEnum):
    """Domino orientation, named by where the blue square sits in the domino."""

    HL = "HL"
    HR = "HR"
    VU = "VU"
    VD = "VD"

    @property
    def is_vertical(self) -> bool:
        """Whether the domino carries the vertical weight a."""
        return self in (Orientation.VU, Orientation.VD)

    @property
    def dual(self) -> "Orientation":
        """Orientation under the 180 degree relabelling H_L<->H_R, V_U<->V_D."""
        return _DUAL[self]


_DUAL = {
    Orientation.HL: Orientation.HR,
    Orientation.HR: Orientation.HL,
    Orientation.VU: Orientation.VD,
    Orientation.VD: Orientation.VU,
}


class TilingCase(StrEnum):
    """Which of the two tilability regimes a domain falls in."""

    CASE1 = "Case1"
    CASE2 = "Case2"
    NONE = "None"


class PathColor(StrEnum):
    """Colour of a decorated path system / point process."""

    RED = "red"
    BLUE = "blue"
    GREEN = "green"


@dataclass(frozen=True, order=True, slots=True)
class XiEta:
    """Point in the (xi, eta) system; blue centres have xi even, eta odd."""

    xi: int
    eta: int

    def to_su(self) -> "SU":
        """Convert to the (s, u) system without range checks."""
        return SU(self.eta + 1, (self.eta + 1 - self.xi) // 2)


@dataclass(frozen=True, order=True, slots=True)
class SU:
    """Point in the (s, u) system; blue cells sit on even s, white on odd s."""

    s: int
    u: int

    def to_xi_eta(self) -> XiEta:
        """Convert to the (xi, eta) system without range checks."""
        return XiEta(self.s - 2 * self.u, self.s - 1)

    @property
    def is_blue(self) -> bool:
        return self.s % 2 == 0


Coord = XiEta | SU


class DomainSpec(BaseModel):
    """The skew-Aztec rectangle (n, m, M) with vertical-domino weight a."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int
    m: int
    M: int
    a: float = 1.0

    @model_validator(mode="after")
    def check_parameters(self) -> "DomainSpec":
        """Reject parameters outside n >= 1, m >= 0, M >= 1, 0 < a <= 1."""
        if self.n < 1 or self.m < 0 or self.M < 1:
            raise DomainError(
                f"Need n >= 1, m >= 0, M >= 1; got n={self.n}, m={self.m}, M={self.M}"
            )
        if not 0.0 < self.a <= 1.0:
            raise DomainError(f"Vertical weight must lie in (0, 1]; got a={self.a}")
        return self

    @property
    def width(self) -> int:
        """Number of cells per full row, m + M."""
        return self.m + self.M

    @property
    def delta(self) -> int:
        return self.n - self.m

    @property
    def sigma(self) -> int:
        """Overlap measure n - M + delta + 1."""
        return self.n - self.M + self.delta + 1

    @property
    def kappa(self) -> int:
        return max(0, -self.delta)

    @property
    def rho(self) -> int:
        """Width of the strip, |m - (M - 1)|."""
        return abs(self.m - (self.M - 1))

    @property
    def r(self) -> int:
        """Minimal number of red dots per strip line."""
        return max(self.n - (self.M - 1), self.n - self.m)

    @property
    def case(self) -> TilingCase:
        if 1 <= self.M <= min(self.m, self.n + 1):
            return TilingCase.CASE1
        if 0 <= self.m <= min(self.M - 1, self.n):
            return TilingCase.CASE2
        return TilingCase.NONE

    def with_weight(self, a: float) -> "DomainSpec":
        """Same domain with another vertical weight."""
        return DomainSpec(n=self.n, m=self.m, M=self.M, a=a)


class DerivedParams(BaseModel):
    """Derived integers of a skew-Aztec rectangle."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    delta: int
    sigma: int
    kappa: int
    rho: int
    r: int


class TilabilityVerdict(BaseModel):
    """Outcome of the tilability criterion."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tilable: bool
    case: TilingCase
    rho: int
    r: int


@dataclass(frozen=True, order=True, slots=True)
class Domino:
    """A domino anchored at its blue square."""

    anchor: XiEta
    orientation: Orientation

    @property
    def is_vertical(self) -> bool:
        return self.orientation.is_vertical


@dataclass(frozen=True)
class Tiling:
    """A complete domino cover of a skew-Aztec rectangle."""

    spec: DomainSpec
    dominoes: frozenset[Domino]

    @cached_property
    def orientations(self) -> dict[SU, Orientation]:
        """Orientation of the domino covering each blue cell."""
        return {d.anchor.to_su(): d.orientation for d in self.dominoes}

    def orientation_at(self, blue: SU) -> Orientation:
        try:
            return self.orientations[blue]
        except KeyError as e:
            raise DomainError(f"No domino anchored at blue cell {blue}") from e

    @property
    def vertical_count(self) -> int:
        return sum(1 for d in self.dominoes if d.is_vertical)

    def sorted_dominoes(self) -> list[Domino]:
        """Dominoes in the stable (eta, xi) order used by serialization."""
        return sorted(self.dominoes, key=lambda d: (d.anchor.eta, d.anchor.xi))


@dataclass(frozen=True)
class PathSystem:
    """Non-intersecting lattice paths of one colour."""

    color: PathColor
    paths: tuple[tuple[Coord, ...], ...]

    def __len__(self) -> int:
        return len(self.paths)


@dataclass(frozen=True)
class DotProcess:
    """A configuration of dots of one colour."""

    color: PathColor
    dots: frozenset[XiEta]

    def count_on_line(self, xi: int) -> int:
        return sum(1 for d in self.dots if d.xi == xi)

    def count_on_row(self, eta: int) -> int:
        return sum(1 for d in self.dots if d.eta == eta)


@dataclass(frozen=True)
class KernelValue:
    """A kernel evaluation with its quadrature error estimate."""

    value: complex
    err_estimate: float = 0.0
    terms: tuple[complex, ...] = ()

    @property
    def real(self) -> float:
        return self.value.real


class TacnodeParams(BaseModel):
    """Geometric parameters (r, rho) and the weight scaling beta."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    r: int = Field(ge=0)
    rho: int = Field(ge=0)
    beta: float = 0.0


class TacnodePoint(BaseModel):
    """Point (tau, y) of the discrete-continuous tacnode scaling."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tau: int
    y: float


class ChainConfig(BaseModel):
    """Run length and seeding of a flip chain."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    steps: int
    burn_in: int = 0
    seed: int = 0
    report_every: int = 0

    @model_validator(mode="after")
    def check_lengths(self) -> "ChainConfig":
        if not self.steps >= self.burn_in >= 0:
            raise ValueError(
                f"Need steps >= burn_in >= 0; got steps={self.steps}, "
                f"burn_in={self.burn_in}"
            )
        return self


class RenderStyle(BaseModel):
    """Colours and scale of the SVG rendering."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    palette: dict[Orientation, str] = Field(
        default_factory=lambda: {Orientation(k): v for k, v in DEFAULT_PALETTE.items()}
    )
    cell_px: int = Field(default=8, ge=1)
    draw_paths: frozenset[PathColor] = frozenset()

    @field_validator("palette")
    @classmethod
    def check_palette(cls, v: dict[Orientation, str]) -> dict[Orientation, str]:
        """Require one distinct colour per orientation."""
        if set(v) != set(Orientation) or len(set(v.values())) != len(Orientation):
            raise ValueError("Palette needs four distinct colours, one per orientation")
        return v
