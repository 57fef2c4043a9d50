"""Gliders bouncing between reflecting walls.

The automaton lives on the alphabet {W, L, R, .}: stationary walls, a
left moving particle, a right moving particle, and empty space.  Walls
carve the line into gaps, each holding exactly one particle that travels
back and forth and reverses direction in place when it hits a wall.  A
gap of width w cycles with least period 2w, so a ladder of gap widths
built from partial products of a digit-size profile makes the whole
configuration track an odometer.

Two flavors of the construction exist.  If some profile term is even,
one even term is moved to the front and gap i gets width (s_1...s_i)/2;
the single-step dynamics then matches +1 exactly.  If every term is odd
the widths are the full partial products and the conjugacy holds for the
double-step map instead, with odometer coordinates read off as half
phases.  Configurations with an odd phase in the odd case are not on the
tracked orbit and decoding them raises OffOrbitError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import OffOrbitError
from .odometer import InverseLimitPoint, Profile
from .periodicity import Periodicity, least_period

__all__ = [
    "WALL",
    "LEFT",
    "RIGHT",
    "EMPTY",
    "EVEN_CASE",
    "ODD_CASE",
    "GliderConfig",
    "GliderSeed",
    "glider_step",
    "step_symbols",
    "build_glider_seed",
    "decode_glider",
    "encode_glider",
    "gap_bounds",
    "GliderDiagram",
    "glider_spacetime",
]

WALL = "W"
LEFT = "L"
RIGHT = "R"
EMPTY = "."

EVEN_CASE = "even"
ODD_CASE = "odd"


@dataclass(frozen=True)
class GliderConfig:
    """A finite strip of gaps, one bouncing particle per gap.

    The structured form (widths, positions, directions) is primary; the
    symbol array with walls at both ends and between gaps is derived
    from it and parses back losslessly.
    """

    widths: tuple[int, ...]
    positions: tuple[int, ...]
    directions: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.widths:
            raise ValueError("a configuration needs at least one gap")
        if not (len(self.widths) == len(self.positions) == len(self.directions)):
            raise ValueError("widths, positions and directions must align")
        for i, (w, q, d) in enumerate(
            zip(self.widths, self.positions, self.directions), start=1
        ):
            if w < 1:
                raise ValueError(f"gap {i} has width {w}, need >= 1")
            if not 0 <= q < w:
                raise ValueError(f"particle position {q} outside gap {i} of width {w}")
            if d not in (LEFT, RIGHT):
                raise ValueError(f"direction must be {LEFT!r} or {RIGHT!r}, got {d!r}")

    @property
    def gap_count(self) -> int:
        return len(self.widths)

    def phases(self) -> tuple[int, ...]:
        """Per-gap phase in [0, 2w): position while moving right, reflected
        to 2w - 1 - position while moving left."""
        return tuple(
            q if d == RIGHT else 2 * w - 1 - q
            for w, q, d in zip(self.widths, self.positions, self.directions)
        )

    @staticmethod
    def from_phases(widths: Sequence[int], phases: Sequence[int]) -> "GliderConfig":
        if len(widths) != len(phases):
            raise ValueError("widths and phases must align")
        positions = []
        directions = []
        for w, ph in zip(widths, phases):
            if not 0 <= ph < 2 * w:
                raise ValueError(f"phase {ph} out of range for gap of width {w}")
            if ph < w:
                positions.append(ph)
                directions.append(RIGHT)
            else:
                positions.append(2 * w - 1 - ph)
                directions.append(LEFT)
        return GliderConfig(tuple(widths), tuple(positions), tuple(directions))

    def to_symbols(self) -> tuple[str, ...]:
        out = [WALL]
        for w, q, d in zip(self.widths, self.positions, self.directions):
            row = [EMPTY] * w
            row[q] = d
            out.extend(row)
            out.append(WALL)
        return tuple(out)

    @staticmethod
    def from_symbols(symbols: Sequence[str]) -> "GliderConfig":
        syms = tuple(symbols)
        if not syms or syms[0] != WALL or syms[-1] != WALL:
            raise ValueError("symbol array must start and end with a wall")
        widths = []
        positions = []
        directions = []
        gap: list[str] = []
        for s in syms[1:]:
            if s == WALL:
                particles = [(i, c) for i, c in enumerate(gap) if c in (LEFT, RIGHT)]
                if len(gap) == 0:
                    raise ValueError("gap of width 0 between adjacent walls")
                if len(particles) != 1:
                    raise ValueError(
                        f"gap must hold exactly one particle, found {len(particles)}"
                    )
                q, d = particles[0]
                widths.append(len(gap))
                positions.append(q)
                directions.append(d)
                gap = []
            elif s in (LEFT, RIGHT, EMPTY):
                gap.append(s)
            else:
                raise ValueError(f"unknown symbol {s!r}")
        if gap:
            raise ValueError("symbol array must end with a wall")
        return GliderConfig(tuple(widths), tuple(positions), tuple(directions))


def glider_step(cfg: GliderConfig) -> GliderConfig:
    """One synchronous step: every gap phase advances by 1 mod 2w."""
    return GliderConfig.from_phases(
        cfg.widths, tuple((ph + 1) % (2 * w) for w, ph in zip(cfg.widths, cfg.phases()))
    )


def step_symbols(symbols: Sequence[str]) -> tuple[str, ...]:
    """The same step as a radius-1 rule on raw symbols.

    Walls never move.  A particle with empty space ahead moves into it;
    a particle against a wall turns around without moving.  Inputs are
    assumed to satisfy the one-particle-per-gap invariant, which rules
    out collisions the local rule would otherwise have to arbitrate.
    """
    syms = tuple(symbols)

    def at(i: int) -> str:
        return syms[i] if 0 <= i < len(syms) else WALL

    out = []
    for i, c in enumerate(syms):
        if c == WALL:
            out.append(WALL)
        elif c == RIGHT:
            out.append(LEFT if at(i + 1) == WALL else EMPTY)
        elif c == LEFT:
            out.append(RIGHT if at(i - 1) == WALL else EMPTY)
        else:
            if at(i - 1) == RIGHT:
                out.append(RIGHT)
            elif at(i + 1) == LEFT:
                out.append(LEFT)
            else:
                out.append(EMPTY)
    return tuple(out)


class GliderSeed(NamedTuple):
    """A freshly built embedding seed plus the bookkeeping needed to read
    odometer coordinates back out of its orbit."""

    config: GliderConfig
    case: str
    profile: Profile


def _nominal_profile(terms: Sequence[int]) -> Profile:
    # Only the first len(terms) coordinates of any point built over this
    # profile are ever used; the constant continuation just keeps the
    # term sequence total.
    return Profile.eventually_periodic(tuple(terms), (terms[-1],))


def build_glider_seed(profile: Profile, gaps: int) -> GliderSeed:
    """Lay out ``gaps`` gaps whose widths encode the profile's partial
    products, with every particle at the extreme left moving right.

    If any of the first ``gaps`` terms is even, the first such term is
    moved to the front (the remaining terms keep their order) and the
    widths are halved partial products.  With all terms odd the widths
    are the partial products themselves and the seed is tagged for
    double-step dynamics.
    """
    if gaps <= 0:
        raise ValueError("need at least one gap")
    terms = list(profile.terms(gaps))
    first_even = next((i for i, s in enumerate(terms) if s % 2 == 0), None)
    if first_even is None:
        case = ODD_CASE
        effective = tuple(terms)
        widths = tuple(math.prod(effective[: i + 1]) for i in range(gaps))
    else:
        case = EVEN_CASE
        effective = (terms[first_even],) + tuple(
            s for i, s in enumerate(terms) if i != first_even
        )
        widths = tuple(math.prod(effective[: i + 1]) // 2 for i in range(gaps))
    config = GliderConfig(widths, (0,) * gaps, (RIGHT,) * gaps)
    return GliderSeed(config, case, _nominal_profile(effective))


def _terms_from_widths(widths: Sequence[int], case: str) -> tuple[int, ...]:
    terms = [2 * widths[0] if case == EVEN_CASE else widths[0]]
    for prev, cur in zip(widths, widths[1:]):
        if cur % prev != 0 or cur // prev < 2:
            raise ValueError(f"gap widths {tuple(widths)} do not match a seed layout")
        terms.append(cur // prev)
    if case == ODD_CASE and any(s % 2 == 0 for s in terms):
        raise ValueError("widths imply an even term, which contradicts the odd case")
    if terms[0] < 2:
        raise ValueError(f"gap widths {tuple(widths)} do not match a seed layout")
    return tuple(terms)


def decode_glider(cfg: GliderConfig, case: str) -> InverseLimitPoint:
    """Read inverse-limit coordinates off a configuration.

    Even case: coordinate i is gap i's phase, valued mod s_1...s_i.  Odd
    case: phases on the tracked orbit are even (the dynamics is the
    double step) and coordinate i is half the phase.  Configurations off
    the orbit raise OffOrbitError.
    """
    if case not in (EVEN_CASE, ODD_CASE):
        raise ValueError(f"unknown case tag {case!r}")
    terms = _terms_from_widths(cfg.widths, case)
    phases = cfg.phases()
    if case == ODD_CASE:
        for i, ph in enumerate(phases, start=1):
            if ph % 2 != 0:
                raise OffOrbitError(
                    f"gap {i} has odd phase {ph}; the configuration is not on "
                    f"the tracked double-step orbit"
                )
        coords = tuple(ph // 2 for ph in phases)
    else:
        coords = phases
    try:
        return InverseLimitPoint(_nominal_profile(terms), coords)
    except ValueError as exc:
        raise OffOrbitError(f"phases are not odometer compatible: {exc}") from exc


def encode_glider(ilp: InverseLimitPoint, case: str) -> GliderConfig:
    """Inverse of :func:`decode_glider` on the seed's orbit."""
    if case not in (EVEN_CASE, ODD_CASE):
        raise ValueError(f"unknown case tag {case!r}")
    terms = ilp.profile.terms(ilp.depth)
    if case == EVEN_CASE:
        if terms[0] % 2 != 0:
            raise ValueError("even case needs an even first term")
        widths = tuple(math.prod(terms[: i + 1]) // 2 for i in range(ilp.depth))
        phases = ilp.coords
    else:
        if any(s % 2 == 0 for s in terms):
            raise ValueError("odd case needs all terms odd")
        widths = tuple(math.prod(terms[: i + 1]) for i in range(ilp.depth))
        phases = tuple(2 * z for z in ilp.coords)
    return GliderConfig.from_phases(widths, phases)


def gap_bounds(widths: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Half-open (start, stop) index ranges of each gap in the symbol
    array produced by :meth:`GliderConfig.to_symbols`."""
    bounds = []
    start = 1
    for w in widths:
        bounds.append((start, start + w))
        start += w + 1
    return tuple(bounds)


@dataclass(frozen=True)
class GliderDiagram:
    """Symbol rows, top row first; row t is the configuration after t steps."""

    rows: tuple[tuple[str, ...], ...]

    @property
    def width(self) -> int:
        return len(self.rows[0])

    def column(self, i: int) -> tuple[str, ...]:
        return tuple(row[i] for row in self.rows)

    def column_periods(self) -> dict[int, Periodicity | None]:
        return {i: least_period(self.column(i)) for i in range(self.width)}


def glider_spacetime(cfg: GliderConfig, steps: int) -> GliderDiagram:
    """Simulate ``steps`` rows, row t holding the configuration after t steps."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rows = []
    cur = cfg
    for _ in range(steps):
        rows.append(cur.to_symbols())
        cur = glider_step(cur)
    return GliderDiagram(tuple(rows))
