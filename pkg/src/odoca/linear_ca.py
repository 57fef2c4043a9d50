"""The additive cellular automaton x_i -> x_i + x_{i+1} mod n.

Configurations are two-sided but finitely described: a constant or lazily
extended left part, an explicit block, and an eventually periodic right tail.
Because the local rule looks only rightward, any cell's whole future is
determined by the cells at and to its right, which keeps every operation here
exact (no truncation effects creep in from the left).

Columns of a space-time diagram are the central objects: their least time
periods grow leftward by controlled factors, and that growth is what the
odometer embeddings in :mod:`odoca.embedding` are built from.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InvariantViolation
from .periodicity import Periodicity, least_period, reduce_block

__all__ = [
    "ConstantFill",
    "LazyLeft",
    "LinearConfig",
    "SpaceTimeDiagram",
    "ColumnPeriod",
    "ColumnPeriodProfile",
    "RightTail",
    "unit_impulse",
    "from_window",
    "materialize_left",
    "window",
    "step",
    "evolve_window",
    "spacetime",
    "binomial_column_oracle",
    "column_period_propagate",
    "period_ladder",
    "first_column_with_period",
    "trace_forward",
    "trace_inverse",
    "t_r_step",
    "periodic_right_tail",
    "extend_left_to_period",
    "configs_equal",
]


# ---------- configurations ----------


@dataclass(frozen=True)
class ConstantFill:
    """Every cell left of the explicit block carries the same digit."""

    digit: int


@dataclass(frozen=True)
class LazyLeft:
    """Left cells produced on demand by a deterministic extender.

    ``extender(cfg, target)`` must return an equivalent configuration whose
    explicit block reaches index ``target`` or further left.  Determinism makes
    repeated materialization consistent: extending to -10 and then -20 yields
    the same digits as extending straight to -20.
    """

    extender: Callable[["LinearConfig", int], "LinearConfig"]


@dataclass(frozen=True)
class LinearConfig:
    """A finitely described two-sided configuration over Z_modulus.

    Cells ``core_start ..`` are explicit: first ``core``, then the right tail
    ``tail_transient`` followed by ``tail_period`` repeating forever.  Cells
    left of ``core_start`` come from ``left``.
    """

    modulus: int
    core_start: int
    core: tuple[int, ...]
    tail_transient: tuple[int, ...]
    tail_period: tuple[int, ...]
    left: ConstantFill | LazyLeft = ConstantFill(0)

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if not self.tail_period:
            raise ValueError("tail period must be nonempty")
        for d in itertools.chain(self.core, self.tail_transient, self.tail_period):
            if not 0 <= d < self.modulus:
                raise ValueError(f"digit {d} out of range for modulus {self.modulus}")
        if isinstance(self.left, ConstantFill) and not 0 <= self.left.digit < self.modulus:
            raise ValueError("left fill digit out of range")

    @property
    def tail_period_start(self) -> int:
        return self.core_start + len(self.core) + len(self.tail_transient)

    def cell(self, i: int) -> int:
        """Digit at cell i; cells left of the explicit block need materializing first."""
        if i >= self.core_start:
            q = i - self.core_start
            if q < len(self.core):
                return self.core[q]
            q -= len(self.core)
            if q < len(self.tail_transient):
                return self.tail_transient[q]
            q -= len(self.tail_transient)
            return self.tail_period[q % len(self.tail_period)]
        if isinstance(self.left, ConstantFill):
            return self.left.digit
        raise ValueError(
            f"cell {i} lies left of the materialized block (starts at {self.core_start}); "
            "use window() or materialize_left()"
        )


def unit_impulse(modulus: int) -> LinearConfig:
    """The seed ...000.1000...: a single 1 at the origin."""
    return LinearConfig(
        modulus=modulus, core_start=0, core=(1,), tail_transient=(), tail_period=(0,)
    )


def from_window(digits: Sequence[int], modulus: int, start: int = 0) -> LinearConfig:
    """Embed a finite digit window into an otherwise-zero configuration."""
    return LinearConfig(
        modulus=modulus,
        core_start=start,
        core=tuple(digits),
        tail_transient=(),
        tail_period=(0,),
    )


def materialize_left(cfg: LinearConfig, target: int) -> LinearConfig:
    """Return an equivalent configuration explicit down to cell ``target``."""
    if isinstance(cfg.left, ConstantFill):
        return cfg
    guard = 0
    while cfg.core_start > target:
        extended = cfg.left.extender(cfg, target)
        if extended.core_start >= cfg.core_start:
            raise InvariantViolation("left extender failed to make progress")
        cfg = extended
        guard += 1
        if guard > 100_000:
            raise InvariantViolation("left extension did not reach its target")
    return cfg


def window(cfg: LinearConfig, lo: int, hi: int) -> tuple[int, ...]:
    """Digits at cells lo..hi inclusive, materializing the left part if needed."""
    if lo > hi:
        raise ValueError("window bounds out of order")
    if isinstance(cfg.left, LazyLeft) and lo < cfg.core_start:
        cfg = materialize_left(cfg, lo)
    return tuple(cfg.cell(i) for i in range(lo, hi + 1))


# ---------- dynamics ----------


def step(cfg: LinearConfig) -> LinearConfig:
    """Exact image of the configuration under one application of the rule."""
    n = cfg.modulus
    if isinstance(cfg.left, LazyLeft):
        # cell i of the image needs source cells i and i + 1, all explicit
        # from the current edge rightward; no extension happens here, so
        # repeated stepping stays cheap.  Cells left of the edge are derived
        # on demand from a deeper view of the source, keeping lazily stepped
        # configurations consistent with the source's cells.
        src = cfg
        lo = cfg.core_start
        original = cfg

        def extender(_current: LinearConfig, target: int) -> LinearConfig:
            return step(materialize_left(original, target - 1))

        left: ConstantFill | LazyLeft = LazyLeft(extender)
    else:
        src = cfg
        lo = src.core_start - 1
        left = ConstantFill((2 * cfg.left.digit) % n)
    ts = src.tail_period_start
    explicit = tuple((src.cell(i) + src.cell(i + 1)) % n for i in range(lo, ts))
    ell = len(src.tail_period)
    period = tuple(
        (src.tail_period[r] + src.tail_period[(r + 1) % ell]) % n for r in range(ell)
    )
    return LinearConfig(
        modulus=n, core_start=lo, core=explicit, tail_transient=(), tail_period=period, left=left
    )


def _fold_rows(base: list[int], steps: int, width: int, modulus: int) -> list[tuple[int, ...]]:
    rows = [tuple(base[:width])]
    work = base
    for _ in range(steps - 1):
        work = [(work[i] + work[i + 1]) % modulus for i in range(len(work) - 1)]
        rows.append(tuple(work[:width]))
    return rows


def evolve_window(cfg: LinearConfig, steps: int, lo: int, hi: int) -> tuple[int, ...]:
    """Cells lo..hi after ``steps`` applications of the rule.

    Computing cell i at time t needs initial cells i..i+t only, so the base
    window lo..hi+steps is pulled once and folded down.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    work = list(window(cfg, lo, hi + steps))
    n = cfg.modulus
    for _ in range(steps):
        work = [(work[i] + work[i + 1]) % n for i in range(len(work) - 1)]
    return tuple(work)


@dataclass(frozen=True)
class SpaceTimeDiagram:
    """Rows of cell digits, row j at time j, restricted to columns i_lo..i_hi."""

    modulus: int
    i_lo: int
    i_hi: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def width(self) -> int:
        return self.i_hi - self.i_lo + 1

    def column(self, i: int) -> tuple[int, ...]:
        if not self.i_lo <= i <= self.i_hi:
            raise ValueError(f"column {i} outside {self.i_lo}..{self.i_hi}")
        return tuple(row[i - self.i_lo] for row in self.rows)

    def column_periods(self) -> dict[int, Periodicity | None]:
        return {i: least_period(self.column(i)) for i in range(self.i_lo, self.i_hi + 1)}


def spacetime(cfg: LinearConfig, i_lo: int, i_hi: int, steps: int) -> SpaceTimeDiagram:
    """Simulate ``steps`` rows over columns i_lo..i_hi, exactly."""
    if i_lo > i_hi:
        raise ValueError("window bounds out of order")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    width = i_hi - i_lo + 1
    base = list(window(cfg, i_lo, i_hi + steps - 1))
    rows = _fold_rows(base, steps, width, cfg.modulus)
    return SpaceTimeDiagram(modulus=cfg.modulus, i_lo=i_lo, i_hi=i_hi, rows=tuple(rows))


def binomial_column_oracle(n: int, i: int, j: int) -> int:
    """Digit at column -i, time j for the unit impulse seed: C(j, i) mod n."""
    if i < 0 or j < 0:
        raise ValueError("need i >= 0 and j >= 0")
    return math.comb(j, i) % n


# ---------- column periods ----------


def column_period_propagate(
    block: Sequence[int], c: int, n: int
) -> tuple[int, tuple[int, ...]]:
    """Least period and block of the column one cell to the left.

    ``block`` is one least period of a purely periodic column; ``c`` is the
    left neighbor's digit at time 0.  The left column accumulates running sums
    of the block, so its least period is len(block) times the additive order
    of sum(block) in Z_n, i.e. times n / gcd(n, sigma).
    """
    block = tuple(d % n for d in block)
    if reduce_block(block) != block:
        raise ValueError("block must be a least period")
    sigma = sum(block) % n
    order = n // math.gcd(n, sigma)
    out = []
    a = c % n
    for j in range(len(block) * order):
        out.append(a)
        a = (a + block[j % len(block)]) % n
    return len(block) * order, tuple(out)


def _right_edge_column(cfg: LinearConfig, max_steps: int = 8192) -> tuple[int, tuple[int, ...]]:
    """(cell index, least-period block) of the leftmost tail-period column.

    Valid when the one-sided point from that cell is purely periodic in time,
    which holds exactly when iterating the rule on one spatial period block
    returns to the initial block.  A rho-shaped orbit (transient before the
    cycle) violates the precondition and raises.
    """
    start = cfg.tail_period_start
    block = tuple(cfg.tail_period)
    ell = len(block)
    seen = {block: 0}
    temporal = []
    state = block
    n = cfg.modulus
    for t in range(1, max_steps + 1):
        temporal.append(state[0])
        state = tuple((state[r] + state[(r + 1) % ell]) % n for r in range(ell))
        if state in seen:
            if seen[state] != 0:
                raise ValueError(
                    "right tail is not purely periodic in time; its orbit has a transient"
                )
            return start, reduce_block(temporal)
        seen[state] = t
    raise ValueError("right tail column period not found within the step limit")


@dataclass(frozen=True)
class ColumnPeriod:
    column: int
    period: int
    block: tuple[int, ...]


@dataclass(frozen=True)
class ColumnPeriodProfile:
    """Exact least periods of columns, walking leftward from the right tail."""

    modulus: int
    edge: ColumnPeriod
    entries: tuple[ColumnPeriod, ...]

    def period_of(self, column: int) -> int:
        if column == self.edge.column:
            return self.edge.period
        for entry in self.entries:
            if entry.column == column:
                return entry.period
        raise KeyError(column)


def _ladder_steps(cfg: LinearConfig):
    """Yield ColumnPeriod entries leftward from the tail edge, forever.

    Materializes lazy left parts as it walks; the caller bounds the walk.
    """
    edge_col, block = _right_edge_column(cfg)
    period = len(block)
    col = edge_col
    yield ColumnPeriod(column=col, period=period, block=block)
    while True:
        col -= 1
        if isinstance(cfg.left, LazyLeft) and col < cfg.core_start:
            cfg = materialize_left(cfg, col - 8)
        c = cfg.cell(col)
        period, block = column_period_propagate(block, c, cfg.modulus)
        yield ColumnPeriod(column=col, period=period, block=block)


def period_ladder(cfg: LinearConfig, depth: int) -> ColumnPeriodProfile:
    """Least periods of the ``depth`` columns left of the right-tail edge.

    Exact: the edge column's period comes from iterating the tail block until
    it recurs, and each leftward column follows by period propagation.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    walk = _ladder_steps(cfg)
    edge = next(walk)
    entries = tuple(itertools.islice(walk, depth))
    return ColumnPeriodProfile(modulus=cfg.modulus, edge=edge, entries=entries)


def first_column_with_period(
    cfg: LinearConfig, target: int, max_columns: int = 4096
) -> ColumnPeriod:
    """Rightmost column whose least period equals ``target``.

    Walks leftward from the tail edge; periods are nondecreasing leftward, so
    the first hit is the rightmost.  Raises if the ladder jumps past ``target``
    or fails to reach it within ``max_columns`` columns.
    """
    for entry in itertools.islice(_ladder_steps(cfg), max_columns + 1):
        if entry.period == target:
            return entry
        if entry.period > target:
            raise ValueError(
                f"column periods jumped from below {target} to {entry.period} "
                f"at column {entry.column}"
            )
    raise ValueError(f"no column of period {target} within {max_columns} columns")


# ---------- trace conjugacy with the one-sided shift ----------


def trace_forward(prefix: Sequence[int], n: int) -> tuple[int, ...]:
    """Temporal word at cell 0 of the one-sided dynamics: y_j = sum_k C(j,k) x_k.

    A length-L spatial prefix determines the first L trace values.
    """
    x = [d % n for d in prefix]
    return tuple(
        sum(math.comb(j, k) * x[k] for k in range(j + 1)) % n for j in range(len(x))
    )


def trace_inverse(word: Sequence[int], n: int) -> tuple[int, ...]:
    """Spatial prefix whose trace is ``word``: x_i = sum_k (-1)^(i-k) C(i,k) y_k."""
    y = [d % n for d in word]
    return tuple(
        sum((-1) ** (i - k) * math.comb(i, k) * y[k] for k in range(i + 1)) % n
        for i in range(len(y))
    )


def t_r_step(prefix: Sequence[int], n: int) -> tuple[int, ...]:
    """One-sided rule application; the result is one cell shorter."""
    return tuple((prefix[i] + prefix[i + 1]) % n for i in range(len(prefix) - 1))


@dataclass(frozen=True)
class RightTail:
    """Exact spatial description of a one-sided point: transient then period."""

    transient: tuple[int, ...]
    period: tuple[int, ...]

    def digit(self, i: int) -> int:
        if i < 0:
            raise ValueError("tail cells are indexed from 0")
        if i < len(self.transient):
            return self.transient[i]
        return self.period[(i - len(self.transient)) % len(self.period)]


def periodic_right_tail(m: int, n: int) -> RightTail:
    """The one-sided point of least temporal period m, described spatially.

    Built by inverting the trace of the word 0^(m-1) 1 repeated, the canonical
    temporal word of least shift period m.  The spatial form is eventually
    periodic because cells obey the linear recurrence forced by returning to
    itself after m steps.
    """
    if m < 1 or n < 2:
        raise ValueError("need m >= 1 and n >= 2")
    if m == 1:
        return RightTail(transient=(1,), period=(0,))
    word = [0] * (m - 1) + [1]
    digits = list(trace_inverse([word[j % m] for j in range(m)], n))
    # cells from index 1 satisfy x_{i+m} = -sum_{k=1}^{m-1} C(m,k) x_{i+k}
    coeffs = [math.comb(m, k) % n for k in range(1, m)]
    state = tuple(digits[1:m])
    seen = {state: 0}
    states = [state]
    while True:
        nxt_digit = (-sum(c * d for c, d in zip(coeffs, state))) % n
        state = state[1:] + (nxt_digit,)
        if state in seen:
            t0, t1 = seen[state], len(states)
            break
        seen[state] = len(states)
        states.append(state)
    tail_digits = [digits[0]] + [s[0] for s in states] + list(states[-1][1:])
    transient = tuple(tail_digits[: t0 + 1])
    period = reduce_block(tuple(tail_digits[t0 + 1 : t1 + 1]))
    # absorb a transient tail cell into the period when it already fits the pattern
    while transient and transient[-1] == period[-1]:
        period = (period[-1],) + period[:-1]
        transient = transient[:-1]
    return RightTail(transient=transient, period=period)


# ---------- left extension with growing column periods ----------


def _leftmost_column_state(cfg: LinearConfig) -> ColumnPeriod:
    """Ladder state at the leftmost explicit cell (or the tail edge if lefter)."""
    last = None
    for entry in _ladder_steps(cfg):
        last = entry
        if entry.column <= cfg.core_start:
            return entry
    raise AssertionError("unreachable")


def _propagate_through(
    state: ColumnPeriod, digits: Sequence[int], n: int
) -> ColumnPeriod:
    """Extend the ladder through explicit digits; digits[0] is the leftmost cell."""
    period, block = state.period, state.block
    col = state.column
    for d in reversed(digits):
        col -= 1
        period, block = column_period_propagate(block, d, n)
    return ColumnPeriod(column=col, period=period, block=block)


def _extension_round(cfg: LinearConfig, search_len: int = 3) -> LinearConfig:
    """Prepend the first digit tuple (shortest, then lexicographic) that raises
    the leftmost column's least period; if none of length <= search_len does,
    prepend a single 0 (the stall is digit-independent and resolves later).
    """
    n = cfg.modulus
    state = _leftmost_column_state(cfg)
    best: tuple[int, ...] | None = None
    for length in range(1, search_len + 1):
        for tup in itertools.product(range(n), repeat=length):
            if _propagate_through(state, tup, n).period > state.period:
                best = tup
                break
        if best is not None:
            break
    chosen = best if best is not None else (0,)
    return dataclasses.replace(
        cfg, core_start=cfg.core_start - len(chosen), core=tuple(chosen) + cfg.core
    )


def extend_left_to_period(cfg: LinearConfig, target_period: int) -> LinearConfig:
    """Extend the configuration leftward until some column's least period
    reaches ``target_period``.

    Rounds search digit tuples of length up to 3 for a strict period increase.
    Stretches where no short tuple helps are genuine stalls (the next column's
    period is then independent of the new digit), so the round pads with a 0;
    a stall longer than the current period would contradict the counting bound
    on periodic points and trips an internal error instead of looping.
    """
    if target_period < 1:
        raise ValueError("target period must be >= 1")
    stall = 0
    while True:
        state = _leftmost_column_state(cfg)
        if state.period >= target_period:
            return cfg
        before = state.period
        cfg = _extension_round(cfg)
        after = _leftmost_column_state(cfg).period
        if after > before:
            stall = 0
        else:
            stall += 1
            if stall > before + 3:
                raise InvariantViolation(
                    f"column period stalled at {before} for {stall} columns; "
                    "this contradicts the periodic-point count"
                )


def growth_extender(cfg: LinearConfig, target: int) -> LinearConfig:
    """LazyLeft extender: run extension rounds until cell ``target`` is explicit."""
    guard = 0
    while cfg.core_start > target:
        cfg = _extension_round(cfg)
        guard += 1
        if guard > 100_000:
            raise InvariantViolation("extension rounds failed to reach the target cell")
    return cfg


# ---------- equality ----------


def configs_equal(a: LinearConfig, b: LinearConfig) -> bool:
    """Exact equality of two constant-fill configurations.

    Agreement is checked on the explicit parts plus one full lcm of the tail
    periods, which together with equal fills pins both infinite sequences.
    """
    if not isinstance(a.left, ConstantFill) or not isinstance(b.left, ConstantFill):
        raise ValueError("equality needs constant-fill configurations")
    if a.modulus != b.modulus or a.left.digit != b.left.digit:
        return False
    lo = min(a.core_start, b.core_start)
    right = max(a.tail_period_start, b.tail_period_start)
    hi = right + math.lcm(len(a.tail_period), len(b.tail_period)) + 1
    return window(a, lo, hi) == window(b, lo, hi)
