"""Embedding odometers into the additive cellular automaton.

The pipeline: reduce the profile to its canonical pair (m, n) with n the
squarefree product of the primes that occur infinitely often, factor
n = q_1 q_2 ... q_r, embed one odometer component per prime (the whole
auxiliary period m rides with q_1), and glue the component configurations
cellwise with the Chinese remainder theorem into a single configuration
over Z_n.  Decoding inverts the chain: split cellwise, match each
component window against a precomputed orbit table, and recombine the
step counts.

The orbit tables double as a runtime uniqueness proof.  Each table maps
a component's window snapshot back to the step count that produced it,
and its size is asserted to equal the component's group order, so any
window too narrow to separate the orbit trips InvariantViolation rather
than decoding wrong.

Window calibration note: the component window must reach exactly as far
left as the first column whose least time period equals the component's
group order.  Stopping short loses injectivity, and reaching further
left picks up columns with strictly larger periods, which breaks the
wraparound step of the conjugacy (the configuration after order many
steps no longer matches the seed on the window).  Both failure modes
were observed in simulation; the ladder walk below finds the right
boundary instead of trusting a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from sympy import isprime, primefactors

from .errors import InvariantViolation, OffOrbitError
from .linear_ca import (
    ColumnPeriod,
    ConstantFill,
    LazyLeft,
    LinearConfig,
    first_column_with_period,
    growth_extender,
    materialize_left,
    periodic_right_tail,
    step,
    unit_impulse,
    window,
)
from .odometer import CanonicalForm, Profile, canonical_form

__all__ = [
    "PrimeComponentSeed",
    "build_prime_seed",
    "encode_prime",
    "decode_prime",
    "default_component_window",
    "component_orbit_table",
    "crt_config_split",
    "crt_config_join",
    "EmbeddingHandle",
    "embed_odometer",
    "RoundTripReport",
    "verify_roundtrip",
    "ColumnSupport",
    "column_prime_support",
    "WitnessReport",
    "nonfinitary_witness",
]


# ---------- per-prime components ----------


@dataclass(frozen=True)
class PrimeComponentSeed:
    """Seed configuration for one prime component.

    With aux_period m = 1 the seed is the unit impulse and step counts
    enumerate plain base-p digits.  With m > 1 the seed's right tail has
    least temporal period m under the one-sided dynamics and the left
    part grows lazily as deeper digits demand larger column periods; the
    step count for digits (z_1, z_2, ..., z_k) is z_1 + m * (z_2 + z_3 p
    + ... + z_k p^(k-2)), the orbit-order enumeration.
    """

    prime: int
    aux_period: int
    config: LinearConfig

    def order(self, depth: int) -> int:
        """Group order of the depth-digit quotient this seed addresses."""
        if depth < 1:
            raise ValueError("depth must be >= 1")
        if self.aux_period == 1:
            return self.prime**depth
        return self.aux_period * self.prime ** (depth - 1)

    def digit_sizes(self, depth: int) -> tuple[int, ...]:
        if self.aux_period == 1:
            return (self.prime,) * depth
        return (self.aux_period,) + (self.prime,) * (depth - 1)

    def step_count(self, digits: Sequence[int]) -> int:
        """N such that the digits label T^N(seed) on the tracked orbit."""
        sizes = self.digit_sizes(len(digits))
        for i, (z, s) in enumerate(zip(digits, sizes), start=1):
            if not 0 <= z < s:
                raise ValueError(f"digit z_{i} = {z} out of range for size {s}")
        if self.aux_period == 1:
            return sum(z * self.prime**i for i, z in enumerate(digits))
        rest = sum(z * self.prime**i for i, z in enumerate(digits[1:]))
        return digits[0] + self.aux_period * rest

    def digits_of(self, count: int, depth: int) -> tuple[int, ...]:
        """Inverse of :meth:`step_count` at the given depth."""
        if not 0 <= count < self.order(depth):
            raise ValueError(f"step count {count} outside the depth-{depth} orbit")
        out = []
        if self.aux_period > 1:
            out.append(count % self.aux_period)
            count //= self.aux_period
            depth -= 1
        for _ in range(depth):
            out.append(count % self.prime)
            count //= self.prime
        return tuple(out)


def build_prime_seed(p: int, m: int = 1) -> PrimeComponentSeed:
    """Seed whose orbit closure carries the odometer with digit sizes
    (m, p, p, ...), or plain (p, p, ...) when m = 1."""
    if not isprime(p):
        raise ValueError(f"modulus {p} is not prime")
    if m < 1:
        raise ValueError("auxiliary period must be >= 1")
    if m % p == 0:
        raise ValueError(f"auxiliary period {m} must not be divisible by {p}")
    if m == 1:
        return PrimeComponentSeed(prime=p, aux_period=1, config=unit_impulse(p))
    tail = periodic_right_tail(m, p)
    config = LinearConfig(
        modulus=p,
        core_start=0,
        core=(),
        tail_transient=tail.transient,
        tail_period=tail.period,
        left=LazyLeft(growth_extender),
    )
    return PrimeComponentSeed(prime=p, aux_period=m, config=config)


def default_component_window(seed: PrimeComponentSeed, depth: int) -> tuple[int, int]:
    """Calibrated cell range (lo, hi), inclusive, for depth-digit decoding.

    The left edge is the rightmost column whose least period equals the
    group order, found by walking the period ladder.  The right edge
    covers the tail transient plus one full spatial period.
    """
    order = seed.order(depth)
    edge = first_column_with_period(seed.config, order)
    return edge.column, seed.aux_period + 1


def encode_prime(
    seed: PrimeComponentSeed, digits: Sequence[int], cells: tuple[int, int] | None = None
) -> tuple[int, ...]:
    """Cells lo..hi of T^N(seed) where N is the step count of the digits."""
    count = seed.step_count(digits)
    lo, hi = cells if cells is not None else default_component_window(seed, len(digits))
    cfg = seed.config
    for _ in range(count):
        cfg = step(cfg)
    return window(cfg, lo, hi)


def component_orbit_table(
    seed: PrimeComponentSeed, depth: int, cells: tuple[int, int] | None = None
) -> dict[tuple[int, ...], int]:
    """Window snapshot of T^N(seed) -> N, for every N below the group order.

    Doubles as the decode oracle and as the injectivity assertion: a
    window that fails to separate the orbit produces colliding keys and
    a short table, which is reported as an internal error.
    """
    order = seed.order(depth)
    lo, hi = cells if cells is not None else default_component_window(seed, depth)
    table: dict[tuple[int, ...], int] = {}
    cfg = seed.config
    for count in range(order):
        table.setdefault(window(cfg, lo, hi), count)
        cfg = step(cfg)
    if len(table) != order:
        raise InvariantViolation(
            f"window {lo}..{hi} does not separate the orbit: "
            f"{len(table)} distinct snapshots for order {order}"
        )
    return table


def decode_prime(
    seed: PrimeComponentSeed,
    snapshot: Sequence[int],
    depth: int,
    cells: tuple[int, int] | None = None,
) -> tuple[int, ...]:
    """Digits of the unique on-orbit step count matching the snapshot.

    Brute-force orbit matching: the snapshot is compared against every
    T^N(seed) window below the group order.
    """
    table = component_orbit_table(seed, depth, cells)
    count = table.get(tuple(snapshot))
    if count is None:
        raise OffOrbitError("snapshot does not match any point of the tracked orbit")
    return seed.digits_of(count, depth)


# ---------- cellwise CRT on configurations ----------


def _crt_pair(a: int, b: int, m: int, n: int) -> int:
    # unique value in [0, mn) congruent to a mod m and b mod n
    return (a + m * ((b - a) * pow(m, -1, n) % n)) % (m * n)


def crt_config_split(cfg: LinearConfig, m: int, n: int) -> tuple[LinearConfig, LinearConfig]:
    """Cellwise residues of a configuration over Z_(mn), as configurations
    over Z_m and Z_n.  Splitting commutes with the dynamics."""
    if m < 2 or n < 2:
        raise ValueError("moduli must be >= 2")
    if m * n != cfg.modulus:
        raise ValueError(f"configuration modulus {cfg.modulus} is not {m}*{n}")
    if math.gcd(m, n) != 1:
        raise ValueError(f"moduli {m} and {n} are not coprime")

    def part(modulus: int) -> LinearConfig:
        if isinstance(cfg.left, ConstantFill):
            left: ConstantFill | LazyLeft = ConstantFill(cfg.left.digit % modulus)
        else:

            def extender(_cur: LinearConfig, target: int, _mod=modulus) -> LinearConfig:
                materialized = materialize_left(cfg, target)
                return crt_config_split(materialized, m, n)[0 if _mod == m else 1]

            left = LazyLeft(extender)
        return LinearConfig(
            modulus=modulus,
            core_start=cfg.core_start,
            core=tuple(d % modulus for d in cfg.core),
            tail_transient=tuple(d % modulus for d in cfg.tail_transient),
            tail_period=tuple(d % modulus for d in cfg.tail_period),
            left=left,
        )

    return part(m), part(n)


def crt_config_join(a: LinearConfig, b: LinearConfig) -> LinearConfig:
    """Inverse of :func:`crt_config_split`: combine residue configurations
    over coprime moduli into one over the product modulus."""
    m, n = a.modulus, b.modulus
    if math.gcd(m, n) != 1:
        raise ValueError(f"moduli {m} and {n} are not coprime")
    core_start = min(a.core_start, b.core_start)
    a = materialize_left(a, core_start)
    b = materialize_left(b, core_start)
    if isinstance(a.left, ConstantFill) and isinstance(b.left, ConstantFill):
        left: ConstantFill | LazyLeft = ConstantFill(_crt_pair(a.left.digit, b.left.digit, m, n))
    else:
        frozen_a, frozen_b = a, b

        def extender(_cur: LinearConfig, target: int) -> LinearConfig:
            return crt_config_join(
                materialize_left(frozen_a, target), materialize_left(frozen_b, target)
            )

        left = LazyLeft(extender)
    # explicit through both transients, so the joined tail is purely periodic
    explicit_end = max(a.tail_period_start, b.tail_period_start)
    la, lb = len(a.tail_period), len(b.tail_period)
    period_len = math.lcm(la, lb)
    core = tuple(
        _crt_pair(a.cell(i), b.cell(i), m, n) for i in range(core_start, explicit_end)
    )
    period = tuple(
        _crt_pair(
            a.tail_period[(explicit_end + r - a.tail_period_start) % la],
            b.tail_period[(explicit_end + r - b.tail_period_start) % lb],
            m,
            n,
        )
        for r in range(period_len)
    )
    return LinearConfig(
        modulus=m * n,
        core_start=core_start,
        core=core,
        tail_transient=(),
        tail_period=period,
        left=left,
    )


# ---------- whole-odometer embedding ----------


@dataclass(frozen=True)
class _Component:
    """One prime's share of the embedding at a fixed depth."""

    seed: PrimeComponentSeed
    depth: int
    order: int
    cells: tuple[int, int]
    configs: tuple[LinearConfig, ...]
    lookup: Mapping[tuple[int, ...], int]


def _truncate_left(cfg: LinearConfig, floor: int) -> LinearConfig:
    """Materialize down to ``floor`` and zero-fill beyond.

    Cell i at time t depends on initial cells i..i+t only, so cells left
    of the floor never influence cells at or right of it; the truncation
    is exact on the retained range for all forward time.
    """
    cfg = materialize_left(cfg, floor)
    if isinstance(cfg.left, ConstantFill):
        return cfg
    return LinearConfig(
        modulus=cfg.modulus,
        core_start=cfg.core_start,
        core=cfg.core,
        tail_transient=cfg.tail_transient,
        tail_period=cfg.tail_period,
        left=ConstantFill(0),
    )


def _build_component(
    p: int, m: int, depth: int, floor: int | None = None
) -> _Component:
    seed = build_prime_seed(p, m)
    order = seed.order(depth)
    cells = default_component_window(seed, depth)
    base = _truncate_left(seed.config, floor if floor is not None else cells[0])
    configs = [base]
    for _ in range(order - 1):
        configs.append(step(configs[-1]))
    lookup: dict[tuple[int, ...], int] = {}
    for count, cfg in enumerate(configs):
        lookup.setdefault(window(cfg, cells[0], cells[1]), count)
    if len(lookup) != order:
        raise InvariantViolation(
            f"window {cells[0]}..{cells[1]} does not separate the orbit of "
            f"(p={p}, m={m}) at depth {depth}"
        )
    return _Component(
        seed=seed, depth=depth, order=order, cells=cells,
        configs=tuple(configs), lookup=lookup,
    )


@dataclass(frozen=True)
class EmbeddingHandle:
    """A ready-to-use embedding of the depth-k quotient of an odometer
    into the additive automaton over Z_n.

    encode(v) returns the configuration representing v; configurations
    are exact on cells >= cells[0] and zero-filled further left, which
    no decoding or stepping inside the window can observe.  decode is
    the two-sided inverse on the encoded orbit and raises OffOrbitError
    on configurations outside it.
    """

    profile: Profile
    canonical: CanonicalForm
    depth: int
    modulus: int
    total_order: int
    cells: tuple[int, int]
    components: tuple[_Component, ...]

    def encode(self, value: int) -> LinearConfig:
        if not 0 <= value < self.total_order:
            raise ValueError(f"value {value} outside [0, {self.total_order})")
        parts = [comp.configs[value % comp.order] for comp in self.components]
        joined = parts[0]
        for part in parts[1:]:
            joined = crt_config_join(joined, part)
        return joined

    def decode(self, cfg: LinearConfig) -> int:
        if cfg.modulus != self.modulus:
            raise ValueError(f"expected a configuration over Z_{self.modulus}")
        residue = 0
        modulus = 1
        for comp in self.components:
            lo, hi = comp.cells
            snapshot = tuple(d % comp.seed.prime for d in window(cfg, lo, hi))
            count = comp.lookup.get(snapshot)
            if count is None:
                raise OffOrbitError(
                    f"cells {lo}..{hi} do not match the (p={comp.seed.prime}, "
                    f"m={comp.seed.aux_period}) component orbit"
                )
            residue = _crt_pair(residue, count, modulus, comp.order)
            modulus *= comp.order
        return residue


def embed_odometer(
    profile: Profile, depth: int, cells: tuple[int, int] | None = None
) -> EmbeddingHandle:
    """Assemble the embedding of Z/(m * n^depth) with +1 into T_n.

    The profile must be eventually periodic; its canonical pair (m, n)
    fixes n as the composite alphabet and m as the auxiliary period
    attached to the smallest prime factor of n.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not profile.is_eventually_periodic:
        if profile.infinite_prime_support:
            raise ValueError(
                "the profile's terms involve infinitely many primes, so its "
                "odometer is not finitary and embeds in no T_n; see "
                "nonfinitary_witness for a per-prime certificate"
            )
        raise ValueError(
            "embedding needs exact multiplicity data, which a term rule "
            "cannot provide; restate the profile in eventually periodic form"
        )
    canon = canonical_form(profile)
    m, n = canon.m, canon.n
    primes = [int(q) for q in primefactors(n)]
    specs = [(primes[0], m, depth + 1 if m > 1 else depth)]
    specs += [(q, 1, depth) for q in primes[1:]]
    # per-component calibrated windows, then one shared floor for joining
    seeds = [build_prime_seed(p, aux) for p, aux, _ in specs]
    windows = [
        default_component_window(seed, d) for seed, (_, _, d) in zip(seeds, specs)
    ]
    lo = min(w[0] for w in windows)
    hi = max(w[1] for w in windows)
    if cells is not None:
        if cells[0] > lo or cells[1] < hi:
            raise ValueError(
                f"requested cells {cells[0]}..{cells[1]} do not cover the "
                f"calibrated range {lo}..{hi}"
            )
        lo, hi = cells
    components = tuple(
        _build_component(p, aux, d, floor=lo) for p, aux, d in specs
    )
    total = math.prod(comp.order for comp in components)
    if total != m * n**depth:
        raise InvariantViolation("component orders do not multiply to m * n^depth")
    return EmbeddingHandle(
        profile=profile,
        canonical=canon,
        depth=depth,
        modulus=n,
        total_order=total,
        cells=(lo, hi),
        components=components,
    )


# ---------- verification harnesses ----------


@dataclass(frozen=True)
class RoundTripReport:
    ok: int
    fail: int
    failures: tuple[int, ...]

    def summary(self) -> str:
        return f"ROUNDTRIP ok={self.ok} fail={self.fail}"


def verify_roundtrip(handle: EmbeddingHandle, bound: int) -> RoundTripReport:
    """Check decode(encode(v)) = v and the conjugacy square
    decode(step(encode(v))) = v + 1 for every v below the bound."""
    if not 1 <= bound <= handle.total_order:
        raise ValueError(f"bound must be in 1..{handle.total_order}")
    failures = []
    for value in range(bound):
        cfg = handle.encode(value)
        good = handle.decode(cfg) == value
        good = good and handle.decode(step(cfg)) == (value + 1) % handle.total_order
        if not good:
            failures.append(value)
    return RoundTripReport(
        ok=bound - len(failures), fail=len(failures), failures=tuple(failures)
    )


@dataclass(frozen=True)
class ColumnSupport:
    """Primes dividing detected column least periods, plus the columns
    whose period the detector could not confirm."""

    primes: frozenset[int]
    undetermined: tuple[int, ...]


def column_prime_support(diagram) -> ColumnSupport:
    """Union of prime factors of the diagram's detected column periods.

    Works on any diagram exposing column_periods().  Columns without a
    confirmed least period are excluded from the union and reported.
    """
    primes: set[int] = set()
    undetermined = []
    for column, found in sorted(diagram.column_periods().items()):
        if found is None:
            undetermined.append(column)
        else:
            primes.update(int(q) for q in primefactors(found.period))
    return ColumnSupport(primes=frozenset(primes), undetermined=tuple(undetermined))


@dataclass(frozen=True)
class WitnessReport:
    """Certificate that a profile's odometer cannot embed into T_n.

    The witness is a prime p dividing the k-th term but neither n nor
    any earlier term.  Column k of the odometer's digit diagram then has
    least period divisible by p, while in any diagram over Z_n every
    column period only involves primes of n and of periods already
    present to its right; a fresh p certifies the mismatch.
    """

    modulus: int
    depth: int
    prime: int | None = None
    index: int | None = None

    @property
    def found(self) -> bool:
        return self.prime is not None

    def summary(self) -> str:
        if self.found:
            return f"WITNESS p={self.prime} k={self.index}"
        return f"NO WITNESS depth={self.depth}"


def nonfinitary_witness(profile: Profile, n: int, depth: int) -> WitnessReport:
    """Scan the first ``depth`` terms for a prime outside both n and all
    earlier terms."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    seen: set[int] = set()
    for k in range(1, depth + 1):
        term = profile.term(k)
        for q in primefactors(term):
            q = int(q)
            if n % q != 0 and q not in seen:
                return WitnessReport(modulus=n, depth=depth, prime=q, index=k)
        seen.update(int(q) for q in primefactors(term))
    return WitnessReport(modulus=n, depth=depth)
