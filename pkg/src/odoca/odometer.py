"""Odometers (adding machines) over digit profiles.

An odometer profile S = (s_1, s_2, ...) with every s_k >= 2 defines the group
Z(S) = prod_k Z/s_k with "+1 with carrying": increment the first digit and
propagate overflow rightward.  The same system in inverse-limit form tracks
the partial values w_k = value mod s_1...s_k, where +1 acts coordinatewise.

The multiplicity function, counting how often each prime divides the profile,
is a complete conjugacy invariant; its finitary reduction (m, n) drives the
cellular-automaton embeddings in :mod:`odoca.embedding`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from sympy import factorint, prime as nth_prime

from .periodicity import Periodicity, least_period

__all__ = [
    "Profile",
    "OdometerPoint",
    "InverseLimitPoint",
    "MultiplicityFunction",
    "CanonicalForm",
    "DigitDiagram",
    "primes_profile",
    "parse_profile",
    "format_profile",
    "plus_k",
    "to_inverse_limit",
    "from_inverse_limit",
    "limit_plus_k",
    "multiplicity",
    "canonical_form",
    "conjugate_eq",
    "crt_split_point",
    "crt_join_point",
    "seeded_split_point",
    "seeded_join_point",
    "odometer_spacetime",
]


# ---------- profiles ----------


@dataclass(frozen=True)
class Profile:
    """A digit-size sequence s_1, s_2, ... with every term >= 2.

    Two kinds are supported.  An eventually periodic profile stores a finite
    prefix and a nonempty repeating cycle, and admits exact analysis (its
    multiplicity function and canonical form are computable).  A declared
    profile wraps an arbitrary term rule plus a flag asserting whether the
    terms involve infinitely many primes; it is enough to drive simulation
    and the non-embeddability witness, but not exact invariants.
    """

    prefix: tuple[int, ...] = ()
    cycle: tuple[int, ...] = ()
    term_fn: Callable[[int], int] | None = None
    infinite_prime_support: bool = False

    def __post_init__(self) -> None:
        if (self.term_fn is None) == (not self.cycle):
            raise ValueError("profile needs either a nonempty cycle or a term rule")
        for s in itertools.chain(self.prefix, self.cycle):
            if s < 2:
                raise ValueError(f"profile terms must be >= 2, got {s}")
        if self.term_fn is not None and self.prefix:
            raise ValueError("declared profiles take no prefix")

    # constructors

    @staticmethod
    def eventually_periodic(prefix: tuple[int, ...] | list[int],
                            cycle: tuple[int, ...] | list[int]) -> "Profile":
        return Profile(prefix=tuple(prefix), cycle=tuple(cycle))

    @staticmethod
    def constant(s: int) -> "Profile":
        return Profile(cycle=(s,))

    @staticmethod
    def declared(term_fn: Callable[[int], int], infinite_prime_support: bool) -> "Profile":
        return Profile(term_fn=term_fn, infinite_prime_support=infinite_prime_support)

    # access

    @property
    def is_eventually_periodic(self) -> bool:
        return self.term_fn is None

    def term(self, k: int) -> int:
        """s_k, 1-based."""
        if k < 1:
            raise ValueError("term index is 1-based")
        if self.term_fn is not None:
            s = self.term_fn(k)
            if s < 2:
                raise ValueError(f"declared profile produced invalid term s_{k} = {s}")
            return s
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        return self.cycle[(k - len(self.prefix) - 1) % len(self.cycle)]

    def terms(self, depth: int) -> tuple[int, ...]:
        return tuple(self.term(k) for k in range(1, depth + 1))

    def partial_products(self, depth: int) -> tuple[int, ...]:
        """(s_1, s_1 s_2, ..., s_1...s_depth)."""
        out = []
        acc = 1
        for k in range(1, depth + 1):
            acc *= self.term(k)
            out.append(acc)
        return tuple(out)

    def group_order(self, depth: int) -> int:
        return math.prod(self.terms(depth))


def primes_profile() -> Profile:
    """The profile s_k = k-th prime: 2, 3, 5, 7, ...  Not finitary."""
    return Profile.declared(lambda k: int(nth_prime(k)), infinite_prime_support=True)


def parse_profile(text: str) -> Profile:
    """Parse ``prefix|cycle`` notation, e.g. ``5|6`` or ``|2,3``.

    The token ``primes`` names the profile of consecutive primes.
    """
    text = text.strip()
    if text == "primes":
        return primes_profile()
    if "|" not in text:
        raise ValueError(f"profile {text!r} lacks the prefix|cycle separator")
    left, right = text.split("|", 1)

    def parse_part(part: str) -> tuple[int, ...]:
        part = part.strip()
        if not part:
            return ()
        try:
            return tuple(int(tok) for tok in part.split(","))
        except ValueError:
            raise ValueError(f"bad profile component {part!r}") from None

    prefix, cycle = parse_part(left), parse_part(right)
    if not cycle:
        raise ValueError("profile cycle must be nonempty")
    return Profile.eventually_periodic(prefix, cycle)


def format_profile(profile: Profile) -> str:
    if not profile.is_eventually_periodic:
        return "primes" if profile.infinite_prime_support else "<declared>"
    return "{}|{}".format(
        ",".join(str(s) for s in profile.prefix),
        ",".join(str(s) for s in profile.cycle),
    )


# ---------- points ----------


@dataclass(frozen=True)
class OdometerPoint:
    """A depth-k truncation of a point of Z(S): digits z_1..z_k, least significant first."""

    profile: Profile
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.digits:
            raise ValueError("points need at least one digit")
        for i, z in enumerate(self.digits, start=1):
            s = self.profile.term(i)
            if not 0 <= z < s:
                raise ValueError(f"digit z_{i} = {z} out of range for s_{i} = {s}")

    @property
    def depth(self) -> int:
        return len(self.digits)

    def value(self) -> int:
        """Mixed-radix value sum_i z_i * s_1...s_{i-1}."""
        acc, scale = 0, 1
        for i, z in enumerate(self.digits, start=1):
            acc += z * scale
            scale *= self.profile.term(i)
        return acc

    @staticmethod
    def from_value(profile: Profile, depth: int, value: int) -> "OdometerPoint":
        order = profile.group_order(depth)
        value %= order
        digits = []
        for k in range(1, depth + 1):
            s = profile.term(k)
            digits.append(value % s)
            value //= s
        return OdometerPoint(profile, tuple(digits))

    @staticmethod
    def zero(profile: Profile, depth: int) -> "OdometerPoint":
        return OdometerPoint(profile, (0,) * depth)


def plus_k(pt: OdometerPoint, k: int) -> OdometerPoint:
    """Add k with carrying; wraps modulo s_1...s_depth."""
    return OdometerPoint.from_value(pt.profile, pt.depth, pt.value() + k)


@dataclass(frozen=True)
class InverseLimitPoint:
    """Inverse-limit coordinates w_1..w_k with w_i = value mod s_1...s_i."""

    profile: Profile
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coords:
            raise ValueError("points need at least one coordinate")
        prods = self.profile.partial_products(len(self.coords))
        prev = None
        for i, (w, p) in enumerate(zip(self.coords, prods), start=1):
            if not 0 <= w < p:
                raise ValueError(f"coordinate w_{i} = {w} out of range for modulus {p}")
            if prev is not None and w % prods[i - 2] != prev:
                raise ValueError(
                    f"coordinates violate binding maps: w_{i} = {w} is not "
                    f"congruent to w_{i-1} = {prev} mod {prods[i - 2]}"
                )
            prev = w

    @property
    def depth(self) -> int:
        return len(self.coords)


def to_inverse_limit(pt: OdometerPoint) -> InverseLimitPoint:
    """Digits to inverse-limit coordinates (partial mixed-radix values)."""
    coords = []
    acc, scale = 0, 1
    for i, z in enumerate(pt.digits, start=1):
        acc += z * scale
        scale *= pt.profile.term(i)
        coords.append(acc)
    return InverseLimitPoint(pt.profile, tuple(coords))


def from_inverse_limit(ilp: InverseLimitPoint) -> OdometerPoint:
    """Inverse of :func:`to_inverse_limit`."""
    digits = []
    prev, scale = 0, 1
    for i, w in enumerate(ilp.coords, start=1):
        digits.append((w - prev) // scale)
        prev = w
        scale *= ilp.profile.term(i)
    return OdometerPoint(ilp.profile, tuple(digits))


def limit_plus_k(ilp: InverseLimitPoint, k: int) -> InverseLimitPoint:
    """+k in inverse-limit form: coordinatewise addition mod s_1...s_i."""
    prods = ilp.profile.partial_products(ilp.depth)
    return InverseLimitPoint(
        ilp.profile, tuple((w + k) % p for w, p in zip(ilp.coords, prods))
    )


# ---------- multiplicity and canonical form ----------


@dataclass(frozen=True)
class MultiplicityFunction:
    """Prime -> total multiplicity in the profile, with an explicit infinite part.

    ``finite`` maps primes to positive finite counts, ``infinite`` collects the
    primes dividing the profile infinitely often.  Primes absent from both have
    multiplicity zero.  ``partial`` marks values computed from a finite scan of
    a declared profile, which can never certify infinity.
    """

    finite: Mapping[int, int]
    infinite: frozenset[int]
    partial: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "finite",
            {p: e for p, e in sorted(self.finite.items()) if e > 0 and p not in self.infinite},
        )

    def value(self, p: int) -> int | float:
        if p in self.infinite:
            return math.inf
        return self.finite.get(p, 0)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.finite) | self.infinite

    def same_as(self, other: "MultiplicityFunction") -> bool:
        if self.partial or other.partial:
            raise ValueError("cannot compare partially scanned multiplicity functions")
        return self.finite == other.finite and self.infinite == other.infinite


def multiplicity(profile: Profile, scan_depth: int = 64) -> MultiplicityFunction:
    """Multiplicity function of the profile.

    Exact for eventually periodic profiles: a prime dividing any cycle member
    has multiplicity infinity, and primes confined to the prefix contribute
    their summed exponents.  Declared profiles are scanned ``scan_depth`` terms
    deep and yield a partial (all-finite) answer.
    """
    if profile.is_eventually_periodic:
        finite: dict[int, int] = {}
        for s in profile.prefix:
            for p, e in factorint(s).items():
                finite[p] = finite.get(p, 0) + e
        infinite = frozenset(
            p for s in profile.cycle for p in factorint(s)
        )
        return MultiplicityFunction(finite=finite, infinite=infinite)
    finite = {}
    for s in profile.terms(scan_depth):
        for p, e in factorint(s).items():
            finite[p] = finite.get(p, 0) + e
    return MultiplicityFunction(finite=finite, infinite=frozenset(), partial=True)


def conjugate_eq(a: Profile, b: Profile) -> bool:
    """Whether two eventually periodic profiles define conjugate odometers.

    The multiplicity function is a complete invariant, so this is equality of
    multiplicity functions over the union of their supports.
    """
    if not (a.is_eventually_periodic and b.is_eventually_periodic):
        raise ValueError("conjugacy comparison needs eventually periodic profiles")
    return multiplicity(a).same_as(multiplicity(b))


@dataclass(frozen=True)
class CanonicalForm:
    """The reduced invariant (m, n) of a finitary odometer.

    n is the squarefree product of the primes of infinite multiplicity and m
    collects the finite contributions, so Z(S) is conjugate to Z(m, n, n, ...);
    gcd(m, n) = 1 and any finite multiplicity on a prime of n is absorbed.
    """

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 2:
            raise ValueError("canonical form needs m >= 1 and n >= 2")
        if math.gcd(self.m, self.n) != 1:
            raise ValueError("canonical form needs gcd(m, n) = 1")

    def profile(self) -> Profile:
        if self.m == 1:
            return Profile.constant(self.n)
        return Profile.eventually_periodic((self.m,), (self.n,))


def canonical_form(profile: Profile) -> CanonicalForm:
    """Canonical (m, n) of an eventually periodic profile.

    Declared profiles are rejected: a finite scan of a term rule cannot
    separate large finite multiplicities from infinite ones.
    """
    if not profile.is_eventually_periodic:
        if profile.infinite_prime_support:
            raise ValueError(
                "profile is not finitary: infinitely many primes divide its terms, "
                "so no canonical (m, n) exists (see nonfinitary_witness)"
            )
        raise ValueError(
            "canonical form needs an eventually periodic profile; a declared "
            "term rule cannot certify which primes appear infinitely often"
        )
    mfn = multiplicity(profile)
    n = math.prod(sorted(mfn.infinite))
    m = math.prod(p ** e for p, e in mfn.finite.items())
    return CanonicalForm(m=m, n=n)


# ---------- base-expansion splittings (coprime moduli) ----------


def _validate_constant_profile(pt: OdometerPoint, modulus: int, what: str) -> None:
    if pt.profile.terms(pt.depth) != (modulus,) * pt.depth:
        raise ValueError(f"{what} expects a point over the constant profile ({modulus}, ...)")


def crt_split_point(pt: OdometerPoint, m: int, n: int) -> tuple[OdometerPoint, OdometerPoint]:
    """Split a Z(mn) point of depth k into (Z(m), Z(n)) points of depth k.

    The map sends value v to (v mod m^k, v mod n^k), each re-expanded in its
    base; it sends 1 to (1, 1), is additive, and is a bijection at every depth
    because m^k and n^k are coprime.
    """
    if m < 2 or n < 2 or math.gcd(m, n) != 1:
        raise ValueError("need coprime m, n >= 2")
    _validate_constant_profile(pt, m * n, "crt_split_point")
    k = pt.depth
    v = pt.value()
    return (
        OdometerPoint.from_value(Profile.constant(m), k, v % m**k),
        OdometerPoint.from_value(Profile.constant(n), k, v % n**k),
    )


def crt_join_point(a: OdometerPoint, b: OdometerPoint) -> OdometerPoint:
    """Inverse of :func:`crt_split_point`; depths must agree."""
    if a.depth != b.depth:
        raise ValueError("component depths differ")
    k = a.depth
    m, n = a.profile.term(1), b.profile.term(1)
    _validate_constant_profile(a, m, "crt_join_point")
    _validate_constant_profile(b, n, "crt_join_point")
    if math.gcd(m, n) != 1:
        raise ValueError("need coprime bases")
    mk, nk = m**k, n**k
    v = (a.value() * nk * pow(nk, -1, mk) + b.value() * mk * pow(mk, -1, nk)) % (mk * nk)
    return OdometerPoint.from_value(Profile.constant(m * n), k, v)


def seeded_split_point(pt: OdometerPoint, m: int, n: int) -> tuple[OdometerPoint, OdometerPoint]:
    """Split a Z(s, mn, mn, ...) point of depth k into Z(s, m, m, ...) x Z(n).

    Output depths are (k, k - 1): the first component keeps the seed digit and
    the m-parts, the second collects the n-parts.  Needs depth >= 2.
    """
    if m < 2 or n < 2 or math.gcd(m, n) != 1:
        raise ValueError("need coprime m, n >= 2")
    if pt.depth < 2:
        raise ValueError("seeded split needs depth >= 2")
    s = pt.profile.term(1)
    if math.gcd(s, m * n) != 1:
        raise ValueError("seed modulus must be coprime to m*n")
    if pt.profile.terms(pt.depth) != (s,) + (m * n,) * (pt.depth - 1):
        raise ValueError("seeded split expects a point over (s, mn, mn, ...)")
    k = pt.depth
    v = pt.value()
    left = Profile.eventually_periodic((s,), (m,))
    return (
        OdometerPoint.from_value(left, k, v % (s * m ** (k - 1))),
        OdometerPoint.from_value(Profile.constant(n), k - 1, v % n ** (k - 1)),
    )


def seeded_join_point(a: OdometerPoint, b: OdometerPoint) -> OdometerPoint:
    """Inverse of :func:`seeded_split_point`."""
    if a.depth != b.depth + 1:
        raise ValueError("expected depths (k, k - 1)")
    k = a.depth
    s, m, n = a.profile.term(1), a.profile.term(2), b.profile.term(1)
    _validate_constant_profile(b, n, "seeded_join_point")
    if a.profile.terms(k) != (s,) + (m,) * (k - 1):
        raise ValueError("first component must live over (s, m, m, ...)")
    if math.gcd(m, n) != 1 or math.gcd(s, m * n) != 1:
        raise ValueError("moduli must be pairwise coprime")
    ma, mb = s * m ** (k - 1), n ** (k - 1)
    v = (a.value() * mb * pow(mb, -1, ma) + b.value() * ma * pow(ma, -1, mb)) % (ma * mb)
    joined = Profile.eventually_periodic((s,), (m * n,))
    return OdometerPoint.from_value(joined, k, v)


# ---------- digit space-time diagrams ----------


@dataclass(frozen=True)
class DigitDiagram:
    """Rows of odometer digits under repeated +1, columns indexed by digit position."""

    profile: Profile
    depth: int
    rows: tuple[tuple[int, ...], ...]

    def column(self, i: int) -> tuple[int, ...]:
        """Digit position i, 1-based."""
        if not 1 <= i <= self.depth:
            raise ValueError(f"column {i} out of range 1..{self.depth}")
        return tuple(row[i - 1] for row in self.rows)

    def column_periods(self) -> dict[int, Periodicity | None]:
        return {i: least_period(self.column(i)) for i in range(1, self.depth + 1)}


def odometer_spacetime(profile: Profile, depth: int, steps: int) -> DigitDiagram:
    """Orbit of the zero point under +1, one row per time step.

    Column i cycles with least period s_1...s_i, the fact the witness scan and
    the acceptance checks lean on.
    """
    if depth < 1 or steps < 1:
        raise ValueError("need depth >= 1 and steps >= 1")
    pt = OdometerPoint.zero(profile, depth)
    rows = []
    for _ in range(steps):
        rows.append(pt.digits)
        pt = plus_k(pt, 1)
    return DigitDiagram(profile=profile, depth=depth, rows=tuple(rows))
