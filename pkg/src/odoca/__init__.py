"""Odometers, additive cellular automata, and embeddings between them.

The package has five working parts.  ``odometer`` holds digit-size
profiles, +1 with carrying in digit and inverse-limit form, and the
multiplicity-function invariant with its canonical form.  ``linear_ca``
simulates the rule x_i <- x_i + x_{i+1} mod n exactly on eventually
periodic configurations and analyzes column periods.  ``glider_ca`` is
the bouncing-particle automaton and its odometer conjugacy.
``embedding`` assembles per-prime seeds into a full encode/decode pair
over Z_n together with verification harnesses.  ``cli`` exposes all of
it as the ``odoca`` command.
"""

from .errors import InvariantViolation, OffOrbitError
from .odometer import (
    CanonicalForm,
    DigitDiagram,
    InverseLimitPoint,
    MultiplicityFunction,
    OdometerPoint,
    Profile,
    canonical_form,
    conjugate_eq,
    crt_join_point,
    crt_split_point,
    format_profile,
    from_inverse_limit,
    limit_plus_k,
    multiplicity,
    odometer_spacetime,
    parse_profile,
    plus_k,
    primes_profile,
    seeded_join_point,
    seeded_split_point,
    to_inverse_limit,
)
from .periodicity import CONFIRMATIONS, Periodicity, least_period, reduce_block
from .linear_ca import (
    ColumnPeriod,
    ColumnPeriodProfile,
    ConstantFill,
    LazyLeft,
    LinearConfig,
    RightTail,
    SpaceTimeDiagram,
    binomial_column_oracle,
    column_period_propagate,
    configs_equal,
    evolve_window,
    extend_left_to_period,
    first_column_with_period,
    from_window,
    growth_extender,
    materialize_left,
    period_ladder,
    periodic_right_tail,
    spacetime,
    step,
    t_r_step,
    trace_forward,
    trace_inverse,
    unit_impulse,
    window,
)
from .glider_ca import (
    EMPTY,
    EVEN_CASE,
    LEFT,
    ODD_CASE,
    RIGHT,
    WALL,
    GliderConfig,
    GliderDiagram,
    GliderSeed,
    build_glider_seed,
    decode_glider,
    encode_glider,
    gap_bounds,
    glider_spacetime,
    glider_step,
    step_symbols,
)
from .embedding import (
    ColumnSupport,
    EmbeddingHandle,
    PrimeComponentSeed,
    RoundTripReport,
    WitnessReport,
    build_prime_seed,
    column_prime_support,
    component_orbit_table,
    crt_config_join,
    crt_config_split,
    decode_prime,
    default_component_window,
    embed_odometer,
    encode_prime,
    nonfinitary_witness,
    verify_roundtrip,
)

__version__ = "0.1.0"
