import random

import pytest

from odoca.errors import OffOrbitError
from odoca.glider_ca import (
    EMPTY,
    EVEN_CASE,
    LEFT,
    ODD_CASE,
    RIGHT,
    GliderConfig,
    build_glider_seed,
    decode_glider,
    encode_glider,
    gap_bounds,
    glider_spacetime,
    glider_step,
    step_symbols,
)
from odoca.odometer import (
    OdometerPoint,
    Profile,
    limit_plus_k,
    parse_profile,
    to_inverse_limit,
)
from odoca.periodicity import least_period


def all_points(profile, depth):
    for value in range(profile.group_order(depth)):
        yield to_inverse_limit(OdometerPoint.from_value(profile, depth, value))


# ---------- configurations and symbols ----------


def test_config_validation():
    with pytest.raises(ValueError):
        GliderConfig((), (), ())
    with pytest.raises(ValueError):
        GliderConfig((2,), (2,), (RIGHT,))
    with pytest.raises(ValueError):
        GliderConfig((2,), (0,), ("X",))
    with pytest.raises(ValueError):
        GliderConfig((0,), (0,), (RIGHT,))


def test_phase_roundtrip_exhaustive():
    for w in range(1, 5):
        for ph in range(2 * w):
            cfg = GliderConfig.from_phases((w,), (ph,))
            assert cfg.phases() == (ph,)


def test_phase_range_validated():
    with pytest.raises(ValueError):
        GliderConfig.from_phases((2,), (4,))


def test_symbols_roundtrip():
    cfg = GliderConfig((1, 3, 2), (0, 1, 1), (RIGHT, LEFT, RIGHT))
    symbols = cfg.to_symbols()
    assert symbols == tuple("WRW.L.W.RW")
    assert GliderConfig.from_symbols(symbols) == cfg


@pytest.mark.parametrize(
    "text",
    [
        "WRW.W",  # second gap empty
        "WRLW",  # two particles in one gap
        "RW",  # missing leading wall
        "WR",  # missing trailing wall
        "WWRW",  # zero-width gap
        "WxW",  # unknown symbol
    ],
)
def test_from_symbols_rejects_malformed(text):
    with pytest.raises(ValueError):
        GliderConfig.from_symbols(tuple(text))


def test_gap_bounds():
    assert gap_bounds((1, 3, 2)) == ((1, 2), (3, 6), (7, 9))


# ---------- dynamics ----------


def test_width_one_gap_cycle():
    cfg = GliderConfig((1,), (0,), (RIGHT,))
    seen = ["".join(cfg.to_symbols())]
    for _ in range(2):
        cfg = glider_step(cfg)
        seen.append("".join(cfg.to_symbols()))
    assert seen == ["WRW", "WLW", "WRW"]


def test_width_two_gap_cycle():
    cfg = GliderConfig((2,), (0,), (RIGHT,))
    seen = ["".join(cfg.to_symbols())]
    for _ in range(4):
        cfg = glider_step(cfg)
        seen.append("".join(cfg.to_symbols()))
    assert seen == ["WR.W", "W.RW", "W.LW", "WL.W", "WR.W"]


def test_phase_law_all_small_gaps():
    for w in range(1, 13):
        for start in range(2 * w):
            cfg = GliderConfig.from_phases((w,), (start,))
            for k in range(4 * w):
                assert cfg.phases() == ((start + k) % (2 * w),)
                cfg = glider_step(cfg)


def test_symbol_rule_matches_phase_stepping():
    rng = random.Random(27)
    for _ in range(50):
        widths = tuple(rng.randrange(1, 6) for _ in range(rng.randrange(1, 4)))
        phases = tuple(rng.randrange(2 * w) for w in widths)
        cfg = GliderConfig.from_phases(widths, phases)
        assert step_symbols(cfg.to_symbols()) == glider_step(cfg).to_symbols()


def test_walls_never_move():
    cfg = GliderConfig((2, 4), (1, 2), (LEFT, RIGHT))
    walls = [i for i, s in enumerate(cfg.to_symbols()) if s == "W"]
    for _ in range(10):
        cfg = glider_step(cfg)
        assert [i for i, s in enumerate(cfg.to_symbols()) if s == "W"] == walls


# ---------- seeds ----------


def test_seed_even_case():
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    assert seed.case == EVEN_CASE
    assert seed.config.widths == (1, 3)
    assert seed.config.positions == (0, 0)
    assert set(seed.config.directions) == {RIGHT}


def test_seed_odd_case():
    seed = build_glider_seed(Profile.eventually_periodic((3, 5), (5,)), 2)
    assert seed.case == ODD_CASE
    assert seed.config.widths == (3, 15)


def test_seed_reorders_first_even_term_to_front():
    seed = build_glider_seed(Profile.eventually_periodic((3, 2), (2,)), 2)
    assert seed.case == EVEN_CASE
    assert seed.profile.terms(2) == (2, 3)
    assert seed.config.widths == (1, 3)


def test_seed_rejects_nonpositive_gaps():
    with pytest.raises(ValueError):
        build_glider_seed(Profile.constant(2), 0)


# ---------- encode / decode ----------


def test_decode_even_after_five_steps():
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    cfg = seed.config
    for _ in range(5):
        cfg = glider_step(cfg)
    assert decode_glider(cfg, seed.case).coords == (1, 5)


def test_decode_odd_after_four_double_steps():
    seed = build_glider_seed(Profile.eventually_periodic((3, 5), (5,)), 2)
    cfg = seed.config
    for _ in range(8):
        cfg = glider_step(cfg)
    assert decode_glider(cfg, seed.case).coords == (1, 4)


def test_decode_seed_is_zero():
    for profile, gaps in ((parse_profile("|2,3"), 2), (parse_profile("3|5"), 2)):
        seed = build_glider_seed(profile, gaps)
        assert decode_glider(seed.config, seed.case).coords == (0,) * gaps


def test_odd_case_odd_phase_is_off_orbit():
    seed = build_glider_seed(Profile.eventually_periodic((3, 5), (5,)), 2)
    with pytest.raises(OffOrbitError):
        decode_glider(glider_step(seed.config), seed.case)


def test_decode_rejects_unmatched_widths():
    cfg = GliderConfig((2, 5), (0, 0), (RIGHT, RIGHT))
    with pytest.raises(ValueError):
        decode_glider(cfg, EVEN_CASE)


def test_incompatible_phases_are_off_orbit():
    # gap phases (1, 0) violate the binding map z_2 mod 2 = z_1
    cfg = GliderConfig.from_phases((1, 3), (1, 0))
    with pytest.raises(OffOrbitError):
        decode_glider(cfg, EVEN_CASE)


def test_encode_checks_case_against_terms():
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    point = next(all_points(seed.profile, 2))
    with pytest.raises(ValueError):
        encode_glider(point, ODD_CASE)


@pytest.mark.parametrize("case", [EVEN_CASE, ODD_CASE])
def test_unknown_case_tag_rejected(case):
    with pytest.raises(ValueError):
        decode_glider(GliderConfig((1,), (0,), (RIGHT,)), "both")


def test_roundtrip_even_exhaustive():
    seed = build_glider_seed(Profile.eventually_periodic((2, 3, 4), (4,)), 3)
    for point in all_points(seed.profile, 3):
        assert decode_glider(encode_glider(point, seed.case), seed.case) == point


def test_roundtrip_odd_exhaustive():
    seed = build_glider_seed(Profile.eventually_periodic((3, 5), (5,)), 2)
    for point in all_points(seed.profile, 2):
        assert decode_glider(encode_glider(point, seed.case), seed.case) == point


def test_conjugacy_square_even():
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    for point in all_points(seed.profile, 2):
        stepped = glider_step(encode_glider(point, seed.case))
        assert decode_glider(stepped, seed.case) == limit_plus_k(point, 1)


def test_conjugacy_square_odd_double_step():
    seed = build_glider_seed(Profile.eventually_periodic((3, 5), (5,)), 2)
    for point in all_points(seed.profile, 2):
        stepped = glider_step(glider_step(encode_glider(point, seed.case)))
        assert decode_glider(stepped, seed.case) == limit_plus_k(point, 1)


# ---------- diagrams ----------


def test_spacetime_row_count_and_first_row():
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    diagram = glider_spacetime(seed.config, 7)
    assert len(diagram.rows) == 7
    assert diagram.rows[0] == seed.config.to_symbols()


def test_even_case_gap_columns_have_partial_product_periods():
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    diagram = glider_spacetime(seed.config, 30)
    found = diagram.column_periods()
    for gap, (start, stop) in enumerate(gap_bounds(seed.config.widths)):
        want = seed.profile.group_order(gap + 1)
        assert max(found[i].period for i in range(start, stop)) == want


def test_odd_case_gap_columns_have_doubled_periods():
    seed = build_glider_seed(Profile.eventually_periodic((3, 5), (5,)), 2)
    diagram = glider_spacetime(seed.config, 150)
    found = diagram.column_periods()
    for gap, (start, stop) in enumerate(gap_bounds(seed.config.widths)):
        want = 2 * seed.profile.group_order(gap + 1)
        assert max(found[i].period for i in range(start, stop)) == want
