import pytest

from odoca import cli
from odoca.cli import main, parse_seed_spec, parse_window
from odoca.embedding import RoundTripReport, embed_odometer
from odoca.errors import InvariantViolation
from odoca.glider_ca import build_glider_seed, glider_spacetime
from odoca.linear_ca import (
    ConstantFill,
    LazyLeft,
    configs_equal,
    period_ladder,
    periodic_right_tail,
    spacetime,
    unit_impulse,
)
from odoca.odometer import parse_profile
from odoca.render import (
    digit_rows_pgm,
    digit_rows_text,
    symbol_rows_pgm,
    symbol_rows_text,
)


# ---------- flag parsing helpers ----------


def test_parse_window_forms():
    assert parse_window("-16..2") == (-16, 2)
    assert parse_window("3..5") == (3, 5)
    assert parse_window(" -4..-1 ") == (-4, -1)


@pytest.mark.parametrize("text", ["5..1", "abc", "1..2..3", "1..", "..2"])
def test_parse_window_rejects(text):
    with pytest.raises(ValueError):
        parse_window(text)


def test_seed_spec_impulse_alias():
    assert configs_equal(parse_seed_spec("x-bar", 3), unit_impulse(3))
    assert configs_equal(parse_seed_spec("impulse", 3), unit_impulse(3))


def test_seed_spec_periodic():
    cfg = parse_seed_spec("periodic:3", 2)
    tail = periodic_right_tail(3, 2)
    assert isinstance(cfg.left, LazyLeft)
    assert (cfg.tail_transient, cfg.tail_period) == (tail.transient, tail.period)


def test_seed_spec_explicit():
    cfg = parse_seed_spec("0|101||", 2)
    assert isinstance(cfg.left, ConstantFill)
    assert cfg.left.digit == 0
    assert (cfg.core_start, cfg.core) == (0, (1, 0, 1))
    assert cfg.tail_period == (0,)


@pytest.mark.parametrize(
    "text",
    ["periodic:x", "periodic:0", "0|1", "00|1||", "0|9||", "bogus"],
)
def test_seed_spec_rejects(text):
    with pytest.raises(ValueError):
        parse_seed_spec(text, 2)


# ---------- subcommands are thin adapters ----------


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_simulate_linear_matches_library(capsys):
    code, out, err = run(
        capsys,
        "simulate-linear",
        "--modulus=2",
        "--seed-spec=x-bar",
        "--window=-6..0",
        "--steps=8",
    )
    want = digit_rows_text(spacetime(unit_impulse(2), -6, 0, 8).rows)
    assert (code, err) == (0, "")
    assert out == want


def test_simulate_linear_impulse_alias_is_identical(capsys):
    _, first, _ = run(
        capsys, "simulate-linear", "--modulus=3", "--seed-spec=x-bar",
        "--window=-4..0", "--steps=9",
    )
    _, second, _ = run(
        capsys, "simulate-linear", "--modulus=3", "--seed-spec=impulse",
        "--window=-4..0", "--steps=9",
    )
    assert first == second


def test_simulate_linear_pgm_out(tmp_path, capsys):
    target = tmp_path / "diagram.pgm"
    code, out, err = run(
        capsys,
        "simulate-linear",
        "--modulus=2",
        "--seed-spec=x-bar",
        "--window=-7..0",
        "--steps=8",
        "--format=pgm",
        f"--out={target}",
    )
    assert (code, out, err) == (0, "", "")
    data = target.read_bytes()
    assert data.startswith(b"P5\n8 8\n255\n")
    assert data == digit_rows_pgm(spacetime(unit_impulse(2), -7, 0, 8).rows, 2)


def test_simulate_glider_matches_library(capsys):
    code, out, err = run(
        capsys, "simulate-glider", "--profile=|2,3", "--depth=2", "--steps=6"
    )
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    want = symbol_rows_text(glider_spacetime(seed.config, 6).rows)
    assert (code, err) == (0, "")
    assert out == want


def test_simulate_glider_pgm_out(tmp_path, capsys):
    target = tmp_path / "glider.pgm"
    code, out, _ = run(
        capsys,
        "simulate-glider",
        "--profile=|2,3",
        "--depth=2",
        "--steps=6",
        "--format=pgm",
        f"--out={target}",
    )
    assert (code, out) == (0, "")
    seed = build_glider_seed(parse_profile("|2,3"), 2)
    assert target.read_bytes() == symbol_rows_pgm(glider_spacetime(seed.config, 6).rows)


def test_analyze_periods_matches_library(capsys):
    code, out, err = run(
        capsys,
        "analyze-periods",
        "--modulus=2",
        "--seed-spec=x-bar",
        "--depth=5",
    )
    ladder = period_ladder(unit_impulse(2), 5)
    want = [f"column {ladder.edge.column}: least period {ladder.edge.period}"]
    want += [f"column {e.column}: least period {e.period}" for e in ladder.entries]
    assert (code, err) == (0, "")
    assert out == "\n".join(want) + "\n"


def test_embed_summary(capsys):
    code, out, err = run(capsys, "embed", "--profile=|2,3", "--depth=2")
    handle = embed_odometer(parse_profile("|2,3"), 2)
    lo, hi = handle.cells
    assert (code, err) == (0, "")
    lines = out.splitlines()
    assert lines[0] == "canonical m=1 n=6"
    assert lines[1] == "modulus 6"
    assert lines[2] == "order 36"
    assert lines[3] == f"cells {lo}..{hi}"
    assert len(lines) == 6
    assert lines[4].startswith("component p=2 m=1 depth=2 order=4")
    assert lines[5].startswith("component p=3 m=1 depth=2 order=9")


def test_roundtrip_success(capsys):
    code, out, err = run(capsys, "roundtrip", "--profile=|2,3", "--depth=1")
    assert (code, err) == (0, "")
    assert out == "ROUNDTRIP ok=6 fail=0\n"


def test_roundtrip_bound_flag(capsys):
    code, out, _ = run(
        capsys, "roundtrip", "--profile=|2,3", "--depth=2", "--bound=10"
    )
    assert code == 0
    assert out == "ROUNDTRIP ok=10 fail=0\n"


def test_roundtrip_failure_exits_two(capsys, monkeypatch):
    fake = RoundTripReport(ok=4, fail=2, failures=(3, 5))
    monkeypatch.setattr(cli, "verify_roundtrip", lambda handle, bound: fake)
    code, out, err = run(capsys, "roundtrip", "--profile=|2,3", "--depth=1")
    assert code == 2
    assert out == "ROUNDTRIP ok=4 fail=2\nfailing values: 3, 5\n"


def test_invariant_violation_exits_two(capsys, monkeypatch):
    def boom(profile, depth, cells=None):
        raise InvariantViolation("window does not separate the orbit")

    monkeypatch.setattr(cli, "embed_odometer", boom)
    code, out, err = run(capsys, "embed", "--profile=|2,3", "--depth=1")
    assert (code, out) == (2, "")
    assert err.startswith("error:")


def test_witness_found(capsys):
    code, out, err = run(capsys, "witness", "--profile=primes", "--modulus=6")
    assert (code, out, err) == (0, "WITNESS p=5 k=3\n", "")


def test_witness_absent(capsys):
    code, out, _ = run(
        capsys, "witness", "--profile=|2,3", "--modulus=6", "--depth=5"
    )
    assert (code, out) == (0, "NO WITNESS depth=5\n")


def test_odometer_info_eventually_periodic(capsys):
    code, out, err = run(capsys, "odometer-info", "--profile=5|6", "--depth=4")
    assert (code, err) == (0, "")
    assert out.splitlines() == [
        "profile 5|6",
        "canonical m=5 n=6",
        "multiplicity 2 -> inf; 3 -> inf; 5 -> 1",
        "depth 4 terms 5,6,6,6",
        "group order 1080",
    ]


def test_odometer_info_declared_profile(capsys):
    code, out, _ = run(capsys, "odometer-info", "--profile=primes", "--depth=3")
    assert code == 0
    assert "canonical unavailable for declared profiles" in out
    assert "multiplicity (scan, lower bounds)" in out


def test_odometer_info_column_periods(capsys):
    code, out, _ = run(
        capsys, "odometer-info", "--profile=2,3,2|2", "--depth=3", "--steps=60"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[-3:] == [
        "column 1: least period 2",
        "column 2: least period 6",
        "column 3: least period 12",
    ]


def test_odometer_info_undetermined_column(capsys):
    code, out, _ = run(
        capsys, "odometer-info", "--profile=|97", "--depth=2", "--steps=30"
    )
    assert code == 0
    assert "column 1: undetermined within 30 steps" in out


# ---------- exit codes ----------


def test_bad_profile_exits_one(capsys):
    code, out, err = run(capsys, "odometer-info", "--profile=zzz")
    assert (code, out) == (1, "")
    assert err.startswith("error:")


def test_bad_window_exits_one(capsys):
    code, _, err = run(
        capsys,
        "simulate-linear",
        "--modulus=2",
        "--seed-spec=x-bar",
        "--window=2..-2",
        "--steps=4",
    )
    assert code == 1
    assert err.startswith("error:")


def test_window_not_covering_calibrated_range_exits_one(capsys):
    code, _, err = run(
        capsys, "embed", "--profile=|2,3", "--depth=2", "--window=-1..1"
    )
    assert code == 1
    assert "calibrated range" in err


def test_missing_flag_exits_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate-linear", "--modulus=2"])
    assert info.value.code == 1
    assert capsys.readouterr().err.startswith("usage:")


def test_unknown_subcommand_exits_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_text_output_deterministic(capsys):
    argv = [
        "simulate-linear", "--modulus=6", "--seed-spec=periodic:5",
        "--window=-2..4", "--steps=12",
    ]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
