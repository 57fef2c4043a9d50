"""Command line surface.

Every subcommand is a thin adapter over the library: parse flags, call
one or two library operations, format with the render helpers.  Exit
codes: 0 on success, 1 on validation problems (bad flags, malformed
profiles, infeasible windows), 2 when a verified property fails at
runtime (round-trip failures, off-orbit decodes, internal invariant
violations).
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from .embedding import embed_odometer, nonfinitary_witness, verify_roundtrip
from .errors import InvariantViolation, OffOrbitError
from .glider_ca import build_glider_seed, glider_spacetime
from .linear_ca import (
    ConstantFill,
    LazyLeft,
    LinearConfig,
    growth_extender,
    period_ladder,
    periodic_right_tail,
    spacetime,
    unit_impulse,
)
from .odometer import (
    Profile,
    canonical_form,
    format_profile,
    multiplicity,
    odometer_spacetime,
    parse_profile,
)
from .render import (
    DIGIT_CHARS,
    digit_rows_pgm,
    digit_rows_text,
    symbol_rows_pgm,
    symbol_rows_text,
)

__all__ = ["main", "parse_seed_spec", "parse_window"]


class _Parser(argparse.ArgumentParser):
    # validation failures exit 1, not argparse's default 2
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def parse_window(text: str) -> tuple[int, int]:
    """Parse ``lo..hi`` with either bound possibly negative."""
    match = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text.strip())
    if match is None:
        raise ValueError(f"--window expects lo..hi, got {text!r}")
    lo, hi = int(match.group(1)), int(match.group(2))
    if lo > hi:
        raise ValueError(f"--window bounds out of order: {lo} > {hi}")
    return lo, hi


def _parse_digits(part: str, modulus: int, what: str) -> tuple[int, ...]:
    digits = []
    for ch in part:
        value = DIGIT_CHARS.find(ch)
        if value < 0 or value >= modulus:
            raise ValueError(f"bad digit {ch!r} in --seed-spec {what} part")
        digits.append(value)
    return tuple(digits)


def parse_seed_spec(text: str, modulus: int) -> LinearConfig:
    """Seed grammar: ``x-bar`` (alias ``impulse``), ``periodic:<m>``, or an
    explicit ``left|core|transient|period`` digit string.

    The explicit form places the core at cell 0; left is a single fill
    digit and an empty period means all zeros to the right.
    """
    text = text.strip()
    if text in ("x-bar", "impulse"):
        return unit_impulse(modulus)
    if text.startswith("periodic:"):
        try:
            m = int(text.removeprefix("periodic:"))
        except ValueError:
            raise ValueError(f"bad --seed-spec {text!r}") from None
        if m < 1:
            raise ValueError("periodic:<m> needs m >= 1")
        tail = periodic_right_tail(m, modulus)
        return LinearConfig(
            modulus=modulus,
            core_start=0,
            core=(),
            tail_transient=tail.transient,
            tail_period=tail.period,
            left=LazyLeft(growth_extender),
        )
    parts = text.split("|")
    if len(parts) != 4:
        raise ValueError(
            f"--seed-spec {text!r} is not x-bar, periodic:<m>, or "
            f"left|core|transient|period"
        )
    left_part, core_part, transient_part, period_part = parts
    if len(left_part) != 1:
        raise ValueError("--seed-spec left part must be a single fill digit")
    (fill,) = _parse_digits(left_part, modulus, "left")
    core = _parse_digits(core_part, modulus, "core")
    transient = _parse_digits(transient_part, modulus, "transient")
    period = _parse_digits(period_part, modulus, "period") or (0,)
    return LinearConfig(
        modulus=modulus,
        core_start=0,
        core=core,
        tail_transient=transient,
        tail_period=period,
        left=ConstantFill(fill),
    )


def _emit(args: argparse.Namespace, payload: str | bytes) -> None:
    if args.out is not None:
        mode = "wb" if isinstance(payload, bytes) else "w"
        with open(args.out, mode) as handle:
            handle.write(payload)
    elif isinstance(payload, bytes):
        sys.stdout.buffer.write(payload)
    else:
        sys.stdout.write(payload)


# ---------- subcommands ----------


def _cmd_simulate_linear(args: argparse.Namespace) -> int:
    lo, hi = parse_window(args.window)
    cfg = parse_seed_spec(args.seed_spec, args.modulus)
    diagram = spacetime(cfg, lo, hi, args.steps)
    if args.format == "text":
        _emit(args, digit_rows_text(diagram.rows))
    else:
        _emit(args, digit_rows_pgm(diagram.rows, args.modulus))
    return 0


def _cmd_simulate_glider(args: argparse.Namespace) -> int:
    seed = build_glider_seed(parse_profile(args.profile), args.depth)
    diagram = glider_spacetime(seed.config, args.steps)
    if args.format == "text":
        _emit(args, symbol_rows_text(diagram.rows))
    else:
        _emit(args, symbol_rows_pgm(diagram.rows))
    return 0


def _cmd_analyze_periods(args: argparse.Namespace) -> int:
    cfg = parse_seed_spec(args.seed_spec, args.modulus)
    ladder = period_ladder(cfg, args.depth)
    lines = [f"column {ladder.edge.column}: least period {ladder.edge.period}"]
    lines += [
        f"column {entry.column}: least period {entry.period}"
        for entry in ladder.entries
    ]
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _handle_summary(handle) -> str:
    lines = [
        f"canonical m={handle.canonical.m} n={handle.canonical.n}",
        f"modulus {handle.modulus}",
        f"order {handle.total_order}",
        f"cells {handle.cells[0]}..{handle.cells[1]}",
    ]
    for comp in handle.components:
        lines.append(
            f"component p={comp.seed.prime} m={comp.seed.aux_period} "
            f"depth={comp.depth} order={comp.order} "
            f"cells={comp.cells[0]}..{comp.cells[1]}"
        )
    return "\n".join(lines) + "\n"


def _cmd_embed(args: argparse.Namespace) -> int:
    cells = parse_window(args.window) if args.window else None
    handle = embed_odometer(parse_profile(args.profile), args.depth, cells)
    _emit(args, _handle_summary(handle))
    return 0


def _cmd_roundtrip(args: argparse.Namespace) -> int:
    cells = parse_window(args.window) if args.window else None
    handle = embed_odometer(parse_profile(args.profile), args.depth, cells)
    bound = args.bound if args.bound is not None else handle.total_order
    report = verify_roundtrip(handle, bound)
    text = report.summary() + "\n"
    if report.fail:
        shown = ", ".join(str(v) for v in report.failures[:10])
        text += f"failing values: {shown}\n"
    _emit(args, text)
    return 2 if report.fail else 0


def _format_multiplicity(mfn) -> str:
    entries = [f"{p} -> inf" for p in sorted(mfn.infinite)]
    entries += [f"{p} -> {mfn.finite[p]}" for p in sorted(mfn.finite)]
    body = "; ".join(entries) if entries else "(empty)"
    label = "multiplicity (scan, lower bounds)" if mfn.partial else "multiplicity"
    return f"{label} {body}"


def _cmd_odometer_info(args: argparse.Namespace) -> int:
    profile = parse_profile(args.profile)
    lines = [f"profile {format_profile(profile)}"]
    if profile.is_eventually_periodic:
        canon = canonical_form(profile)
        lines.append(f"canonical m={canon.m} n={canon.n}")
    else:
        lines.append("canonical unavailable for declared profiles")
    lines.append(_format_multiplicity(multiplicity(profile)))
    terms = profile.terms(args.depth)
    lines.append(f"depth {args.depth} terms {','.join(str(s) for s in terms)}")
    lines.append(f"group order {profile.group_order(args.depth)}")
    if args.steps is not None:
        diagram = odometer_spacetime(profile, args.depth, args.steps)
        for column, found in sorted(diagram.column_periods().items()):
            if found is None:
                lines.append(
                    f"column {column}: undetermined within {args.steps} steps"
                )
            else:
                lines.append(f"column {column}: least period {found.period}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_witness(args: argparse.Namespace) -> int:
    report = nonfinitary_witness(parse_profile(args.profile), args.modulus, args.depth)
    _emit(args, report.summary() + "\n")
    return 0


# ---------- parser assembly ----------


def _add_out(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="write output to this path instead of stdout")


def _add_format(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--format", choices=("text", "pgm"), default="text", help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="odoca", description=__doc__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sim = subs.add_parser("simulate-linear", help="space-time diagram of the additive rule")
    sim.add_argument("--modulus", type=int, required=True)
    sim.add_argument("--seed-spec", required=True)
    sim.add_argument("--window", required=True, help="cells lo..hi, e.g. --window=-16..2")
    sim.add_argument("--steps", type=int, required=True)
    _add_format(sim)
    _add_out(sim)
    sim.set_defaults(func=_cmd_simulate_linear)

    glider = subs.add_parser("simulate-glider", help="space-time diagram of bouncing gliders")
    glider.add_argument("--profile", required=True)
    glider.add_argument("--depth", type=int, required=True, help="number of gaps")
    glider.add_argument("--steps", type=int, required=True)
    _add_format(glider)
    _add_out(glider)
    glider.set_defaults(func=_cmd_simulate_glider)

    periods = subs.add_parser("analyze-periods", help="exact column periods, walking left")
    periods.add_argument("--modulus", type=int, required=True)
    periods.add_argument("--seed-spec", required=True)
    periods.add_argument("--depth", type=int, required=True, help="columns left of the tail edge")
    _add_out(periods)
    periods.set_defaults(func=_cmd_analyze_periods)

    embed = subs.add_parser("embed", help="assemble an embedding and print its layout")
    embed.add_argument("--profile", required=True)
    embed.add_argument("--depth", type=int, required=True)
    embed.add_argument("--window", help="override cells lo..hi (must cover the calibrated range)")
    _add_out(embed)
    embed.set_defaults(func=_cmd_embed)

    rt = subs.add_parser("roundtrip", help="exhaustive encode/decode verification")
    rt.add_argument("--profile", required=True)
    rt.add_argument("--depth", type=int, required=True)
    rt.add_argument("--bound", type=int, help="check this many values (default: all)")
    rt.add_argument("--window", help="override cells lo..hi")
    _add_out(rt)
    rt.set_defaults(func=_cmd_roundtrip)

    info = subs.add_parser("odometer-info", help="profile invariants and digit diagram periods")
    info.add_argument("--profile", required=True)
    info.add_argument("--depth", type=int, default=4)
    info.add_argument("--steps", type=int, help="also analyze digit column periods")
    _add_out(info)
    info.set_defaults(func=_cmd_odometer_info)

    wit = subs.add_parser("witness", help="non-embeddability certificate scan")
    wit.add_argument("--profile", required=True)
    wit.add_argument("--modulus", type=int, required=True)
    wit.add_argument("--depth", type=int, default=8)
    _add_out(wit)
    wit.set_defaults(func=_cmd_witness)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OffOrbitError, InvariantViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
