"""Text and PGM exporters for space-time diagrams.

Text diagrams print one character per cell, one row per time step, top
row first.  Digit cells use 0-9 then a-z, which caps text rendering at
modulus 36; PGM rendering has no such cap since gray levels come from
the formula floor(255 * d / (n - 1)).
"""

from __future__ import annotations

from typing import Sequence

from .glider_ca import EMPTY, LEFT, RIGHT, WALL

__all__ = [
    "DIGIT_CHARS",
    "GLIDER_GRAY",
    "digit_rows_text",
    "digit_rows_pgm",
    "symbol_rows_text",
    "symbol_rows_pgm",
]

DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"

GLIDER_GRAY = {WALL: 0, LEFT: 85, RIGHT: 170, EMPTY: 255}


def digit_rows_text(rows: Sequence[Sequence[int]]) -> str:
    """Digit rows as newline-joined text, one char per cell."""
    out = []
    for row in rows:
        for d in row:
            if not 0 <= d < len(DIGIT_CHARS):
                raise ValueError(f"digit {d} has no single-character form")
        out.append("".join(DIGIT_CHARS[d] for d in row))
    return "\n".join(out) + "\n"


def _pgm(width: int, height: int, raster: bytes) -> bytes:
    return f"P5\n{width} {height}\n255\n".encode("ascii") + raster


def digit_rows_pgm(rows: Sequence[Sequence[int]], modulus: int) -> bytes:
    """Binary PGM with gray level floor(255 * d / (modulus - 1)) per cell."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if not rows:
        raise ValueError("need at least one row")
    width = len(rows[0])
    raster = bytearray()
    for row in rows:
        if len(row) != width:
            raise ValueError("rows must have equal width")
        raster.extend(255 * d // (modulus - 1) for d in row)
    return _pgm(width, len(rows), bytes(raster))


def symbol_rows_text(rows: Sequence[Sequence[str]]) -> str:
    return "\n".join("".join(row) for row in rows) + "\n"


def symbol_rows_pgm(rows: Sequence[Sequence[str]]) -> bytes:
    """Binary PGM with the 4-level gray map W=0, L=85, R=170, empty=255."""
    if not rows:
        raise ValueError("need at least one row")
    width = len(rows[0])
    raster = bytearray()
    for row in rows:
        if len(row) != width:
            raise ValueError("rows must have equal width")
        raster.extend(GLIDER_GRAY[s] for s in row)
    return _pgm(width, len(rows), bytes(raster))
