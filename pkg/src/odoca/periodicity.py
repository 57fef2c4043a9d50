"""Least-period detection on finite observation windows.

A detector can only certify a period it has actually seen repeat, so every
result carries the convention: a candidate period is reported only after the
window shows it confirmed CONFIRMATIONS times past the transient.  Too-short
windows yield None ("insufficient data"), which callers treat as a value, not
an error.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence


#: how many full extra copies of a candidate block the window must show
CONFIRMATIONS = 3


class Periodicity(NamedTuple):
    transient: int
    period: int


def least_period(seq: Sequence, max_period: int | None = None) -> Periodicity | None:
    """Smallest (transient, period) explaining ``seq``, or None if unconfirmed.

    A candidate (t0, p) is accepted when seq[j] == seq[j + p] for every j >= t0
    inside the window, the window extends at least (CONFIRMATIONS + 1) * p past
    t0, and the transient covers at most half the window.  The transient cap
    matters: an undersampled long-period signal often ends in a few equal
    values, which would otherwise read as a huge transient plus a tiny period.
    Candidates are tried in order of increasing p, so the reported period is
    the least one the window can confirm, with the least transient for that
    period.
    """
    n = len(seq)
    if max_period is None:
        max_period = n
    for p in range(1, max_period + 1):
        if n < p + CONFIRMATIONS * p:
            break
        t0 = 0
        for j in range(n - p - 1, -1, -1):
            if seq[j] != seq[j + p]:
                t0 = j + 1
                break
        if n - t0 >= (CONFIRMATIONS + 1) * p and t0 <= n // 2:
            return Periodicity(t0, p)
    return None


def reduce_block(block: Sequence) -> tuple:
    """Least-period block of a sequence known to be exactly periodic.

    ``block`` is one full (not necessarily least) period of a purely periodic
    sequence; the result is its shortest divisor-length block.
    """
    n = len(block)
    if n == 0:
        raise ValueError("empty period block")
    for d in range(1, n + 1):
        if n % d != 0:
            continue
        if all(block[i] == block[i % d] for i in range(n)):
            return tuple(block[:d])
    raise AssertionError("unreachable")
