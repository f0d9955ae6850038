"""Sequence acceleration used for the singular limits."""

from __future__ import annotations

from typing import Sequence


def richardson_table(values: Sequence, exponents: Sequence[float], ratio: float = 2.0) -> list[list]:
    """Richardson tableau for step sizes shrinking by ``ratio`` each entry.

    Column j removes an error term ``h**exponents[j-1]``; ``values[i]`` is the
    approximation at step ``h0 / ratio**i``.  Works on floats or mpf.
    """
    table = [list(values)]
    for p in exponents:
        prev = table[-1]
        if len(prev) < 2:
            break
        f = ratio ** p
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1) for i in range(len(prev) - 1)])
    return table


def polynomial_limit(xs: Sequence, ys: Sequence):
    """Value at x = 0 of the interpolating polynomial through (xs, ys) (Neville)."""
    p = list(ys)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (xs[i] * p[i + 1] - xs[i + m] * p[i]) / (xs[i] - xs[i + m])
    return p[0]
