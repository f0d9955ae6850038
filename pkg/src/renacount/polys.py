"""Exact integer polynomials attached to an alphabet size k.

Polynomials are dense coefficient lists (index = degree) of Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


def c_k(k: int) -> int:
    """Number of Sigma-star expressions: (2k-2)!/(k-1)!."""
    if k < 1:
        raise ValueError("alphabet size must be >= 1")
    return math.factorial(2 * k - 2) // math.factorial(k - 1)


def from_terms(terms: dict[int, int]) -> list[int]:
    out = [0] * (max(terms) + 1)
    for deg, coef in terms.items():
        out[deg] += coef
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def padd(*ps: list[int]) -> list[int]:
    out = [0] * max(len(p) for p in ps)
    for p in ps:
        for i, c in enumerate(p):
            out[i] += c
    return out


def pscale(p: list[int], c: int) -> list[int]:
    return [c * x for x in p]


def pmul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def pshift(p: list[int], d: int) -> list[int]:
    return [0] * d + list(p)


def pderiv(p: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(p)][1:] or [0]


def peval(p: list[int], x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class SpectralPolynomials:
    """The polynomials governing the REna singularity for alphabet size k.

    ``g`` is the numerator factor of the letters generating function
    ``L = k z^{2k} C/2 + k z g / (2 sqrt(Delta))``; it is derived from the
    linear equation for L, which gives ``g = 2 - C z^{2k-1} (h - C z^{2k+1})``.
    ``g_variant`` keeps the variant with ``C z^{2k-1}`` inside the bracket
    for comparison.
    """

    k: int
    C: int
    p: list[int]
    h: list[int]
    delta: list[int]
    g: list[int]
    g_variant: list[int]
    r: list[int]
    s: list[int]

    def as_dict(self) -> dict[str, list[int]]:
        return {n: getattr(self, n) for n in ("p", "h", "delta", "g", "g_variant", "r", "s")}


@lru_cache(maxsize=64)
def _spectral(k: int, C: int) -> SpectralPolynomials:
    p = [1, -2, -(7 + 8 * k)]
    h = from_terms({0: 1, 1: -1, 2 * k + 1: -C})
    delta = padd(p, pscale(pshift(h, 2 * k + 1), 4 * C))
    g = padd([2], pscale(pshift(padd(h, from_terms({2 * k + 1: -C})), 2 * k - 1), -C))
    g_variant = padd([2], pscale(pshift(padd(h, from_terms({2 * k - 1: -C})), 2 * k - 1), -C))
    r = from_terms({0: 1, 1: -1, 2 * k + 1: 2 * C})
    s = from_terms({0: 1 + k, 4 * k: C * C})
    return SpectralPolynomials(k, C, p, h, delta, g, g_variant, r, s)


def spectral_polynomials(k: int, C: int | None = None) -> SpectralPolynomials:
    """Exact polynomials for alphabet size ``k``; ``C`` overrides C_k (used
    for the degenerate C=0 standard-RE case and for mutation tests)."""
    return _spectral(k, c_k(k) if C is None else C)
