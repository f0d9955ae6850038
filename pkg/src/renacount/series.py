"""Exact power-series coefficients of the counting generating functions.

Every functional equation has the shape ``X = z * (...)`` apart from the
size-1 seeds, so coefficient n only involves orders below n and a single
forward pass with convolutions computes all series exactly.  Coefficients
are arbitrary-precision integers (gmpy2 ``mpz`` internally when available,
plain ``int`` in every returned table).

Series names used throughout:

``B``        all regular expressions (RE)
``R``        REna, expressions with no Sigma-star operand of a union
``R_P``      REna minus the Sigma-star expressions themselves
``R_eps``    nullable REna expressions; ``R_epsbar`` = ``R - R_eps``
``L``/``P``  total letters over REna / over the R_P class
``F``/``F_P`` total |First|;   ``S`` total |Last| (equal to F)
``E``/``E_P`` total |Follow|;  ``Estar``/``Estar_P`` total |Follow(a*)|
``T``        total Glushkov transitions, ``F + E``
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from operator import mul

from .polys import c_k, from_terms, padd, pmul, pscale, pshift, spectral_polynomials

try:
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _big = int

SERIES_NAMES = (
    "B", "R", "R_P", "R_eps", "R_epsbar", "L", "P", "F", "F_P", "S",
    "E", "E_P", "Estar", "Estar_P", "T",
)


def _conv(a, b, m):
    """Coefficient m of the product of a and b."""
    return sum(map(mul, a[: m + 1], b[m::-1]))


def _sqconv(a, m):
    """Coefficient m of a*a, using symmetry."""
    half = (m + 1) // 2
    acc = 2 * sum(map(mul, a[:half], a[m:m - half:-1])) if half else 0
    if m % 2 == 0:
        acc += a[m // 2] * a[m // 2]
    return acc


def _zeros(N):
    return [_big(0)] * (N + 1)


def _ints(a):
    return [int(x) for x in a]


def _check(k, N):
    if k < 1:
        raise ValueError("alphabet size k must be >= 1")
    if N < 1:
        raise ValueError("truncation order N must be >= 1")


def coeffs_B(k: int, N: int) -> list[int]:
    """Coefficients of ``B = (k+1)z + 2zB^2 + zB``."""
    _check(k, N)
    B = _zeros(N)
    for n in range(1, N + 1):
        m = n - 1
        B[n] = (k + 1) * (n == 1) + 2 * _sqconv(B, m) + B[m]
    return _ints(B)


def _pattern(k, N, C):
    """Coefficients of C z^{2k} truncated at N."""
    out = [0] * (N + 1)
    if 2 * k <= N:
        out[2 * k] = C
    return out


def coeffs_R(k: int, N: int, C: int | None = None) -> tuple[list[int], list[int]]:
    """REna counts ``R`` and the union-operand class ``R_P``.

    ``R = (k+1)z + zR^2 + zR + zR_P^2`` with ``R_P = R - C_k z^{2k}``.
    ``C`` overrides C_k (mutation tests only).
    """
    _check(k, N)
    C = c_k(k) if C is None else C
    pat = _pattern(k, N, C)
    R, RP = _zeros(N), _zeros(N)
    for n in range(1, N + 1):
        m = n - 1
        R[n] = (k + 1) * (n == 1) + _sqconv(R, m) + R[m] + _sqconv(RP, m)
        RP[n] = R[n] - pat[n]
    return _ints(R), _ints(RP)


def coeffs_L(k: int, N: int, R=None, RP=None, C: int | None = None) -> tuple[list[int], list[int]]:
    """Total letter counts ``L`` (and ``P = L - k C_k z^{2k}``).

    ``L = kz + 2zLR + zL + 2zP R_P``.
    """
    _check(k, N)
    C = c_k(k) if C is None else C
    if R is None:
        R, RP = coeffs_R(k, N, C)
    R, RP = [_big(x) for x in R], [_big(x) for x in RP]
    pat = _pattern(k, N, k * C)
    L, P = _zeros(N), _zeros(N)
    for n in range(1, N + 1):
        m = n - 1
        L[n] = k * (n == 1) + 2 * _conv(L, R, m) + L[m] + 2 * _conv(P, RP, m)
        P[n] = L[n] - pat[n]
    return _ints(L), _ints(P)


def coeffs_R_eps(k: int, N: int, R=None, RP=None, C: int | None = None) -> tuple[list[int], list[int]]:
    """Nullable / non-nullable split of REna.

    ``R_eps = z + zR + zR_P^2 - zR^2 + 2z R_eps R``; ``R_epsbar = R - R_eps``.
    """
    _check(k, N)
    C = c_k(k) if C is None else C
    if R is None:
        R, RP = coeffs_R(k, N, C)
    R, RP = [_big(x) for x in R], [_big(x) for x in RP]
    Re = _zeros(N)
    for n in range(1, N + 1):
        m = n - 1
        Re[n] = (n == 1) + R[m] + _sqconv(RP, m) - _sqconv(R, m) + 2 * _conv(Re, R, m)
    return _ints(Re), [int(r - e) for r, e in zip(R, Re)]


def coeffs_R_eps_variant(k: int, N: int, R=None, C: int | None = None) -> list[int]:
    """Second form of the nullable equation, written with C_k explicit:
    ``R_eps = z + zR + 2z R_eps R + z C^2 z^{4k} - 2z R C z^{2k}``."""
    _check(k, N)
    C = c_k(k) if C is None else C
    if R is None:
        R, _ = coeffs_R(k, N, C)
    R = [_big(x) for x in R]
    Re = _zeros(N)
    for n in range(1, N + 1):
        m = n - 1
        term = (n == 1) + R[m] + 2 * _conv(Re, R, m)
        if m == 4 * k:
            term += C * C
        if m >= 2 * k:
            term -= 2 * C * R[m - 2 * k]
        Re[n] = term
    return _ints(Re)


def coeffs_F(k: int, N: int, R=None, RP=None, R_eps=None, C: int | None = None) -> tuple[list[int], list[int]]:
    """Total |First| over REna: ``F = kz + zF + 2z F_P R_P + z F R_eps + z F R``
    with ``F_P = F - k C_k z^{2k}``."""
    _check(k, N)
    C = c_k(k) if C is None else C
    if R is None:
        R, RP = coeffs_R(k, N, C)
    if R_eps is None:
        R_eps, _ = coeffs_R_eps(k, N, R, RP, C)
    R, RP, Re = ([_big(x) for x in s] for s in (R, RP, R_eps))
    pat = _pattern(k, N, k * C)
    F, FP = _zeros(N), _zeros(N)
    for n in range(1, N + 1):
        m = n - 1
        F[n] = k * (n == 1) + F[m] + 2 * _conv(FP, RP, m) + _conv(F, Re, m) + _conv(F, R, m)
        FP[n] = F[n] - pat[n]
    return _ints(F), _ints(FP)


def coeffs_E_Estar(k: int, N: int, R=None, RP=None, R_eps=None, F=None, FP=None,
                   C: int | None = None) -> dict[str, list[int]]:
    """Total |Follow| (``E``) and total |Follow(a*)| (``Estar``), jointly:

    ``E  = 2z E_P R_P + 2z E R + z F^2 + z Estar``
    ``Estar = kz + 2z Estar_P R_P + 2z Estar R_eps + 2z E (R - R_eps)
             + 2z F_P^2 + 2z F^2 + z Estar``

    with the ``_P`` variants lowered by ``k^2 C_k z^{2k}``.
    """
    _check(k, N)
    C = c_k(k) if C is None else C
    if R is None:
        R, RP = coeffs_R(k, N, C)
    if R_eps is None:
        R_eps, _ = coeffs_R_eps(k, N, R, RP, C)
    if F is None:
        F, FP = coeffs_F(k, N, R, RP, R_eps, C)
    R, RP, Re, F, FP = ([_big(x) for x in s] for s in (R, RP, R_eps, F, FP))
    Rbar = [r - e for r, e in zip(R, Re)]
    pat = _pattern(k, N, k * k * C)
    E, EP, ES, ESP = _zeros(N), _zeros(N), _zeros(N), _zeros(N)
    for n in range(1, N + 1):
        m = n - 1
        ff = _sqconv(F, m)
        E[n] = 2 * _conv(EP, RP, m) + 2 * _conv(E, R, m) + ff + ES[m]
        ES[n] = (k * (n == 1) + 2 * _conv(ESP, RP, m) + 2 * _conv(ES, Re, m)
                 + 2 * _conv(E, Rbar, m) + 2 * _sqconv(FP, m) + 2 * ff + ES[m])
        EP[n] = E[n] - pat[n]
        ESP[n] = ES[n] - pat[n]
    return {"E": _ints(E), "E_P": _ints(EP), "Estar": _ints(ES), "Estar_P": _ints(ESP)}


def coeffs_T(F: list[int], E: list[int]) -> list[int]:
    return [f + e for f, e in zip(F, E)]


@dataclass
class CoeffTable:
    """Exact coefficients ``[z^0..z^N]`` of every counting series for one k."""

    k: int
    N: int
    C: int
    series: dict[str, list[int]] = field(default_factory=dict)

    def __getitem__(self, name: str) -> list[int]:
        return self.series[name]

    def to_json(self) -> str:
        doc = {
            "k": self.k,
            "N": self.N,
            "C_k": str(self.C),
            "series": {name: [str(x) for x in vals] for name, vals in self.series.items()},
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "CoeffTable":
        doc = json.loads(text)
        series = {name: [int(x) for x in vals] for name, vals in doc["series"].items()}
        return cls(int(doc["k"]), int(doc["N"]), int(doc["C_k"]), series)


def coeff_table(k: int, N: int, C: int | None = None, include_B: bool = True) -> CoeffTable:
    """Build every series up to order N."""
    _check(k, N)
    C = c_k(k) if C is None else C
    s: dict[str, list[int]] = {}
    if include_B:
        s["B"] = coeffs_B(k, N)
    s["R"], s["R_P"] = coeffs_R(k, N, C)
    s["R_eps"], s["R_epsbar"] = coeffs_R_eps(k, N, s["R"], s["R_P"], C)
    s["L"], s["P"] = coeffs_L(k, N, s["R"], s["R_P"], C)
    s["F"], s["F_P"] = coeffs_F(k, N, s["R"], s["R_P"], s["R_eps"], C)
    s["S"] = list(s["F"])
    s.update(coeffs_E_Estar(k, N, s["R"], s["R_P"], s["R_eps"], s["F"], s["F_P"], C))
    s["T"] = coeffs_T(s["F"], s["E"])
    return CoeffTable(k, N, C, s)


# ---------------------------------------------------------------------------
# algebraic identity checks (series level, exact)

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    ok: bool
    first_failure: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _trunc_mul(a, b, N):
    # both operands are padded to length N+1 by _fit
    return [_conv(a, b, n) for n in range(N + 1)]


def _fit(p, N):
    p = list(p[: N + 1])
    return p + [0] * (N + 1 - len(p))


def _first_nonzero(a) -> int | None:
    for i, x in enumerate(a):
        if x:
            return i
    return None


def _zero_check(name, a) -> IdentityCheck:
    idx = _first_nonzero(a)
    return IdentityCheck(name, idx is None, idx)


def verify_quadratic_R(k: int, N: int, C: int | None = None, R=None) -> IdentityCheck:
    """Check ``2zR^2 - r_k R + z s_k = 0`` up to order N.

    ``C`` perturbs C_k inside the recurrence only (the polynomials keep the
    true C_k), so a wrong count shows up as a failing order.
    """
    sp = spectral_polynomials(k)
    if R is None:
        R, _ = coeffs_R(k, N, C)
    R = _fit(R, N)
    z = _fit([0, 1], N)
    lhs = padd(
        pscale(_trunc_mul(z, _trunc_mul(R, R, N), N), 2),
        pscale(_trunc_mul(_fit(sp.r, N), R, N), -1),
        _trunc_mul(z, _fit(sp.s, N), N),
    )
    return _zero_check("quadratic_R", lhs[: N + 1])


@dataclass(frozen=True)
class LQuadraticReport:
    """Outcome of the letters-series identities.

    ``closed_form``   ``(2L - k C z^{2k})^2 Delta = k^2 z^2 g^2``
    ``signed``        ``(2L - k C z^{2k}) sqrt(Delta) = k z g``, using the exact
                      series ``sqrt(Delta) = r_k - 4zR`` (sensitive to the sign of g)
    ``quadratic``     ``Delta L^2 - k z^{2k} C Delta L - sbar = 0`` with
                      ``4 sbar = k^2 (z^2 g^2 - C^2 z^{4k} Delta)``
    ``discriminant``  ``(k z^{2k} C Delta)^2 + 4 Delta sbar = z^2 k^2 Delta g^2``
    ``variant``       the quadratic with ``+ rbar L`` and :func:`sbar_variant`;
                      it does not hold and is reported, never part of ``ok``.
    """

    closed_form: IdentityCheck
    signed: IdentityCheck
    quadratic: IdentityCheck
    discriminant: IdentityCheck
    variant: IdentityCheck

    @property
    def ok(self) -> bool:
        return bool(self.closed_form and self.signed and self.quadratic and self.discriminant)

    def __bool__(self) -> bool:
        return self.ok


def sbar_derived(k: int, C: int | None = None) -> list[int]:
    """``k^2 z^2 + k^2 C z^{2k+1} ((z-1)(1 + 2C^2 z^{4k}) + 2(2+k) C z^{2k+1} + 2C^3 z^{6k+1})``."""
    C = c_k(k) if C is None else C
    inner = padd(
        pmul([-1, 1], from_terms({0: 1, 4 * k: 2 * C * C})),
        from_terms({2 * k + 1: 2 * (2 + k) * C, 6 * k + 1: 2 * C ** 3}),
    )
    return padd(from_terms({2: k * k}), pscale(pshift(inner, 2 * k + 1), k * k * C))


def sbar_variant(k: int, C: int | None = None) -> list[int]:
    """``k z^2 + k^2 z^{2k+1} C ((z-1)(1+2z^{4k+1}C^2) + 2C(2+k) + 2z^{6k+1}C^3)``."""
    C = c_k(k) if C is None else C
    inner = padd(
        pmul([-1, 1], from_terms({0: 1, 4 * k + 1: 2 * C * C})),
        from_terms({0: 2 * C * (2 + k), 6 * k + 1: 2 * C ** 3}),
    )
    return padd(from_terms({2: k}), pscale(pshift(inner, 2 * k + 1), k * k * C))


def verify_quadratic_L(k: int, N: int, L=None, R=None, g: list[int] | None = None) -> LQuadraticReport:
    """Check the letters-series identities up to order N.

    ``g`` replaces the g_k polynomial (mutation tests).
    """
    sp = spectral_polynomials(k)
    C = sp.C
    if R is None:
        R, RP = coeffs_R(k, N)
    if L is None:
        L, _ = coeffs_L(k, N, R, RP)
    L = _fit(L, N)
    R = _fit(R, N)
    g = sp.g if g is None else g
    D = _fit(sp.delta, N)
    z = _fit([0, 1], N)
    kc = _fit(from_terms({2 * k: k * C}), N)

    twoL = padd(pscale(L, 2), pscale(kc, -1))
    lhs = _trunc_mul(_trunc_mul(twoL, twoL, N), D, N)
    zg = _trunc_mul(z, _fit(g, N), N)
    zg2 = _trunc_mul(zg, zg, N)
    rhs = pscale(zg2, k * k)
    closed = _zero_check("closed_form", padd(lhs, pscale(rhs, -1)))
    sqrt_delta = padd(_fit(sp.r, N), pscale(_trunc_mul(z, R, N), -4))
    signed = _zero_check("signed", padd(_trunc_mul(twoL, sqrt_delta, N), pscale(zg, -k)))

    cz = _fit(from_terms({2 * k: C}), N)
    four_sbar = pscale(padd(zg2, pscale(_trunc_mul(_trunc_mul(cz, cz, N), D, N), -1)), k * k)
    rbar = _trunc_mul(kc, D, N)
    L2 = _trunc_mul(L, L, N)
    quad = padd(pscale(_trunc_mul(D, L2, N), 4), pscale(_trunc_mul(rbar, L, N), -4), pscale(four_sbar, -1))
    quadratic = _zero_check("quadratic", quad)

    disc = padd(pscale(_trunc_mul(rbar, rbar, N), 1), _trunc_mul(D, four_sbar, N),
                pscale(_trunc_mul(D, zg2, N), -k * k))
    discriminant = _zero_check("discriminant", disc)

    variant_q = padd(_trunc_mul(D, L2, N), _trunc_mul(rbar, L, N), pscale(_fit(sbar_variant(k, C), N), -1))
    variant = _zero_check("variant_quadratic", variant_q)
    return LQuadraticReport(closed, signed, quadratic, discriminant, variant)
