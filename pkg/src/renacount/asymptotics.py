"""Singularity analysis of the REna generating functions.

Everything is evaluated with mpmath at a per-k working precision.  Terms
of the form ``C_k z^m`` are formed as ``exp(log C_k + m log z)`` so that
alphabets with k in the tens of thousands (C_k has ~10^5 digits) stay cheap;
for k <= 300 ``log C_k`` comes from the exact integer.

Passing ``C=0`` to the functions that accept it removes the absorbing
pattern and reproduces the standard regular-expression quantities
(Delta -> p_k, eta -> rho_k, psi -> 2 - 2 rho_k).
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath as mp

from .extrapolate import polynomial_limit, richardson_table
from .polys import c_k

EXACT_C_MAX_K = 300
ETA_BRACKET_WIDTH = mp.mpf("1e-6")
LAMBDA_TOL = 1e-4


class BracketError(ArithmeticError):
    """Delta_k does not change sign on ]0, 1/sqrt(8+8k)[."""


class SingularSystemError(ArithmeticError):
    pass


class NonConvergence(ArithmeticError):
    pass


_dps_override: int | None = None


def default_dps(k: int) -> int:
    if _dps_override is not None:
        return _dps_override
    return 50 if k <= 1000 else 100


@contextmanager
def precision(dps: int | None):
    """Force the working precision of every routine here (None = per-k default)."""
    global _dps_override
    saved, _dps_override = _dps_override, dps
    try:
        yield
    finally:
        _dps_override = saved


class _Prec:
    """Context manager setting working precision for k (or explicit digits)."""

    def __init__(self, k: int, dps: int | None = None):
        self.dps = dps if dps is not None else default_dps(k)

    def __enter__(self):
        self._ctx = mp.workdps(self.dps)
        self._ctx.__enter__()

    def __exit__(self, *exc):
        return self._ctx.__exit__(*exc)


def log_c_k(k: int):
    if k <= EXACT_C_MAX_K:
        return mp.log(mp.mpf(c_k(k)))
    return mp.loggamma(2 * k - 1) - mp.loggamma(k)


def _logC(k: int, C):
    """log of the pattern count in use, or None when C is switched off."""
    if C is None:
        return log_c_k(k)
    if C == 0:
        return None
    return mp.log(mp.mpf(C))


def _cz(k: int, logC, z):
    """C z^{2k}."""
    if logC is None:
        return mp.mpf(0)
    return mp.exp(logC + 2 * k * mp.log(z))


def rho(k: int):
    """Singularity of the standard class: 1/(1 + sqrt(8+8k))."""
    return 1 / (1 + mp.sqrt(8 + 8 * k))


def eta_upper(k: int):
    return 1 / mp.sqrt(8 + 8 * k)


def p_k(k: int, z):
    return 1 - 2 * z - (7 + 8 * k) * z**2


def _delta(k, logC, z):
    c = _cz(k, logC, z)
    return p_k(k, z) + 4 * z * c * (1 - z) - 4 * z**2 * c**2


def _delta_prime(k, logC, z):
    c = _cz(k, logC, z)
    return -2 - 2 * (7 + 8 * k) * z + 4 * c * ((2 * k + 1) * (1 - z) - z) - 4 * (4 * k + 2) * z * c**2


def _delta_scale(k, logC, z):
    c = _cz(k, logC, z)
    return 1 + 2 * z + (7 + 8 * k) * z**2 + 4 * z * c * (1 - z) + 4 * z**2 * c**2


def delta(k: int, z, C=None):
    """Discriminant Delta_k(z) = p_k(z) + 4 z^{2k+1} C_k h_k(z)."""
    with _Prec(k):
        return _delta(k, _logC(k, C), mp.mpf(z))


def delta_prime(k: int, z, C=None):
    with _Prec(k):
        return _delta_prime(k, _logC(k, C), mp.mpf(z))


def _g(k, logC, z):
    c = _cz(k, logC, z)
    return 2 - c * (1 - z) / z + 2 * c**2


def g_k(k: int, z, C=None):
    """g_k(z) = 2 - C z^{2k-1} (h_k(z) - C z^{2k+1})."""
    with _Prec(k):
        return _g(k, _logC(k, C), mp.mpf(z))


@dataclass(frozen=True)
class EtaSolution:
    eta: mp.mpf
    iterations: int
    residual: mp.mpf  # |Delta(eta)| divided by the sum of term magnitudes
    bracket_width: mp.mpf


@lru_cache(maxsize=256)
def _solve_eta(k: int, C, dps: int) -> EtaSolution:
    with mp.workdps(dps):
        logC = _logC(k, C)
        lo, hi = mp.mpf(0), eta_upper(k)
        f_lo, f_hi = _delta(k, logC, lo) if lo > 0 else mp.mpf(1), _delta(k, logC, hi)
        if not (f_lo > 0 and f_hi < 0):
            raise BracketError(f"Delta_{k} has signs ({f_lo}, {f_hi}) at the bracket ends")
        it = 0
        while hi - lo > ETA_BRACKET_WIDTH:
            mid = (lo + hi) / 2
            if _delta(k, logC, mid) > 0:
                lo = mid
            else:
                hi = mid
            it += 1
        x = (lo + hi) / 2
        tol = mp.mpf(10) ** (-(dps - 5))
        for _ in range(200):
            it += 1
            fx = _delta(k, logC, x)
            if fx > 0:
                lo = x
            elif fx < 0:
                hi = x
            else:
                break
            step = fx / _delta_prime(k, logC, x)
            nx = x - step
            if not lo < nx < hi:
                nx = (lo + hi) / 2  # Newton left the bracket
            if abs(nx - x) <= tol * abs(x):
                x = nx
                break
            x = nx
        residual = abs(_delta(k, logC, x)) / _delta_scale(k, logC, x)
        return EtaSolution(+x, it, residual, hi - lo)


def eta_solution(k: int, C=None, dps: int | None = None) -> EtaSolution:
    if k < 1:
        raise ValueError("alphabet size must be >= 1")
    return _solve_eta(k, C, dps or default_dps(k))


def eta(k: int, C=None):
    """The unique root of Delta_k in ]0, 1/sqrt(8+8k)[ (REna singularity)."""
    return eta_solution(k, C).eta


@lru_cache(maxsize=256)
def _solve_offset(k: int, dps: int):
    with mp.workdps(dps):
        logC = log_c_k(k)
        r = rho(k)
        a = 2 + 2 * (7 + 8 * k) * r  # -p'(rho)
        b = mp.mpf(7 + 8 * k)

        # Delta(rho + u) = -a u - b u^2 + q(rho + u), since p(rho) = 0 exactly
        def q(z):
            c = _cz(k, logC, z)
            return 4 * z * c * (1 - z - z * c)

        u = q(r) / a
        for _ in range(100):
            z = r + u
            c = _cz(k, logC, z)
            dq = 4 * c * ((2 * k + 1) * (1 - z) - z) - 4 * (4 * k + 2) * z * c**2
            nu = u - (-a * u - b * u**2 + q(z)) / (-a - 2 * b * u + dq)
            if abs(nu - u) <= abs(u) * mp.mpf(10) ** (-(dps - 5)):
                return nu
            u = nu
        return u


def eta_minus_rho(k: int):
    """eta_k - rho_k to full relative precision (it is ~10^{-7700} at k = 10^4)."""
    return _solve_offset(k, default_dps(k))


def psi_at_eta(k: int, C=None):
    """psi_k(eta_k) = -eta_k Delta'_k(eta_k)."""
    with _Prec(k):
        e = eta(k, C)
        val = -e * _delta_prime(k, _logC(k, C), e)
    if val <= 0:
        raise ArithmeticError(f"psi_{k}(eta_{k}) = {val} is not positive")
    return val


def g_at_eta(k: int, C=None):
    return g_k(k, eta(k, C), C)


def letters_ratio(k: int):
    """Asymptotic fraction of letters per unit of size: 4 k eta^2 g(eta) / psi(eta)."""
    with _Prec(k):
        e = eta(k)
        return 4 * k * e**2 * g_at_eta(k) / psi_at_eta(k)


# ---------------------------------------------------------------------------
# coefficient estimates (log space)

@dataclass(frozen=True)
class Estimate:
    """A positive quantity stored by its natural logarithm."""

    log: mp.mpf

    @property
    def value(self):
        return mp.exp(self.log)

    def mantissa_exponent(self) -> tuple[mp.mpf, int]:
        l10 = self.log / mp.log(10)
        e = int(mp.floor(l10))
        return mp.power(10, l10 - e), e

    def ratio_to(self, exact: int):
        """estimate / exact, for a positive exact integer."""
        return mp.exp(self.log - mp.log(mp.mpf(exact)))

    def __truediv__(self, other: "Estimate"):
        return mp.exp(self.log - other.log)


def re_count_asymptotic(k: int, n: int) -> Estimate:
    """[z^n] R_k ~ sqrt(psi)/(8 eta sqrt(pi)) n^{-3/2} eta^{-n}."""
    with _Prec(k):
        e, ps = eta(k), psi_at_eta(k)
        return Estimate(mp.log(mp.sqrt(ps) / (8 * e * mp.sqrt(mp.pi))) - mp.mpf(1.5) * mp.log(n) - n * mp.log(e))


def standard_count_asymptotic(k: int, n: int) -> Estimate:
    """[z^n] B_k ~ sqrt(2-2rho)/(8 rho sqrt(pi)) n^{-3/2} rho^{-n}."""
    with _Prec(k):
        r = rho(k)
        return Estimate(mp.log(mp.sqrt(2 - 2 * r) / (8 * r * mp.sqrt(mp.pi))) - mp.mpf(1.5) * mp.log(n) - n * mp.log(r))


def class_ratio_asymptotic(k: int, n: int):
    """[z^n]R_k / [z^n]B_k ~ sqrt(psi)/sqrt(2-2rho) (rho/eta)^{n+1}."""
    with _Prec(k):
        r, e = rho(k), eta(k)
        return mp.sqrt(psi_at_eta(k)) / mp.sqrt(2 - 2 * r) * (r / e) ** (n + 1)


def letters_count_asymptotic(k: int, n: int) -> Estimate:
    """[z^n] L_k ~ k eta g(eta) / (2 sqrt(pi) sqrt(psi)) n^{-1/2} eta^{-n}."""
    with _Prec(k):
        e, ps, g = eta(k), psi_at_eta(k), g_at_eta(k)
        return Estimate(mp.log(k * e * g / (2 * mp.sqrt(mp.pi) * mp.sqrt(ps))) - mp.log(n) / 2 - n * mp.log(e))


# ---------------------------------------------------------------------------
# numeric values of the generating functions below the singularity

@dataclass(frozen=True)
class GfValues:
    z: mp.mpf
    R: mp.mpf
    R_P: mp.mpf
    R_eps: mp.mpf
    F: mp.mpf
    E: mp.mpf
    Estar: mp.mpf
    T: mp.mpf
    det: mp.mpf  # determinant of the (E, Estar) linear system


def _gf_system(k: int, logC, z, s) -> GfValues:
    """Solve the linear systems at z, given s = sqrt(Delta_k(z))."""
    c = _cz(k, logC, z)
    r = 1 - z + 2 * z * c
    R = (r - s) / (4 * z)
    RP = R - c
    R_eps = (z + z * R + z * c**2 - 2 * z * c * R) / (1 - 2 * z * R)
    dF = 1 - z - 2 * z * RP - z * R_eps - z * R
    F = (k * z - 2 * z * k * c * RP) / dF
    FP = F - k * c
    kk = k * k
    a11 = 1 - 2 * z * RP - 2 * z * R
    a12 = -z
    b1 = -2 * z * kk * c * RP + z * F**2
    a21 = -2 * z * (R - R_eps)
    a22 = 1 - 2 * z * RP - 2 * z * R_eps - z
    b2 = k * z - 2 * z * kk * c * RP + 2 * z * FP**2 + 2 * z * F**2
    det = a11 * a22 - a12 * a21
    E = (b1 * a22 - a12 * b2) / det
    Es = (a11 * b2 - a21 * b1) / det
    return GfValues(z, R, RP, R_eps, F, E, Es, F + E, det)


def evaluate_gf_at(k: int, z) -> GfValues:
    """Values of R, R_P, R_eps, F, E, E*, T at a real z in ]0, eta_k[."""
    with _Prec(k):
        z = mp.mpf(z)
        e = eta(k)
        if not 0 < z < e:
            raise ValueError(f"z must lie in ]0, eta_{k}[ = ]0, {mp.nstr(e, 12)}[")
        logC = _logC(k, None)
        vals = _gf_system(k, logC, z, mp.sqrt(_delta(k, logC, z)))
        if abs(vals.det) < mp.mpf(10) ** (-(mp.mp.dps * 3) // 4):
            raise SingularSystemError(f"(E, E*) system is singular to working precision at z={z}")
        return vals


# ---------------------------------------------------------------------------
# transitions constant

@dataclass(frozen=True)
class LambdaResult:
    k: int
    value: mp.mpf
    kappa: mp.mpf  # lim_{z -> eta-} T(z) sqrt(Delta(z))
    spread: float  # |difference of the last two extrapolants|, in lambda units
    ladder: tuple = field(repr=False, default=())


def lambda_details(k: int, points: int = 12, delta0: float = 1e-2, order: int = 3,
                   max_points: int = 24) -> LambdaResult:
    """Transitions per unit of size, lambda_k = 8 eta kappa / psi(eta).

    kappa is the limit of T(z) sqrt(Delta(z)) as z -> eta from below, read on
    the ladder z_j = eta (1 - delta0 2^{-j}) and Richardson-extrapolated with
    error exponents 1/2, 1, 3/2, ... in eta - z.  The ladder is extended one
    point at a time (up to ``max_points``) while the last two extrapolants
    disagree by more than LAMBDA_TOL.
    """
    with _Prec(k):
        e = eta(k)
        ps = psi_at_eta(k)
        logC = _logC(k, None)
        scale = 8 * e / ps
        exps = [mp.mpf(i) / 2 for i in range(1, order + 1)]
        ladder = []
        j = 0
        while True:
            while len(ladder) < points:
                z = e * (1 - mp.mpf(delta0) / 2**j)
                s = mp.sqrt(_delta(k, logC, z))
                ladder.append(_gf_system(k, logC, z, s).T * s)
                j += 1
            col = richardson_table(ladder, exps)[order]
            spread = float(abs(col[-1] - col[-2]) * scale)
            if spread <= LAMBDA_TOL:
                break
            if points >= max_points:
                raise NonConvergence(f"lambda_{k}: extrapolants differ by {spread:.3g}")
            points += 1
        kappa = col[-1]
        return LambdaResult(k, scale * kappa, kappa, spread, tuple(ladder))


def lambda_k(k: int):
    """Asymptotic number of Glushkov transitions per unit of expression size."""
    return lambda_details(k).value


def kappa_at_singularity(k: int):
    """kappa evaluated directly at z = eta with a vanishing square root.

    Independent of the ladder: at z = eta the system determinant vanishes
    linearly in s = sqrt(Delta), so s T(eta, s) tends to kappa as s -> 0.
    """
    with _Prec(k):
        e = eta(k)
        s = mp.mpf(10) ** (-(mp.mp.dps // 3))
        return s * _gf_system(k, _logC(k, None), e, s).T


def series_ratio_limit(numer: list[int], denom: list[int], n: int, nodes: int = 8, scale_by_n: bool = True):
    """Extrapolate ``numer[m] / (m denom[m])`` to m -> infinity.

    Uses the values at m = n, n/2, ..., n/nodes and the interpolating
    polynomial in 1/m evaluated at 0 (coefficient ratios of square-root
    type singularities expand in integer powers of 1/m).
    """
    ms = sorted({n // j for j in range(1, nodes + 1)}, reverse=True)
    with mp.workdps(40):
        xs = [mp.mpf(1) / m for m in ms]
        ys = [mp.mpf(numer[m]) / ((m if scale_by_n else 1) * mp.mpf(denom[m])) for m in ms]
        return polynomial_limit(xs, ys)


def locate_lambda(target: float, ks) -> tuple[int, mp.mpf]:
    """The k in ``ks`` whose lambda_k is closest to ``target``."""
    best = None
    for k in ks:
        v = lambda_k(k)
        if best is None or abs(v - target) < abs(best[1] - target):
            best = (k, v)
    return best


# ---------------------------------------------------------------------------
# bounds on C_k

@dataclass(frozen=True)
class StirlingCheck:
    k: int
    log_lower: mp.mpf
    log_c: mp.mpf
    log_upper: mp.mpf

    @property
    def ok(self) -> bool:
        return self.log_lower <= self.log_c <= self.log_upper

    def values(self) -> tuple:
        return tuple(mp.exp(x) for x in (self.log_lower, self.log_c, self.log_upper))


def stirling_bounds(k: int) -> StirlingCheck:
    """sqrt(2pi) 2^{2k-3/2} (k-1)^{k-1} / e^k <= C_k <= 2^{2k-3/2} (k-1)^{k-1} / (sqrt(2pi) e^{k-2})."""
    if k < 2:
        raise ValueError("the bounds are stated for k >= 2")
    with mp.workdps(40):
        common = (2 * k - mp.mpf(1.5)) * mp.log(2) + (k - 1) * mp.log(k - 1)
        half_log_2pi = mp.log(2 * mp.pi) / 2
        lower = half_log_2pi + common - k
        upper = common - half_log_2pi - (k - 2)
        return StirlingCheck(k, lower, mp.log(mp.mpf(c_k(k))), upper)


def stirling_bounds_check(k: int) -> bool:
    return stirling_bounds(k).ok


def lemma3_decay_check(k_max: int, t: float, s: float, k_min: int = 2) -> list[tuple[int, float]]:
    """Rows (k, log10(C_k k^t eta_k^{2k+s})) for k = k_min..k_max."""
    rows = []
    for k in range(k_min, k_max + 1):
        with _Prec(k):
            lv = log_c_k(k) + t * mp.log(k) + (2 * k + s) * mp.log(eta(k))
            rows.append((k, float(lv / mp.log(10))))
    return rows


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityReport:
    k: int
    rho: mp.mpf
    eta: mp.mpf
    psi_at_eta: mp.mpf
    g_at_eta: mp.mpf
    letters_ratio: mp.mpf
    lambda_: mp.mpf
    eta_bracket_width: mp.mpf
    iterations: int
    residual: mp.mpf
    lambda_spread: float

    @property
    def sandwich_ok(self) -> bool:
        # the lower gap is far below working precision for large k
        return eta_minus_rho(self.k) > 0 and self.eta < eta_upper(self.k)

    def csv_row(self, digits: int = 15) -> list[str]:
        f = lambda x: mp.nstr(x, digits)
        return [str(self.k), f(self.rho), f(self.eta), f(self.psi_at_eta), f(self.g_at_eta),
                f(self.letters_ratio), f(self.lambda_), mp.nstr(self.residual, 3)]


CSV_COLUMNS = ["k", "rho", "eta", "psi", "g", "letters_ratio", "lambda", "residual"]


def singularity_report(k: int) -> SingularityReport:
    sol = eta_solution(k)
    lam = lambda_details(k)
    with _Prec(k):
        return SingularityReport(
            k, rho(k), sol.eta, psi_at_eta(k), g_at_eta(k), letters_ratio(k), lam.value,
            sol.bracket_width, sol.iterations, sol.residual, lam.spread,
        )
