import mpmath as mp
import pytest

from renacount import asymptotics as asy
from renacount.polys import peval, spectral_polynomials

REFERENCE_LAMBDA = {2: 4.03, 5: 2.91, 10: 2.30, 50: 1.54, 100: 1.38, 10000: 1.03}
SANDWICH_K = [1, 2, 3, 5, 10, 50, 100, 1000, 10000]


@pytest.fixture(autouse=True)
def _digits():
    # results come back as 50-digit mpf; keep test arithmetic at that level
    with mp.workdps(50):
        yield


def test_rho():
    assert abs(asy.rho(2) - 1 / (1 + mp.sqrt(24))) < mp.mpf(10) ** -45
    assert abs(float(asy.rho(2)) - 0.1695208) < 1e-7
    for k in (1, 2, 7, 100, 10000):
        r = asy.rho(k)
        assert abs(asy.p_k(k, r)) < mp.mpf(10) ** -45
        assert r < asy.eta_upper(k)


@pytest.mark.parametrize("k", SANDWICH_K)
def test_eta_sandwich_and_residual(k):
    sol = asy.eta_solution(k)
    assert asy.eta_minus_rho(k) > 0
    assert sol.eta < asy.eta_upper(k)
    assert sol.residual <= 1e-12
    assert sol.bracket_width <= 1e-6
    assert asy.singularity_report(k).sandwich_ok


def test_eta_matches_exact_polynomial():
    for k in (2, 3, 6):
        sp = spectral_polynomials(k)
        e = asy.eta(k)
        assert abs(peval(sp.delta, e)) < mp.mpf(10) ** -40
        assert abs(asy.delta(k, e)) < mp.mpf(10) ** -40
        dp = peval([i * c for i, c in enumerate(sp.delta)][1:], e)
        assert abs(dp - asy.delta_prime(k, e)) < mp.mpf(10) ** -40


def test_eta_known_value():
    assert abs(asy.eta(2) - mp.mpf("0.169615978473698")) < 1e-14


def test_bracket_signs():
    for k in (2, 10, 300, 3000, 10000):
        assert asy.delta(k, asy.eta_upper(k)) < 0


def test_k_eta_squared():
    v = 10**4 * asy.eta(10**4) ** 2
    assert 0.118 < v < 0.125


def test_psi():
    assert asy.psi_at_eta(2) > 0
    assert abs(asy.psi_at_eta(10**4) - 2) < 0.05


def test_degenerate_pattern_count():
    for k in (1, 2, 9):
        assert abs(asy.eta(k, C=0) - asy.rho(k)) < mp.mpf(10) ** -40
        assert abs(asy.psi_at_eta(k, C=0) - (2 - 2 * asy.rho(k))) < mp.mpf(10) ** -40
        z = mp.mpf("0.05")
        assert asy.delta(k, z, C=0) == asy.p_k(k, z)


def test_letters_ratio():
    assert abs(asy.letters_ratio(10**4) - 0.5) <= 0.01
    assert abs(asy.letters_ratio(2) - mp.mpf("0.27648")) < 1e-4


def test_g_forms_agree():
    for k in (2, 4):
        sp = spectral_polynomials(k)
        z = mp.mpf("0.13")
        assert abs(peval(sp.g, z) - asy.g_k(k, z)) < mp.mpf(10) ** -40


@pytest.mark.parametrize("k", sorted(REFERENCE_LAMBDA))
def test_lambda_table(k):
    res = asy.lambda_details(k)
    assert abs(res.value - REFERENCE_LAMBDA[k]) <= 0.01
    assert res.spread <= asy.LAMBDA_TOL


@pytest.mark.parametrize("k", [2, 5, 100])
def test_lambda_ladder_matches_direct_limit(k):
    direct = 8 * asy.eta(k) * asy.kappa_at_singularity(k) / asy.psi_at_eta(k)
    assert abs(asy.lambda_k(k) - direct) < 1e-4


def test_lambda_nonconvergence_is_reported():
    with pytest.raises(asy.NonConvergence):
        asy.lambda_details(2, points=6, max_points=6)


def test_locate_lambda_189():
    k, v = asy.locate_lambda(1.89, range(10, 51))
    assert 10 < k < 50
    assert abs(v - 1.89) < 0.02


def test_gf_values_match_series(table_k2_2000):
    k = 2
    z = asy.eta(k) / 2
    g = asy.evaluate_gf_at(k, z)
    for name, val in (("R", g.R), ("R_P", g.R_P), ("R_eps", g.R_eps), ("F", g.F),
                      ("E", g.E), ("Estar", g.Estar), ("T", g.T)):
        s = mp.polyval(table_k2_2000[name][::-1], z)
        assert abs(s / val - 1) < 1e-10, name


def test_gf_limits():
    k = 2
    e = asy.eta(k)
    r_at_eta = (1 - e + 2 * e * asy._cz(k, asy.log_c_k(k), e)) / (4 * e)
    near = asy.evaluate_gf_at(k, e * (1 - mp.mpf(10) ** -16))
    assert abs(near.R - r_at_eta) < 1e-6
    vals = [asy.evaluate_gf_at(k, e * (1 - mp.mpf(10) ** -j)) for j in (8, 10, 12)]
    prod = [v.T * mp.sqrt(asy.delta(k, v.z)) for v in vals]
    assert all(p > 0 for p in prod)
    assert abs(prod[-1] - prod[-2]) < abs(prod[1] - prod[0])
    with pytest.raises(ValueError):
        asy.evaluate_gf_at(k, e)


def test_count_asymptotics_converge(table_k2_2000):
    R, B, L = table_k2_2000["R"], table_k2_2000["B"], table_k2_2000["L"]
    prev = None
    for n in (50, 100, 200, 400):
        errs = (abs(asy.re_count_asymptotic(2, n).ratio_to(R[n]) - 1),
                abs(asy.standard_count_asymptotic(2, n).ratio_to(B[n]) - 1),
                abs(asy.letters_count_asymptotic(2, n).ratio_to(L[n]) - 1))
        if prev is not None:
            assert all(x < y for x, y in zip(errs, prev))
        prev = errs
    assert max(prev) <= 0.05
    ratio = asy.class_ratio_asymptotic(2, 400) / (mp.mpf(R[400]) / B[400])
    assert abs(ratio - 1) <= 0.05


def test_count_asymptotics_k3():
    from renacount.series import coeff_table

    t = coeff_table(3, 400)
    errs = [abs(asy.re_count_asymptotic(3, n).ratio_to(t["R"][n]) - 1) for n in (50, 100, 200, 400)]
    assert errs == sorted(errs, reverse=True)


def test_estimate_shape():
    est = [asy.re_count_asymptotic(2, n) for n in (100, 200, 300)]
    # after removing n^{-3/2}, log-linear with slope -ln(eta)
    adj = [x.log + mp.mpf(1.5) * mp.log(n) for x, n in zip(est, (100, 200, 300))]
    slope = -mp.log(asy.eta(2))
    assert abs((adj[1] - adj[0]) / 100 - slope) < 1e-10
    assert abs((adj[2] - adj[1]) / 100 - slope) < 1e-10
    m, ex = asy.re_count_asymptotic(2, 10**6).mantissa_exponent()
    assert 1 <= m < 10 and ex > 700000
    # letters estimate over n times the count estimate is the letters ratio
    n = 777
    q = asy.letters_count_asymptotic(2, n) / asy.re_count_asymptotic(2, n)
    assert abs(q / n - asy.letters_ratio(2)) < mp.mpf(10) ** -30


def test_class_ratio_decreases_to_zero():
    vals = [asy.class_ratio_asymptotic(2, n) for n in range(10, 201, 10)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert asy.class_ratio_asymptotic(2, 2 * 10**4) < 1e-3


def test_stirling_bounds():
    lo, ck, hi = asy.stirling_bounds(2).values()
    assert abs(ck - 2) < 1e-30 and 1.9 < lo < 1.92 and 2.25 < hi < 2.26
    for k in range(2, 201):
        chk = asy.stirling_bounds(k)
        assert chk.ok and chk.log_lower <= chk.log_upper


@pytest.mark.parametrize("t,s", [(0, 0), (2, 1), (1, -1)])
def test_lemma3_decay(t, s):
    rows = asy.lemma3_decay_check(100, t, s)
    assert rows[-1][0] == 100 and rows[-1][1] < -6
    tail = [v for k, v in rows if k >= 20]
    assert all(b < a for a, b in zip(tail, tail[1:]))


def test_lemma3_monotone_in_s():
    a = dict(asy.lemma3_decay_check(30, 1, 0))
    b = dict(asy.lemma3_decay_check(30, 1, 1))
    assert all(b[k] < a[k] for k in a)


def test_series_side_lambda(table_k2_2000):
    est = asy.series_ratio_limit(table_k2_2000["T"], table_k2_2000["R"], 2000)
    assert abs(est - asy.lambda_k(2)) < 0.02


def test_precision_override():
    with asy.precision(30):
        assert asy.default_dps(2) == 30
        e30 = asy.eta(2)
    assert abs(e30 - asy.eta(2)) < 1e-25
    assert asy.default_dps(5000) == 100 and asy.default_dps(5) == 50


@pytest.mark.slow
def test_letters_ratio_against_samples():
    from renacount.expr import alphabetic_size
    from renacount.sampler import SamplerSpec, sample_batch

    n, m = 2000, 800
    xs = [alphabetic_size(e) / n for e in sample_batch(SamplerSpec(2, n, seed=21), m)]
    mean = sum(xs) / m
    se = (sum((x - mean) ** 2 for x in xs) / (m - 1) / m) ** 0.5
    lr = float(asy.letters_ratio(2))
    assert abs(mean / lr - 1) <= 0.02
    assert abs(mean - lr) <= 3 * se + abs(lr) * 0.01
