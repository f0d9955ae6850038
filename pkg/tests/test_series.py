import pytest

from renacount.polys import c_k, pderiv, peval, pmul, spectral_polynomials
from renacount.series import (
    CoeffTable,
    coeff_table,
    coeffs_B,
    coeffs_R,
    coeffs_R_eps,
    coeffs_R_eps_variant,
    verify_quadratic_L,
    verify_quadratic_R,
)


def test_c_k():
    assert [c_k(k) for k in (1, 2, 3, 4)] == [1, 2, 12, 120]


def test_b_examples():
    assert coeffs_B(2, 8) == [0, 3, 3, 21, 57, 327, 1263, 6753, 30621]


def test_r_examples(small_tables):
    t = small_tables[2]
    assert t["R"][:6] == t["B"][:6]
    assert t["B"][6] - t["R"][6] == 12
    for k, tk in small_tables.items():
        assert tk["R"][1] == k + 1


def test_pattern_first_bites_at_2k_plus_2(small_tables):
    for k, t in small_tables.items():
        n0 = 2 * k + 2
        if n0 > t.N:
            continue
        assert t["R"][:n0] == t["B"][:n0]
        assert t["R"][n0] < t["B"][n0]


def test_small_coefficients(small_tables):
    t = small_tables[2]
    assert t["L"][1:3] == [2, 2]
    assert t["R_eps"][1:3] == [1, 3]
    assert t["F"][1:3] == [2, 2]
    assert t["T"][1:3] == [2, 4]
    for k, tk in small_tables.items():
        assert tk["E"][1] == 0
        assert tk["Estar"][1] == k
        assert tk["T"][1] == k


def test_table_invariants(small_tables):
    for k, t in small_tables.items():
        C = t.C
        for name, vals in t.series.items():
            assert vals[0] == 0, name
            assert min(vals) >= 0, name
        for n in range(t.N + 1):
            hit = n == 2 * k
            assert t["R_P"][n] == t["R"][n] - C * hit
            assert t["P"][n] == t["L"][n] - k * C * hit
            assert t["E_P"][n] == t["E"][n] - k * k * C * hit
            assert t["Estar_P"][n] == t["Estar"][n] - k * k * C * hit
            assert t["R_eps"][n] + t["R_epsbar"][n] == t["R"][n]
            assert t["T"][n] == t["F"][n] + t["E"][n]
            assert t["S"][n] == t["F"][n]
            assert t["R"][n] <= t["B"][n]
            assert t["L"][n] <= n * t["R"][n]
            assert t["F"][n] <= t["L"][n]


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_r_eps_variants_agree(k):
    R, RP = coeffs_R(k, 80)
    assert coeffs_R_eps(k, 80, R, RP)[0] == coeffs_R_eps_variant(k, 80, R)


@pytest.mark.parametrize("k,N", [(2, 50), (3, 40), (4, 60)])
def test_quadratic_R(k, N):
    assert verify_quadratic_R(k, N)


def test_quadratic_R_detects_wrong_pattern_count():
    chk = verify_quadratic_R(2, 50, C=3)
    assert not chk
    assert chk.first_failure >= 5


@pytest.mark.parametrize("k", [2, 3, 4])
def test_quadratic_L(k):
    rep = verify_quadratic_L(k, 60)
    assert rep.ok
    assert rep.closed_form and rep.signed and rep.quadratic and rep.discriminant


def test_quadratic_L_sign_flip_is_caught():
    sp = spectral_polynomials(2)
    rep = verify_quadratic_L(2, 60, g=[-x for x in sp.g])
    assert not rep.ok
    assert rep.closed_form  # g enters squared here
    assert not rep.signed


def test_variant_letters_forms_fail():
    # the alternative g and quadratic do not hold as series identities
    assert not verify_quadratic_L(2, 60, g=spectral_polynomials(2).g_variant).ok
    rep = verify_quadratic_L(2, 60)
    assert not rep.variant and rep.variant.first_failure == 2


@pytest.mark.parametrize("k", [1, 2, 3, 7])
def test_spectral_polynomials(k):
    sp = spectral_polynomials(k)
    assert sp.delta[0] == 1 and sp.r[0] == 1
    assert len(sp.delta) - 1 == 4 * k + 2
    # Delta = r^2 - 8 z^2 s
    rr = pmul(sp.r, sp.r)
    z2s = [0, 0] + [8 * x for x in sp.s]
    n = max(len(rr), len(z2s))
    diff = [(rr[i] if i < len(rr) else 0) - (z2s[i] if i < len(z2s) else 0) for i in range(n)]
    while diff and diff[-1] == 0:
        diff.pop()
    d = list(sp.delta)
    while d and d[-1] == 0:
        d.pop()
    assert diff == d


def test_h_positive_at_rho():
    from fractions import Fraction
    import math

    for k in range(1, 40):
        sp = spectral_polynomials(k)
        rho = Fraction(1) / (1 + Fraction(math.sqrt(8 + 8 * k)))
        assert peval(sp.h, rho) > 0
        assert peval(pderiv(sp.delta), rho) < 0


def test_json_roundtrip(small_tables):
    t = small_tables[3]
    back = CoeffTable.from_json(t.to_json())
    assert back.series == t.series and back.C == t.C == 12 and back.N == t.N


def test_bad_arguments():
    with pytest.raises(ValueError):
        coeff_table(0, 10)
    with pytest.raises(ValueError):
        coeff_table(2, 0)
