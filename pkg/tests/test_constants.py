import math

import pytest

from bernays.arith import Discriminant
from bernays.constants import (
    ConstantReport,
    accelerated_factor,
    bernays_constant,
    divisors_of_power,
    euler_product_accelerated,
    euler_product_direct,
    genus_sum_check,
    landau_constant_product,
    reports_to_csv,
)
from bernays.data import TABLE
from bernays.errors import EstimatorDisagreementError, NotFundamentalError, OutOfRangeError
from bernays.lfunc import l_one

P_TEST = 10**6


def test_e_minus_4_matches_landau_constant():
    e, err = euler_product_direct(-4, P_TEST)
    assert abs(e - 2 * 0.764223653589220**2) <= err + 1e-12


@pytest.mark.parametrize("D", [-3, -4, -56, -71, -1995])
def test_e_between_one_and_zeta2(D):
    e, err = euler_product_direct(D, P_TEST)
    assert 1 < e < math.pi**2 / 6


def test_direct_error_shrinks_and_brackets():
    e_lo, err_lo = euler_product_direct(-71, 10**5)
    e_hi, err_hi = euler_product_direct(-71, 10**7)
    assert err_hi < err_lo
    # truncation only drops factors > 1
    assert e_lo <= e_hi <= e_lo + err_lo


def test_first_accelerated_factor_for_minus_4():
    # zeta(2) / L(2, chi_-4) * (1 - 1/4), square root
    f, err = accelerated_factor(-4, 1, P_TEST)
    expected = math.sqrt(math.pi**2 / 6 / 0.915965594177219 * 0.75)
    assert abs(f - expected) <= f * err + 1e-12


@pytest.mark.parametrize("D", [-4, -8, -71, -1995])
def test_late_accelerated_factors_are_near_one(D):
    for k in (5, 6):
        f, _ = accelerated_factor(D, k, P_TEST)
        assert abs(f - 1) < 1e-6


@pytest.mark.parametrize("D", [-3, -4, -8, -56, -71, -420, -1995])
def test_direct_and_accelerated_overlap(D):
    e1, err1 = euler_product_direct(D, 10**7)
    e2, err2 = euler_product_accelerated(D, 5)
    assert abs(e1 - e2) <= err1 + err2
    assert abs(e1 - e2) < 1e-7


def test_accelerated_depth_range():
    with pytest.raises(OutOfRangeError):
        euler_product_accelerated(-4, 2)


@pytest.mark.parametrize("D", [-4, -8, -56, -71, -1995])
def test_report_is_self_consistent(D):
    r = bernays_constant(D, prime_bound=10**7)
    disc = Discriminant.of(D)
    assert r.h * {-3: 1 / 3, -4: 1 / 2}.get(D, 1) * math.pi / math.sqrt(-D) == pytest.approx(r.l_one.value, rel=1e-14)
    assert r.c_d == pytest.approx(2.0 ** (1 - disc.omega) * math.sqrt(-D / disc.phi * r.l_one.value / math.pi * r.e_d), rel=1e-14)
    # J(D) = 2^(omega-1) C(D) phi / |D|
    assert r.j_d == pytest.approx(2.0 ** (disc.omega - 1) * r.c_d * disc.phi / -D, rel=1e-14)
    assert abs(r.c_d - TABLE[D]) < 1e-8 + r.c_err


@pytest.mark.parametrize("D", [-20, -84, -420])
def test_both_methods(D):
    r = bernays_constant(D, method="both", prime_bound=10**7)
    assert abs(r.c_d - TABLE[D]) < 1e-8
    assert r.method == "both"


def test_both_detects_disagreement(monkeypatch):
    import bernays.constants as mod

    monkeypatch.setattr(mod, "euler_product_accelerated", lambda D, K, P: (1.5, 1e-12))
    with pytest.raises(EstimatorDisagreementError):
        mod.bernays_constant(-4, method="both", prime_bound=10**5)


def test_tolerance_picks_prime_bound():
    assert bernays_constant(-4, tol=1e-4).prime_bound == 10**5
    r = bernays_constant(-4, tol=1e-8)
    assert r.c_err < 1e-8


def test_invalid_inputs():
    with pytest.raises(NotFundamentalError):
        bernays_constant(-12)
    with pytest.raises(ValueError):
        bernays_constant(-4, method="magic")


def test_landau_product_matches_c_minus_4():
    c, err = landau_constant_product(10**7)
    r = bernays_constant(-4, prime_bound=10**7)
    assert abs(c - r.c_d) <= err + r.c_err
    e, e_err = euler_product_direct(-4, 10**7)
    assert c == pytest.approx(math.sqrt(e / 2), rel=1e-13)
    assert abs(c - 0.764223653589220) <= err


def test_json_round_trip():
    r = bernays_constant(-56, prime_bound=10**5)
    back = ConstantReport.from_json(r.to_json())
    assert back == r
    assert back.l_one.value == l_one(-56).value


def test_csv_is_deterministic_without_timing():
    rs = [bernays_constant(D, prime_bound=10**5) for D in (-3, -4)]
    text = reports_to_csv(rs, timing=False)
    assert text.splitlines()[0] == "D,h,omega,L1,E,C,err,method,prime_bound,runtime_ms"
    assert all(line.endswith(",0") for line in text.splitlines()[1:])
    assert text == reports_to_csv([bernays_constant(D, prime_bound=10**5) for D in (-3, -4)], timing=False)


def test_divisors_of_power():
    assert divisors_of_power((2, 7), 30) == [1, 2, 4, 7, 8, 14, 16, 28]
    assert divisors_of_power((2,), 1) == [1]


@pytest.mark.parametrize("D", [-4, -8, -20, -56])
def test_genus_sum_bracket_small_m(D):
    g = genus_sum_check(D, 10**4)
    assert g.contains_closed_form
    assert g.partial < g.upper


def test_genus_sum_bracket_tightens():
    a, b = genus_sum_check(-56, 10**3), genus_sum_check(-56, 10**5)
    assert b.upper - b.partial < a.upper - a.partial
    assert a.partial <= b.partial
    with pytest.raises(OutOfRangeError):
        genus_sum_check(-56, 10**6 + 1)
