import math
import random

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.special import erfi

from bernays.arith import omega
from bernays.census import (
    census,
    census_by_genus,
    compare_approximations,
    landau_prediction,
    odd_counts,
    odd_identity_check,
    plot_data,
    ramanujan_integral,
    records_to_csv,
    sieve_representable,
)
from bernays.errors import BudgetExceededError, OutOfRangeError
from bernays.forms import QuadraticForm as Q
from bernays.forms import enumerate_reduced, reduce, represents

from oracles import naive_represented


def members(rep):
    return set(np.flatnonzero(rep.to_bool()).tolist())


def test_small_examples():
    r = sieve_representable(Q(1, 0, 1), 25)
    assert r.count == 13
    assert members(r) == {1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20, 25}
    r = sieve_representable(Q(1, 0, 2), 10)
    assert r.count == 7 and members(r) == {1, 2, 3, 4, 6, 8, 9}
    assert members(sieve_representable(Q(1, 0, 1), 3)) == {1, 2}


def test_contains():
    r = sieve_representable(Q(1, 0, 14), 100)
    assert 15 in r and 14 in r and 2 not in r
    assert 0 not in r and 101 not in r


@pytest.mark.parametrize("D", [-3, -4, -23, -56, -71, -420])
def test_leading_coefficient_is_marked(D):
    for f in enumerate_reduced(D):
        assert f.a in sieve_representable(f, max(f.a, 10))


@pytest.mark.parametrize("form", [(1, 0, 1), (1, 1, 1), (1, 0, 14), (2, 0, 7), (3, 2, 5), (5, 4, 3), (3, -2, 8)])
def test_sieve_matches_naive_oracle(form):
    x = 20000
    assert members(sieve_representable(Q(*form), x)) == naive_represented(form, x)


@pytest.mark.parametrize("form", [(1, 0, 14), (3, 2, 5), (7, 3, 11)])
def test_sieve_matches_point_test(form):
    f = Q(*form)
    x = 10**6
    r = sieve_representable(f, x)
    rng = random.Random(sum(form))
    for m in rng.sample(range(1, x + 1), 500):
        assert (m in r) == (represents(f, m) is not None), m


def test_count_is_monotone():
    f = Q(2, 1, 3)
    cum = np.cumsum(sieve_representable(f, 5000).to_bool())
    assert (np.diff(cum) >= 0).all()
    for x in (1, 2, 17, 400, 4999):
        assert sieve_representable(f, x).count == cum[x]


@st.composite
def small_forms(draw):
    a = draw(st.integers(1, 20))
    b = draw(st.integers(-20, 20))
    c = draw(st.integers(1, 20))
    assume(b * b - 4 * a * c < 0 and math.gcd(a, b, c) == 1)
    return Q(a, b, c)


@settings(max_examples=50, deadline=None)
@given(small_forms())
def test_reduction_invariance(f):
    a, b = sieve_representable(f, 3000), sieve_representable(reduce(f), 3000)
    assert a.count == b.count and (a.bits == b.bits).all()


@pytest.mark.parametrize("form", [(1, 0, 14), (3, 2, 5), (1, 1, 5)])
def test_coprime_recount(form):
    f = Q(*form)
    r = sieve_representable(f, 50000)
    D = f.discriminant
    expected = sum(1 for m in members(r) if math.gcd(m, D) == 1)
    assert r.count_coprime == expected
    assert 0 <= r.count_coprime <= r.count <= r.x


@pytest.mark.parametrize("seg", [8, 64, 1000, 4096])
def test_segmented_equals_single_pass(seg):
    f = Q(3, 2, 5)
    whole = sieve_representable(f, 20000, segment_bits=1 << 20)
    part = sieve_representable(f, 20000, segment_bits=seg)
    assert (whole.bits == part.bits).all()
    assert (whole.count, whole.count_coprime) == (part.count, part.count_coprime)


def test_sieve_input_checks(monkeypatch):
    with pytest.raises(ValueError):
        sieve_representable(Q(2, 2, 6), 10)
    with pytest.raises(OutOfRangeError):
        sieve_representable(Q(1, 0, 1), 0)
    with pytest.raises(OutOfRangeError):
        sieve_representable(Q(1, 0, 1), 10**9 + 1)
    monkeypatch.setenv("BERNAYS_MEMORY_BUDGET", "1000")
    with pytest.raises(BudgetExceededError):
        sieve_representable(Q(1, 0, 1), 10**6)


def test_ramanujan_integral_against_erfi():
    # int_2^x dt/sqrt(ln t) = sqrt(pi) (erfi(sqrt(ln x)) - erfi(sqrt(ln 2)))
    for x in (3, 10, 1e3, 1e6, 1e9):
        expected = math.sqrt(math.pi) * (erfi(math.sqrt(math.log(x))) - erfi(math.sqrt(math.log(2))))
        assert ramanujan_integral(x) == pytest.approx(expected, rel=1e-9)
    assert ramanujan_integral(2) == 0.0


def test_integral_exceeds_landau_by_expected_margin():
    x = 10**6
    ratio = ramanujan_integral(x) / landau_prediction(1.0, x)
    assert ratio > 1.03
    assert abs(ratio - (1 + 1 / (2 * math.log(x)))) < 3 / math.log(x) ** 2


def test_census_record():
    r = census(Q(1, 0, 1), 10**4, 0.7642236535892206)
    assert r.count == sieve_representable(Q(1, 0, 1), 10**4).count
    assert r.integral_pred > r.landau_pred > 0
    assert r.c_used == 0.7642236535892206
    text = records_to_csv([r])
    assert text.splitlines()[0] == "D,a,b,c,x,count,count_coprime,landau_pred,integral_pred"
    assert text.splitlines()[1].startswith("-4,1,0,1,10000,")
    with pytest.raises(OutOfRangeError):
        census(Q(1, 0, 1), 2, 0.76)


def test_odd_identity():
    assert sieve_representable(Q(1, 0, 1), 10).count == 7
    od = odd_counts(10)
    assert [od[10], od[5], od[2], od[1]] == [3, 2, 1, 1]
    for x in (1, 10, 12345, 10**6):
        assert odd_identity_check(x)
    with pytest.raises(OutOfRangeError):
        odd_identity_check(10**8 + 1)


def test_genus_census_small():
    g = census_by_genus(-4, 1000)
    assert g.shares == (1.0,)
    assert g.overlap == 0


@pytest.mark.parametrize("D", [-56, -84, -420])
def test_genus_sieves_are_disjoint_on_coprime_integers(D):
    g = census_by_genus(D, 10**5)
    assert g.overlap == 0
    assert sum(g.counts) == g.total
    assert len(g.counts) == 2 ** (omega(D) - 1)


def test_compare_shape():
    rows = compare_approximations(-8, [10**4, 10**6], C=0.872887558)
    assert [r.x for r in rows] == [10**4, 10**6]
    assert all(math.isfinite(v) for r in rows for v in (r.count, r.landau_err, r.integral_err))


def test_compare_relative_error_trend_minus_4():
    # soft check: the integral's relative error shrinks along 10^4, 10^5, 10^6
    rows = compare_approximations(-4, [10**4, 10**5, 10**6], C=0.7642236535892206)
    rel = [r.integral_err / r.count for r in rows]
    assert rel[2] < rel[0]


def test_plot_data_ratio_near_constant():
    pts = plot_data(Q(1, 0, 1), [10**3, 10**5])
    assert [x for x, _ in pts] == [10**3, 10**5]
    assert all(0.7 < r < 1.0 for _, r in pts)
