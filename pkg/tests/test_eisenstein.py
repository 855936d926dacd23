from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import bernoulli_by_recurrence, eisenstein_by_definition, naive_sigma
from thetamod.eisenstein import E, E2, G, G2, G_star, G_star_direct, eisenstein_constant
from thetamod.errors import DivisibilityViolation, NonInvertibleDenominator
from thetamod.qseries import QQ, ZZ, Zpm, series_vp
from thetamod.thetapm import is_unit_eisenstein, serre_sum

BERN = bernoulli_by_recurrence(60)


def test_G2_head():
    assert list(G2(6).coeffs) == [Fraction(-1, 24), 1, 3, 4, 7, 6]
    assert G2(3, Zpm(5, 2)).coeffs == (1, 1, 3)  # -1/24 = 1 mod 25


def test_E2_is_integral():
    assert list(E2(5, ZZ).coeffs) == [1, -24, -72, -96, -168]
    assert E2(8) == G2(8).scale(-24)


@pytest.mark.parametrize("k, expected", [(4, [1, 240, 2160, 6720, 17520]),
                                         (6, [1, -504, -16632, -122976, -532728])])
def test_E4_E6(k, expected):
    assert list(E(k, 5, ZZ).coeffs) == expected


@pytest.mark.parametrize("k", [4, 6, 8, 12, 16, 22, 40])
def test_E_matches_definition(k):
    assert list(E(k, 12).coeffs) == eisenstein_by_definition(k, 12, BERN)


@pytest.mark.parametrize("k, expected", [(4, Fraction(1, 240)), (6, Fraction(-1, 504)),
                                         (12, Fraction(691, 65520))])
def test_eisenstein_constant(k, expected):
    assert eisenstein_constant(k) == expected
    assert G(k, 1)[0] == expected


def test_G_mod_p_requires_p_integral_constant():
    with pytest.raises(NonInvertibleDenominator):
        G(4, 5, Zpm(5, 1))  # 1/240 has 5 in the denominator
    assert G(6, 3, Zpm(5, 2)).coeffs[1:] == (1, 33 % 25)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_G_p_plus_1_has_valuation_zero(p):
    assert series_vp(G(p + 1, 30), p) == 0


def test_G_rejects_bad_weights():
    for k in (2, 3, 0, -4):
        with pytest.raises(ValueError):
            G(k, 4)


def test_G_star_examples():
    g = G_star(2, 5, 2, 10)
    assert g == G(22, 10, Zpm(5, 2))
    assert g[0] == 21  # constant of G_22 reduced mod 25
    assert G_star(2, 5, 1, 10) == G(6, 10, Zpm(5, 1))
    with pytest.raises(DivisibilityViolation):
        G_star(4, 5, 2, 10)


@pytest.mark.parametrize("k, p, t", [(2, 5, 1), (2, 5, 2), (2, 7, 2), (2, 5, 3), (4, 7, 2)])
def test_G_star_matches_direct(k, p, t):
    a, b = G_star(k, p, t, 41), G_star_direct(k, p, t, 41)
    assert a == b


def test_G_star_nonconstant_when_p_minus_1_divides_k():
    a = G_star(4, 5, 2, 41, constant_term=False)
    b = G_star_direct(4, 5, 2, 41, constant_term=False)
    assert a == b and a[0] == 0


def test_sigma_star_coefficients_skip_multiples_of_p():
    g = G_star_direct(2, 5, 1, 11)
    assert [g[n] for n in (5, 10)] == [1, naive_sigma(1, 2) % 5]


@pytest.mark.parametrize("p, m", [(5, 1), (5, 2), (5, 3), (7, 2)])
def test_serre_sum_is_G2(p, m):
    assert serre_sum(p, m, 40) == G2(40, Zpm(p, m))


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 60).map(lambda h: 2 * h), st.sampled_from([5, 7, 11]), st.integers(1, 3))
def test_E_is_unit_iff_divisibility(k, p, t):
    expected = k % (p ** (t - 1) * (p - 1)) == 0
    assert is_unit_eisenstein(k, p, t, 8) == expected


@pytest.mark.parametrize("k, p, t", [(4, 5, 1), (20, 5, 2), (100, 5, 3), (42, 7, 2), (6, 7, 1)])
def test_E_unit_positive_direction(k, p, t):
    assert is_unit_eisenstein(k, p, t, 30)
    assert E(k, 30, Zpm(p, t)) == E(k, 30, QQ).change_ring(Zpm(p, t))


@pytest.mark.parametrize("k, p, t", [(4, 5, 2), (8, 5, 2), (10, 7, 1), (16, 5, 2)])
def test_E_unit_negative_direction(k, p, t):
    assert not is_unit_eisenstein(k, p, t, 30)
