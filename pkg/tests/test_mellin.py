import random

import pytest
from hypothesis import given, strategies as st

from wachlog.errors import DomainError, NotInImageError
from wachlog.mellin import (
    annihilator_check,
    chi_point,
    eval_at_chi_power,
    gamma_act,
    inverse_mellin,
    mellin,
    phi,
    psi,
    special_element,
)
from wachlog.padic import PadicScalar, PrecisionProfile
from wachlog.series import PiSeries, XSeries, binomial_series

PROF = PrecisionProfile(20, 100, 16)


def rand_pi(p, seed, top=60, prec=15):
    rng = random.Random(seed)
    return PiSeries.from_coeffs(p, [rng.randrange(p**prec) for _ in range(top + 1)], prec)


@pytest.mark.parametrize("p", [3, 5])
@given(seed=st.integers(0, 10**6))
def test_psi_phi_identity(p, seed):
    f = rand_pi(p, seed)
    back = psi(phi(f), 0)
    diff = back - f.truncate(back.top)
    # agreement to every guaranteed digit, and enough of them
    assert diff.is_zero()
    assert back.min_precision(4) >= 8


@given(seed=st.integers(0, 10**6), a=st.sampled_from([4, 7, -2]))
def test_gamma_commutes_with_phi(seed, a):
    f = rand_pi(3, seed, top=40)
    assert gamma_act(a, phi(f)).agreement_digits(phi(gamma_act(a, f)), upto=40) >= 15


def test_gamma_composition():
    f = rand_pi(5, 1, top=30)
    lhs = gamma_act(6, gamma_act(11, f))
    assert lhs.agreement_digits(gamma_act(66, f), upto=30) >= 12


def test_gamma_needs_unit():
    with pytest.raises(DomainError):
        gamma_act(3, rand_pi(3, 0))


def test_mellin_of_constant_is_one_plus_pi():
    one = XSeries.constant(3, 1, PROF.x_degree, 20)
    g = mellin(one, PROF)
    assert g.agreement_digits(binomial_series(PiSeries, 3, 1, g.top, 20)) >= 20
    f = inverse_mellin(binomial_series(PiSeries, 3, 1, 100, 20), PROF)
    assert f.coeff(0) == 1 and all(f.coeff(n).is_zero() for n in range(1, f.top + 1))


def test_mellin_of_X_is_gamma_difference():
    # X acts as gamma - 1 with gamma(1+pi) = (1+pi)^u
    p = 3
    x = XSeries.gen(p, PROF.x_degree, 20)
    g = mellin(x, PROF)
    expect = binomial_series(PiSeries, p, 1 + p, g.top, 20) - binomial_series(PiSeries, p, 1, g.top, 20)
    assert g.agreement_digits(expect, upto=50) >= 18


@pytest.mark.parametrize("p", [3, 5])
def test_roundtrip_and_dual_evaluation(p):
    rng = random.Random(p)
    f = XSeries.from_coeffs(p, [rng.randrange(p**20) for _ in range(17)], 20)
    g = mellin(f, PROF)
    assert inverse_mellin(g, PROF).agreement_digits(f, upto=16) >= 10
    for s in range(6):
        a = eval_at_chi_power(f, s, 0)
        b = eval_at_chi_power(g, s)
        assert PadicScalar(p, (a - b).value, min(a.abs_precision, b.abs_precision)).is_zero()


def test_inverse_mellin_rejects_non_image():
    g = PiSeries.constant(3, 1, 60, 20)
    with pytest.raises(NotInImageError):
        inverse_mellin(g, PROF)


@pytest.mark.parametrize("i", [0, 1, 2, 3])
def test_ell_vanishes_at_its_point(i):
    ell = special_element("ell", i, 5, PROF)
    assert eval_at_chi_power(ell, i).valuation >= 10
    other = eval_at_chi_power(ell, i + 1)
    assert not other.is_zero()


def test_delta_times_linear_is_ell():
    p, i = 3, 2
    d = special_element("delta", i, p, PROF)
    ell = special_element("ell", i, p, PROF)
    x = chi_point(p, i, 40)
    lin = XSeries.from_coeffs(p, [-x.value, 1] + [0] * (d.top - 1), 40)
    diff = (d * lin).truncate(8) - ell.truncate(8)
    assert diff.is_zero()
    assert diff.min_precision() >= 3


def test_frak_n_has_no_zeros_at_chi_points():
    n3 = special_element("frak_n", 3, 3, PROF)
    for s in range(6):
        assert not eval_at_chi_power(n3, s).is_zero()


def test_unknown_special_element():
    with pytest.raises(DomainError):
        special_element("zeta", 1, 3, PROF)


@pytest.mark.parametrize("k", [1, 2])
def test_annihilator(k):
    prof = PrecisionProfile(20, 200, 32)
    rng = random.Random(k)
    f = XSeries.from_coeffs(3, [rng.randrange(3**20) for _ in range(33)], 20)
    rep = annihilator_check(k, f, prof)
    assert rep["status"] == "pass"
    wrong = annihilator_check(1, f, prof, indices=[1])
    assert wrong["t_divisible"] is False
