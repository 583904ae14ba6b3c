from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wachlog.errors import CompositionDomainError, InexactDivisionError, NonUnitError, NotDivisibleError
from wachlog.padic import PadicScalar
from wachlog.series import (
    PiSeries,
    XSeries,
    binomial_series,
    compose,
    div_linear,
    divide,
    invert,
    pi_power_divide,
    q_series,
    t_series,
)

P = 5
coeffs = st.lists(st.integers(-10**6, 10**6), min_size=3, max_size=20)


def naive_mul(a, b, top):
    out = [0] * (top + 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j <= top:
                out[i + j] += x * y
    return out


@given(coeffs, coeffs)
def test_product_matches_schoolbook(a, b):
    top = min(len(a), len(b)) - 1
    f = PiSeries.from_coeffs(P, a[: top + 1], 15)
    g = PiSeries.from_coeffs(P, b[: top + 1], 15)
    h = f * g
    expect = PiSeries.from_coeffs(P, naive_mul(a, b, top), 15)
    assert h.agreement_digits(expect) >= 15


@given(coeffs)
def test_inverse(a):
    a = [a[0] * P + 1] + a[1:]
    f = XSeries.from_coeffs(P, a, 20)
    one = f * invert(f)
    assert one.coeff(0) == 1
    for n in range(1, one.top + 1):
        assert one.coeff(n).is_zero()


def test_inverse_of_non_unit():
    with pytest.raises(NonUnitError):
        invert(XSeries.from_coeffs(3, [0, 1, 2], 10))


def test_inverse_with_nonintegral_slope():
    # 1 - pi/3 has inverse sum 3^-n pi^n
    f = PiSeries.from_coeffs(3, [1, Fraction(-1, 3)] + [0] * 8, 12)
    g = invert(f)
    for n in range(9):
        assert g.coeff(n) == Fraction(1, 3**n)


def test_t_of_exp_is_identity():
    # log(1 + ((1+pi)^p - 1)) = p * log(1 + pi)
    p, top = 3, 40
    t = t_series(p, top, 30)
    phi_pi = binomial_series(PiSeries, p, p, top, 40) - 1
    lhs = compose(t, phi_pi)
    rhs = t.scale(p)
    assert lhs.agreement_digits(rhs, upto=20) >= 10


def test_q_is_phi_pi_over_pi():
    p = 5
    q = q_series(p, 10, 20)
    phi_pi = binomial_series(PiSeries, p, p, 11, 20) - 1
    assert q.agreement_digits(pi_power_divide(phi_pi, 1).truncate(10)) >= 20


def test_compose_rejects_unit_constant():
    f = PiSeries.from_coeffs(3, [1, 1, 1], 10)
    with pytest.raises(CompositionDomainError):
        compose(f, f)


@given(st.lists(st.integers(-1000, 1000), min_size=2, max_size=12), st.integers(1, 3))
def test_div_linear_roundtrip(a, e):
    c = PadicScalar(P, P**e, 60)
    g = XSeries.from_coeffs(P, a + [0] * 8, 30)
    lin = XSeries.from_coeffs(P, [-c.value, 1] + [0] * (g.top - 1), 60)
    f = g * lin
    h = div_linear(f, c, tail_valuation=30)
    assert h.agreement_digits(g.truncate(h.top), upto=len(a) - 1) >= 10


def test_div_linear_nonroot():
    f = XSeries.from_coeffs(3, [1, 1, 0, 0], 10)
    with pytest.raises(InexactDivisionError):
        div_linear(f, 3, tail_valuation=10)


def test_pi_power_divide():
    f = PiSeries.from_coeffs(3, [0, 0, 4, 5], 10)
    g = pi_power_divide(f, 2)
    assert g.coeff(0) == 4 and g.coeff(1) == 5
    with pytest.raises(NotDivisibleError):
        pi_power_divide(f, 3)


def test_divide_and_json():
    f = XSeries.from_coeffs(7, [2, 3, 5, 7], 12)
    g = XSeries.from_coeffs(7, [1, 7, 0, 1], 12)
    h = divide(f, g)
    assert (h * g).agreement_digits(f) >= 10
    assert XSeries.from_json(f.to_json()) == f
