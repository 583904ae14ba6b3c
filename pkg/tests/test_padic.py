from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wachlog.errors import DomainError, InvalidUnitError, PrecisionExhaustedError
from wachlog.padic import (
    PadicScalar,
    PrecisionProfile,
    check_odd_prime,
    log_one_unit,
    padic_binom,
    teichmuller,
    vp,
)

primes = st.sampled_from([3, 5, 7, 11])


def test_teichmuller_known_value():
    # 57 is the root of unity = 2 mod 5, to 3 digits
    assert teichmuller(2, 5, 3) == PadicScalar(5, 57, 3)


@given(primes, st.integers(1, 10**6), st.integers(2, 30))
def test_teichmuller_is_root_of_unity(p, a, n):
    if a % p == 0:
        with pytest.raises(InvalidUnitError):
            teichmuller(a, p, n)
        return
    w = teichmuller(a, p, n)
    assert w ** (p - 1) == PadicScalar(p, 1, n)
    assert (w - a).valuation >= 1


@given(primes, st.integers(-10**9, 10**9), st.integers(1, 10**6), st.integers(1, 25))
def test_field_ops_consistent_with_fractions(p, a, b, n):
    x = PadicScalar(p, Fraction(a, b), n + 5)
    y = PadicScalar(p, 1 + p, n + 5)
    assert (x * y) / y == x
    assert (x + y) - y == x
    assert x.valuation == min(vp(Fraction(a, b), p), n + 5)


def test_precision_tracking():
    x = PadicScalar(3, 9, 10)
    y = PadicScalar(3, 2, 5)
    assert (x * y).abs_precision == 7  # v(x) + prec(y)
    assert (x + y).abs_precision == 5
    assert (PadicScalar(3, 1, 10) / x).abs_precision == -2 + 8
    with pytest.raises(ZeroDivisionError):
        x / PadicScalar(3, 0, 4)


@given(primes, st.integers(0, 40))
def test_binomial_at_integers(p, m):
    from math import comb

    a = PadicScalar(p, 50, 30)
    assert padic_binom(a, m) == PadicScalar(p, comb(50, m), 25)


def test_binomial_loss():
    with pytest.raises(PrecisionExhaustedError):
        padic_binom(PadicScalar(3, Fraction(1, 3), 2), 9)


@given(primes, st.integers(1, 10**6), st.integers(1, 10**6))
def test_log_is_additive(p, a, b):
    x = PadicScalar(p, 1 + p * a, 25)
    y = PadicScalar(p, 1 + p * b, 25)
    lhs = log_one_unit(x * y, 20)
    assert lhs == log_one_unit(x, 20) + log_one_unit(y, 20)


def test_log_rejects_non_one_units():
    with pytest.raises(DomainError):
        log_one_unit(PadicScalar(5, 2, 10), 10)


@pytest.mark.parametrize("bad", [2, 4, 1, 0, -3, 9])
def test_odd_prime_gate(bad):
    with pytest.raises(DomainError):
        check_odd_prime(bad)


def test_profile_parse():
    assert PrecisionProfile.parse("20,100,32") == PrecisionProfile(20, 100, 32)
    for bad in ["20,100", "a,b,c", "20,10,32", "0,10,5"]:
        with pytest.raises(ValueError):
            PrecisionProfile.parse(bad)


def test_json_roundtrip():
    x = PadicScalar(7, Fraction(3, 49), 6)
    assert PadicScalar.from_json(x.to_json()) == x
