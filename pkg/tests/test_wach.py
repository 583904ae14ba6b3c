from fractions import Fraction

import pytest

from wachlog.coleman import wach_for_form
from wachlog.errors import DomainError, InvalidWachDataError, OrdinaryUnsupportedError
from wachlog.mellin import eval_at_chi_power
from wachlog.padic import PadicScalar, PrecisionProfile
from wachlog.series import PiSeries
from wachlog.suites import twist_values
from wachlog.wach import (
    build_wach,
    divisor_check,
    embedding_matrix,
    hodge_filtration,
    intertwining_residual,
    log_matrix,
)

PROF = PrecisionProfile(20, 200, 32)


def test_bernoulli_oracle():
    # r = 1: p^(s-1) B_s(1/p)
    assert twist_values(3, 1, 1) == Fraction(1, 3) - Fraction(1, 2)
    assert twist_values(5, 1, 2) == 5 * (Fraction(1, 25) - Fraction(1, 5) + Fraction(1, 6))
    assert twist_values(3, 0, 4) == 1


@pytest.mark.parametrize("r", [1, 2])
def test_twist_log_matrix(r):
    w = build_wach("twist", 3, PROF, r=r)
    assert hodge_filtration(w) == [r]
    L = log_matrix(w)
    assert L.checks["M(0)=A^T"]
    m = L.M[0][0]
    for s in range(r, r + 4):
        val = eval_at_chi_power(m, s, L.tail)
        assert val.abs_precision >= 10
        assert PadicScalar(3, (val - twist_values(3, r, s)).value, val.abs_precision).is_zero()
    assert divisor_check(L)["pass"]


def test_ap0_weight2_log_matrix():
    w = wach_for_form(3, 2, 0, PROF)
    assert intertwining_residual(w) >= PROF.digits
    L = log_matrix(w)
    M0 = [[e.coeff(0) for e in row] for row in L.M]
    assert M0[0][0] == 0 and M0[0][1] == 3 and M0[1][0] == -1 and M0[1][1] == 0
    assert hodge_filtration(w) == [0, 1]
    rep = divisor_check(L)
    assert rep["pass"]
    # det M has no zeros at the chi points: M(0) = A^T is invertible
    assert all(v == 0 for v in rep["orders"].values())


def test_weight2_nonzero_ap():
    w = wach_for_form(3, 2, 3, PROF)
    L = log_matrix(w)
    assert L.checks["M(0)=A^T"]
    M0 = [[e.coeff(0) for e in row] for row in L.M]
    assert M0[1][1] == 3


def test_embedding_is_holomorphic_and_integral_at_zero():
    w = build_wach("twist", 5, PrecisionProfile(20, 100, 16), r=1)
    E = embedding_matrix(w)
    assert E[0][0].low >= 0
    assert not E[0][0].coeff(0).is_zero()


def test_wrong_constant_term_rejected():
    prof = PrecisionProfile(15, 60, 16)
    one = PiSeries.constant(3, 1, 60, 30)
    zero = PiSeries.constant(3, 0, 60, 30)
    with pytest.raises(InvalidWachDataError) as exc:
        build_wach("custom", 3, prof, P=[[one, zero], [zero, one]], A=[[1, 0], [0, 2]], weights=[0, 0])
    assert exc.value.invariant == "P(0) = A"


def test_wrong_weights_rejected():
    prof = PrecisionProfile(15, 60, 16)
    ninth = PiSeries.constant(3, Fraction(1, 9), 60, 30)
    with pytest.raises(InvalidWachDataError):
        # P = q^-2 carries weight 2, declared as weight 1
        build_wach("custom", 3, prof, P=[[ninth]], A=[[Fraction(1, 9)]], weights=[1], twist=2)


def test_unknown_kind():
    with pytest.raises(DomainError):
        build_wach("nope", 3, PROF)


def test_ordinary_rejected():
    with pytest.raises(OrdinaryUnsupportedError):
        build_wach("weight2", 3, PROF, a_p=1)
