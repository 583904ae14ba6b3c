from fractions import Fraction

import pytest

from wachlog.coleman import (
    all_relation_basis,
    check_membership,
    classify_and_generators,
    image,
    image_conditions,
    rho_consistency,
    rho_kernel_line,
    wach_for_form,
    x_k,
)
from wachlog.errors import DomainError
from wachlog.interpolation import pmul, _pdivmod
from wachlog.padic import PrecisionProfile

PROF = PrecisionProfile(20, 200, 32)


def test_weight2_line_oracle():
    data = image_conditions(3, 2, 0, 0, PROF)
    w1, w2 = data.lines[0]
    assert (w1 - w2).is_zero() and not w1.is_zero()
    assert data.I3 == [0] and data.r[0] == 1


def test_weight4_classification():
    data = image(3, 4, 0, 0, PROF)
    assert (data.I1, data.I2, data.I3) == ([], [1], [0, 2])
    assert all(data.checks.values())
    Xk = x_k(3, 4)
    _, rem = _pdivmod(Xk, pmul(data.X1, data.X2))
    assert not rem


@pytest.mark.parametrize("eta", [0, 1])
def test_xk_multiples_are_members(eta):
    data = image(3, 4, 0, eta, PROF)
    Xk = x_k(3, 4)
    f = [Fraction(2), Fraction(-1), Fraction(5)]
    g = [Fraction(1), Fraction(7)]
    assert check_membership(pmul(Xk, f), pmul(Xk, g), data)["member"]
    assert check_membership(data.witnesses["first"][0], data.witnesses["first"][1], data)["member"]


def test_nonmember_detected():
    data = image(3, 2, 0, 0, PROF)
    assert not check_membership([Fraction(1)], [Fraction(0)], data)["member"]


def test_basis_change_removes_vanishing_conditions():
    data = image(3, 4, 0, 0, PROF)
    B = all_relation_basis(data)
    again = classify_and_generators(image_conditions(3, 4, 0, 0, PROF, basis_change=B))
    assert again.I1 == [] and again.I2 == []


@pytest.mark.parametrize("p,a", [(3, 0), (5, 0), (3, 3)])
def test_rho_kernel_is_image_line(p, a):
    assert rho_consistency(p, a, PROF)["match"]


def test_rho_kernel_values():
    assert rho_kernel_line(3, 0) == (2, 2)
    assert rho_kernel_line(5, 5) == (-3, 4)


def test_unsupported_form():
    with pytest.raises(DomainError):
        wach_for_form(3, 4, 3, PROF)


def test_json_is_stable():
    data = image(3, 2, 0, 1, PROF)
    assert data.to_json() == image(3, 2, 0, 1, PROF).to_json()
    assert data.to_json()["schema"] == 1
