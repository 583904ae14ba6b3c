from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wachlog import linalg as la
from wachlog.errors import DomainError, EigenvalueError, InvalidFormError, OrdinaryUnsupportedError
from wachlog.mellin import CharacterIndex
from wachlog.phi_module import (
    FilteredPhiModule,
    build_modular,
    derive_relation,
    ratio_closed_form,
    ratio_direct,
    relation_at_zero,
    v_subspace,
)

CASES = [(3, 2, 0), (5, 2, 0), (3, 4, 0), (3, 2, 3), (5, 2, 5), (3, 4, 3), (5, 4, 5), (3, 6, 9), (7, 3, 7)]


def test_hecke_relation_and_char_poly():
    M = build_modular(4, 3, 3)
    assert M.satisfies_hecke_relation()
    # phi on V itself is p^-(k-1) A
    assert M.char_poly(0) == [Fraction(1, 27), Fraction(-1, 9), 1]


def test_gates():
    with pytest.raises(OrdinaryUnsupportedError):
        build_modular(2, 1, 3)
    with pytest.raises(InvalidFormError):
        build_modular(2, 5, 5)
    assert build_modular(2, 5, 5, weil_check=False).a_p == 5
    with pytest.raises(DomainError):
        FilteredPhiModule(3, [[0, 0], [0, 1]], (0, 1), [[1, 0], [0, 1]])


@given(st.sampled_from([3, 5, 7]), st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 20),
       st.integers(-5, 5))
def test_closed_form_matches_inverse(p, a, b, c, shift):
    A = [[Fraction(a), Fraction(b)], [Fraction(c), Fraction(a + 1)]]
    if la.det(A) == 0:
        return
    phi = la.mat_scale(Fraction(p) ** shift, A)
    try:
        direct = ratio_direct(phi, p)
    except EigenvalueError:
        with pytest.raises(EigenvalueError):
            ratio_closed_form(phi, p)
        return
    assert ratio_closed_form(phi, p) == direct


def test_v_line_oracle():
    # (3,2,0): V_0 for the trivial character is spanned by (1, -3)
    M = build_modular(2, 0, 3)
    assert la.same_subspace(v_subspace(M, 0, CharacterIndex(3, 0)), [[1, -3]], 2)
    # other branch: A applied to Fil^0
    assert la.same_subspace(v_subspace(M, 0, CharacterIndex(3, 1)), [[0, 3]], 2)


@pytest.mark.parametrize("p,k,a", CASES)
def test_relations(p, k, a):
    M = build_modular(k, a, p, weil_check=False)
    for j in range(k - 1):
        c2, c1 = derive_relation(M, j)
        assert c2.value == -a + p ** (j + 1) + p ** (k - 1 - j)
        assert c1.value == p - 1
    g, h = relation_at_zero(M)
    assert g * p ** (k - 2) * (p - 1) == h * (1 + p ** (k - 2) - a)


def test_relation_range():
    with pytest.raises(DomainError):
        derive_relation(build_modular(2, 0, 3), 1)


def test_eigenvalue_one_is_rejected():
    M = FilteredPhiModule(3, [[1, 0], [0, 9]], (0, 0), [[1, 0], [0, 1]])
    with pytest.raises(EigenvalueError):
        v_subspace(M, 0, CharacterIndex(3, 0))


def test_filtration_dimensions():
    M = build_modular(4, 0, 3)
    assert [M.n(i) for i in range(5)] == [1, 1, 1, 2, 2]
    assert M.fil_basis(0) == [[1, 0]]
