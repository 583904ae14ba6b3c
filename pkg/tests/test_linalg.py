from fractions import Fraction

from hypothesis import given, strategies as st

from wachlog import linalg as la

entries = st.integers(-6, 6)
mats = st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(entries, min_size=n, max_size=n),
                                                    min_size=n, max_size=n))


@given(mats)
def test_inverse_and_det(m):
    A = la.mat(m)
    d = la.det(A)
    if d == 0:
        assert la.rank(A) < len(A)
        return
    inv = la.inverse(A)
    assert la.mat_mul(A, inv) == la.identity(len(A))
    assert la.det(inv) == 1 / d


@given(mats)
def test_rank_nullity(m):
    A = la.mat(m)
    assert la.rank(A) + len(la.nullspace(A)) == len(A[0])
    for v in la.nullspace(A):
        assert all(x == 0 for x in la.mat_vec(A, v))


def test_span_is_canonical():
    a = la.span([[2, 4], [1, 2]], 2)
    b = la.span([[Fraction(1, 2), 1]], 2)
    assert a == b and la.same_subspace(a, b, 2)
    assert la.contains(a, [3, 6], 2) and not la.contains(a, [1, 0], 2)
