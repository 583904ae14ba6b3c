import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wachlog.errors import DomainError, DuplicatePointError
from wachlog.interpolation import (
    build_module,
    change_basis,
    det_matches,
    lagrange,
    linear,
    order_at,
    padd,
    peval,
    pmul,
    pprod,
    projection_image,
    _pdivmod,
)

P = 3
POINTS = [0, 3, 6, 9, -3, 27, 12]


@st.composite
def modules(draw):
    d = draw(st.sampled_from([2, 3]))
    xs = draw(st.lists(st.sampled_from(POINTS), min_size=1, max_size=3, unique=True))
    conds = []
    for x in xs:
        n = draw(st.integers(0, d))
        rows = [[draw(st.integers(-3, 3)) for _ in range(d)] for _ in range(n)]
        conds.append((x, rows))
    return build_module(P, d, conds)


def combo(S, G):
    out = []
    for j in range(S.d):
        acc = []
        for i in range(S.d):
            acc = padd(acc, pmul(G[i], S.basis[i][j]))
        out.append(acc)
    return out


@given(modules())
def test_det_is_product_of_codims(S):
    assert det_matches(S)


@given(modules(), st.lists(st.lists(st.integers(-4, 4), min_size=1, max_size=5), min_size=3, max_size=3))
def test_membership_oracles_agree(S, raw):
    F = [[Fraction(c) for c in f] for f in raw[: S.d]]
    assert S.satisfies(F) == S.contains(F)
    G = combo(S, F)
    assert S.satisfies(G) and S.contains(G)
    assert S.coefficients(G) == [pmul(f, [Fraction(1)]) for f in F]


@given(modules(), st.integers(0, 2))
def test_projection_generator_divides(S, coord):
    coord = min(coord, S.d - 1)
    J, gen, witness = projection_image(S, coord)
    assert S.satisfies(witness)
    rng = random.Random(len(J))
    for _ in range(5):
        G = [[Fraction(rng.randint(-3, 3)) for _ in range(3)] for _ in range(S.d)]
        _, rem = _pdivmod(combo(S, G)[coord], gen)
        assert not rem


def test_full_and_empty_conditions():
    S = build_module(P, 2, [(3, [[1, 0], [0, 1]]), (6, [])])
    assert S.det() == pprod([linear(6), linear(6)])
    assert order_at(S.det(), 6) == 2 and order_at(S.det(), 3) == 0


def test_bad_inputs():
    with pytest.raises(DuplicatePointError):
        build_module(P, 2, [(3, [[1, 0]]), (3, [[0, 1]])])
    with pytest.raises(DomainError):
        build_module(P, 2, [(1, [[1, 0]])])


def test_lagrange():
    f = lagrange([0, 3, 6], [1, 4, 2])
    assert [peval(f, x) for x in (0, 3, 6)] == [1, 4, 2]


@given(st.lists(st.fractions(min_value=-5, max_value=5).filter(lambda r: r != 0), max_size=5))
def test_change_basis(rs):
    B, new = change_basis(rs, P)
    e = B[0][1]
    for r, n in zip(rs, new):
        assert n == (e + r) / (e * r + 1) and n != 0
