"""Submodules of Lambda^d cut out by interpolation conditions F(x_i) in V_i.

Everything is exact: points and subspaces are rational, and basis entries
are polynomials in X (coefficient lists, low degree first).  Divisibility by
X - x in the Iwasawa algebra is the same as vanishing at x when v_p(x) >= 1,
so membership questions reduce to polynomial arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import DomainError, DuplicatePointError, InconsistencyError
from .padic import PadicScalar, vp

Poly = list[Fraction]


# ----- polynomials ---------------------------------------------------------------

def ptrim(f: Sequence) -> Poly:
    out = [Fraction(c) for c in f]
    while out and out[-1] == 0:
        out.pop()
    return out


def padd(f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return ptrim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def pscale(c, f: Poly) -> Poly:
    c = Fraction(c)
    return ptrim([c * a for a in f])


def pmul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return ptrim(out)


def peval(f: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def linear(x) -> Poly:
    """X - x."""
    return [Fraction(-x), Fraction(1)]


def pprod(factors: Sequence[Poly]) -> Poly:
    out: Poly = [Fraction(1)]
    for f in factors:
        out = pmul(out, f)
    return out


def pdivmod_linear(f: Poly, x) -> tuple[Poly, Fraction]:
    """Synthetic division by X - x."""
    if not f:
        return [], Fraction(0)
    q = [Fraction(0)] * (len(f) - 1)
    acc = Fraction(0)
    for i in range(len(f) - 1, -1, -1):
        acc = acc * x + f[i]
        if i:
            q[i - 1] = acc
    return ptrim(q), acc


def order_at(f: Poly, x) -> int:
    """Multiplicity of the root x of f (a large sentinel for f = 0)."""
    f = ptrim(f)
    if not f:
        return 10**9
    k = 0
    while True:
        q, r = pdivmod_linear(f, x)
        if r != 0:
            return k
        f = q
        k += 1


def pdet(m: list[list[Poly]]) -> Poly:
    d = len(m)
    if d == 1:
        return ptrim(m[0][0])
    total: Poly = []
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = pmul(m[0][j], pdet(minor))
        total = padd(total, term if j % 2 == 0 else pscale(-1, term))
    return total


def padjugate(m: list[list[Poly]]) -> list[list[Poly]]:
    d = len(m)
    if d == 1:
        return [[[Fraction(1)]]]
    out = [[[] for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [row[:i] + row[i + 1:] for k, row in enumerate(m) if k != j]
            c = pdet(minor)
            out[i][j] = c if (i + j) % 2 == 0 else pscale(-1, c)
    return out


def pmatmul(a: list[list[Poly]], b: list[list[Poly]]) -> list[list[Poly]]:
    n, k, m = len(a), len(b), len(b[0])
    return [[ptrim(_sum_polys(pmul(a[i][l], b[l][j]) for l in range(k))) for j in range(m)] for i in range(n)]


def _sum_polys(polys) -> Poly:
    out: Poly = []
    for f in polys:
        out = padd(out, f)
    return out


def lagrange(points: Sequence, values: Sequence) -> Poly:
    """The polynomial of degree < len(points) through the given values."""
    out: Poly = []
    for i, (xi, yi) in enumerate(zip(points, values)):
        if yi == 0:
            continue
        basis: Poly = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(points):
            if j != i:
                basis = pmul(basis, linear(xj))
                denom *= Fraction(xi) - Fraction(xj)
        out = padd(out, pscale(Fraction(yi) / denom, basis))
    return out


# ----- modules -------------------------------------------------------------------

@dataclass
class Condition:
    x: Fraction
    V: la.Matrix  # row basis (canonical form), possibly empty

    def codim(self, d: int) -> int:
        return d - len(self.V)

    def holds(self, values: Sequence) -> bool:
        return la.contains(self.V, list(values), len(values))


@dataclass
class InterpolationModule:
    p: int
    d: int
    conditions: list[Condition]
    basis: list[list[Poly]] = field(default_factory=list)

    def det(self) -> Poly:
        return pdet(self.basis)

    def expected_det(self) -> Poly:
        """prod (X - x_i)^{codim V_i}, monic."""
        return pprod([linear(c.x) for c in self.conditions for _ in range(c.codim(self.d))])

    def satisfies(self, F: Sequence[Poly]) -> bool:
        """Direct evaluation of every condition."""
        return all(c.holds([peval(f, c.x) for f in F]) for c in self.conditions)

    def contains(self, F: Sequence[Poly]) -> bool:
        """Whether F is a Lambda-combination of the basis rows: F adj(B) divisible by det B."""
        adj = padjugate(self.basis)
        det = self.det()
        H = [ptrim(_sum_polys(pmul(F[l], adj[l][j]) for l in range(self.d))) for j in range(self.d)]
        roots = {}
        for c in self.conditions:
            roots[c.x] = order_at(det, c.x)
        for h in H:
            for x, m in roots.items():
                if order_at(h, x) < m:
                    return False
        return True

    def coefficients(self, F: Sequence[Poly]) -> list[Poly] | None:
        """G with G B = F when G is polynomial, else None."""
        adj = padjugate(self.basis)
        det = self.det()
        out = []
        for j in range(self.d):
            h = ptrim(_sum_polys(pmul(F[l], adj[l][j]) for l in range(self.d)))
            q, r = _pdivmod(h, det)
            if r:
                return None
            out.append(q)
        return out

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d,
                "conditions": [{"x": str(c.x), "V": [[str(a) for a in row] for row in c.V]}
                               for c in self.conditions],
                "basis": [[[str(a) for a in f] for f in row] for row in self.basis]}


def _pdivmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    f = ptrim(f)
    g = ptrim(g)
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    lead = g[-1]
    while len(r) >= len(g) and r:
        c = r[-1] / lead
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] -= c * b
        r = ptrim(r)
    return ptrim(q), r


def _complete_basis(V: la.Matrix, d: int) -> la.Matrix:
    """Rows of V followed by standard vectors completing them to a basis."""
    rows = [list(v) for v in V]
    for i in range(d):
        e = [Fraction(int(i == j)) for j in range(d)]
        if la.rank(rows + [e]) > len(rows):
            rows.append(e)
    return rows


def _single_condition_basis(x: Fraction, V: la.Matrix, d: int) -> list[list[Poly]]:
    """Rows b_1..b_{d-n} of V and (X - x) times a complement."""
    full = _complete_basis(V, d)
    k = len(V)
    out = []
    for idx, row in enumerate(full):
        scale = [Fraction(1)] if idx < k else linear(x)
        out.append([pscale(a, scale) if a else [] for a in row])
    return out


def _check_point(x: Fraction, p: int) -> None:
    if x == 0:
        return
    if vp(x, p) < 1:
        raise DomainError(f"point {x} is not in the maximal ideal")


def build_module(p: int, d: int, conditions: Sequence[tuple]) -> InterpolationModule:
    """Basis of {F : F(x_i) in V_i for all i}, built one condition at a time."""
    conds: list[Condition] = []
    seen = set()
    for x, V in conditions:
        x = x.value if isinstance(x, PadicScalar) else Fraction(x)
        _check_point(x, p)
        if x in seen:
            raise DuplicatePointError(f"point {x} appears twice")
        seen.add(x)
        V = la.span([list(v) for v in V], d) if V else []
        conds.append(Condition(x, V))
    basis: list[list[Poly]] = [[[Fraction(int(i == j))] if i == j else [] for j in range(d)] for i in range(d)]
    for c in conds:
        Bx = [[peval(f, c.x) for f in row] for row in basis]
        try:
            Binv = la.inverse(Bx)
        except ZeroDivisionError:
            raise InconsistencyError(f"basis is singular at {c.x}") from None
        Vt = la.span([la.vec_mat(v, Binv) for v in c.V], d) if c.V else []
        C = _single_condition_basis(c.x, Vt, d)
        basis = pmatmul(C, basis)
    S = InterpolationModule(p, d, conds, basis)
    for row in basis:
        if not S.satisfies(row):
            raise InconsistencyError("a basis row violates a condition")
    return S


def det_matches(S: InterpolationModule) -> bool:
    """det B equals prod (X - x_i)^{codim} up to a non-zero scalar."""
    det = S.det()
    exp = S.expected_det()
    if not det or len(det) != len(exp):
        return False
    c = det[-1]
    return pscale(1 / c, det) == exp


def projection_image(S: InterpolationModule, coord: int) -> tuple[list[int], Poly, list[Poly]]:
    """Ideal of coord-th coordinates of S: generated by prod_{i in J} (X - x_i)."""
    d = S.d
    if not 0 <= coord < d:
        raise DomainError("coordinate out of range")
    J = [i for i, c in enumerate(S.conditions) if all(v[coord] == 0 for v in c.V)]
    gen = pprod([linear(S.conditions[i].x) for i in J])
    points = [c.x for c in S.conditions]
    targets = []
    for i, c in enumerate(S.conditions):
        if i in J:
            targets.append([Fraction(0)] * d)
            continue
        v = next(v for v in c.V if v[coord] != 0)
        scale = peval(gen, c.x) / v[coord]
        targets.append([scale * a for a in v])
    witness = []
    for k in range(d):
        if k == coord:
            witness.append(gen)
        else:
            witness.append(lagrange(points, [t[k] for t in targets]))
    if not S.satisfies(witness) or witness[coord] != gen:
        raise InconsistencyError("projection witness is not in the module")
    return J, gen, witness


def change_basis(r_list: Sequence, p: int, max_power: int = 64) -> tuple[la.Matrix, list[Fraction]]:
    """e_1 = e_2 = p^m avoiding -r_i and -1/r_i; returns A = [[1, e],[e, 1]] and the new ratios."""
    rs = [Fraction(r) for r in r_list]
    if any(r == 0 for r in rs):
        raise DomainError("relation ratios must be non-zero")
    for m in range(1, max_power + 1):
        e = Fraction(p) ** m
        if e * e == 1:
            continue
        if any(e == -r or e * r == -1 for r in rs):
            continue
        new = [(e + r) / (e * r + 1) for r in rs]
        if any(x == 0 for x in new):
            continue
        return [[Fraction(1), e], [e, Fraction(1)]], new
    raise InconsistencyError("no admissible change of basis found")
