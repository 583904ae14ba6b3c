"""Filtered phi-modules over Q_p: Frobenius matrices, Hodge filtrations and
the subspaces V_{i,eta} that cut out the images of Coleman maps.

All arithmetic is exact over Q.  The Frobenius is never diagonalised; every
construction is a rational function of the matrix A, so no field extension
is needed.

Conventions.  Column j of A holds the coordinates of phi(nu_j).  The
Frobenius on the module of V itself is p**(-shift) * A; for modular data
shift = k - 1, so A is the familiar matrix with characteristic polynomial
x^2 - a_p x + p^(k-1).  The module of V(-i) then carries p**(i - shift) * A.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .errors import (
    DomainError,
    EigenvalueError,
    InconsistencyError,
    InvalidFormError,
    OrdinaryUnsupportedError,
)
from .mellin import CharacterIndex
from .padic import PadicScalar, check_odd_prime, vp


@dataclass
class FilteredPhiModule:
    p: int
    A: la.Matrix
    fil_jumps: tuple[int, ...]
    fil_lines: la.Matrix
    shift: int = 0
    k: int | None = None
    a_p: int | None = None
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        check_odd_prime(self.p)
        self.A = la.mat(self.A)
        d = len(self.A)
        if any(len(row) != d for row in self.A):
            raise DomainError("Frobenius matrix must be square")
        if la.det(self.A) == 0:
            raise DomainError("Frobenius matrix is singular")
        self.fil_jumps = tuple(sorted(self.fil_jumps))
        if len(self.fil_jumps) != d or any(r < 0 for r in self.fil_jumps):
            raise DomainError("need d non-negative Hodge-Tate weights")
        self.fil_lines = la.mat(self.fil_lines)
        if la.rank(self.fil_lines) != d:
            raise DomainError("filtration lines must form a basis")

    @property
    def dim(self) -> int:
        return len(self.A)

    def n(self, i: int) -> int:
        """dim Fil^{-i}: the number of weights r_j <= i."""
        return sum(1 for r in self.fil_jumps if r <= i)

    def fil_basis(self, i: int) -> la.Matrix:
        """Basis of Fil^{-i}: the first n(i) filtration lines."""
        m = self.n(i)
        return la.span(self.fil_lines[:m], self.dim) if m else []

    def A_scalars(self, prec: int) -> list[list[PadicScalar]]:
        return [[PadicScalar(self.p, x, prec) for x in row] for row in self.A]

    def twisted_frobenius(self, i: int) -> la.Matrix:
        """Matrix of phi on the module of V(-i)."""
        return la.mat_scale(Fraction(self.p) ** (i - self.shift), self.A)

    def char_poly(self, i: int = 0) -> list[Fraction]:
        """Coefficients c_0..c_d of det(x - phi) on the module of V(-i), monic."""
        return _char_poly(self.twisted_frobenius(i))

    def satisfies_hecke_relation(self) -> bool:
        if self.k is None:
            return True
        a2 = la.mat_mul(self.A, self.A)
        lhs = la.mat_add(a2, la.mat_add(la.mat_scale(-self.a_p, self.A),
                                          la.mat_scale(self.p ** (self.k - 1), la.identity(2))))
        return all(x == 0 for row in lhs for x in row)


def _char_poly(a: la.Matrix) -> list[Fraction]:
    # Faddeev-LeVerrier, exact over Q
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = la.zeros(n)
    for kk in range(1, n + 1):
        m = la.mat_add(la.mat_mul(a, m), la.mat_scale(coeffs[n - kk + 1], la.identity(n)))
        am = la.mat_mul(a, m)
        coeffs[n - kk] = -sum(am[i][i] for i in range(n)) / kk
    return coeffs


def build_modular(k: int, a_p: int, p: int, weil_check: bool = True) -> FilteredPhiModule:
    """Crystalline data of a supersingular form of weight k, twisted to weights {0, k-1}.

    With weil_check=False the same matrices are built for formal data that no
    eigenform realises; the relation formulas still hold as identities in A.
    """
    check_odd_prime(p)
    if k < 2:
        raise DomainError("weight must be at least 2")
    if weil_check and a_p * a_p >= 4 * p ** (k - 1):
        raise InvalidFormError(f"a_p = {a_p} violates the Weil bound for p = {p}, k = {k}")
    if vp(a_p, p) < 1:
        raise OrdinaryUnsupportedError(f"a_p = {a_p} is a p-adic unit")
    A = [[0, -1], [p ** (k - 1), a_p]]
    return FilteredPhiModule(p=p, A=A, fil_jumps=(0, k - 1), fil_lines=[[1, 0], [0, 1]],
                             shift=k - 1, k=k, a_p=a_p, label=f"modular(k={k}, a_p={a_p})")


def ratio_closed_form(phi: la.Matrix, p: int) -> la.Matrix:
    """(1-phi)^{-1}(1-p^{-1}phi^{-1}) for d <= 2 from the characteristic polynomial alone."""
    d = len(phi)
    if d == 1:
        c = phi[0][0]
        if c == 1:
            raise EigenvalueError("phi has eigenvalue 1")
        return [[(1 - 1 / (p * c)) / (1 - c)]]
    if d != 2:
        raise DomainError("closed formula needs rank at most 2")
    b, a, _ = _char_poly(phi)
    denom = p * b * (1 + a + b)
    if denom == 0:
        raise EigenvalueError("phi has eigenvalue 1 on the twisted module")
    lead = 1 + a + p * b
    num = la.mat_add(la.mat_scale(lead, phi), la.mat_scale(a * lead + b * (p - 1), la.identity(2)))
    return la.mat_scale(Fraction(1) / denom, num)


def ratio_direct(phi: la.Matrix, p: int) -> la.Matrix:
    """Same operator through explicit matrix inverses, for cross-checks in any rank."""
    d = len(phi)
    one = la.identity(d)
    try:
        left = la.inverse(la.mat_add(one, la.mat_scale(-1, phi)))
    except ZeroDivisionError:
        raise EigenvalueError("phi has eigenvalue 1") from None
    right = la.mat_add(one, la.mat_scale(Fraction(-1, p), la.inverse(phi)))
    return la.mat_mul(left, right)


def one_minus_phi_ratio(M: FilteredPhiModule, i: int) -> la.Matrix:
    """(1-phi)^{-1}(1-p^{-1}phi^{-1}) on the module of V(-i)."""
    phi = M.twisted_frobenius(i)
    if M.dim <= 2:
        return ratio_closed_form(phi, M.p)
    return ratio_direct(phi, M.p)


def _apply(m: la.Matrix, basis: Sequence[Sequence]) -> la.Matrix:
    return [la.mat_vec(m, v) for v in basis]


def v_subspace(M: FilteredPhiModule, i: int, eta: CharacterIndex) -> la.Matrix:
    """Basis (canonical form) of V_{i,eta} inside the module of V."""
    if eta.p != M.p:
        raise DomainError("character and module use different primes")
    key = (i, eta.s)
    if key in M._cache:
        return M._cache[key]
    fil = M.fil_basis(i)
    d = M.dim
    if not fil:
        out: la.Matrix = []
    elif eta.matches(i):
        r = one_minus_phi_ratio(M, i)
        phi = M.twisted_frobenius(i)
        if la.det(la.mat_add(la.identity(d), la.mat_scale(Fraction(-1, M.p), la.inverse(phi)))) == 0:
            raise EigenvalueError("phi has eigenvalue 1/p on the twisted module")
        out = la.span(_apply(la.inverse(r), fil), d)
    else:
        out = la.span(_apply(M.A, fil), d)
    if len(out) != len(fil):
        raise InconsistencyError(f"V_{i} has dimension {len(out)}, expected {len(fil)}")
    M._cache[key] = out
    return out


def relation_coefficients(k: int, a_p: int, p: int, j: int) -> tuple[int, int]:
    return (-a_p + p ** (j + 1) + p ** (k - 1 - j), p - 1)


def derive_relation(M: FilteredPhiModule, j: int, prec: int = 20) -> tuple[PadicScalar, PadicScalar]:
    """Coefficients (c2, c1) with c2 * L_2 = c1 * L_1 at chi^j, checked against V_{j,eta}.

    Vectors of the module are written as (-L_2, L_1).
    """
    if M.k is None or M.dim != 2:
        raise DomainError("relations are defined for rank-2 modular data")
    if not 0 <= j <= M.k - 2:
        raise DomainError(f"j must lie in [0, {M.k - 2}]")
    c2, c1 = relation_coefficients(M.k, M.a_p, M.p, j)
    line = v_subspace(M, j, CharacterIndex(M.p, j % (M.p - 1)))
    if len(line) != 1:
        raise InconsistencyError("expected a line")
    x, y = line[0]
    l2, l1 = -x, y
    if c2 * l2 != c1 * l1 or (l1 == 0 and l2 == 0):
        raise InconsistencyError(f"V_{j} = span({x}, {y}) does not satisfy {c2} L_2 = {c1} L_1")
    return PadicScalar(M.p, c2, prec), PadicScalar(M.p, c1, prec)


def relation_at_zero(M: FilteredPhiModule) -> tuple[Fraction, Fraction]:
    """The j = 0 relation pulled back along (g, h) -> (g, h) A^T.

    Returns (a, b) with a * h(0) = b * g(0), where g, h are the first and
    second Coleman coordinates.
    """
    c2, c1 = relation_coefficients(M.k, M.a_p, M.p, 0)
    At = la.transpose(M.A)
    # (g,h) A^T = (-L_2, L_1): L_2 = -(g At00 + h At10), L_1 = g At01 + h At11
    cg = -c2 * At[0][0] - c1 * At[0][1]
    ch = -c2 * At[1][0] - c1 * At[1][1]
    # cg g + ch h = 0  ->  ch h = -cg g
    g = Fraction(ch)
    return g, Fraction(-cg)
