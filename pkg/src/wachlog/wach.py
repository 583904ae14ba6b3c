"""Wach-module data, the embedding into B+ (x) Dcris, and the log matrix.

A Wach module is given by its Frobenius matrix P over Z_p[[pi]] with the
column convention phi(n_j) = sum_i P_ij n_i.  Built-in data is stored as an
integral matrix P_int together with a twist w; the matrix actually used is
(p/q)**w * P_int, which is the Frobenius of the twisted module whose
weights are non-negative.  P(0) = P_int(0) = A in both cases.

The embedding E (n_j = sum_i E_ij nu_i) solves A phi(E) = E P with E(0) = 1,
one pi-degree at a time through the Sylvester equations
    p**r A E_r - E_r A = sum_{s<r} E_s P_{r-s} - A sum_{s<r} E_s [pi^r] phi(pi)^s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .errors import (
    DomainError,
    IndeterminateError,
    InvalidWachDataError,
    NotInImageError,
    PrecisionExhaustedError,
    ResonanceError,
)
from .mellin import (
    DEFAULT_PROFILE,
    chi_point,
    eval_at_chi_power,
    inverse_mellin_many,
    mellin,
    phi,
    psi,
    special_element,
)
from .padic import PadicScalar, PrecisionProfile, check_odd_prime, log_p_floor
from .phi_module import FilteredPhiModule, build_modular
from .series import (
    PiSeries,
    XSeries,
    binomial_series,
    div_linear,
    divide,
    invert,
    q_series,
    tail_valuation_estimate,
)

PiMatrix = list[list[PiSeries]]


def _guard(profile: PrecisionProfile, p: int, twist: int, d: int) -> int:
    """Working precision for the embedding solve.

    The twisted Frobenius has coefficients of valuation about -twist*m/(p-1)
    at pi-degree m, and every Sylvester solve divides by roughly p**(twist+1),
    so errors grow linearly in the degree.
    """
    D = profile.pi_degree
    return profile.digits + 16 + math.ceil((twist + 1) * D / (p - 1)) + 2 * d


@dataclass
class WachModuleData:
    p: int
    kind: str
    P_int: PiMatrix
    twist: int
    base: FilteredPhiModule
    profile: PrecisionProfile
    label: str = ""
    integral: bool = True
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def d(self) -> int:
        return self.base.dim

    @property
    def A(self) -> la.Matrix:
        return self.base.A

    @property
    def weights(self) -> tuple[int, ...]:
        return self.base.fil_jumps

    def frobenius(self, prec: int) -> PiMatrix:
        """(p/q)**twist * P_int at absolute precision about prec."""
        key = ("P", prec)
        if key in self._cache:
            return self._cache[key]
        p, D = self.p, self.profile.pi_degree
        if self.twist == 0:
            out = [[e.cap(prec) for e in row] for row in self.P_int]
        else:
            wp = prec + math.ceil(self.twist * D / (p - 1)) + 8
            qinv = invert(q_series(p, D, wp)).scale(p)
            factor = qinv ** self.twist
            out = [[(factor * e).cap(prec) for e in row] for row in self.P_int]
        self._cache[key] = out
        return out

    def describe(self) -> dict:
        return {"p": self.p, "kind": self.kind, "label": self.label, "twist": self.twist,
                "A": [[str(x) for x in row] for row in self.A],
                "weights": list(self.weights), "profile": str(self.profile)}


def _const(p: int, c, D: int, prec: int) -> PiSeries:
    return PiSeries.constant(p, c, D, prec)


def build_wach(kind: str, p: int, profile: PrecisionProfile = DEFAULT_PROFILE, *,
               r: int | None = None, k: int | None = None, a_p: int | None = None,
               P: Sequence[Sequence[PiSeries]] | None = None,
               A: Sequence[Sequence] | None = None, weights: Sequence[int] | None = None,
               fil_lines: Sequence[Sequence] | None = None, twist: int = 0,
               validate: bool = True) -> WachModuleData:
    """Construct Wach data of kind 'twist', 'ap0', 'weight2' or 'custom'."""
    check_odd_prime(p)
    D, N = profile.pi_degree, profile.digits
    hp = _guard(profile, p, max(k or 0, r or 0, twist) + 1, 2) + 16
    if kind == "twist":
        if r is None or r < 0:
            raise DomainError("twist needs r >= 0")
        one = Fraction(1, p**r)
        base = FilteredPhiModule(p=p, A=[[one]], fil_jumps=(r,), fil_lines=[[1]], label=f"twist({r})")
        data = WachModuleData(p, kind, [[_const(p, one, D, hp)]], r, base, profile, f"twist({r})")
    elif kind in ("ap0", "weight2"):
        if kind == "ap0":
            if k is None or k < 2:
                raise DomainError("ap0 needs k >= 2")
            if a_p not in (None, 0):
                raise DomainError("ap0 has a_p = 0")
            a_p = 0
            q = q_series(p, D, hp)
            corner = q ** (k - 1)
        else:
            if k not in (None, 2):
                raise DomainError("weight2 has k = 2")
            if a_p is None:
                raise DomainError("weight2 needs a_p")
            k = 2
            corner = q_series(p, D, hp)
        base = build_modular(k, a_p, p, weil_check=False)
        Pm = [[_const(p, 0, D, hp), _const(p, -1, D, hp)],
              [corner, _const(p, a_p, D, hp)]]
        data = WachModuleData(p, kind, Pm, k - 1, base, profile, f"{kind}(k={k}, a_p={a_p})")
    elif kind == "custom":
        if P is None or A is None or weights is None:
            raise DomainError("custom data needs P, A and weights")
        d = len(A)
        lines = fil_lines if fil_lines is not None else la.identity(d)
        try:
            base = FilteredPhiModule(p=p, A=A, fil_jumps=tuple(weights), fil_lines=lines)
        except DomainError as exc:
            raise InvalidWachDataError("P(0) invertible", str(exc)) from None
        data = WachModuleData(p, kind, [list(row) for row in P], twist, base, profile, "custom")
    else:
        raise DomainError(f"unknown Wach data kind {kind!r}")
    if validate:
        validate_wach(data)
    return data


def validate_wach(w: WachModuleData) -> dict:
    """Check P(0) = A, solve for E, and recover the Hodge-Tate weights."""
    d = w.d
    P0 = [[w.P_int[i][j].coeff(0) for j in range(d)] for i in range(d)]
    if not all(P0[i][j] == w.A[i][j] for i in range(d) for j in range(d)):
        shown = [[str(x.value) for x in row] for row in P0]
        raise InvalidWachDataError("P(0) = A", f"P(0) = {shown}, A = {w.A}")
    if la.det(w.A) == 0:
        raise InvalidWachDataError("P(0) invertible", "singular constant term")
    if not det_budget_ok(w):
        raise InvalidWachDataError("det P = unit * q^(-sum of weights)", "determinant has the wrong q-order")
    try:
        embedding_matrix(w)
    except ResonanceError as exc:
        raise InvalidWachDataError("embedding solvable", str(exc)) from None
    try:
        jumps = hodge_filtration(w)
    except IndeterminateError as exc:
        raise InvalidWachDataError("weights recoverable", str(exc)) from None
    if tuple(jumps) != tuple(w.weights):
        raise InvalidWachDataError("weights match", f"recovered {jumps}, declared {list(w.weights)}")
    return {"P0": True, "embedding": True, "weights": list(jumps)}


def det_budget_ok(w: WachModuleData) -> bool:
    """det P * q**(sum of weights) must be a unit of Z_p[[pi]] up to a constant."""
    p, D = w.p, w.profile.pi_degree
    prec = w.profile.digits + 8
    Pm = w.frobenius(prec + 8)
    h = det_pi(Pm) * q_series(p, D, prec + 8) ** sum(w.weights)
    c0 = h.coeff(0)
    if c0.is_zero():
        return False
    h = h.scale(PadicScalar(p, 1, prec) / c0)
    limit = D // 2
    return all(v >= 0 for v, pr in zip(h.valuations()[:limit], h.precs[:limit]) if pr > 0)


# ----- embedding -----------------------------------------------------------------

@lru_cache(maxsize=16)
def _phi_pi_powers(p: int, D: int, modexp: int) -> tuple[tuple[int, ...], ...]:
    """Row s holds [pi^r] phi(pi)**s for r = 0..D, reduced mod p**modexp."""
    mod = p**modexp
    base = [0] * (D + 1)
    for j in range(1, min(p, D) + 1):
        base[j] = math.comb(p, j)
    rows = [tuple([1] + [0] * D)]
    cur = rows[0]
    for _ in range(1, D + 1):
        nxt = [0] * (D + 1)
        for i, a in enumerate(cur):
            if a:
                for j in range(1, min(p, D - i) + 1):
                    nxt[i + j] = (nxt[i + j] + a * base[j]) % mod
        rows.append(tuple(nxt))
        cur = nxt
    return tuple(rows)


def _sylvester_inverse(A: la.Matrix, p: int, r: int) -> la.Matrix:
    """Exact inverse of Z -> p**r A Z - Z A acting on vec(Z) (row-major)."""
    d = len(A)
    n = d * d
    L = la.zeros(n)
    pr = Fraction(p) ** r
    for i in range(d):
        for j in range(d):
            row = i * d + j
            for l in range(d):
                L[row][l * d + j] += pr * A[i][l]
                L[row][i * d + l] -= A[l][j]
    if la.det(L) == 0:
        raise ResonanceError(r)
    return la.inverse(L)


def embedding_matrix(w: WachModuleData, method: str = "sylvester") -> PiMatrix:
    """E with E(0) = 1 and A phi(E) = E P to pi-degree D."""
    key = ("E", method)
    if key in w._cache:
        return w._cache[key]
    if method != "sylvester":
        raise DomainError(f"unknown embedding method {method!r}")
    p, d, D = w.p, w.d, w.profile.pi_degree
    G = _guard(w.profile, p, w.twist, d)
    Pm = w.frobenius(G + 8)
    A = w.A
    Pc = [[[Pm[i][j].coeff(m) for m in range(D + 1)] for j in range(d)] for i in range(d)]
    one = PadicScalar(p, 1, G)
    zero = PadicScalar(p, 0, G)
    E = [[[one if i == j else zero for j in range(d)] for i in range(d)]]
    c = _phi_pi_powers(p, D, G + 2 * D)
    for r in range(1, D + 1):
        Linv = _sylvester_inverse(A, p, r)
        # S = sum_s c[s][r] E_s ;  T = sum_s E_s P_{r-s}
        S = [[zero] * d for _ in range(d)]
        T = [[zero] * d for _ in range(d)]
        for s in range(r):
            Es = E[s]
            cs = c[s][r]
            for i in range(d):
                for j in range(d):
                    if cs:
                        S[i][j] = S[i][j] + Es[i][j] * cs
                    acc = T[i][j]
                    for l in range(d):
                        acc = acc + Es[i][l] * Pc[l][j][r - s]
                    T[i][j] = acc
        R = [[T[i][j] - sum((S[l][j] * A[i][l] for l in range(d)), zero) for j in range(d)]
             for i in range(d)]
        vecR = [R[i][j] for i in range(d) for j in range(d)]
        vecE = [sum((vecR[b] * Linv[a][b] for b in range(d * d) if Linv[a][b]), zero)
                for a in range(d * d)]
        E.append([[vecE[i * d + j] for j in range(d)] for i in range(d)])
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            coeffs = [E[m][i][j] for m in range(D + 1)]
            row.append(PiSeries.from_coeffs(p, coeffs, [x.abs_precision for x in coeffs]))
        out.append(row)
    w._cache[key] = out
    return out


def intertwining_residual(w: WachModuleData, E: PiMatrix | None = None) -> int:
    """Smallest number of digits to which A phi(E) and E P agree (capped at the precision)."""
    E = E if E is not None else embedding_matrix(w)
    d = w.d
    G = _guard(w.profile, w.p, w.twist, w.d)
    Pm = w.frobenius(G + 8)
    phiE = [[phi(e) for e in row] for row in E]
    worst = 10**9
    for i in range(d):
        for j in range(d):
            lhs = sum((phiE[l][j].scale(w.A[i][l]) for l in range(d) if w.A[i][l]),
                      PiSeries.zero(w.p, w.profile.pi_degree, G))
            rhs = sum((E[i][l] * Pm[l][j] for l in range(d)), PiSeries.zero(w.p, w.profile.pi_degree, G))
            worst = min(worst, lhs.agreement_digits(rhs))
    return worst


# ----- log matrix ----------------------------------------------------------------

@dataclass
class LogMatrix:
    p: int
    M: list[list[XSeries]]
    A: la.Matrix
    profile: PrecisionProfile
    label: str
    weights: tuple[int, ...]
    checks: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.M)

    def at(self, s: int) -> list[list[PadicScalar]]:
        """Entrywise value at X = u**s - 1."""
        return [[eval_at_chi_power(e, s, self.tail) for e in row] for row in self.M]

    @property
    def tail(self) -> int:
        return _tail_model(self.p, max(self.weights), self.profile)

    def det(self) -> XSeries:
        return det_series(self.M)

    def to_json(self) -> dict:
        return {"p": self.p, "label": self.label, "profile": str(self.profile),
                "weights": list(self.weights),
                "A": [[str(x) for x in row] for row in self.A],
                "M": [[e.to_json() for e in row] for row in self.M],
                "checks": dict(sorted(self.checks.items()))}


def _tail_model(p: int, order: int, profile: PrecisionProfile) -> int:
    """Valuation bound assumed for the X-coefficients beyond the solve."""
    nx = max(profile.x_degree + 1, profile.pi_degree // p + 1)
    return -order * (log_p_floor(nx, p) + 1) - 2


def det_series(M: list[list[XSeries]]) -> XSeries:
    d = len(M)
    if d == 1:
        return M[0][0]
    if d == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det_series(minor)
        total = term if total is None else (total + term if j % 2 == 0 else total - term)
    return total


def log_matrix(w: WachModuleData, check: bool = True) -> LogMatrix:
    """M with (1+pi) phi(n_i) = sum_j M_ij . ((1+pi) nu_j).

    Entry (i, j) is the inverse Mellin transform of (1+pi) times the
    nu_j-coordinate of phi(n_i), i.e. of (1+pi) (A phi(E))_{ji}.
    """
    if "M" in w._cache:
        return w._cache["M"]
    p, d, profile = w.p, w.d, w.profile
    E = embedding_matrix(w)
    phiE = [[phi(e) for e in row] for row in E]
    D = profile.pi_degree
    G = max(e.precs[0] for row in E for e in row)
    one_plus_pi = binomial_series(PiSeries, p, 1, D, G)
    gs = []
    for i in range(d):
        for j in range(d):
            # coordinate j of phi(n_i) is (A phi(E))_{j i}
            coord = sum((phiE[l][i].scale(w.A[j][l]) for l in range(d) if w.A[j][l]),
                        PiSeries.zero(p, D, G))
            gs.append((coord * one_plus_pi).cap(profile.digits + 8))
    tail = _tail_model(p, max(w.weights), profile)
    try:
        sols = inverse_mellin_many(gs, profile, tail_valuation=tail, check=check)
    except NotInImageError as exc:
        raise NotInImageError(f"log matrix entries left the Mellin image: {exc}") from None
    M = [[sols[i * d + j].cap(profile.digits) for j in range(d)] for i in range(d)]
    L = LogMatrix(p, M, w.A, profile, w.label, w.weights)
    M0 = [[M[i][j].coeff(0) for j in range(d)] for i in range(d)]
    At = la.transpose(w.A)
    ok = all(M0[i][j] == At[i][j] for i in range(d) for j in range(d))
    L.checks["M(0)=A^T"] = ok
    L.checks["M(0) precision"] = min(x.abs_precision for row in M0 for x in row)
    if not ok:
        raise NotInImageError(f"M(0) = {[[x.value for x in r] for r in M0]} differs from A^T")
    w._cache["M"] = L
    return L


# ----- Hodge filtration ----------------------------------------------------------

def _remainder_mod_qpower(f: PiSeries, qj: list[int], tail_prec: int) -> list[PadicScalar]:
    """f modulo the monic polynomial qj (coefficients low to high)."""
    p = f.prime
    deg = len(qj) - 1
    coeffs = [f.coeff(m) for m in range(f.top + 1)]
    for m in range(f.top, deg - 1, -1):
        c = coeffs[m]
        if c.is_zero():
            continue
        for a in range(deg):
            if qj[a]:
                coeffs[m - deg + a] = coeffs[m - deg + a] - c * qj[a]
    rem = coeffs[:deg]
    return [PadicScalar(p, x.value, min(x.abs_precision, tail_prec)) for x in rem]


def _poly_pow(base: list[int], j: int) -> list[int]:
    out = [1]
    for _ in range(j):
        new = [0] * (len(out) + len(base) - 1)
        for i, a in enumerate(out):
            for k, b in enumerate(base):
                new[i + k] += a * b
        out = new
    return out


def _padic_rank(rows: list[list[PadicScalar]], margin: int = 3) -> int:
    """Rank of a p-adic matrix, refusing to guess when a pivot is within margin of its precision."""
    rows = [list(r) for r in rows if r]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        best = None
        for i in range(rank, len(rows)):
            x = rows[i][c]
            if x.is_zero():
                continue
            key = x.relative_precision
            if best is None or key > best[0]:
                best = (key, i)
        if best is None:
            continue
        if best[0] < margin:
            raise IndeterminateError(f"pivot in column {c} has only {best[0]} significant digits", best[0])
        i = best[1]
        rows[rank], rows[i] = rows[i], rows[rank]
        piv = rows[rank][c]
        for i2 in range(rank + 1, len(rows)):
            x = rows[i2][c]
            if x.is_zero():
                continue
            f = x / piv
            rows[i2] = [a - f * b for a, b in zip(rows[i2], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def filtration_dimensions(w: WachModuleData, upto: int | None = None) -> list[int]:
    """n_i = dim{c : E^{-1} c has a pole of order <= i at zeta_p - 1}, for i = 0..upto."""
    p, d = w.p, w.d
    E = embedding_matrix(w)
    D = w.profile.pi_degree
    q = [math.comb(p, j + 1) for j in range(p)]  # q = sum_j C(p, j+1) pi^j
    detE = det_pi(E)
    tail_v = min(tail_valuation_estimate(e) for row in E for e in row)

    def tail_prec(j: int) -> int:
        # pi^m mod q^j has valuation >= floor(m/(p-1)) - j for m >= D+1
        return tail_v + (D + 1) // (p - 1) - j - 2

    s = 0
    while True:
        if (s + 1) * (p - 1) > D // 2:
            raise IndeterminateError("truncation too small to separate powers of q")
        rem = _remainder_mod_qpower(detE, _poly_pow(q, s + 1), tail_prec(s + 1))
        if all(x.is_zero() for x in rem):
            s += 1
            continue
        if min(x.relative_precision for x in rem if not x.is_zero()) < 3:
            raise IndeterminateError(f"order of det E at zeta_p - 1 undecided beyond {s}")
        break
    adj = adjugate_pi(E)
    top = s if upto is None else max(upto, s)
    dims = []
    for i in range(top + 1):
        j = s - i
        if j <= 0:
            dims.append(d)
            continue
        qj = _poly_pow(q, j)
        tp = tail_prec(j)
        # column l of adj(E) reduced mod q^j; c in kernel iff sum_l c_l col_l = 0
        cols = []
        for l in range(d):
            v = []
            for r in range(d):
                v.extend(_remainder_mod_qpower(adj[r][l], qj, tp))
            cols.append(v)
        dims.append(d - _padic_rank(cols))
    return dims


def hodge_filtration(w: WachModuleData) -> list[int]:
    """Hodge-Tate weights recovered from the q-adic behaviour of E."""
    dims = filtration_dimensions(w)
    jumps: list[int] = []
    prev = 0
    for i, n in enumerate(dims):
        if n < prev:
            raise IndeterminateError("filtration dimensions decreased")
        jumps.extend([i] * (n - prev))
        prev = n
    return jumps


def det_pi(E: PiMatrix) -> PiSeries:
    d = len(E)
    if d == 1:
        return E[0][0]
    if d == 2:
        return E[0][0] * E[1][1] - E[0][1] * E[1][0]
    total = None
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in E[1:]]
        term = E[0][j] * det_pi(minor)
        total = term if total is None else (total + term if j % 2 == 0 else total - term)
    return total


def adjugate_pi(E: PiMatrix) -> PiMatrix:
    d = len(E)
    p = E[0][0].prime
    if d == 1:
        return [[PiSeries.constant(p, 1, E[0][0].top, E[0][0].precs[0])]]
    out = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [row[:i] + row[i + 1:] for k, row in enumerate(E) if k != j]
            m = det_pi(minor)
            out[i][j] = m if (i + j) % 2 == 0 else -m
    return out


# ----- elementary divisors --------------------------------------------------------

def vanishing_order(f: XSeries, s: int, tail: int, limit: int = 4, margin: int = 3) -> int:
    """Multiplicity of the zero of f at X = u**s - 1, decided with a precision margin."""
    order = 0
    g = f
    while order <= limit:
        val = eval_at_chi_power(g, s, tail)
        if not val.is_zero():
            if val.relative_precision < margin:
                raise IndeterminateError(f"value at u^{s}-1 has {val.relative_precision} significant digits",
                                         val.relative_precision)
            return order
        if val.abs_precision < margin:
            raise IndeterminateError(f"value at u^{s}-1 known to {val.abs_precision} digits only",
                                     val.abs_precision)
        g = div_linear(g, chi_point(g.prime, s, max(g.precs) + 8), tail)
        order += 1
    return order


def divisor_check(L: LogMatrix, points: int | None = None) -> dict:
    """Compare det M with the product of frak_n_{r_j}.

    For each s in 0..points the zero orders of det M and of the predicted
    product at u**s - 1 must agree; the quotient must have a non-zero
    constant term and logarithmic growth; for rank 2 with a weight 0 some
    entry of M must be non-zero at every tested point.
    """
    from .mellin import log_growth_ok

    p, profile = L.p, L.profile
    rmax = max(L.weights)
    points = rmax + 4 if points is None else points
    detM = L.det()
    pred = None
    for r in L.weights:
        n_r = special_element("frak_n", r, p, profile)
        pred = n_r if pred is None else pred * n_r
    tail = L.tail
    report: dict = {"label": L.label, "weights": list(L.weights), "orders": {}, "predicted": {}}
    ok = True
    for s in range(points + 1):
        got = vanishing_order(detM, s, tail)
        want = vanishing_order(pred, s, tail)
        report["orders"][s] = got
        report["predicted"][s] = want
        ok = ok and got == want
    quotient = divide(detM, pred.cap(max(detM.precs)))
    q0 = quotient.coeff(0)
    report["quotient_constant"] = q0.to_json()
    unit_ok = (not q0.is_zero()) and log_growth_ok(quotient, order=0, slack=3,
                                                      upto=profile.x_degree // 2)
    report["quotient_unit"] = unit_ok
    entries_ok = True
    if L.d == 2 and min(L.weights) == 0:
        for s in range(rmax):
            vals = L.at(s)
            if all(x.is_zero() for row in vals for x in row):
                entries_ok = False
    report["entries_nonzero"] = entries_ok
    report["pass"] = bool(ok and unit_ok and entries_ok)
    return report
