"""Images of the Coleman maps for supersingular modular data.

The image of the pair (Col_1, Col_2) is the module of (F, G) whose values
at x_i = u^i - 1 lie in the line W_i = V_{i,eta} M(x_i)^{-1}, i = 0..k-2.
Each condition is one of F(x_i) = 0 (I1), G(x_i) = 0 (I2) or
F(x_i) = r_i G(x_i) (I3).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .errors import DomainError, IndeterminateError, InconsistencyError
from .interpolation import (
    InterpolationModule,
    Poly,
    build_module,
    change_basis,
    linear,
    padd,
    peval,
    pmul,
    pprod,
    projection_image,
    ptrim,
    _pdivmod,
)
from .mellin import DEFAULT_PROFILE, CharacterIndex, chi_point, eval_at_chi_power, special_element
from .padic import PadicScalar, PrecisionProfile
from .phi_module import v_subspace
from .series import XSeries, div_linear, divide
from .wach import LogMatrix, WachModuleData, build_wach, log_matrix

MARGIN = 3


@dataclass
class ColemanImageData:
    p: int
    k: int
    a_p: int
    eta: CharacterIndex
    points: list[Fraction]
    lines: list[tuple[PadicScalar, PadicScalar]]
    I1: list[int]
    I2: list[int]
    I3: list[int]
    r: dict[int, PadicScalar]
    M: LogMatrix
    basis_change: la.Matrix | None = None
    X1: Poly = field(default_factory=list)
    X2: Poly = field(default_factory=list)
    module: InterpolationModule | None = None
    witnesses: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"schema": 1, "p": self.p, "k": self.k, "ap": self.a_p, "eta": self.eta.s,
                "I1": self.I1, "I2": self.I2, "I3": self.I3,
                "r": {str(i): v.to_json() for i, v in sorted(self.r.items())},
                "X1": [str(c) for c in self.X1], "X2": [str(c) for c in self.X2],
                "basis_change": None if self.basis_change is None
                else [[str(x) for x in row] for row in self.basis_change],
                "checks": dict(sorted(self.checks.items()))}


@lru_cache(maxsize=32)
def wach_for_form(p: int, k: int, a_p: int, profile: PrecisionProfile) -> WachModuleData:
    if a_p == 0:
        return build_wach("ap0", p, profile, k=k)
    if k == 2:
        return build_wach("weight2", p, profile, a_p=a_p)
    raise DomainError("built-in Wach data covers a_p = 0 or weight 2 only")


def _zero_decision(x: PadicScalar, what: str) -> bool:
    """True if x is zero at its precision, False if clearly non-zero, else indeterminate."""
    if x.is_zero():
        return True
    if x.relative_precision < MARGIN:
        raise IndeterminateError(f"{what} has valuation {x.valuation} within {MARGIN} digits of its "
                                 f"precision {x.abs_precision}", x.valuation)
    return False


def _matrix_at(L: LogMatrix, i: int) -> list[list[PadicScalar]]:
    return L.at(i)


def image_conditions(p: int, k: int, a_p: int, eta: CharacterIndex | int = 0,
                     profile: PrecisionProfile = DEFAULT_PROFILE,
                     basis_change: la.Matrix | None = None,
                     wach: WachModuleData | None = None) -> ColemanImageData:
    """Lines W_i with (F(x_i), G(x_i)) in W_i, classified into I1, I2, I3."""
    if isinstance(eta, int):
        eta = CharacterIndex(p, eta)
    w = wach if wach is not None else wach_for_form(p, k, a_p, profile)
    L = log_matrix(w)
    base = w.base
    points, lines, I1, I2, I3, r = [], [], [], [], [], {}
    for i in range(k - 1):
        Mx = _matrix_at(L, i)
        det = Mx[0][0] * Mx[1][1] - Mx[0][1] * Mx[1][0]
        if _zero_decision(det, f"det M(u^{i}-1)"):
            raise InconsistencyError(f"M is singular at u^{i} - 1")
        V = v_subspace(base, i, eta)
        if len(V) != 1:
            raise InconsistencyError(f"V_{i} is not a line")
        v1, v2 = V[0]
        # row vector v times adj(M(x_i)) spans W_i
        w1 = Mx[1][1] * v1 - Mx[1][0] * v2
        w2 = -Mx[0][1] * v1 + Mx[0][0] * v2
        if basis_change is not None:
            B = basis_change
            w1, w2 = w1 * B[0][0] + w2 * B[1][0], w1 * B[0][1] + w2 * B[1][1]
        z1 = _zero_decision(w1, f"first coordinate of W_{i}")
        z2 = _zero_decision(w2, f"second coordinate of W_{i}")
        if z1 and z2:
            raise InconsistencyError(f"W_{i} collapsed to zero")
        points.append(Fraction((1 + p) ** i - 1))
        lines.append((w1, w2))
        if z1:
            I1.append(i)
        elif z2:
            I2.append(i)
        else:
            I3.append(i)
            r[i] = w1 / w2
    data = ColemanImageData(p, k, a_p, eta, points, lines, I1, I2, I3, r, L, basis_change)
    data.checks["M(0)=A^T"] = L.checks.get("M(0)=A^T")
    return data


def condition_rows(data: ColemanImageData) -> list[tuple[Fraction, list[list[Fraction]]]]:
    out = []
    for i, x in zip(range(data.k - 1), data.points):
        if i in data.I1:
            V = [[Fraction(0), Fraction(1)]]
        elif i in data.I2:
            V = [[Fraction(1), Fraction(0)]]
        else:
            V = [[data.r[i].value, Fraction(1)]]
        out.append((x, V))
    return out


def x_k(p: int, k: int) -> Poly:
    """prod_{j=0}^{k-2} (X - u^j + 1)."""
    return pprod([linear((1 + p) ** j - 1) for j in range(k - 1)])


def classify_and_generators(data: ColemanImageData) -> ColemanImageData:
    p, k = data.p, data.k
    S = build_module(p, 2, condition_rows(data))
    J1, X1, wit1 = projection_image(S, 0)
    J2, X2, wit2 = projection_image(S, 1)
    if J1 != data.I1 or J2 != data.I2:
        raise InconsistencyError(f"projection sets {J1}, {J2} differ from {data.I1}, {data.I2}")
    if set(data.I1) & set(data.I2):
        raise InconsistencyError("I1 and I2 intersect")
    Xk = x_k(p, k)
    _, rem = _pdivmod(Xk, pmul(X1, X2))
    data.X1, data.X2, data.module = X1, X2, S
    data.witnesses = {"first": wit1, "second": wit2}
    data.checks["I1_I2_disjoint"] = not (set(data.I1) & set(data.I2))
    data.checks["X1X2_divides_Xk"] = not rem
    data.checks["witnesses_in_image"] = S.satisfies(wit1) and S.satisfies(wit2)
    return data


def image(p: int, k: int, a_p: int, eta: CharacterIndex | int = 0,
          profile: PrecisionProfile = DEFAULT_PROFILE) -> ColemanImageData:
    return classify_and_generators(image_conditions(p, k, a_p, eta, profile))


def all_relation_basis(data: ColemanImageData) -> la.Matrix:
    """Change of basis making every condition relation-type."""
    A, _ = change_basis([data.r[i].value for i in data.I3], data.p)
    return A


def rho_weight2(p: int, a_p: int) -> tuple[int, int]:
    """Coefficients (c_g, c_h) of rho(g, h) = (2 - a_p) g(0) - (p - 1) h(0).

    Orientation: g is the second Coleman coordinate and h the first, which is
    the only reading compatible with the weight-2 relation at X = 0.
    """
    return 2 - a_p, -(p - 1)


def rho_kernel_line(p: int, a_p: int) -> tuple[Fraction, Fraction]:
    """Kernel of rho as a line in (first, second) coordinates."""
    cg, ch = rho_weight2(p, a_p)
    # cg * second + ch * first = 0  ->  (first, second) = (cg, -ch)
    return Fraction(cg), Fraction(-ch)


def rho_consistency(p: int, a_p: int, profile: PrecisionProfile = DEFAULT_PROFILE) -> dict:
    data = image_conditions(p, 2, a_p, 0, profile)
    w1, w2 = data.lines[0]
    f, s = rho_kernel_line(p, a_p)
    cross = w1 * s - w2 * f
    same = cross.is_zero()
    report = {"p": p, "ap": a_p, "kernel": [str(f), str(s)],
              "image_line": [w1.to_json(), w2.to_json()], "match": same}
    if not same:
        raise InconsistencyError(f"rho kernel {(f, s)} differs from the image line")
    return report


def apply_log_matrix(F: XSeries, G: XSeries, L: LogMatrix) -> tuple[XSeries, XSeries]:
    """(F, G) M as row vector times matrix."""
    M = L.M
    return F * M[0][0] + G * M[1][0], F * M[0][1] + G * M[1][1]


def _value(f, x: Fraction, p: int, prec: int) -> PadicScalar:
    if isinstance(f, XSeries):
        i = _exponent_of(x, p)
        return eval_at_chi_power(f, i) if i is not None else f.evaluate(PadicScalar(p, x, prec))
    return PadicScalar(p, peval(ptrim(f), x), prec)


def _exponent_of(x: Fraction, p: int) -> int | None:
    for i in range(64):
        if (1 + p) ** i - 1 == x:
            return i
    return None


def check_membership(F, G, data: ColemanImageData, prec: int = 20) -> dict:
    """Evaluate each condition on (F, G); F and G are XSeries or polynomials."""
    p = data.p
    conds = {}
    ok = True
    for i, x in zip(range(data.k - 1), data.points):
        f = _value(F, x, p, prec)
        g = _value(G, x, p, prec)
        if i in data.I1:
            res, kind = f, "F=0"
        elif i in data.I2:
            res, kind = g, "G=0"
        else:
            res, kind = f - data.r[i] * g, "F=rG"
        passed = res.is_zero()
        ok = ok and passed
        conds[str(i)] = {"type": kind, "pass": passed,
                         "valuation": res.valuation, "precision": res.abs_precision}
    return {"member": ok, "conditions": conds}


def det_factorization_check(L: LogMatrix, k: int) -> dict:
    """det M * prod (X - x_i) against prod ell_i, i = 0..k-2, as a unit ratio."""
    from .mellin import _ell, log_growth_ok

    p, prof = L.p, L.profile
    detM = L.det()
    lhs = detM
    ells = None
    for i in range(k - 1):
        ell = _ell(p, i, prof.digits, prof.x_degree)
        ells = ell if ells is None else ells * ell
    # cancel the common linear factors on the right before dividing
    rhs = ells
    for i in range(k - 1):
        rhs = div_linear(rhs, chi_point(p, i, max(rhs.precs) + 8))
    quotient = divide(lhs, rhs.cap(max(lhs.precs)))
    c0 = quotient.coeff(0)
    unit = (not c0.is_zero()) and log_growth_ok(quotient, order=0, slack=3, upto=prof.x_degree // 2)
    return {"quotient_constant": c0.to_json(), "unit": unit}
