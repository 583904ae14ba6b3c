"""Frobenius, psi, the Gamma-action, the Mellin transform and special elements.

Conventions: gamma is the generator of Gamma_1 with chi(gamma) = u = 1 + p,
X = gamma - 1, and the Mellin transform sends f(X) to f(gamma - 1) * (1 + pi).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .errors import (
    DomainError,
    IndeterminateError,
    NotDeltaInvariantError,
    NotDivisibleError,
    NotInImageError,
    NotPsiZeroError,
)
from .padic import (
    PadicScalar,
    PrecisionProfile,
    check_odd_prime,
    log_one_unit,
    log_p_floor,
    vp,
    vp_int,
)
from .series import (
    PiSeries,
    Series,
    XSeries,
    binomial_series,
    compose,
    div_linear,
    invert,
    log_series,
    pi_power_divide,
    q_series,
    t_series,
    tail_valuation_estimate,
)

DEFAULT_PROFILE = PrecisionProfile()


@dataclass(frozen=True)
class GammaScale:
    p: int
    digits: int

    @property
    def u(self) -> int:
        return 1 + self.p

    @property
    def log_u(self) -> PadicScalar:
        return _log_u(self.p, self.digits)


@lru_cache(maxsize=None)
def _log_u(p: int, digits: int) -> PadicScalar:
    return log_one_unit(PadicScalar(p, 1 + p, digits + 2), digits + 2)


@dataclass(frozen=True)
class CharacterIndex:
    """eta = chi_0**s on Delta, 0 <= s <= p - 2."""

    p: int
    s: int

    def __post_init__(self) -> None:
        if not 0 <= self.s <= self.p - 2:
            raise DomainError(f"character index must lie in [0, {self.p - 2}]")

    def matches(self, i: int) -> bool:
        """Whether chi_0**i equals eta."""
        return (i - self.s) % (self.p - 1) == 0

    @property
    def trivial(self) -> bool:
        return self.s == 0


def chi_point(p: int, i: int, prec: int) -> PadicScalar:
    """u**i - 1 as a p-adic scalar."""
    return PadicScalar(p, Fraction(1 + p) ** i - 1, prec)


# ----- phi, psi, gamma ----------------------------------------------------------

def _exact_prec(f: Series) -> int:
    return max(f.precs) + f.den + 64


def phi(f: PiSeries) -> PiSeries:
    """f((1 + pi)**p - 1)."""
    p = f.prime
    if f.low < 0:
        base = PiSeries(p, f.nums, f.precs, f.den, 0)
        out = phi(base)
        qinv = invert(q_series(p, out.top, _exact_prec(f))) ** (-f.low)
        return (out * qinv).shift(f.low)
    g = binomial_series(PiSeries, p, p, f.top, _exact_prec(f)) - 1
    return compose(f, g)


def _taylor_shift(coeffs: list[int], c: int) -> list[int]:
    """Coefficients of P(x + c) given those of P(x)."""
    n = len(coeffs)
    out = [0] * n
    for a in reversed(coeffs):
        # out = out * (x + c) + a
        for i in range(n - 1, 0, -1):
            out[i] = out[i - 1] + c * out[i]
        out[0] = c * out[0] + a
    return out


def psi(f: PiSeries, tail_valuation: int | None = None) -> PiSeries:
    """The left inverse of phi, through the (1 + pi)**n basis.

    The unknown tail pi**(D+1) * h only affects psi(f) modulo the ideal
    (p, pi)**floor((D+1)/p), which caps the output precision.
    """
    p = f.prime
    if f.low < 0:
        raise DomainError("psi of a Laurent series is not supported")
    D = f.top
    if tail_valuation is None:
        tail_valuation = tail_valuation_estimate(f)
    # f(pi) = F(1 + pi) with F(T) = f(T - 1)
    F = _taylor_shift(list(f.nums), -1)
    top = D // p
    G = [F[p * j] for j in range(top + 1)]
    out = _taylor_shift(G, 1)
    n_tail = (D + 1) // p
    precs = []
    for e in range(top + 1):
        best = n_tail - e + tail_valuation
        for n in range(D + 1):
            x = f.precs[n] + max(0, n // p - e)
            if x < best:
                best = x
        precs.append(best)
    return PiSeries(p, out, precs, f.den, 0)


def _power_series_of(p: int, a: PadicScalar | int, top: int, prec: int) -> PiSeries:
    """(1 + pi)**a - 1."""
    if isinstance(a, int):
        return binomial_series(PiSeries, p, a, top, prec) - 1
    if a.valuation != 0:
        raise DomainError("gamma_act needs a p-adic unit")
    A = a.integer_value()
    precs = [a.abs_precision] + [a.abs_precision - log_p_floor(m, p) for m in range(1, top + 1)]
    coeffs = [0] + [comb(A, m) for m in range(1, top + 1)]
    return PiSeries.from_coeffs(p, coeffs, precs)


def gamma_act(a: PadicScalar | int, f: PiSeries) -> PiSeries:
    """The action of the element of Gamma with cyclotomic character a."""
    p = f.prime
    if isinstance(a, int) and a % p == 0:
        raise DomainError("gamma_act needs a p-adic unit")
    g = _power_series_of(p, a, f.top, _exact_prec(f))
    return compose(f, g)


# ----- Mellin transform ---------------------------------------------------------

@lru_cache(maxsize=16)
def _w_table(p: int, top: int, count: int, modexp: int) -> tuple[tuple[int, ...], ...]:
    """Coefficients of w_n = (gamma - 1)**n (1 + pi) mod p**modexp for n < count."""
    mod = p**modexp
    u = 1 + p
    level = []
    for j in range(count):
        a = u**j
        row = [1]
        c = 1
        for m in range(1, top + 1):
            c = c * (a - m + 1) // m
            row.append(c % mod)
        level.append(row)
    out = [tuple(level[0])]
    for n in range(1, count):
        level = [[(x - y) % mod for x, y in zip(level[j + 1], level[j])] for j in range(len(level) - 1)]
        out.append(tuple(level[0]))
    return tuple(out)


@lru_cache(maxsize=16)
def _w_valuations(p: int, top: int, count: int, modexp: int) -> tuple[tuple[int, ...], ...]:
    table = _w_table(p, top, count, modexp)
    return tuple(tuple(vp_int(x, p, modexp) for x in row) for row in table)


def _profile_top(profile) -> int:
    if isinstance(profile, PrecisionProfile):
        return profile.pi_degree
    return int(profile)


def mellin(f: XSeries, profile: PrecisionProfile | int = DEFAULT_PROFILE,
           tail_valuation: int | None = None) -> PiSeries:
    """Sum of f_n w_n over the represented coefficients of f.

    With tail_valuation given, the unknown terms beyond the top of f are
    assumed to have valuation at least that bound; w_n lies in
    (p, pi**(p-1))**n, which caps the precision at high pi-degrees.
    """
    p = f.prime
    D = _profile_top(profile)
    count = f.top + 1
    modexp = max(f.precs) + f.den + 4
    W = _w_table(p, D, count, modexp)
    Wv = _w_valuations(p, D, count, modexp)
    fv = f.valuations()
    nums = []
    precs = []
    mod = p**modexp
    for m in range(D + 1):
        s = 0
        best = 10**9
        for n in range(count):
            fn = f.nums[n]
            if fn:
                s += fn * W[n][m]
            x = f.precs[n] + Wv[n][m]
            if x < best:
                best = x
        if tail_valuation is not None:
            best = min(best, count - m // (p - 1) + tail_valuation)
        best = min(best, modexp - f.den)
        nums.append(s % mod)
        precs.append(best)
    return PiSeries(p, nums, precs, f.den, 0)


def _component_check(g: PiSeries, tail_valuation: int | None) -> None:
    p = g.prime
    one_plus_pi = binomial_series(PiSeries, p, 1, g.top, _exact_prec(g))
    if not psi(g, tail_valuation).is_zero():
        raise NotPsiZeroError("psi(g) does not vanish")
    h = g
    for _ in range(1, p - 1):
        h = h * one_plus_pi
        if not psi(h, tail_valuation).is_zero():
            raise NotDeltaInvariantError("g is not in (1 + pi) phi(B)")


def inverse_mellin(g: PiSeries, profile: PrecisionProfile = DEFAULT_PROFILE,
                   tail_valuation: int | None = None, check: bool = True,
                   unknowns: int | None = None) -> XSeries:
    """Solve mellin(f) = g for f, returning coefficients 0..DX.

    The linear system in the w_n basis is solved with valuation pivoting;
    the precision of each output coefficient is what survives the pivot
    divisions.  tail_valuation models the unrepresented coefficients of f
    (None means g is the image of a polynomial of degree < unknowns).
    """
    return inverse_mellin_many([g], profile, tail_valuation, check, unknowns)[0]


def inverse_mellin_many(gs: list[PiSeries], profile: PrecisionProfile = DEFAULT_PROFILE,
                        tail_valuation: int | None = None, check: bool = True,
                        unknowns: int | None = None) -> list[XSeries]:
    p = gs[0].prime
    D = min(g.top for g in gs)
    if check:
        for g in gs:
            _component_check(g, None if tail_valuation is None else tail_valuation_estimate(g))
    DX = profile.x_degree
    nx = unknowns if unknowns is not None else max(DX + 1, D // p + 1)
    nx = min(nx, D + 1)
    den = max(g.den for g in gs)
    maxprec = max(max(g.precs) for g in gs)
    modexp = maxprec + den + 3 * nx + 40
    mod = p**modexp
    W = _w_table(p, D, nx, modexp)
    rows = [[W[n][m] for n in range(nx)] for m in range(D + 1)]
    k = len(gs)
    rhs = [[g.nums[m] * p ** (den - g.den) for g in gs] for m in range(D + 1)]
    rho = [[g.precs[m] for g in gs] for m in range(D + 1)]
    if tail_valuation is not None:
        for m in range(D + 1):
            cap = nx - m // (p - 1) + tail_valuation
            rho[m] = [min(r, cap) for r in rho[m]]
    weight = [min(r) for r in rho]
    remaining = list(range(D + 1))
    pivots = []
    for n in range(nx):
        best = None
        for m in remaining:
            a = rows[m][n] % mod
            if a == 0:
                continue
            v = vp_int(a, p)
            key = (weight[m] - v, -v, -m)
            if best is None or key > best[0]:
                best = (key, m, v)
        if best is None:
            raise NotInImageError(f"column {n} of the Mellin system is degenerate")
        _, piv, vpiv = best
        remaining.remove(piv)
        pivots.append((piv, vpiv))
        prow = rows[piv]
        a_p = prow[n] % mod
        unit_p = a_p // p**vpiv
        inv_p = pow(unit_p, -1, mod)
        for m in remaining:
            a = rows[m][n] % mod
            if a == 0:
                continue
            v = vp_int(a, p)
            scale_up = max(0, vpiv - v)
            mult = (a // p**v) * inv_p % mod * p ** max(0, v - vpiv) % mod
            sc = p**scale_up
            row = rows[m]
            rows[m] = [(sc * x - mult * y) % mod for x, y in zip(row, prow)]
            rhs[m] = [(sc * x - mult * y) % mod for x, y in zip(rhs[m], rhs[piv])]
            rho[m] = [min(r + scale_up, rp + max(0, v - vpiv)) for r, rp in zip(rho[m], rho[piv])]
            weight[m] = min(rho[m])
    # residual rows must vanish
    for m in remaining:
        for j in range(k):
            r = rhs[m][j] % mod
            if r == 0:
                continue
            if vp_int(r, p) - den < rho[m][j]:
                raise NotInImageError(
                    f"residual at pi-degree {m} has valuation {vp_int(r, p) - den} below {rho[m][j]}")
    results = []
    exact = modexp + 10
    for j in range(k):
        sol: list[PadicScalar | None] = [None] * nx
        for n in range(nx - 1, -1, -1):
            piv, vpiv = pivots[n]
            acc = PadicScalar(p, Fraction(rhs[piv][j] % mod, p**den), rho[piv][j])
            for i in range(n + 1, nx):
                a = rows[piv][i] % mod
                if a:
                    acc = acc - PadicScalar(p, a, exact) * sol[i]
            sol[n] = acc / PadicScalar(p, rows[piv][n] % mod, exact)
        out = sol[: DX + 1]
        results.append(XSeries.from_coeffs(p, out, [c.abs_precision for c in out]))
    return results


# ----- evaluation at characters ---------------------------------------------------

@lru_cache(maxsize=None)
def _stirling_row(s: int) -> tuple[int, ...]:
    """m! * S(s, m) for m = 0..s, the values of (x d/dx)**s x**m pattern."""
    row = [1]
    for _ in range(s):
        new = [0] * (len(row) + 1)
        for m, c in enumerate(row):
            new[m] += m * c
            new[m + 1] += c
        row = new
    return tuple(factorial(m) * c for m, c in enumerate(row))


def eval_at_chi_power(f: Series, s: int, tail_valuation: int | None = None) -> PadicScalar:
    """Value at X = u**s - 1.

    For an XSeries this sums the series (the unrepresented tail caps the
    precision at (top + 1) * v(u**s - 1) + tail bound).  For a psi = 0
    PiSeries g = mellin(f) it returns ((1 + pi) d/dpi)**s g at pi = 0.
    """
    if s < 0:
        raise DomainError("s must be non-negative")
    p = f.prime
    if isinstance(f, XSeries):
        prec = max(f.precs) + 4
        x = chi_point(p, s, prec)
        val = f.evaluate(x)
        if tail_valuation is None:
            tail_valuation = tail_valuation_estimate(f)
        cap = (f.top + 1) * x.valuation + tail_valuation
        return PadicScalar(p, val.value, min(val.abs_precision, cap))
    if s > f.top:
        raise DomainError("evaluation order exceeds the pi-truncation")
    row = _stirling_row(s)
    total = PadicScalar(p, 0, f.precs[0] + 64)
    for m in range(min(s, f.top) + 1):
        c = row[m]
        if c:
            total = total + f.coeff(m) * c
    return total


# ----- special elements -----------------------------------------------------------

def special_element(kind: str, index: int, p: int,
                    profile: PrecisionProfile = DEFAULT_PROFILE) -> XSeries:
    """ell_i, delta_i, frak_n(k) or lambda_k truncated at X-degree DX."""
    check_odd_prime(p)
    N, DX = profile.digits, profile.x_degree
    if kind == "ell":
        return _ell(p, index, N, DX)
    if kind == "delta":
        return _delta(p, index, N, DX)
    if kind == "frak_n":
        if index < 0:
            raise DomainError("frak_n needs a non-negative index")
        return _frak_n(p, index, N, DX)
    if kind == "lambda":
        if index < 0:
            raise DomainError("lambda needs a non-negative index")
        out = XSeries.constant(p, 1, DX, N + 8)
        for i in range(index):
            out = out * _ell(p, i, N, DX)
        return out
    raise DomainError(f"unknown special element {kind!r}")


@lru_cache(maxsize=256)
def _ell(p: int, i: int, N: int, DX: int) -> XSeries:
    log_u = _log_u(p, N + 4)
    lg = log_series(XSeries, p, DX, N + 8)
    inv = PadicScalar(p, 1, N + 8) / log_u
    return lg.scale(inv) - i


@lru_cache(maxsize=256)
def _delta(p: int, i: int, N: int, DX: int) -> XSeries:
    ell = _ell(p, i, N, DX + 1)
    return div_linear(ell, chi_point(p, i, N + 12))


@lru_cache(maxsize=64)
def _frak_n(p: int, k: int, N: int, DX: int) -> XSeries:
    out = XSeries.constant(p, 1, DX, N + 8)
    for i in range(k):
        out = out * _delta(p, i, N, DX)
    return out.scale(_log_u(p, N + 4) ** k) if k else out


# ----- annihilator ---------------------------------------------------------------

def log_growth_ok(f: Series, order: float, slack: int = 2, upto: int | None = None) -> bool:
    """Heuristic boundedness test for an element of logarithmic order `order`.

    Every coefficient whose valuation is determined must satisfy
    v(c_m) >= v_start - order * log_p(m + 1) - slack, where v_start is the
    smallest valuation among the first p coefficients.
    """
    import math

    p = f.prime
    vals = f.valuations()
    limit = len(vals) if upto is None else min(len(vals), upto - f.low + 1)
    start = min(vals[: min(p, limit)])
    for m in range(limit):
        v = vals[m]
        if v >= f.precs[m]:
            continue
        bound = start - order * math.log(m + 1, p) - slack
        if v < bound:
            return False
    return True


def annihilator_check(k: int, f: XSeries, profile: PrecisionProfile = DEFAULT_PROFILE,
                      indices: list[int] | None = None) -> dict:
    """Check that mellin(ell_{k-1}...ell_0 f) is t^k-divisible, plus the delta variant.

    `indices` replaces the default factor list 0..k-1, which is how a wrong
    product (say ell_1 alone with k=1) is exercised.
    """
    p = f.prime
    idx = list(range(k)) if indices is None else list(indices)
    report = {"k": k, "p": p, "profile": str(profile), "indices": idx}
    if k == 0:
        report.update(t_divisible=True, delta_variant=True, status="pass", precision_used=min(f.precs))
        return report
    DX = profile.x_degree
    prod = f
    for i in idx:
        prod = prod * _ell(p, i, profile.digits, DX)
    tail = tail_valuation_estimate(prod)
    g = mellin(prod, profile, tail)
    low_prec = min(g.precs[:k])
    report["precision_used"] = min(low_prec, profile.digits)
    if low_prec <= 0:
        report.update(t_divisible=None, delta_variant=None, status="indeterminate")
        return report
    try:
        pi_power_divide(g, k)
        report["t_divisible"] = True
    except NotDivisibleError:
        report["t_divisible"] = False
    # delta variant: phi(pi)^k / t^k * mellin(delta...f) = q^k (pi/t)^k * mellin(...)
    dprod = f
    for i in idx:
        dprod = dprod * _delta(p, i, profile.digits, DX)
    g2 = mellin(dprod, profile, tail_valuation_estimate(dprod))
    reliable = max(i for i, x in enumerate(g2.precs) if x > g2.valuations()[0] - 1) if g2.precs[0] > 0 else 0
    g2 = g2.truncate(max(reliable, k + 1))
    top = g2.top
    t_over_pi = pi_power_divide(t_series(p, top + 1, max(g2.precs) + 16), 1)
    q = q_series(p, top, max(g2.precs) + 16)
    h = g2 * (q ** k) * (invert(t_over_pi) ** k)
    report["delta_variant"] = log_growth_ok(h, order=2 * k + 1)
    ok = report["t_divisible"] and report["delta_variant"]
    report["status"] = "pass" if ok else "fail"
    return report
